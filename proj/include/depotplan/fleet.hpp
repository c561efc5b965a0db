#pragma once

#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "depotplan/milp/model.hpp"
#include "depotplan/scenario.hpp"
#include "depotplan/time_grid.hpp"

namespace depotplan {

using milp::LinExpr;
using milp::ModelInstance;
using milp::Sense;
using milp::VarId;

// Temperature multiplier for one interval: unity at 65 F, otherwise the
// linear impact coefficient scaled by the absolute deviation.
inline double temperature_multiplier(double temp_f, const VehicleType& vtype) {
    constexpr double kNeutralF = 65.0;
    if (temp_f > kNeutralF) return 1.0 + vtype.hot_coeff_pct_per_degF / 100.0 * (temp_f - kNeutralF);
    if (temp_f < kNeutralF) return 1.0 + vtype.cold_coeff_pct_per_degF / 100.0 * (kNeutralF - temp_f);
    return 1.0;
}

// Block driving efficiency (kWh/km): nominal efficiency scaled by the
// average multiplier over the block's active intervals.
inline double compute_driving_efficiency(const DiscreteSpan& span, const VehicleType& vtype,
                                         const Series& temperature_f, int day) {
    double sum = 0.0;
    for (int t = span.t0; t <= span.t1; ++t) {
        if (day >= temperature_f.num_days() || span.t1 > temperature_f.intervals_per_day())
            throw MissingTemperature("no temperature for day " + std::to_string(day) +
                                     " interval " + std::to_string(t));
        double temp = temperature_f.at(day, t);
        if (std::isnan(temp))
            throw MissingTemperature("temperature missing at day " + std::to_string(day) +
                                     " interval " + std::to_string(t));
        sum += temperature_multiplier(temp, vtype);
    }
    return vtype.kwh_per_km * sum / (span.t1 - span.t0 + 1);
}

struct FleetVars {
    int num_vehicle_types = 0;
    int num_charger_types = 0;
    int num_days = 0;
    int intervals_per_day = 0;

    std::vector<VarId> vehicle_count;  // N^v_i
    std::vector<VarId> charger_count;  // N^c_j
    // Assignment/departure-energy variables exist only for (k,i) pairs the
    // vehicle can cover (R_i >= eta_ki D_k).
    std::map<std::pair<std::size_t, int>, VarId> assignment;       // b_ki
    std::map<std::pair<std::size_t, int>, VarId> departure_energy; // d_ki
    std::vector<VarId> charging_count;  // m_ijst, flattened
    std::vector<VarId> pooled_charge;   // p^v_ist, flattened
    std::vector<VarId> pooled_soe;      // q_ist, t in 1..T_d+1, flattened

    std::vector<std::vector<double>> efficiency;  // eta_ki, NaN when infeasible
    std::vector<std::string> warnings;

    VarId m(int i, int j, int s, int t) const {  // t 1-based
        return charging_count[((static_cast<std::size_t>(i) * num_charger_types + j) * num_days + s) *
                                  intervals_per_day + (t - 1)];
    }
    VarId pv(int i, int s, int t) const {
        return pooled_charge[(static_cast<std::size_t>(i) * num_days + s) * intervals_per_day +
                             (t - 1)];
    }
    VarId q(int i, int s, int t) const {  // t in 1..T_d+1
        return pooled_soe[(static_cast<std::size_t>(i) * num_days + s) * (intervals_per_day + 1) +
                          (t - 1)];
    }
    bool feasible(std::size_t k, int i) const { return assignment.count({k, i}) > 0; }
};

namespace fleet_detail {

inline std::string idx2(const char* fam, std::size_t a, std::size_t b) {
    return std::string(fam) + "[" + std::to_string(a) + "," + std::to_string(b) + "]";
}
inline std::string idx3(const char* fam, int a, int b, int c) {
    return std::string(fam) + "[" + std::to_string(a) + "," + std::to_string(b) + "," +
           std::to_string(c) + "]";
}
inline std::string idx4(const char* fam, int a, int b, int c, int d) {
    return std::string(fam) + "[" + std::to_string(a) + "," + std::to_string(b) + "," +
           std::to_string(c) + "," + std::to_string(d) + "]";
}

}  // namespace fleet_detail

// Registers all fleet-level variables. Vehicle and charger counts are
// bounded above by the block count, a valid bound since one vehicle per
// block always suffices; it keeps zero-capital types from floating free.
inline FleetVars create_fleet_variables(ModelInstance& model, const Scenario& sc,
                                        const TripMatrices& matrices) {
    using namespace fleet_detail;
    const int I = static_cast<int>(sc.vehicles.size());
    const int J = static_cast<int>(sc.chargers.size());
    const int S = sc.grid.num_days;
    const int T = sc.grid.intervals_per_day;
    const std::size_t K = sc.blocks.size();

    FleetVars fv;
    fv.num_vehicle_types = I;
    fv.num_charger_types = J;
    fv.num_days = S;
    fv.intervals_per_day = T;

    double count_ub = static_cast<double>(std::max<std::size_t>(K, 1));
    for (int i = 0; i < I; ++i)
        fv.vehicle_count.push_back(model.add_integer("fleet.Nv[" + std::to_string(i) + "]", 0, count_ub));
    for (int j = 0; j < J; ++j)
        fv.charger_count.push_back(model.add_integer("fleet.Nc[" + std::to_string(j) + "]", 0, count_ub));

    fv.efficiency.assign(K, std::vector<double>(I, std::numeric_limits<double>::quiet_NaN()));
    for (std::size_t k = 0; k < K; ++k) {
        const auto& block = sc.blocks[k];
        bool any_feasible = false;
        for (int i = 0; i < I; ++i) {
            double eta = compute_driving_efficiency(matrices.span(k), sc.vehicles[i],
                                                    sc.temperature_f, block.day);
            double need = eta * block.distance_km;
            if (need <= sc.vehicles[i].energy_capacity_kwh + 1e-9) {
                fv.efficiency[k][i] = eta;
                fv.assignment[{k, i}] = model.add_binary(idx2("fleet.b", k, i));
                fv.departure_energy[{k, i}] = model.add_continuous(
                    idx2("fleet.d", k, i), 0.0, sc.vehicles[i].energy_capacity_kwh);
                any_feasible = true;
            }
        }
        if (!any_feasible)
            fv.warnings.push_back("block " + block.id +
                                  ": no vehicle type can cover its energy demand (model will be "
                                  "infeasible)");
    }

    for (int i = 0; i < I; ++i)
        for (int j = 0; j < J; ++j)
            for (int s = 0; s < S; ++s)
                for (int t = 1; t <= T; ++t)
                    fv.charging_count.push_back(model.add_continuous(idx4("fleet.m", i, j, s, t)));
    for (int i = 0; i < I; ++i)
        for (int s = 0; s < S; ++s)
            for (int t = 1; t <= T; ++t)
                fv.pooled_charge.push_back(model.add_continuous(idx3("fleet.pv", i, s, t)));
    for (int i = 0; i < I; ++i)
        for (int s = 0; s < S; ++s)
            for (int t = 1; t <= T + 1; ++t)
                fv.pooled_soe.push_back(model.add_continuous(idx3("fleet.q", i, s, t)));
    return fv;
}

// Each block is served by exactly one vehicle type. Blocks with no
// feasible type get an unsatisfiable row so the solver reports the
// infeasibility instead of silently dropping the block.
inline void add_assignment_constraints(ModelInstance& model, const Scenario& sc, FleetVars& fv) {
    const int I = fv.num_vehicle_types;
    for (std::size_t k = 0; k < sc.blocks.size(); ++k) {
        LinExpr sum;
        for (int i = 0; i < I; ++i)
            if (fv.feasible(k, i)) sum += fv.assignment.at({k, i});
        model.add_constraint("fleet.assign[" + std::to_string(k) + "]", sum, Sense::Equal, 1.0);
    }
}

// Depot counting, charger sharing, and pooled charging-power limits.
// n_is(t) is the expression N^v_i - sum_k A_k(t) b_ki, not a variable.
inline void add_depot_balance(ModelInstance& model, const Scenario& sc,
                              const TripMatrices& matrices, FleetVars& fv) {
    using namespace fleet_detail;
    const int I = fv.num_vehicle_types;
    const int J = fv.num_charger_types;
    const int T = fv.intervals_per_day;
    auto by_day = blocks_by_day(sc.blocks, sc.grid.num_days);

    for (int i = 0; i < I; ++i) {
        for (int s = 0; s < fv.num_days; ++s) {
            for (int t = 1; t <= T; ++t) {
                LinExpr en_route;
                for (std::size_t k : by_day[s])
                    if (matrices.active(k, t) && fv.feasible(k, i))
                        en_route += fv.assignment.at({k, i});

                // sum_j m <= n = Nv - en_route
                LinExpr depot_cap = en_route - LinExpr(fv.vehicle_count[i]);
                for (int j = 0; j < J; ++j) depot_cap += fv.m(i, j, s, t);
                model.add_constraint(idx3("fleet.depot_cap", i, s, t), depot_cap,
                                     Sense::LessEqual, 0.0);
                // n >= 0, stated explicitly
                model.add_constraint(idx3("fleet.depot_nonneg", i, s, t),
                                     en_route - LinExpr(fv.vehicle_count[i]), Sense::LessEqual,
                                     0.0);
                // p^v <= sum_j P_ij m
                LinExpr power = LinExpr(fv.pv(i, s, t));
                for (int j = 0; j < J; ++j)
                    power -= sc.chargers[j].power_kw_by_vehicle.at(i) * fv.m(i, j, s, t);
                model.add_constraint(idx3("fleet.charge_power", i, s, t), power, Sense::LessEqual,
                                     0.0);
            }
        }
    }
    for (int j = 0; j < J; ++j) {
        for (int s = 0; s < fv.num_days; ++s) {
            for (int t = 1; t <= T; ++t) {
                LinExpr used;
                for (int i = 0; i < I; ++i) used += fv.m(i, j, s, t);
                used -= LinExpr(fv.charger_count[j]);
                model.add_constraint(idx3("fleet.charger_cap", j, s, t), used, Sense::LessEqual,
                                     0.0);
            }
        }
    }
}

// Pooled state-of-energy dynamics with cyclic closure, capacity coupling
// to the at-depot count, and the departure-energy bounds for the chosen
// mode.
inline void add_soe_dynamics(ModelInstance& model, const Scenario& sc,
                             const TripMatrices& matrices, FleetVars& fv,
                             DepartureEnergyMode mode) {
    using namespace fleet_detail;
    const int I = fv.num_vehicle_types;
    const int T = fv.intervals_per_day;
    const double dT = sc.grid.interval_hours;
    auto by_day = blocks_by_day(sc.blocks, sc.grid.num_days);

    for (int i = 0; i < I; ++i) {
        const double cap = sc.vehicles[i].energy_capacity_kwh;
        for (int s = 0; s < fv.num_days; ++s) {
            for (int t = 1; t <= T; ++t) {
                LinExpr step = LinExpr(fv.q(i, s, t + 1)) - LinExpr(fv.q(i, s, t)) -
                               dT * fv.pv(i, s, t);
                for (std::size_t k : by_day[s]) {
                    if (!fv.feasible(k, i)) continue;
                    if (matrices.depart(k, t + 1)) step += fv.departure_energy.at({k, i});
                    if (matrices.arrive(k, t + 1)) {
                        step -= LinExpr(fv.departure_energy.at({k, i}));
                        step += fv.efficiency[k][i] * sc.blocks[k].distance_km *
                                fv.assignment.at({k, i});
                    }
                }
                model.add_constraint(idx3("fleet.soe", i, s, t), step, Sense::Equal, 0.0);

                // q <= R_i * n
                LinExpr soc_cap = LinExpr(fv.q(i, s, t)) - cap * fv.vehicle_count[i];
                for (std::size_t k : by_day[s])
                    if (matrices.active(k, t) && fv.feasible(k, i))
                        soc_cap += cap * fv.assignment.at({k, i});
                model.add_constraint(idx3("fleet.soe_cap", i, s, t), soc_cap, Sense::LessEqual,
                                     0.0);
            }
            model.add_constraint("fleet.soe_cyclic[" + std::to_string(i) + "," + std::to_string(s) +
                                     "]",
                                 LinExpr(fv.q(i, s, 1)) - LinExpr(fv.q(i, s, T + 1)), Sense::Equal,
                                 0.0);
        }
    }

    for (const auto& [ki, d] : fv.departure_energy) {
        auto [k, i] = ki;
        VarId b = fv.assignment.at(ki);
        double need = fv.efficiency[k][i] * sc.blocks[k].distance_km;
        double cap = sc.vehicles[i].energy_capacity_kwh;
        if (mode == DepartureEnergyMode::Exact) {
            model.add_constraint(idx2("fleet.dep_exact", k, i), LinExpr(d) - need * b,
                                 Sense::Equal, 0.0);
        } else {
            model.add_constraint(idx2("fleet.dep_lo", k, i), LinExpr(d) - need * b,
                                 Sense::GreaterEqual, 0.0);
            model.add_constraint(idx2("fleet.dep_hi", k, i), LinExpr(d) - cap * b,
                                 Sense::LessEqual, 0.0);
        }
    }
}

}  // namespace depotplan
