#pragma once

#include <memory>
#include <string>
#include <vector>

#include "depotplan/coupling.hpp"
#include "depotplan/der.hpp"
#include "depotplan/fleet.hpp"
#include "depotplan/hydrogen.hpp"
#include "depotplan/milp/model.hpp"
#include "depotplan/scenario.hpp"
#include "depotplan/time_grid.hpp"

namespace depotplan {

// The assembled integer-clustering MILP plus every handle needed to read a
// solution back in domain terms.
struct ClusterModel {
    milp::ModelInstance model;
    TripMatrices matrices;
    FleetVars fleet;
    DerVars der;
    H2Vars h2;
    CouplingVars coupling;
    ObjectiveBreakdown breakdown;
    std::vector<std::string> warnings;

    ClusterModel(const std::vector<TripBlock>& blocks, const TimeGrid& grid)
        : matrices(blocks, grid) {}
};

namespace builder_detail {

inline std::vector<std::vector<LinExpr>> fuel_power_exprs(const Scenario& sc, const FleetVars& fv,
                                                          FuelKind fuel) {
    std::vector<std::vector<LinExpr>> exprs(fv.num_days);
    for (int s = 0; s < fv.num_days; ++s) {
        exprs[s].resize(fv.intervals_per_day);
        for (int t = 1; t <= fv.intervals_per_day; ++t)
            for (int i = 0; i < fv.num_vehicle_types; ++i)
                if (sc.vehicles[i].fuel == fuel) exprs[s][t - 1] += fv.pv(i, s, t);
    }
    return exprs;
}

}  // namespace builder_detail

inline void validate_scenario_shape(const Scenario& sc) {
    sc.grid.validate();
    const int S = sc.grid.num_days;
    const int T = sc.grid.intervals_per_day;
    sc.temperature_f.require_shape(S, T, "temperature_f");
    sc.der.solar_cap_factor.require_shape(S, T, "solar_cap_factor");
    sc.costs.grid_price.require_shape(S, T, "grid_price");
    sc.costs.diesel_price_per_kwh.require_shape(S, T, "diesel_price_per_kwh");
    sc.costs.delivered_h2_price.require_shape(S, T, "delivered_h2_price");
    sc.emissions.grid_factor_kg_per_kwh.require_shape(S, T, "grid_factor_kg_per_kwh");
    for (const auto& c : sc.chargers)
        if (c.power_kw_by_vehicle.size() != sc.vehicles.size())
            throw ConfigError("charger " + c.id + ": power rating table does not match the "
                              "vehicle catalog");
    for (const auto& g : sc.der.peak_groups)
        for (int s : g)
            if (s < 0 || s >= S)
                throw ConfigError("peak group references unknown day index " + std::to_string(s));
    for (int t : sc.h2.delivery_intervals)
        if (t < 1 || t > T)
            throw ConfigError("delivery interval " + std::to_string(t) + " outside 1..T_d");
}

// Closed-form prediction of the variable counts build_cluster_model will
// register, from instance dimensions alone. F is the number of feasible
// (block, vehicle type) pairs.
inline milp::VarCounts predict_variable_counts(const Scenario& sc) {
    validate_scenario_shape(sc);
    const int I = static_cast<int>(sc.vehicles.size());
    const int J = static_cast<int>(sc.chargers.size());
    const int S = sc.grid.num_days;
    const int T = sc.grid.intervals_per_day;
    const int L = static_cast<int>(sc.der.peak_groups.size());

    int F = 0;
    TripMatrices matrices(sc.blocks, sc.grid);
    for (std::size_t k = 0; k < sc.blocks.size(); ++k)
        for (int i = 0; i < I; ++i) {
            double eta = compute_driving_efficiency(matrices.span(k), sc.vehicles[i],
                                                    sc.temperature_f, sc.blocks[k].day);
            if (eta * sc.blocks[k].distance_km <= sc.vehicles[i].energy_capacity_kwh + 1e-9) ++F;
        }

    milp::VarCounts c;
    c.binary = F + S * T;
    c.integer = I + J;
    c.continuous = F                      // departure energies
                   + I * J * S * T       // charger occupancies
                   + I * S * T           // pooled charging power
                   + I * S * (T + 1)     // pooled state of energy
                   + 3 + (sc.grid_upgrade_variant ? 1 : 0)  // DER capacities
                   + 4 * S * T           // grid, curtail, battery charge/discharge
                   + S * (T + 1)         // battery state of energy
                   + L                   // season peaks
                   + 6                   // hydrogen capacities
                   + 5 * S * T           // delivery plus four station powers
                   + 2 * S * (T + 1)     // tank and buffer levels
                   + 3 * S * T;          // per-fuel demand couplers
    return c;
}

// Builds the full clustering MILP: fleet, DERs, hydrogen station, coupling,
// carbon cap, and the Eq-style cost objective.
inline std::unique_ptr<ClusterModel> build_cluster_model(const Scenario& sc) {
    validate_scenario_shape(sc);
    auto cm = std::make_unique<ClusterModel>(sc.blocks, sc.grid);
    auto& model = cm->model;

    cm->fleet = create_fleet_variables(model, sc, cm->matrices);
    cm->der = create_der_variables(model, sc);
    cm->h2 = create_h2_variables(model, sc, &cm->warnings);
    cm->coupling = create_coupling_variables(model, sc.grid.num_days, sc.grid.intervals_per_day);
    cm->warnings.insert(cm->warnings.end(), cm->fleet.warnings.begin(), cm->fleet.warnings.end());

    add_assignment_constraints(model, sc, cm->fleet);
    add_depot_balance(model, sc, cm->matrices, cm->fleet);
    add_soe_dynamics(model, sc, cm->matrices, cm->fleet, sc.mode);

    add_battery_constraints(model, sc, cm->der);
    add_grid_and_peak(model, sc, cm->der);

    add_h2_dynamics(model, sc, cm->h2);
    add_h2_limits(model, sc, cm->h2);

    auto bev = builder_detail::fuel_power_exprs(sc, cm->fleet, FuelKind::Battery);
    auto diesel = builder_detail::fuel_power_exprs(sc, cm->fleet, FuelKind::Diesel);
    auto fcev = builder_detail::fuel_power_exprs(sc, cm->fleet, FuelKind::Hydrogen);
    add_coupling(model, sc, cm->coupling, bev, diesel, fcev, cm->h2);

    // Electric balance sees the BEV demand plus the hydrogen-station load.
    std::vector<std::vector<LinExpr>> demand(sc.grid.num_days);
    std::vector<std::vector<LinExpr>> h2_load(sc.grid.num_days);
    for (int s = 0; s < sc.grid.num_days; ++s) {
        demand[s].resize(sc.grid.intervals_per_day);
        h2_load[s].resize(sc.grid.intervals_per_day);
        for (int t = 1; t <= sc.grid.intervals_per_day; ++t) {
            demand[s][t - 1] = LinExpr(cm->coupling.pd(s, t));
            h2_load[s][t - 1] = LinExpr(cm->h2.pelz(s, t)) + LinExpr(cm->h2.plcpr(s, t)) +
                                LinExpr(cm->h2.pcpr(s, t)) + LinExpr(cm->h2.pcl(s, t));
        }
    }
    add_power_balance(model, sc, cm->der, demand, h2_load);

    add_carbon_cap(model, sc, cm->coupling, cm->der, cm->h2);

    LinExpr vehicle_capital, charger_capital, maintenance;
    for (int i = 0; i < cm->fleet.num_vehicle_types; ++i)
        vehicle_capital += sc.vehicles[i].capital_cost_per_year * cm->fleet.vehicle_count[i];
    for (int j = 0; j < cm->fleet.num_charger_types; ++j)
        charger_capital += sc.chargers[j].capital_cost_per_year * cm->fleet.charger_count[j];
    for (const auto& [ki, b] : cm->fleet.assignment) {
        auto [k, i] = ki;
        maintenance += sc.blocks[k].distance_km * sc.vehicles[i].maintenance_cost_per_km * b;
    }
    cm->breakdown.add("vehicle_capital", vehicle_capital);
    cm->breakdown.add("charger_capital", charger_capital);
    cm->breakdown.add("maintenance", maintenance);
    add_infrastructure_costs(cm->breakdown, sc, cm->coupling, cm->der, cm->h2);

    model.set_objective(cm->breakdown.total(), /*minimize=*/true);
    model.freeze();
    return cm;
}

}  // namespace depotplan
