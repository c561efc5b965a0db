#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "depotplan/builder.hpp"
#include "depotplan/milp/solve.hpp"
#include "depotplan/scenario.hpp"

namespace depotplan {

// True individual-vehicle formulation over a pool of candidate vehicles.
// One binary per (block, vehicle) assignment and per (vehicle, charger,
// interval) plug decision, so this only scales to tiny instances; it exists
// as a ground-truth reference for the clustering model.
struct IndividualModel {
    milp::ModelInstance model;
    TripMatrices matrices;

    std::vector<int> vehicle_type;  // type index of each pool slot
    std::vector<VarId> purchased;   // u_v
    std::map<std::pair<std::size_t, int>, VarId> assignment;        // x_kv
    std::map<std::pair<std::size_t, int>, VarId> departure_energy;  // d_kv
    std::vector<VarId> charger_count;

    // plug[v][j] is empty when charger j cannot serve vehicle v's type.
    std::vector<std::vector<std::vector<VarId>>> plug;   // [v][j][(s,t)]
    std::vector<std::vector<VarId>> charge_power;        // [v][(s,t)]
    std::vector<std::vector<VarId>> soe;                 // [v][(s, 1..T+1)]

    DerVars der;
    H2Vars h2;
    CouplingVars coupling;
    ObjectiveBreakdown breakdown;

    IndividualModel(const std::vector<TripBlock>& blocks, const TimeGrid& grid)
        : matrices(blocks, grid) {}

    std::size_t st(int s, int t) const {
        return static_cast<std::size_t>(s) * matrices.intervals_per_day() + (t - 1);
    }
    std::size_t sq(int s, int t) const {  // t in 1..T+1
        return static_cast<std::size_t>(s) * (matrices.intervals_per_day() + 1) + (t - 1);
    }
};

inline std::unique_ptr<IndividualModel> build_individual_model(
    const Scenario& sc, std::size_t var_budget = 2000000) {
    validate_scenario_shape(sc);
    auto im = std::make_unique<IndividualModel>(sc.blocks, sc.grid);
    auto& model = im->model;
    const int I = static_cast<int>(sc.vehicles.size());
    const int J = static_cast<int>(sc.chargers.size());
    const int S = sc.grid.num_days;
    const int T = sc.grid.intervals_per_day;
    const double dT = sc.grid.interval_hours;
    const std::size_t K = sc.blocks.size();
    auto by_day = blocks_by_day(sc.blocks, S);

    // Feasibility and per-block efficiency, same rule as the cluster model.
    std::vector<std::vector<double>> eta(K, std::vector<double>(I, 0.0));
    std::vector<std::vector<bool>> feas(K, std::vector<bool>(I, false));
    for (std::size_t k = 0; k < K; ++k)
        for (int i = 0; i < I; ++i) {
            eta[k][i] = compute_driving_efficiency(im->matrices.span(k), sc.vehicles[i],
                                                   sc.temperature_f, sc.blocks[k].day);
            feas[k][i] = eta[k][i] * sc.blocks[k].distance_km <=
                         sc.vehicles[i].energy_capacity_kwh + 1e-9;
        }

    // Pool size per type: the busiest day's feasible block count is a valid
    // upper bound on how many vehicles of that type can be worth buying.
    for (int i = 0; i < I; ++i) {
        std::size_t slots = 0;
        for (int s = 0; s < S; ++s) {
            std::size_t n = 0;
            for (std::size_t k : by_day[s])
                if (feas[k][i]) ++n;
            slots = std::max(slots, n);
        }
        for (std::size_t v = 0; v < slots; ++v) im->vehicle_type.push_back(i);
    }
    const int V = static_cast<int>(im->vehicle_type.size());
    if (static_cast<std::size_t>(V) * std::max<std::size_t>(K, 1) * S * T > var_budget)
        throw TooLarge("individual model would exceed the variable budget (" +
                       std::to_string(V) + " vehicles, " + std::to_string(K) + " blocks)");

    for (int v = 0; v < V; ++v)
        im->purchased.push_back(model.add_binary("ind.u[" + std::to_string(v) + "]"));

    // Slots within a type are interchangeable. With a single representative
    // day, any solution can be relabeled so the r-th slot of a type only
    // serves blocks at day position >= r, so the other pairings are dropped.
    std::vector<int> slot_rank(V, 0);
    for (int v = 1; v < V; ++v)
        slot_rank[v] = im->vehicle_type[v] == im->vehicle_type[v - 1] ? slot_rank[v - 1] + 1 : 0;
    std::vector<int> day_pos(K, 0);
    for (int s = 0; s < S; ++s)
        for (std::size_t r = 0; r < by_day[s].size(); ++r) day_pos[by_day[s][r]] = static_cast<int>(r);

    for (std::size_t k = 0; k < K; ++k)
        for (int v = 0; v < V; ++v) {
            int i = im->vehicle_type[v];
            if (!feas[k][i]) continue;
            if (S == 1 && slot_rank[v] > day_pos[k]) continue;
            std::string suffix = "[" + std::to_string(k) + "," + std::to_string(v) + "]";
            im->assignment[{k, v}] = model.add_binary("ind.x" + suffix);
            im->departure_energy[{k, v}] =
                model.add_continuous("ind.d" + suffix, 0.0, sc.vehicles[i].energy_capacity_kwh);
        }

    double count_ub = static_cast<double>(std::max<std::size_t>(K, 1));
    for (int j = 0; j < J; ++j)
        im->charger_count.push_back(
            model.add_integer("ind.Nc[" + std::to_string(j) + "]", 0, count_ub));

    im->plug.resize(V);
    im->charge_power.resize(V);
    im->soe.resize(V);
    for (int v = 0; v < V; ++v) {
        int i = im->vehicle_type[v];
        im->plug[v].resize(J);
        for (int j = 0; j < J; ++j) {
            if (sc.chargers[j].power_kw_by_vehicle.at(i) <= 0) continue;
            for (int s = 0; s < S; ++s)
                for (int t = 1; t <= T; ++t)
                    im->plug[v][j].push_back(model.add_binary(
                        "ind.y[" + std::to_string(v) + "," + std::to_string(j) + "," +
                        std::to_string(s) + "," + std::to_string(t) + "]"));
        }
        for (int s = 0; s < S; ++s)
            for (int t = 1; t <= T; ++t)
                im->charge_power[v].push_back(model.add_continuous(
                    "ind.p[" + std::to_string(v) + "," + std::to_string(s) + "," +
                    std::to_string(t) + "]"));
        for (int s = 0; s < S; ++s)
            for (int t = 1; t <= T + 1; ++t)
                im->soe[v].push_back(model.add_continuous(
                    "ind.q[" + std::to_string(v) + "," + std::to_string(s) + "," +
                    std::to_string(t) + "]", 0.0, sc.vehicles[i].energy_capacity_kwh));
    }

    im->der = create_der_variables(model, sc);
    im->h2 = create_h2_variables(model, sc);
    im->coupling = create_coupling_variables(model, S, T);

    // Every block is covered by exactly one purchased vehicle.
    for (std::size_t k = 0; k < K; ++k) {
        LinExpr sum;
        for (int v = 0; v < V; ++v)
            if (im->assignment.count({k, v})) sum += im->assignment.at({k, v});
        model.add_constraint("ind.assign[" + std::to_string(k) + "]", sum, Sense::Equal, 1.0);
    }
    for (const auto& [kv, x] : im->assignment)
        model.add_constraint("ind.buy[" + std::to_string(kv.first) + "," +
                                 std::to_string(kv.second) + "]",
                             LinExpr(x) - LinExpr(im->purchased[kv.second]), Sense::LessEqual,
                             0.0);

    // Single occupancy: en-route plus plugged never exceeds ownership, and
    // a vehicle can sit on at most one charger at a time.
    for (int v = 0; v < V; ++v) {
        for (int s = 0; s < S; ++s) {
            for (int t = 1; t <= T; ++t) {
                LinExpr occupied;
                for (std::size_t k : by_day[s])
                    if (im->assignment.count({k, v}) && im->matrices.active(k, t))
                        occupied += im->assignment.at({k, v});
                for (int j = 0; j < J; ++j)
                    if (!im->plug[v][j].empty()) occupied += im->plug[v][j][im->st(s, t)];
                occupied -= LinExpr(im->purchased[v]);
                model.add_constraint("ind.occupancy[" + std::to_string(v) + "," +
                                         std::to_string(s) + "," + std::to_string(t) + "]",
                                     occupied, Sense::LessEqual, 0.0);

                LinExpr power = LinExpr(im->charge_power[v][im->st(s, t)]);
                for (int j = 0; j < J; ++j)
                    if (!im->plug[v][j].empty())
                        power -= sc.chargers[j].power_kw_by_vehicle.at(im->vehicle_type[v]) *
                                 im->plug[v][j][im->st(s, t)];
                model.add_constraint("ind.power[" + std::to_string(v) + "," + std::to_string(s) +
                                         "," + std::to_string(t) + "]",
                                     power, Sense::LessEqual, 0.0);
            }
        }
    }

    for (int j = 0; j < J; ++j) {
        for (int s = 0; s < S; ++s)
            for (int t = 1; t <= T; ++t) {
                LinExpr used;
                for (int v = 0; v < V; ++v)
                    if (!im->plug[v][j].empty()) used += im->plug[v][j][im->st(s, t)];
                used -= LinExpr(im->charger_count[j]);
                model.add_constraint("ind.charger_cap[" + std::to_string(j) + "," +
                                         std::to_string(s) + "," + std::to_string(t) + "]",
                                     used, Sense::LessEqual, 0.0);
            }
    }

    // Per-vehicle state of energy with the same event accounting as the
    // pooled dynamics; the SOE is depot-side only, so it must vanish while
    // the vehicle is out driving.
    for (int v = 0; v < V; ++v) {
        int i = im->vehicle_type[v];
        double cap = sc.vehicles[i].energy_capacity_kwh;
        for (int s = 0; s < S; ++s) {
            for (int t = 1; t <= T; ++t) {
                LinExpr step = LinExpr(im->soe[v][im->sq(s, t + 1)]) -
                               LinExpr(im->soe[v][im->sq(s, t)]) -
                               dT * im->charge_power[v][im->st(s, t)];
                for (std::size_t k : by_day[s]) {
                    if (!im->assignment.count({k, v})) continue;
                    if (im->matrices.depart(k, t + 1)) step += im->departure_energy.at({k, v});
                    if (im->matrices.arrive(k, t + 1)) {
                        step -= LinExpr(im->departure_energy.at({k, v}));
                        step += eta[k][i] * sc.blocks[k].distance_km * im->assignment.at({k, v});
                    }
                }
                model.add_constraint("ind.soe[" + std::to_string(v) + "," + std::to_string(s) +
                                         "," + std::to_string(t) + "]",
                                     step, Sense::Equal, 0.0);

                LinExpr soc_cap = LinExpr(im->soe[v][im->sq(s, t)]) - cap * im->purchased[v];
                for (std::size_t k : by_day[s])
                    if (im->assignment.count({k, v}) && im->matrices.active(k, t))
                        soc_cap += cap * im->assignment.at({k, v});
                model.add_constraint("ind.soe_cap[" + std::to_string(v) + "," +
                                         std::to_string(s) + "," + std::to_string(t) + "]",
                                     soc_cap, Sense::LessEqual, 0.0);
            }
            model.add_constraint("ind.soe_cyclic[" + std::to_string(v) + "," + std::to_string(s) +
                                     "]",
                                 LinExpr(im->soe[v][im->sq(s, 1)]) -
                                     LinExpr(im->soe[v][im->sq(s, T + 1)]),
                                 Sense::Equal, 0.0);
        }
    }

    // A dispatched vehicle leaves with at least the trip need and at most
    // what it can hold; this is the physically true per-vehicle rule.
    for (const auto& [kv, d] : im->departure_energy) {
        auto [k, v] = kv;
        int i = im->vehicle_type[v];
        VarId x = im->assignment.at(kv);
        double need = eta[k][i] * sc.blocks[k].distance_km;
        model.add_constraint("ind.dep_lo[" + std::to_string(k) + "," + std::to_string(v) + "]",
                             LinExpr(d) - need * x, Sense::GreaterEqual, 0.0);
        model.add_constraint("ind.dep_hi[" + std::to_string(k) + "," + std::to_string(v) + "]",
                             LinExpr(d) - sc.vehicles[i].energy_capacity_kwh * x,
                             Sense::LessEqual, 0.0);
    }

    // Symmetry breaking within each type's slot range.
    for (int v = 1; v < V; ++v)
        if (im->vehicle_type[v] == im->vehicle_type[v - 1])
            model.add_constraint("ind.sym[" + std::to_string(v) + "]",
                                 LinExpr(im->purchased[v]) - LinExpr(im->purchased[v - 1]),
                                 Sense::LessEqual, 0.0);

    add_battery_constraints(model, sc, im->der);
    add_grid_and_peak(model, sc, im->der);
    add_h2_dynamics(model, sc, im->h2);
    add_h2_limits(model, sc, im->h2);

    auto fuel_power = [&](FuelKind fuel) {
        std::vector<std::vector<LinExpr>> exprs(S);
        for (int s = 0; s < S; ++s) {
            exprs[s].resize(T);
            for (int t = 1; t <= T; ++t)
                for (int v = 0; v < V; ++v)
                    if (sc.vehicles[im->vehicle_type[v]].fuel == fuel)
                        exprs[s][t - 1] += im->charge_power[v][im->st(s, t)];
        }
        return exprs;
    };
    add_coupling(model, sc, im->coupling, fuel_power(FuelKind::Battery),
                 fuel_power(FuelKind::Diesel), fuel_power(FuelKind::Hydrogen), im->h2);

    std::vector<std::vector<LinExpr>> demand(S), h2_load(S);
    for (int s = 0; s < S; ++s) {
        demand[s].resize(T);
        h2_load[s].resize(T);
        for (int t = 1; t <= T; ++t) {
            demand[s][t - 1] = LinExpr(im->coupling.pd(s, t));
            h2_load[s][t - 1] = LinExpr(im->h2.pelz(s, t)) + LinExpr(im->h2.plcpr(s, t)) +
                                LinExpr(im->h2.pcpr(s, t)) + LinExpr(im->h2.pcl(s, t));
        }
    }
    add_power_balance(model, sc, im->der, demand, h2_load);
    add_carbon_cap(model, sc, im->coupling, im->der, im->h2);

    LinExpr vehicle_capital, charger_capital, maintenance;
    for (int v = 0; v < V; ++v)
        vehicle_capital +=
            sc.vehicles[im->vehicle_type[v]].capital_cost_per_year * im->purchased[v];
    for (int j = 0; j < J; ++j)
        charger_capital += sc.chargers[j].capital_cost_per_year * im->charger_count[j];
    for (const auto& [kv, x] : im->assignment)
        maintenance += sc.blocks[kv.first].distance_km *
                       sc.vehicles[im->vehicle_type[kv.second]].maintenance_cost_per_km * x;
    im->breakdown.add("vehicle_capital", vehicle_capital);
    im->breakdown.add("charger_capital", charger_capital);
    im->breakdown.add("maintenance", maintenance);
    add_infrastructure_costs(im->breakdown, sc, im->coupling, im->der, im->h2);

    model.set_objective(im->breakdown.total(), true);
    model.freeze();
    return im;
}

// --- greedy disaggregation of a cluster solution -------------------------

struct VehicleSchedule {
    int type = 0;
    std::vector<std::size_t> blocks;             // global block indices served
    std::vector<std::vector<double>> soe_kwh;    // [s][t], t 0-based over 1..T+1
    std::vector<std::vector<double>> charge_kw;  // [s][t], 1..T
};

struct DisaggregatedSchedule {
    bool success = false;
    std::string failure_reason;
    std::vector<VehicleSchedule> vehicles;
};

// Recovers per-vehicle schedules from a cluster solution: blocks sorted by
// departure go to the idle vehicle holding the most energy, and each
// interval's pooled charging power goes first to the vehicles facing the
// earliest departures, up to their needs, with the remainder split by
// headroom. Pooling lets the cluster model spread one vehicle's surplus
// across the fleet, so recovery can fail in Surplus mode; the certificate
// names the first block short of energy.
inline DisaggregatedSchedule disaggregate(const Scenario& sc, const ClusterModel& cm,
                                          const std::vector<double>& x, double tol = 1e-6) {
    DisaggregatedSchedule out;
    const auto& fv = cm.fleet;
    const int S = sc.grid.num_days;
    const int T = sc.grid.intervals_per_day;
    const double dT = sc.grid.interval_hours;
    auto by_day = blocks_by_day(sc.blocks, S);
    auto val = [&](VarId v) { return x.at(v.index); };

    // Instantiate the snapped fleet.
    std::vector<std::size_t> first_of_type(fv.num_vehicle_types);
    for (int i = 0; i < fv.num_vehicle_types; ++i) {
        first_of_type[i] = out.vehicles.size();
        int n = static_cast<int>(std::llround(val(fv.vehicle_count[i])));
        for (int c = 0; c < n; ++c) {
            VehicleSchedule vs;
            vs.type = i;
            vs.soe_kwh.assign(S, std::vector<double>(T + 1, 0.0));
            vs.charge_kw.assign(S, std::vector<double>(T, 0.0));
            out.vehicles.push_back(std::move(vs));
        }
    }

    for (int i = 0; i < fv.num_vehicle_types; ++i) {
        int n = static_cast<int>(std::llround(val(fv.vehicle_count[i])));
        if (n == 0) continue;
        std::vector<std::size_t> pool(n);
        for (int c = 0; c < n; ++c) pool[c] = first_of_type[i] + c;
        double cap = sc.vehicles[i].energy_capacity_kwh;
        double max_rate = 0.0;
        for (const auto& charger : sc.chargers)
            max_rate = std::max(max_rate, charger.power_kw_by_vehicle.at(i));

        for (int s = 0; s < S; ++s) {
            // Blocks this type serves today, in departure order.
            std::vector<std::size_t> served;
            for (std::size_t k : by_day[s])
                if (fv.feasible(k, i) && val(fv.assignment.at({k, i})) > 0.5) served.push_back(k);
            std::sort(served.begin(), served.end(), [&](std::size_t a, std::size_t b) {
                return cm.matrices.span(a).t0 < cm.matrices.span(b).t0;
            });

            std::vector<double> soe(n, val(fv.q(i, s, 1)) / n);
            std::vector<int> busy_until(n, 0);       // last active interval, 0 = idle
            std::vector<double> pending(n, 0.0);     // energy burned, credited at arrival
            std::size_t next = 0;
            for (int t = 1; t <= T; ++t) {
                // Arrivals first: a vehicle back at interval t holds the
                // departure energy minus the trip burn.
                for (int c = 0; c < n; ++c)
                    if (busy_until[c] != 0 && busy_until[c] < t) {
                        soe[c] -= pending[c];
                        pending[c] = 0.0;
                        busy_until[c] = 0;
                    }
                // Departures at t.
                while (next < served.size() && cm.matrices.span(served[next]).t0 == t) {
                    std::size_t k = served[next];
                    double need = val(fv.departure_energy.at({k, i}));
                    int best = -1;
                    for (int c = 0; c < n; ++c)
                        if (busy_until[c] == 0 && (best < 0 || soe[c] > soe[best])) best = c;
                    if (best < 0 || soe[best] < need - tol) {
                        out.failure_reason =
                            "block " + sc.blocks[k].id + " needs " + std::to_string(need) +
                            " kWh at departure but the best idle vehicle holds " +
                            std::to_string(best < 0 ? 0.0 : soe[best]);
                        return out;
                    }
                    // Surplus above the carried energy stays behind in the
                    // pool; spread it over the other idle vehicles.
                    double surplus = soe[best] - need;
                    soe[best] = need;
                    if (surplus > tol) {
                        for (int c = 0; c < n && surplus > tol; ++c) {
                            if (c == best || busy_until[c] != 0) continue;
                            double room = cap - soe[c];
                            double give = std::min(room, surplus);
                            soe[c] += give;
                            surplus -= give;
                        }
                        if (surplus > tol) {
                            out.failure_reason = "block " + sc.blocks[k].id +
                                                 ": stranded pooled surplus of " +
                                                 std::to_string(surplus) + " kWh";
                            return out;
                        }
                    }
                    busy_until[best] = cm.matrices.span(k).t1;
                    pending[best] = fv.efficiency[k][i] * sc.blocks[k].distance_km;
                    out.vehicles[pool[best]].blocks.push_back(k);
                    ++next;
                }
                for (int c = 0; c < n; ++c)
                    out.vehicles[pool[c]].soe_kwh[s][t - 1] = busy_until[c] == 0 ? soe[c] : 0.0;

                // Split this interval's pooled power: upcoming departures
                // first (earliest block to the fullest idle vehicle), then
                // whatever headroom is left.
                double pooled = val(fv.pv(i, s, t));
                if (pooled > tol) {
                    std::vector<int> idle;
                    for (int c = 0; c < n; ++c)
                        if (busy_until[c] == 0) idle.push_back(c);
                    std::sort(idle.begin(), idle.end(),
                              [&](int a, int b) { return soe[a] > soe[b]; });
                    std::vector<double> alloc(n, 0.0);  // kWh added this interval
                    double remaining = pooled * dT;
                    std::size_t pairs = std::min(idle.size(), served.size() - next);
                    for (std::size_t r = 0; r < pairs && remaining > tol; ++r) {
                        int c = idle[r];
                        double need = val(fv.departure_energy.at({served[next + r], i}));
                        double want = std::min({need - soe[c] - alloc[c],
                                                cap - soe[c] - alloc[c],
                                                max_rate * dT - alloc[c], remaining});
                        if (want > 0) {
                            alloc[c] += want;
                            remaining -= want;
                        }
                    }
                    for (int c : idle) {
                        if (remaining <= tol) break;
                        double room = std::min(cap - soe[c] - alloc[c], max_rate * dT - alloc[c]);
                        double give = std::min(room, remaining);
                        if (give > 0) {
                            alloc[c] += give;
                            remaining -= give;
                        }
                    }
                    if (remaining > tol) {
                        out.failure_reason = "day " + std::to_string(s) + " interval " +
                                             std::to_string(t) +
                                             ": pooled charge exceeds idle-vehicle headroom";
                        return out;
                    }
                    for (int c : idle) {
                        out.vehicles[pool[c]].charge_kw[s][t - 1] = alloc[c] / dT;
                        soe[c] += alloc[c];
                    }
                }
            }
            for (int c = 0; c < n; ++c) {
                if (busy_until[c] != 0 && busy_until[c] <= T) {
                    soe[c] -= pending[c];
                    busy_until[c] = 0;
                }
                out.vehicles[pool[c]].soe_kwh[s][T] = busy_until[c] == 0 ? soe[c] : 0.0;
            }
        }
    }
    out.success = true;
    return out;
}

// --- model comparison ----------------------------------------------------

struct OracleComparison {
    milp::SolveResult surplus;
    milp::SolveResult exact;
    milp::SolveResult individual;

    // Surplus clustering relaxes both the Exact variant and the individual
    // formulation, so it bounds each from below. Exact and individual are
    // not ordered against each other: Exact pins departure energies, which
    // the individual model does not.
    bool ordering_ok(double tol_rel = 1e-6) const {
        if (!surplus.has_solution() || !exact.has_solution() || !individual.has_solution())
            return false;
        double scale = 1.0 + std::fabs(individual.objective);
        return surplus.objective <= exact.objective + tol_rel * scale &&
               surplus.objective <= individual.objective + tol_rel * scale;
    }
};

inline OracleComparison oracle_compare(const Scenario& sc, const milp::SolveConfig& config) {
    Scenario surplus_sc = sc;
    surplus_sc.mode = DepartureEnergyMode::Surplus;
    Scenario exact_sc = sc;
    exact_sc.mode = DepartureEnergyMode::Exact;

    auto surplus_model = build_cluster_model(surplus_sc);
    auto exact_model = build_cluster_model(exact_sc);
    auto individual_model = build_individual_model(sc);

    auto results = milp::solve_batch(
        {&surplus_model->model, &exact_model->model, &individual_model->model}, config);
    OracleComparison cmp;
    cmp.surplus = std::move(results[0]);
    cmp.exact = std::move(results[1]);
    cmp.individual = std::move(results[2]);
    return cmp;
}

}  // namespace depotplan
