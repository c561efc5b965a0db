#pragma once

#include <cmath>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "depotplan/builder.hpp"
#include "depotplan/milp/solve.hpp"
#include "depotplan/scenario.hpp"

namespace depotplan {

struct DesignSummary {
    std::vector<double> vehicle_count;  // per vehicle type, snapped to integers
    std::vector<double> charger_count;
    double solar_kw = 0;
    double battery_power_kw = 0;
    double battery_energy_kwh = 0;
    double tank_kg = 0;
    double buffer_kg = 0;
    double elz_kw = 0;
    double lcpr_kw = 0;
    double cpr_kw = 0;
    double cl_kw = 0;
    double grid_upgrade_kw = 0;
};

// Domain-level audits recomputed from the raw solution, independent of
// both the solver and the constraint store.
struct SolutionAudits {
    double max_soe_telescope_rel = 0;  // fleet daily energy conservation
    double max_h2_balance_rel = 0;     // hydrogen daily mass balance
    double max_complementarity = 0;    // max p^{b+} * p^{b-}
    double max_buy_and_spill_kw = 0;   // min(grid draw, curtailment) overlap
    double objective_decomposition_rel = 0;
};

struct SolutionReport {
    milp::SolveStatus status = milp::SolveStatus::Error;
    double objective = std::numeric_limits<double>::quiet_NaN();
    double dual_bound = std::numeric_limits<double>::quiet_NaN();
    double gap = std::numeric_limits<double>::quiet_NaN();
    std::string message;

    std::map<std::string, double> cost_breakdown;
    DesignSummary design;
    milp::ResidualAudit residuals;
    SolutionAudits audits;
    double emissions_kg = 0;
    std::vector<double> values;  // full primal vector, model variable order

    bool feasible() const {
        return status == milp::SolveStatus::Optimal || status == milp::SolveStatus::GapFeasible;
    }
};

namespace report_detail {

inline double snap(double v) { return std::round(v); }

}  // namespace report_detail

inline SolutionAudits run_solution_audits(const Scenario& sc, const ClusterModel& cm,
                                          const std::vector<double>& x, double solver_objective) {
    SolutionAudits audits;
    const auto& fv = cm.fleet;
    const double dT = sc.grid.interval_hours;
    auto by_day = blocks_by_day(sc.blocks, sc.grid.num_days);
    auto val = [&](VarId v) { return x.at(v.index); };

    for (int i = 0; i < fv.num_vehicle_types; ++i) {
        for (int s = 0; s < fv.num_days; ++s) {
            double charged = 0, consumed = 0;
            for (int t = 1; t <= fv.intervals_per_day; ++t) charged += val(fv.pv(i, s, t)) * dT;
            for (std::size_t k : by_day[s])
                if (fv.feasible(k, i))
                    consumed += val(fv.assignment.at({k, i})) * fv.efficiency[k][i] *
                                sc.blocks[k].distance_km;
            double scale = std::max({1.0, std::fabs(charged), std::fabs(consumed)});
            audits.max_soe_telescope_rel =
                std::max(audits.max_soe_telescope_rel, std::fabs(charged - consumed) / scale);
        }
    }

    const auto& hv = cm.h2;
    for (int s = 0; s < hv.num_days; ++s) {
        double in_mass = 0, out_mass = 0;
        for (int t = 1; t <= hv.intervals_per_day; ++t) {
            in_mass += val(hv.wdel(s, t));
            in_mass += val(hv.plcpr(s, t)) / sc.h2.lcpr_kwh_per_kg * dT;
            out_mass += val(hv.pcl(s, t)) / sc.h2.cl_kwh_per_kg * dT;
        }
        double scale = std::max({1.0, in_mass, out_mass});
        audits.max_h2_balance_rel =
            std::max(audits.max_h2_balance_rel, std::fabs(in_mass - out_mass) / scale);
    }

    const auto& dv = cm.der;
    for (int s = 0; s < dv.num_days; ++s) {
        for (int t = 1; t <= dv.intervals_per_day; ++t) {
            audits.max_complementarity =
                std::max(audits.max_complementarity, val(dv.pbc(s, t)) * val(dv.pbd(s, t)));
            audits.max_buy_and_spill_kw = std::max(
                audits.max_buy_and_spill_kw, std::min(val(dv.pg(s, t)), val(dv.pcurt(s, t))));
        }
    }

    double breakdown_sum = 0;
    for (const auto& [name, expr] : cm.breakdown.terms) breakdown_sum += cm.model.eval(expr, x);
    audits.objective_decomposition_rel =
        std::fabs(breakdown_sum - solver_objective) / std::max(1.0, std::fabs(solver_objective));
    return audits;
}

inline SolutionReport extract_report(const Scenario& sc, const ClusterModel& cm,
                                     const milp::SolveResult& result) {
    SolutionReport report;
    report.status = result.status;
    report.objective = result.objective;
    report.dual_bound = result.dual_bound;
    report.gap = result.gap;
    report.message = result.message;
    report.residuals = result.audit;
    if (!result.has_solution() || result.x.empty()) return report;

    report.values = result.x;
    auto val = [&](VarId v) { return result.x.at(v.index); };

    for (auto v : cm.fleet.vehicle_count) report.design.vehicle_count.push_back(report_detail::snap(val(v)));
    for (auto v : cm.fleet.charger_count) report.design.charger_count.push_back(report_detail::snap(val(v)));
    report.design.solar_kw = val(cm.der.solar_capacity);
    report.design.battery_power_kw = val(cm.der.battery_power);
    report.design.battery_energy_kwh = val(cm.der.battery_energy);
    report.design.tank_kg = val(cm.h2.tank_cap);
    report.design.buffer_kg = val(cm.h2.buffer_cap);
    report.design.elz_kw = val(cm.h2.elz_cap);
    report.design.lcpr_kw = val(cm.h2.lcpr_cap);
    report.design.cpr_kw = val(cm.h2.cpr_cap);
    report.design.cl_kw = val(cm.h2.cl_cap);
    if (cm.der.grid_upgrade.valid()) report.design.grid_upgrade_kw = val(cm.der.grid_upgrade);

    report.cost_breakdown = cm.breakdown.evaluate(cm.model, result.x);
    report.emissions_kg =
        cm.model.eval(emission_expression(sc, cm.coupling, cm.der, cm.h2), result.x);
    report.audits = run_solution_audits(sc, cm, result.x, result.objective);
    return report;
}

// --- serialization -------------------------------------------------------

inline nlohmann::json to_json(const milp::ResidualAudit& a) {
    nlohmann::json fams = nlohmann::json::object();
    for (const auto& [name, f] : a.constraint_families)
        fams[name] = {{"max_violation", f.max_violation}, {"worst_member", f.worst_member}};
    return {{"constraint_families", fams},
            {"max_bound_violation", a.max_bound_violation},
            {"max_integrality_violation", a.max_integrality_violation},
            {"max_violation", a.max_violation}};
}

inline milp::ResidualAudit residual_audit_from_json(const nlohmann::json& j) {
    milp::ResidualAudit a;
    for (const auto& [name, f] : j.at("constraint_families").items())
        a.constraint_families[name] = {f.at("max_violation"), f.at("worst_member")};
    a.max_bound_violation = j.at("max_bound_violation");
    a.max_integrality_violation = j.at("max_integrality_violation");
    a.max_violation = j.at("max_violation");
    return a;
}

inline nlohmann::json to_json(const SolutionReport& r) {
    nlohmann::json j;
    j["status"] = milp::to_string(r.status);
    j["objective"] = r.objective;
    j["dual_bound"] = r.dual_bound;
    j["gap"] = r.gap;
    j["message"] = r.message;
    j["cost_breakdown"] = r.cost_breakdown;
    j["design"] = {{"vehicle_count", r.design.vehicle_count},
                   {"charger_count", r.design.charger_count},
                   {"solar_kw", r.design.solar_kw},
                   {"battery_power_kw", r.design.battery_power_kw},
                   {"battery_energy_kwh", r.design.battery_energy_kwh},
                   {"tank_kg", r.design.tank_kg},
                   {"buffer_kg", r.design.buffer_kg},
                   {"elz_kw", r.design.elz_kw},
                   {"lcpr_kw", r.design.lcpr_kw},
                   {"cpr_kw", r.design.cpr_kw},
                   {"cl_kw", r.design.cl_kw},
                   {"grid_upgrade_kw", r.design.grid_upgrade_kw}};
    j["residuals"] = to_json(r.residuals);
    j["audits"] = {{"max_soe_telescope_rel", r.audits.max_soe_telescope_rel},
                   {"max_h2_balance_rel", r.audits.max_h2_balance_rel},
                   {"max_complementarity", r.audits.max_complementarity},
                   {"max_buy_and_spill_kw", r.audits.max_buy_and_spill_kw},
                   {"objective_decomposition_rel", r.audits.objective_decomposition_rel}};
    j["emissions_kg"] = r.emissions_kg;
    j["values"] = r.values;
    return j;
}

inline SolutionReport report_from_json(const nlohmann::json& j) {
    SolutionReport r;
    std::string status = j.at("status");
    using milp::SolveStatus;
    r.status = status == "optimal"       ? SolveStatus::Optimal
               : status == "gap-feasible" ? SolveStatus::GapFeasible
               : status == "infeasible"   ? SolveStatus::Infeasible
               : status == "unbounded"    ? SolveStatus::Unbounded
               : status == "time-limit"   ? SolveStatus::TimeLimit
                                          : SolveStatus::Error;
    r.objective = j.at("objective");
    r.dual_bound = j.at("dual_bound");
    r.gap = j.at("gap");
    r.message = j.at("message");
    r.cost_breakdown = j.at("cost_breakdown").get<std::map<std::string, double>>();
    const auto& d = j.at("design");
    r.design.vehicle_count = d.at("vehicle_count").get<std::vector<double>>();
    r.design.charger_count = d.at("charger_count").get<std::vector<double>>();
    r.design.solar_kw = d.at("solar_kw");
    r.design.battery_power_kw = d.at("battery_power_kw");
    r.design.battery_energy_kwh = d.at("battery_energy_kwh");
    r.design.tank_kg = d.at("tank_kg");
    r.design.buffer_kg = d.at("buffer_kg");
    r.design.elz_kw = d.at("elz_kw");
    r.design.lcpr_kw = d.at("lcpr_kw");
    r.design.cpr_kw = d.at("cpr_kw");
    r.design.cl_kw = d.at("cl_kw");
    r.design.grid_upgrade_kw = d.at("grid_upgrade_kw");
    r.residuals = residual_audit_from_json(j.at("residuals"));
    const auto& a = j.at("audits");
    r.audits.max_soe_telescope_rel = a.at("max_soe_telescope_rel");
    r.audits.max_h2_balance_rel = a.at("max_h2_balance_rel");
    r.audits.max_complementarity = a.at("max_complementarity");
    r.audits.max_buy_and_spill_kw = a.at("max_buy_and_spill_kw");
    r.audits.objective_decomposition_rel = a.at("objective_decomposition_rel");
    r.emissions_kg = j.at("emissions_kg");
    r.values = j.at("values").get<std::vector<double>>();
    return r;
}

// Per-interval dispatch series as a delimited table, one row per (day,
// interval), for downstream plotting.
inline void write_dispatch_csv(const Scenario& sc, const ClusterModel& cm,
                               const std::vector<double>& x, std::ostream& os) {
    auto val = [&](VarId v) { return x.at(v.index); };
    os << "day,interval,grid_kw,curtail_kw,batt_charge_kw,batt_discharge_kw,batt_soe_kwh,"
          "bev_demand_kw,diesel_kw,h2_demand_kw,h2_delivered_kg,tank_kg,buffer_kg,elz_kw";
    for (int i = 0; i < cm.fleet.num_vehicle_types; ++i)
        os << ",charge_kw_" << sc.vehicles[i].id << ",soe_kwh_" << sc.vehicles[i].id;
    os << "\n";
    for (int s = 0; s < sc.grid.num_days; ++s) {
        for (int t = 1; t <= sc.grid.intervals_per_day; ++t) {
            os << s << "," << t << "," << val(cm.der.pg(s, t)) << "," << val(cm.der.pcurt(s, t))
               << "," << val(cm.der.pbc(s, t)) << "," << val(cm.der.pbd(s, t)) << ","
               << val(cm.der.eb(s, t)) << "," << val(cm.coupling.pd(s, t)) << ","
               << val(cm.coupling.pdf(s, t)) << "," << val(cm.coupling.ph(s, t)) << ","
               << val(cm.h2.wdel(s, t)) << "," << val(cm.h2.wh(s, t)) << ","
               << val(cm.h2.wbf(s, t)) << "," << val(cm.h2.pelz(s, t));
            for (int i = 0; i < cm.fleet.num_vehicle_types; ++i)
                os << "," << val(cm.fleet.pv(i, s, t)) << "," << val(cm.fleet.q(i, s, t));
            os << "\n";
        }
    }
}

}  // namespace depotplan
