#pragma once

#include <map>
#include <string>
#include <vector>

#include "depotplan/der.hpp"
#include "depotplan/hydrogen.hpp"
#include "depotplan/milp/model.hpp"
#include "depotplan/scenario.hpp"

namespace depotplan {

// Named cost components whose sum is the model objective; kept separate so
// reports can decompose the solver's objective value term by term.
struct ObjectiveBreakdown {
    std::vector<std::pair<std::string, LinExpr>> terms;

    void add(std::string name, LinExpr expr) { terms.emplace_back(std::move(name), std::move(expr)); }

    LinExpr total() const {
        LinExpr sum;
        for (const auto& [name, expr] : terms) sum += expr;
        return sum;
    }

    std::map<std::string, double> evaluate(const ModelInstance& model,
                                           const std::vector<double>& x) const {
        std::map<std::string, double> out;
        for (const auto& [name, expr] : terms) out[name] = model.eval(expr, x);
        return out;
    }
};

struct CouplingVars {
    int num_days = 0;
    int intervals_per_day = 0;
    std::vector<VarId> elec_demand;    // p^d
    std::vector<VarId> diesel_demand;  // p^df
    std::vector<VarId> h2_demand;      // p^h

    VarId st(const std::vector<VarId>& v, int s, int t) const {
        return v[static_cast<std::size_t>(s) * intervals_per_day + (t - 1)];
    }
    VarId pd(int s, int t) const { return st(elec_demand, s, t); }
    VarId pdf(int s, int t) const { return st(diesel_demand, s, t); }
    VarId ph(int s, int t) const { return st(h2_demand, s, t); }
};

inline CouplingVars create_coupling_variables(ModelInstance& model, int num_days,
                                              int intervals_per_day) {
    CouplingVars cv;
    cv.num_days = num_days;
    cv.intervals_per_day = intervals_per_day;
    auto make = [&](const char* fam, std::vector<VarId>& out) {
        for (int s = 0; s < num_days; ++s)
            for (int t = 1; t <= intervals_per_day; ++t)
                out.push_back(model.add_continuous(std::string(fam) + "[" + std::to_string(s) +
                                                   "," + std::to_string(t) + "]"));
    };
    make("couple.pd", cv.elec_demand);
    make("couple.pdf", cv.diesel_demand);
    make("couple.ph", cv.h2_demand);
    return cv;
}

// Ties the per-fuel demand variables to the supplied fleet charging-power
// expressions and the hydrogen demand to the dispenser cooling load. The
// expression tables let the clustering and individual builders share this
// emitter.
inline void add_coupling(ModelInstance& model, const Scenario& sc, CouplingVars& cv,
                         const std::vector<std::vector<LinExpr>>& bev_power,
                         const std::vector<std::vector<LinExpr>>& diesel_power,
                         const std::vector<std::vector<LinExpr>>& fcev_power, const H2Vars& hv) {
    auto name = [](const char* fam, int s, int t) {
        return std::string(fam) + "[" + std::to_string(s) + "," + std::to_string(t) + "]";
    };
    for (int s = 0; s < cv.num_days; ++s) {
        for (int t = 1; t <= cv.intervals_per_day; ++t) {
            model.add_constraint(name("couple.bev", s, t),
                                 LinExpr(cv.pd(s, t)) - bev_power.at(s).at(t - 1), Sense::Equal,
                                 0.0);
            model.add_constraint(name("couple.diesel", s, t),
                                 LinExpr(cv.pdf(s, t)) - diesel_power.at(s).at(t - 1),
                                 Sense::Equal, 0.0);
            model.add_constraint(name("couple.fcev", s, t),
                                 LinExpr(cv.ph(s, t)) - fcev_power.at(s).at(t - 1), Sense::Equal,
                                 0.0);
            // p^h = (p^cl / C^cl) E_h
            model.add_constraint(name("couple.dispense", s, t),
                                 LinExpr(cv.ph(s, t)) -
                                     (sc.h2.energy_content_kwh_per_kg / sc.h2.cl_kwh_per_kg) *
                                         hv.pcl(s, t),
                                 Sense::Equal, 0.0);
        }
    }
}

// Annual carbon accounting as a linear expression over the solution.
inline LinExpr emission_expression(const Scenario& sc, const CouplingVars& cv, const DerVars& dv,
                                   const H2Vars& hv) {
    LinExpr total;
    const double dT = sc.grid.interval_hours;
    for (int s = 0; s < cv.num_days; ++s) {
        double weight = sc.grid.day_weights.at(s);
        for (int t = 1; t <= cv.intervals_per_day; ++t) {
            total += weight * dT * sc.emissions.grid_factor_kg_per_kwh.at(s, t) * dv.pg(s, t);
            total += weight * dT * sc.emissions.diesel_factor_kg_per_kwh * cv.pdf(s, t);
            total += weight * sc.emissions.delivered_h2_factor_kg_per_kg * hv.wdel(s, t);
        }
    }
    return total;
}

inline void add_carbon_cap(ModelInstance& model, const Scenario& sc, const CouplingVars& cv,
                           const DerVars& dv, const H2Vars& hv) {
    if (!sc.emissions.annual_cap_kg) return;
    model.add_constraint("carbon.cap", emission_expression(sc, cv, dv, hv), Sense::LessEqual,
                         *sc.emissions.annual_cap_kg);
}

// All cost terms that do not depend on how the fleet is modeled (the
// fleet capital/maintenance terms are added by the respective builder).
inline void add_infrastructure_costs(ObjectiveBreakdown& breakdown, const Scenario& sc,
                                     const CouplingVars& cv, const DerVars& dv, const H2Vars& hv) {
    const double dT = sc.grid.interval_hours;

    LinExpr demand_charge;
    for (std::size_t l = 0; l < dv.peak.size(); ++l)
        demand_charge += sc.costs.peak_rate.at(l) * dv.peak[l];
    breakdown.add("demand_charge", demand_charge);

    LinExpr grid_energy, diesel_fuel, delivered_h2;
    for (int s = 0; s < cv.num_days; ++s) {
        double weight = sc.grid.day_weights.at(s);
        for (int t = 1; t <= cv.intervals_per_day; ++t) {
            grid_energy += weight * dT * sc.costs.grid_price.at(s, t) * dv.pg(s, t);
            diesel_fuel += weight * dT * sc.costs.diesel_price_per_kwh.at(s, t) * cv.pdf(s, t);
            delivered_h2 += weight * sc.costs.delivered_h2_price.at(s, t) * hv.wdel(s, t);
        }
    }
    breakdown.add("grid_energy", grid_energy);
    breakdown.add("diesel_fuel", diesel_fuel);
    breakdown.add("delivered_h2", delivered_h2);
    breakdown.add("h2_initial_inventory", initial_inventory_cost(sc, hv));

    breakdown.add("solar_capital", sc.costs.solar_capital_per_kw * dv.solar_capacity);
    breakdown.add("battery_capital", sc.costs.battery_capital_per_kwh * dv.battery_energy);
    breakdown.add("tank_capital", sc.costs.tank_capital_per_kg * hv.tank_cap);
    breakdown.add("buffer_capital", sc.costs.buffer_capital_per_kg * hv.buffer_cap);
    breakdown.add("elz_capital",
                  (sc.costs.elz_capital_per_kg_h / sc.h2.elz_kwh_per_kg) * hv.elz_cap);
    breakdown.add("lcpr_capital",
                  (sc.costs.lcpr_capital_per_kg_h / sc.h2.lcpr_kwh_per_kg) * hv.lcpr_cap);
    breakdown.add("cpr_capital",
                  (sc.costs.cpr_capital_per_kg_h / sc.h2.cpr_kwh_per_kg) * hv.cpr_cap);
    breakdown.add("cl_capital", (sc.costs.cl_capital_per_kg_h / sc.h2.cl_kwh_per_kg) * hv.cl_cap);

    if (sc.grid_upgrade_variant)
        breakdown.add("grid_upgrade", sc.costs.grid_upgrade_cost_per_kw * dv.grid_upgrade);
}

}  // namespace depotplan
