#pragma once

#include <string>
#include <vector>

#include "depotplan/milp/model.hpp"
#include "depotplan/scenario.hpp"

namespace depotplan {

using milp::LinExpr;
using milp::ModelInstance;
using milp::Sense;
using milp::VarId;

struct DerVars {
    int num_days = 0;
    int intervals_per_day = 0;

    VarId solar_capacity;   // kW
    VarId battery_power;    // kW
    VarId battery_energy;   // kWh
    VarId grid_upgrade;     // kW beyond the base feeder limit; invalid unless enabled

    std::vector<VarId> grid_draw;       // p^g, (s,t)
    std::vector<VarId> curtail;         // p^curt
    std::vector<VarId> batt_charge;     // p^{b+}
    std::vector<VarId> batt_discharge;  // p^{b-}
    std::vector<VarId> charge_indicator;  // gamma, binary
    std::vector<VarId> batt_soe;        // e^b, (s, 1..T_d+1)
    std::vector<VarId> peak;            // p^pk per season group

    VarId st(const std::vector<VarId>& v, int s, int t) const {
        return v[static_cast<std::size_t>(s) * intervals_per_day + (t - 1)];
    }
    VarId pg(int s, int t) const { return st(grid_draw, s, t); }
    VarId pcurt(int s, int t) const { return st(curtail, s, t); }
    VarId pbc(int s, int t) const { return st(batt_charge, s, t); }
    VarId pbd(int s, int t) const { return st(batt_discharge, s, t); }
    VarId gamma(int s, int t) const { return st(charge_indicator, s, t); }
    VarId eb(int s, int t) const {  // t in 1..T_d+1
        return batt_soe[static_cast<std::size_t>(s) * (intervals_per_day + 1) + (t - 1)];
    }
};

namespace der_detail {
inline std::string st_name(const char* fam, int s, int t) {
    return std::string(fam) + "[" + std::to_string(s) + "," + std::to_string(t) + "]";
}
}  // namespace der_detail

inline DerVars create_der_variables(ModelInstance& model, const Scenario& sc) {
    using der_detail::st_name;
    const int S = sc.grid.num_days;
    const int T = sc.grid.intervals_per_day;
    DerVars dv;
    dv.num_days = S;
    dv.intervals_per_day = T;

    dv.solar_capacity = model.add_continuous("der.solar_cap", 0.0, sc.der.solar_cap_max_kw);
    dv.battery_power = model.add_continuous("der.batt_power_cap", 0.0, sc.der.battery_power_max_kw);
    dv.battery_energy = model.add_continuous("der.batt_energy_cap");
    if (sc.grid_upgrade_variant) dv.grid_upgrade = model.add_continuous("der.grid_upgrade");

    for (int s = 0; s < S; ++s)
        for (int t = 1; t <= T; ++t)
            dv.grid_draw.push_back(model.add_continuous(st_name("der.pg", s, t)));
    for (int s = 0; s < S; ++s)
        for (int t = 1; t <= T; ++t)
            dv.curtail.push_back(model.add_continuous(st_name("der.pcurt", s, t), 0.0,
                                                      sc.der.curtail_cap_kw));
    for (int s = 0; s < S; ++s)
        for (int t = 1; t <= T; ++t)
            dv.batt_charge.push_back(model.add_continuous(st_name("der.pbc", s, t)));
    for (int s = 0; s < S; ++s)
        for (int t = 1; t <= T; ++t)
            dv.batt_discharge.push_back(model.add_continuous(st_name("der.pbd", s, t)));
    for (int s = 0; s < S; ++s)
        for (int t = 1; t <= T; ++t)
            dv.charge_indicator.push_back(model.add_binary(st_name("der.gamma", s, t)));
    for (int s = 0; s < S; ++s)
        for (int t = 1; t <= T + 1; ++t)
            dv.batt_soe.push_back(model.add_continuous(st_name("der.eb", s, t)));
    for (std::size_t l = 0; l < sc.der.peak_groups.size(); ++l)
        dv.peak.push_back(model.add_continuous("der.peak[" + std::to_string(l) + "]"));
    return dv;
}

// Battery storage dynamics, cyclic closure, SOC window, power cap, and
// big-M charge/discharge complementarity.
inline void add_battery_constraints(ModelInstance& model, const Scenario& sc, DerVars& dv) {
    using der_detail::st_name;
    const double M = sc.der.big_m_kw;
    if (std::isfinite(sc.der.battery_power_max_kw) && M < sc.der.battery_power_max_kw)
        throw BigMTooSmall("big_m_kw (" + std::to_string(M) +
                           ") is below the battery power bound (" +
                           std::to_string(sc.der.battery_power_max_kw) + ")");

    const double dT = sc.grid.interval_hours;
    for (int s = 0; s < dv.num_days; ++s) {
        for (int t = 1; t <= dv.intervals_per_day; ++t) {
            LinExpr step = LinExpr(dv.eb(s, t + 1)) - LinExpr(dv.eb(s, t)) -
                           dT * sc.der.charge_eff * dv.pbc(s, t) +
                           dT / sc.der.discharge_eff * dv.pbd(s, t);
            model.add_constraint(st_name("der.batt_soe", s, t), step, Sense::Equal, 0.0);

            model.add_constraint(st_name("der.batt_soc_lo", s, t),
                                 LinExpr(dv.eb(s, t)) - sc.der.soc_lower_frac * dv.battery_energy,
                                 Sense::GreaterEqual, 0.0);
            model.add_constraint(st_name("der.batt_soc_hi", s, t),
                                 LinExpr(dv.eb(s, t)) - sc.der.soc_upper_frac * dv.battery_energy,
                                 Sense::LessEqual, 0.0);
            model.add_constraint(st_name("der.batt_power", s, t),
                                 LinExpr(dv.pbc(s, t)) + LinExpr(dv.pbd(s, t)) -
                                     LinExpr(dv.battery_power),
                                 Sense::LessEqual, 0.0);
            model.add_constraint(st_name("der.batt_chg_m", s, t),
                                 LinExpr(dv.pbc(s, t)) - M * dv.gamma(s, t), Sense::LessEqual,
                                 0.0);
            model.add_constraint(st_name("der.batt_dis_m", s, t),
                                 LinExpr(dv.pbd(s, t)) + M * dv.gamma(s, t), Sense::LessEqual, M);
        }
        model.add_constraint("der.batt_cyclic[" + std::to_string(s) + "]",
                             LinExpr(dv.eb(s, 1)) - LinExpr(dv.eb(s, dv.intervals_per_day + 1)),
                             Sense::Equal, 0.0);
    }
}

// Demand-charge peak tracking plus feeder and curtailment caps. With the
// grid-upgrade variant the feeder cap is base + upgrade instead of a fixed
// bound.
inline void add_grid_and_peak(ModelInstance& model, const Scenario& sc, DerVars& dv) {
    using der_detail::st_name;
    if (sc.der.peak_groups.size() != sc.costs.peak_rate.size())
        throw ConfigError("peak_groups and peak_rate must have the same length");

    for (std::size_t l = 0; l < sc.der.peak_groups.size(); ++l) {
        for (int s : sc.der.peak_groups[l]) {
            for (int t = 1; t <= dv.intervals_per_day; ++t) {
                model.add_constraint("der.peak_track[" + std::to_string(l) + "," +
                                         std::to_string(s) + "," + std::to_string(t) + "]",
                                     LinExpr(dv.peak[l]) - LinExpr(dv.pg(s, t)),
                                     Sense::GreaterEqual, 0.0);
            }
        }
    }

    for (int s = 0; s < dv.num_days; ++s) {
        for (int t = 1; t <= dv.intervals_per_day; ++t) {
            if (sc.grid_upgrade_variant) {
                model.add_constraint(st_name("der.grid_cap", s, t),
                                     LinExpr(dv.pg(s, t)) - LinExpr(dv.grid_upgrade),
                                     Sense::LessEqual, sc.costs.grid_upgrade_base_kw);
            } else if (std::isfinite(sc.der.grid_cap_kw)) {
                model.add_constraint(st_name("der.grid_cap", s, t), LinExpr(dv.pg(s, t)),
                                     Sense::LessEqual, sc.der.grid_cap_kw);
            }
        }
    }
}

// Electric power balance at every (s,t). Fleet and hydrogen variables must
// already be registered; their per-interval power expressions come in as
// arguments so the same emitter serves both the clustering and the
// individual-vehicle builders.
inline void add_power_balance(ModelInstance& model, const Scenario& sc, DerVars& dv,
                              const std::vector<std::vector<LinExpr>>& ev_demand,
                              const std::vector<std::vector<LinExpr>>& h2_station_load) {
    using der_detail::st_name;
    if (ev_demand.empty()) throw MissingCoupling("EV demand expressions not supplied");
    for (int s = 0; s < dv.num_days; ++s) {
        for (int t = 1; t <= dv.intervals_per_day; ++t) {
            LinExpr balance = sc.der.solar_cap_factor.at(s, t) * dv.solar_capacity +
                              LinExpr(dv.pg(s, t));
            balance -= ev_demand.at(s).at(t - 1);
            balance -= LinExpr(dv.pbc(s, t)) - LinExpr(dv.pbd(s, t));
            balance -= LinExpr(dv.pcurt(s, t));
            if (!h2_station_load.empty()) balance -= h2_station_load.at(s).at(t - 1);
            model.add_constraint(st_name("der.balance", s, t), balance, Sense::Equal, 0.0);
        }
    }
}

}  // namespace depotplan
