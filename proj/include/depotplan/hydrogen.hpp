#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "depotplan/milp/model.hpp"
#include "depotplan/scenario.hpp"

namespace depotplan {

using milp::LinExpr;
using milp::ModelInstance;
using milp::Sense;
using milp::VarId;

struct H2Vars {
    int num_days = 0;
    int intervals_per_day = 0;

    VarId tank_cap;    // kg
    VarId buffer_cap;  // kg
    VarId elz_cap;     // kW
    VarId lcpr_cap;
    VarId cpr_cap;
    VarId cl_cap;

    std::vector<VarId> delivered;  // w^del, (s,t)
    std::vector<VarId> tank;       // w^h, (s, 1..T_d+1)
    std::vector<VarId> buffer;     // w^bf, (s, 1..T_d+1)
    std::vector<VarId> elz;        // p^elz, (s,t)
    std::vector<VarId> lcpr;
    std::vector<VarId> cpr;
    std::vector<VarId> cl;

    VarId st(const std::vector<VarId>& v, int s, int t) const {
        return v[static_cast<std::size_t>(s) * intervals_per_day + (t - 1)];
    }
    VarId wdel(int s, int t) const { return st(delivered, s, t); }
    VarId pelz(int s, int t) const { return st(elz, s, t); }
    VarId plcpr(int s, int t) const { return st(lcpr, s, t); }
    VarId pcpr(int s, int t) const { return st(cpr, s, t); }
    VarId pcl(int s, int t) const { return st(cl, s, t); }
    VarId wh(int s, int t) const {  // t in 1..T_d+1
        return tank[static_cast<std::size_t>(s) * (intervals_per_day + 1) + (t - 1)];
    }
    VarId wbf(int s, int t) const {
        return buffer[static_cast<std::size_t>(s) * (intervals_per_day + 1) + (t - 1)];
    }
};

namespace h2_detail {
inline std::string st_name(const char* fam, int s, int t) {
    return std::string(fam) + "[" + std::to_string(s) + "," + std::to_string(t) + "]";
}
}  // namespace h2_detail

inline H2Vars create_h2_variables(ModelInstance& model, const Scenario& sc,
                                  std::vector<std::string>* warnings = nullptr) {
    using h2_detail::st_name;
    const int S = sc.grid.num_days;
    const int T = sc.grid.intervals_per_day;
    H2Vars hv;
    hv.num_days = S;
    hv.intervals_per_day = T;

    hv.tank_cap = model.add_continuous("h2.tank_cap");
    hv.buffer_cap = model.add_continuous("h2.buffer_cap");
    hv.elz_cap = model.add_continuous("h2.elz_cap");
    hv.lcpr_cap = model.add_continuous("h2.lcpr_cap");
    hv.cpr_cap = model.add_continuous("h2.cpr_cap");
    hv.cl_cap = model.add_continuous("h2.cl_cap");

    bool in_window_possible = !sc.h2.delivery_intervals.empty();
    bool has_fcev = std::any_of(sc.vehicles.begin(), sc.vehicles.end(),
                                [](const VehicleType& v) { return v.fuel == FuelKind::Hydrogen; });
    if (!in_window_possible && has_fcev && warnings)
        warnings->push_back(
            "empty hydrogen delivery window with FCEVs present: hydrogen can only come from "
            "on-site electrolysis");

    // Delivery variables exist at every interval; those outside the window
    // are fixed to zero through their bounds.
    for (int s = 0; s < S; ++s) {
        for (int t = 1; t <= T; ++t) {
            bool in_window = std::find(sc.h2.delivery_intervals.begin(),
                                       sc.h2.delivery_intervals.end(),
                                       t) != sc.h2.delivery_intervals.end();
            hv.delivered.push_back(model.add_continuous(st_name("h2.wdel", s, t), 0.0,
                                                        in_window ? sc.h2.delivery_cap_kg : 0.0));
        }
    }
    for (int s = 0; s < S; ++s)
        for (int t = 1; t <= T + 1; ++t)
            hv.tank.push_back(model.add_continuous(st_name("h2.wh", s, t)));
    for (int s = 0; s < S; ++s)
        for (int t = 1; t <= T + 1; ++t)
            hv.buffer.push_back(model.add_continuous(st_name("h2.wbf", s, t)));
    for (int s = 0; s < S; ++s)
        for (int t = 1; t <= T; ++t)
            hv.elz.push_back(model.add_continuous(st_name("h2.pelz", s, t)));
    for (int s = 0; s < S; ++s)
        for (int t = 1; t <= T; ++t)
            hv.lcpr.push_back(model.add_continuous(st_name("h2.plcpr", s, t)));
    for (int s = 0; s < S; ++s)
        for (int t = 1; t <= T; ++t)
            hv.cpr.push_back(model.add_continuous(st_name("h2.pcpr", s, t)));
    for (int s = 0; s < S; ++s)
        for (int t = 1; t <= T; ++t)
            hv.cl.push_back(model.add_continuous(st_name("h2.pcl", s, t)));
    return hv;
}

// Tank/buffer mass balances, electrolyzer-compressor lockstep, and cyclic
// closure.
inline void add_h2_dynamics(ModelInstance& model, const Scenario& sc, H2Vars& hv) {
    using h2_detail::st_name;
    const double dT = sc.grid.interval_hours;
    const auto& p = sc.h2;
    for (int s = 0; s < hv.num_days; ++s) {
        for (int t = 1; t <= hv.intervals_per_day; ++t) {
            LinExpr tank_step = LinExpr(hv.wh(s, t + 1)) - LinExpr(hv.wh(s, t)) -
                                dT / p.lcpr_kwh_per_kg * hv.plcpr(s, t) +
                                dT / p.cpr_kwh_per_kg * hv.pcpr(s, t) -
                                LinExpr(hv.wdel(s, t));
            model.add_constraint(st_name("h2.tank_balance", s, t), tank_step, Sense::Equal, 0.0);

            model.add_constraint(st_name("h2.elz_lockstep", s, t),
                                 (1.0 / p.elz_kwh_per_kg) * hv.pelz(s, t) -
                                     (1.0 / p.lcpr_kwh_per_kg) * hv.plcpr(s, t),
                                 Sense::Equal, 0.0);

            LinExpr buffer_step = LinExpr(hv.wbf(s, t + 1)) - LinExpr(hv.wbf(s, t)) -
                                  dT / p.cpr_kwh_per_kg * hv.pcpr(s, t) +
                                  dT / p.cl_kwh_per_kg * hv.pcl(s, t);
            model.add_constraint(st_name("h2.buffer_balance", s, t), buffer_step, Sense::Equal,
                                 0.0);
        }
        model.add_constraint("h2.tank_cyclic[" + std::to_string(s) + "]",
                             LinExpr(hv.wh(s, 1)) - LinExpr(hv.wh(s, hv.intervals_per_day + 1)),
                             Sense::Equal, 0.0);
        model.add_constraint("h2.buffer_cyclic[" + std::to_string(s) + "]",
                             LinExpr(hv.wbf(s, 1)) - LinExpr(hv.wbf(s, hv.intervals_per_day + 1)),
                             Sense::Equal, 0.0);
    }
}

// Storage windows against the capacity decisions and component power caps.
// Delivery bounds are handled at variable creation.
inline void add_h2_limits(ModelInstance& model, const Scenario& sc, H2Vars& hv) {
    using h2_detail::st_name;
    for (int s = 0; s < hv.num_days; ++s) {
        for (int t = 1; t <= hv.intervals_per_day + 1; ++t) {
            model.add_constraint(st_name("h2.tank_lo", s, t),
                                 LinExpr(hv.wh(s, t)) - sc.h2.tank_lower_frac * hv.tank_cap,
                                 Sense::GreaterEqual, 0.0);
            model.add_constraint(st_name("h2.tank_hi", s, t),
                                 LinExpr(hv.wh(s, t)) - LinExpr(hv.tank_cap), Sense::LessEqual,
                                 0.0);
            model.add_constraint(st_name("h2.buffer_lo", s, t),
                                 LinExpr(hv.wbf(s, t)) - sc.h2.buffer_lower_frac * hv.buffer_cap,
                                 Sense::GreaterEqual, 0.0);
            model.add_constraint(st_name("h2.buffer_hi", s, t),
                                 LinExpr(hv.wbf(s, t)) - LinExpr(hv.buffer_cap), Sense::LessEqual,
                                 0.0);
        }
        for (int t = 1; t <= hv.intervals_per_day; ++t) {
            model.add_constraint(st_name("h2.elz_cap", s, t),
                                 LinExpr(hv.pelz(s, t)) - LinExpr(hv.elz_cap), Sense::LessEqual,
                                 0.0);
            model.add_constraint(st_name("h2.lcpr_cap", s, t),
                                 LinExpr(hv.plcpr(s, t)) - LinExpr(hv.lcpr_cap), Sense::LessEqual,
                                 0.0);
            model.add_constraint(st_name("h2.cpr_cap", s, t),
                                 LinExpr(hv.pcpr(s, t)) - LinExpr(hv.cpr_cap), Sense::LessEqual,
                                 0.0);
            model.add_constraint(st_name("h2.cl_cap", s, t),
                                 LinExpr(hv.pcl(s, t)) - LinExpr(hv.cl_cap), Sense::LessEqual,
                                 0.0);
        }
    }
}

// Cost of the hydrogen inventory carried at the start of each day, priced
// at that day's first-interval delivered price.
inline LinExpr initial_inventory_cost(const Scenario& sc, const H2Vars& hv) {
    LinExpr cost;
    for (int s = 0; s < hv.num_days; ++s) {
        double price = sc.costs.delivered_h2_price.at(s, 1);
        cost += price * hv.wh(s, 1);
        cost += price * hv.wbf(s, 1);
    }
    return cost;
}

}  // namespace depotplan
