#include <catch2/catch_amalgamated.hpp>

#include "depotplan/builder.hpp"
#include "depotplan/hydrogen.hpp"
#include "depotplan/milp/solve.hpp"
#include "depotplan/random_instance.hpp"
#include "depotplan/report.hpp"

using namespace depotplan;

namespace {

Scenario station_scenario() {
    Scenario sc;
    sc.grid = make_grid(1, 24);
    sc.temperature_f = Series(1, 24, 65.0);
    sc.der.solar_cap_factor = Series(1, 24, 0.0);
    sc.der.peak_groups = {{0}};
    sc.costs.peak_rate = {0.0};
    sc.costs.grid_price = Series(1, 24, 0.1);
    sc.costs.diesel_price_per_kwh = Series(1, 24, 0.1);
    sc.costs.delivered_h2_price = Series(1, 24, 8.0);
    sc.emissions.grid_factor_kg_per_kwh = Series(1, 24, 0.3);
    sc.h2.delivery_intervals = {5};
    sc.solve.mip_gap = 1e-6;
    return sc;
}

}  // namespace

TEST_CASE("electrolyzer to dispenser chain moves one kilogram in lockstep") {
    auto sc = station_scenario();
    milp::ModelInstance model;
    auto hv = create_h2_variables(model, sc);
    add_h2_dynamics(model, sc, hv);
    add_h2_limits(model, sc, hv);
    model.fix_var(hv.tank_cap, 1000.0);
    model.fix_var(hv.buffer_cap, 100.0);
    model.fix_var(hv.elz_cap, 100.0);
    model.fix_var(hv.lcpr_cap, 10.0);
    model.fix_var(hv.cpr_cap, 10.0);
    model.fix_var(hv.cl_cap, 10.0);
    model.fix_var(hv.wh(0, 1), 100.0);
    for (int t = 1; t <= 24; ++t) {
        model.fix_var(hv.pelz(0, t), t == 1 ? 41.97 : 0.0);  // 1 kg/h of electrolysis
        model.fix_var(hv.pcpr(0, t), t == 2 ? 3.0 : 0.0);    // 1 kg/h into the buffer
        model.fix_var(hv.pcl(0, t), t == 3 ? 0.2 : 0.0);     // 1 kg/h dispensed
        model.fix_var(hv.wdel(0, t), 0.0);
    }
    LinExpr obj = LinExpr(hv.wbf(0, 1));
    model.set_objective(obj);
    auto r = milp::solve(model, sc.solve);
    REQUIRE(r.status == milp::SolveStatus::Optimal);
    auto val = [&](VarId v) { return r.x.at(v.index); };

    // The low-pressure compressor runs in lockstep with the electrolyzer.
    CHECK(val(hv.plcpr(0, 1)) == Catch::Approx(0.15));
    // Tank: 100 -> 101 after electrolysis, back to 100 after compression.
    CHECK(val(hv.wh(0, 2)) == Catch::Approx(101.0));
    CHECK(val(hv.wh(0, 3)) == Catch::Approx(100.0));
    // Buffer sits at its floor, gains the kilogram, then dispenses it.
    CHECK(val(hv.wbf(0, 1)) == Catch::Approx(2.9));
    CHECK(val(hv.wbf(0, 3)) == Catch::Approx(3.9));
    CHECK(val(hv.wbf(0, 4)) == Catch::Approx(2.9));
    // Cyclic closure.
    CHECK(val(hv.wh(0, 25)) == Catch::Approx(val(hv.wh(0, 1))));
    CHECK(val(hv.wbf(0, 25)) == Catch::Approx(val(hv.wbf(0, 1))));
}

TEST_CASE("a delivery drawn down by compression steps the tank 50 to 49") {
    auto sc = station_scenario();
    milp::ModelInstance model;
    auto hv = create_h2_variables(model, sc);
    add_h2_dynamics(model, sc, hv);
    add_h2_limits(model, sc, hv);
    model.fix_var(hv.tank_cap, 500.0);  // floor 28.5 kg, below the 49 kg low point
    model.fix_var(hv.buffer_cap, 100.0);
    model.fix_var(hv.wh(0, 1), 50.0);
    for (int t = 1; t <= 24; ++t) {
        model.fix_var(hv.pelz(0, t), 0.0);
        model.fix_var(hv.pcpr(0, t), t == 1 ? 3.0 : 0.0);
        model.fix_var(hv.pcl(0, t), t == 2 ? 0.2 : 0.0);
        model.fix_var(hv.wdel(0, t), t == 5 ? 1.0 : 0.0);
    }
    model.set_objective(LinExpr(hv.wbf(0, 1)));
    auto r = milp::solve(model, sc.solve);
    REQUIRE(r.status == milp::SolveStatus::Optimal);
    auto val = [&](VarId v) { return r.x.at(v.index); };
    CHECK(val(hv.wh(0, 2)) == Catch::Approx(49.0));
    CHECK(val(hv.wh(0, 5)) == Catch::Approx(49.0));
    CHECK(val(hv.wh(0, 6)) == Catch::Approx(50.0));  // delivery lands at t=5
}

TEST_CASE("deliveries outside the window are pinned to zero by their bounds") {
    auto sc = station_scenario();
    sc.h2.delivery_cap_kg = 7.0;
    milp::ModelInstance model;
    auto hv = create_h2_variables(model, sc);
    for (int t = 1; t <= 24; ++t) {
        const auto& def = model.vars().at(hv.wdel(0, t).index);
        CHECK(def.lower == 0.0);
        CHECK(def.upper == (t == 5 ? 7.0 : 0.0));
    }
}

TEST_CASE("storage floors scale with the capacity decisions") {
    auto sc = station_scenario();
    milp::ModelInstance model;
    auto hv = create_h2_variables(model, sc);
    add_h2_dynamics(model, sc, hv);
    add_h2_limits(model, sc, hv);
    model.fix_var(hv.tank_cap, 100.0);
    model.fix_var(hv.buffer_cap, 100.0);
    for (int t = 1; t <= 24; ++t) {
        model.fix_var(hv.pelz(0, t), 0.0);
        model.fix_var(hv.pcpr(0, t), 0.0);
        model.fix_var(hv.pcl(0, t), 0.0);
        model.fix_var(hv.wdel(0, t), 0.0);
    }
    model.set_objective(LinExpr(hv.wh(0, 1)) + LinExpr(hv.wbf(0, 1)));
    auto r = milp::solve(model, sc.solve);
    REQUIRE(r.status == milp::SolveStatus::Optimal);
    CHECK(r.x.at(hv.wh(0, 1).index) == Catch::Approx(5.7));
    CHECK(r.x.at(hv.wbf(0, 1).index) == Catch::Approx(2.9));
}

TEST_CASE("initial inventory is priced at the day's opening delivered price") {
    auto sc = station_scenario();
    sc.costs.delivered_h2_price = Series(1, 24, 20.0);
    milp::ModelInstance model;
    auto hv = create_h2_variables(model, sc);
    auto cost = initial_inventory_cost(sc, hv);

    std::vector<double> x(model.vars().size(), 0.0);
    CHECK(model.eval(cost, x) == 0.0);
    x[hv.wh(0, 1).index] = 3.0;
    x[hv.wbf(0, 1).index] = 1.0;
    CHECK(model.eval(cost, x) == Catch::Approx(80.0));

    sc.costs.delivered_h2_price = Series(1, 24, 10.0);
    auto cost2 = initial_inventory_cost(sc, hv);
    x[hv.wh(0, 1).index] = 4.0;
    x[hv.wbf(0, 1).index] = 0.0;
    CHECK(model.eval(cost2, x) == Catch::Approx(40.0));
}

TEST_CASE("an empty delivery window with FCEVs present warns") {
    SyntheticOptions opt;
    opt.include_fcev = true;
    auto sc = make_synthetic_scenario(opt);
    sc.h2.delivery_intervals.clear();
    milp::ModelInstance model;
    std::vector<std::string> warnings;
    create_h2_variables(model, sc, &warnings);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("delivery window") != std::string::npos);
}

TEST_CASE("an FCEV block sizes the station and balances hydrogen mass") {
    SyntheticOptions opt;
    opt.seed = 3;
    opt.include_bev_long = false;
    opt.include_fcev = true;
    auto sc = make_synthetic_scenario(opt);
    sc.blocks = {{"far", 0, 5.0, 9.0, 150.0}};  // beyond the short BEV's reach
    sc.solve.mip_gap = 1e-6;
    auto cm = build_cluster_model(sc);
    auto r = milp::solve(cm->model, sc.solve);
    REQUIRE(r.has_solution());
    auto val = [&](VarId v) { return r.x.at(v.index); };

    // The block must go to the FCEV.
    int fcev = 1;
    CHECK(val(cm->fleet.assignment.at({0, fcev})) == Catch::Approx(1.0));
    CHECK(val(cm->h2.cl_cap) > 0.0);

    // Dispensed hydrogen mass equals the vehicle-side demand over the day.
    const double dT = sc.grid.interval_hours;
    double dispensed_kg = 0, demand_kg = 0;
    for (int t = 1; t <= sc.grid.intervals_per_day; ++t) {
        dispensed_kg += val(cm->h2.pcl(0, t)) / sc.h2.cl_kwh_per_kg * dT;
        demand_kg += val(cm->coupling.ph(0, t)) * dT / sc.h2.energy_content_kwh_per_kg;
    }
    double need_kg = cm->fleet.efficiency[0][fcev] * 150.0 / sc.h2.energy_content_kwh_per_kg;
    CHECK(dispensed_kg == Catch::Approx(demand_kg).epsilon(1e-6));
    CHECK(dispensed_kg == Catch::Approx(need_kg).epsilon(1e-4));

    auto audits = run_solution_audits(sc, *cm, r.x, r.objective);
    CHECK(audits.max_h2_balance_rel <= 1e-6);
}
