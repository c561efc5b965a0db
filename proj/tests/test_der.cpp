#include <catch2/catch_amalgamated.hpp>

#include "depotplan/builder.hpp"
#include "depotplan/der.hpp"
#include "depotplan/milp/solve.hpp"
#include "depotplan/random_instance.hpp"
#include "depotplan/report.hpp"

using namespace depotplan;

namespace {

// Scenario with an empty fleet, used to exercise the DER emitters alone.
Scenario der_only_scenario() {
    Scenario sc;
    sc.grid = make_grid(1, 24);
    sc.temperature_f = Series(1, 24, 65.0);
    sc.der.solar_cap_factor = Series(1, 24, 0.0);
    sc.der.solar_cap_max_kw = 1000.0;
    sc.der.big_m_kw = 1000.0;
    sc.der.battery_power_max_kw = 100.0;
    sc.der.peak_groups = {{0}};
    sc.costs.peak_rate = {10.0};
    sc.costs.grid_price = Series(1, 24, 0.1);
    sc.costs.diesel_price_per_kwh = Series(1, 24, 0.1);
    sc.costs.delivered_h2_price = Series(1, 24, 8.0);
    sc.emissions.grid_factor_kg_per_kwh = Series(1, 24, 0.3);
    sc.solve.mip_gap = 1e-6;
    return sc;
}

std::vector<std::vector<LinExpr>> flat_demand(double kw, int T = 24) {
    return {std::vector<LinExpr>(T, LinExpr(kw))};
}

}  // namespace

TEST_CASE("battery charge step: 2.5 kW for one hour at 90 percent stores 2.25 kWh") {
    auto sc = der_only_scenario();
    milp::ModelInstance model;
    auto dv = create_der_variables(model, sc);
    add_battery_constraints(model, sc, dv);
    model.fix_var(dv.battery_energy, 200.0);
    model.fix_var(dv.eb(0, 1), 100.0);
    for (int t = 1; t <= 24; ++t) {
        model.fix_var(dv.pbc(0, t), t == 1 ? 2.5 : 0.0);
        model.fix_var(dv.pbd(0, t), t == 2 ? 2.25 * 0.9 : 0.0);
    }
    model.set_objective(LinExpr());
    auto r = milp::solve(model, sc.solve);
    REQUIRE(r.status == milp::SolveStatus::Optimal);
    CHECK(r.x.at(dv.eb(0, 2).index) == Catch::Approx(102.25));
    CHECK(r.x.at(dv.eb(0, 3).index) == Catch::Approx(100.0));
}

TEST_CASE("battery discharge step: delivering 2.25 kW drains 2.5 kWh") {
    auto sc = der_only_scenario();
    milp::ModelInstance model;
    auto dv = create_der_variables(model, sc);
    add_battery_constraints(model, sc, dv);
    model.fix_var(dv.battery_energy, 200.0);
    model.fix_var(dv.eb(0, 1), 100.0);
    for (int t = 1; t <= 24; ++t) {
        model.fix_var(dv.pbd(0, t), t == 1 ? 2.25 : 0.0);
        model.fix_var(dv.pbc(0, t), t == 2 ? 2.5 / 0.9 : 0.0);
        model.fix_var(dv.gamma(0, t), t == 2 ? 1.0 : 0.0);
    }
    model.set_objective(LinExpr());
    auto r = milp::solve(model, sc.solve);
    REQUIRE(r.status == milp::SolveStatus::Optimal);
    CHECK(r.x.at(dv.eb(0, 2).index) == Catch::Approx(97.5));
    CHECK(r.x.at(dv.eb(0, 3).index) == Catch::Approx(100.0));
}

TEST_CASE("the indicator forbids charging and discharging at once") {
    auto sc = der_only_scenario();

    auto build = [&](double pbc, double pbd, double gamma) {
        milp::ModelInstance model;
        auto dv = create_der_variables(model, sc);
        add_battery_constraints(model, sc, dv);
        model.fix_var(dv.battery_energy, 200.0);
        model.fix_var(dv.pbc(0, 1), pbc);
        model.fix_var(dv.pbd(0, 1), pbd);
        model.fix_var(dv.gamma(0, 1), gamma);
        model.set_objective(LinExpr());
        return milp::solve(model, sc.solve).status;
    };
    CHECK(build(1.0, 0.0, 0.0) == milp::SolveStatus::Infeasible);  // charge needs gamma=1
    CHECK(build(0.0, 1.0, 1.0) == milp::SolveStatus::Infeasible);  // discharge needs gamma=0
}

TEST_CASE("a big-M below the battery power bound is rejected") {
    auto sc = der_only_scenario();
    sc.der.big_m_kw = 50.0;  // below battery_power_max_kw = 100
    milp::ModelInstance model;
    auto dv = create_der_variables(model, sc);
    CHECK_THROWS_AS(add_battery_constraints(model, sc, dv), BigMTooSmall);
}

TEST_CASE("SOC window tracks the energy capacity decision") {
    auto sc = der_only_scenario();
    milp::ModelInstance model;
    auto dv = create_der_variables(model, sc);
    add_battery_constraints(model, sc, dv);
    model.fix_var(dv.battery_energy, 100.0);
    model.fix_var(dv.eb(0, 5), 95.0);  // above the 0.9 upper fraction
    model.set_objective(LinExpr());
    CHECK(milp::solve(model, sc.solve).status == milp::SolveStatus::Infeasible);
}

TEST_CASE("curtailment absorbs solar the depot cannot use") {
    auto sc = der_only_scenario();
    sc.der.solar_cap_factor.set(0, 12, 0.5);
    milp::ModelInstance model;
    auto dv = create_der_variables(model, sc);
    add_battery_constraints(model, sc, dv);
    add_grid_and_peak(model, sc, dv);
    add_power_balance(model, sc, dv, flat_demand(0.0), {});
    model.fix_var(dv.solar_capacity, 100.0);
    model.fix_var(dv.battery_energy, 0.0);
    LinExpr cost = 10.0 * dv.peak[0];
    for (int t = 1; t <= 24; ++t) cost += 0.1 * dv.pg(0, t);
    model.set_objective(cost);
    auto r = milp::solve(model, sc.solve);
    REQUIRE(r.status == milp::SolveStatus::Optimal);
    CHECK(r.x.at(dv.pcurt(0, 12).index) == Catch::Approx(50.0));
    CHECK(r.x.at(dv.pg(0, 12).index) == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("the peak variable equals the maximum grid draw under a demand charge") {
    auto sc = der_only_scenario();
    milp::ModelInstance model;
    auto dv = create_der_variables(model, sc);
    add_battery_constraints(model, sc, dv);
    add_grid_and_peak(model, sc, dv);
    std::vector<std::vector<LinExpr>> demand(1);
    for (int t = 1; t <= 24; ++t) demand[0].push_back(LinExpr(t == 7 ? 40.0 : 15.0));
    add_power_balance(model, sc, dv, demand, {});
    model.fix_var(dv.solar_capacity, 0.0);
    model.fix_var(dv.battery_energy, 0.0);
    model.fix_var(dv.battery_power, 0.0);
    LinExpr cost = 10.0 * dv.peak[0];
    for (int t = 1; t <= 24; ++t) cost += 0.1 * dv.pg(0, t);
    model.set_objective(cost);
    auto r = milp::solve(model, sc.solve);
    REQUIRE(r.status == milp::SolveStatus::Optimal);
    CHECK(r.x.at(dv.peak[0].index) == Catch::Approx(40.0));
}

TEST_CASE("a storage battery shaves the demand-charge peak") {
    auto sc = der_only_scenario();
    milp::ModelInstance model;
    auto dv = create_der_variables(model, sc);
    add_battery_constraints(model, sc, dv);
    add_grid_and_peak(model, sc, dv);
    std::vector<std::vector<LinExpr>> demand(1);
    for (int t = 1; t <= 24; ++t) demand[0].push_back(LinExpr(t == 7 ? 40.0 : 0.0));
    add_power_balance(model, sc, dv, demand, {});
    model.fix_var(dv.solar_capacity, 0.0);
    model.fix_var(dv.battery_energy, 100.0);
    LinExpr cost = 100.0 * dv.peak[0];
    for (int t = 1; t <= 24; ++t) cost += 0.1 * dv.pg(0, t);
    model.set_objective(cost);
    auto r = milp::solve(model, sc.solve);
    REQUIRE(r.status == milp::SolveStatus::Optimal);
    // The spike is served from storage, refilled slowly off peak.
    CHECK(r.x.at(dv.peak[0].index) < 40.0 - 1e-3);
    double pbd = r.x.at(dv.pbd(0, 7).index);
    CHECK(pbd > 0.0);
}

TEST_CASE("grid-upgrade variant: feeder headroom is bought, not assumed") {
    SyntheticOptions opt;
    opt.seed = 42;
    opt.include_bev_long = false;
    auto sc = make_synthetic_scenario(opt);
    sc.blocks = {{"solo", 0, 5.0, 9.0, 80.0}};
    sc.mode = DepartureEnergyMode::Exact;
    sc.solve.mip_gap = 1e-6;
    sc.grid_upgrade_variant = true;
    sc.costs.grid_upgrade_base_kw = 1.0;
    auto cm = build_cluster_model(sc);
    auto r = milp::solve(cm->model, sc.solve);
    REQUIRE(r.has_solution());
    double upgrade = r.x.at(cm->der.grid_upgrade.index);
    // 160 kWh of charging spread over the 20 depot intervals needs an 8 kW
    // feeder; 1 kW is free, 7 kW is bought.
    CHECK(upgrade == Catch::Approx(7.0).margin(1e-3));
    auto costs = cm->breakdown.evaluate(cm->model, r.x);
    CHECK(costs.at("grid_upgrade") == Catch::Approx(500.0 * upgrade));
    for (int t = 1; t <= 24; ++t)
        CHECK(r.x.at(cm->der.pg(0, t).index) <= 1.0 + upgrade + 1e-6);
}

TEST_CASE("solved scenarios never buy and spill in the same interval") {
    SyntheticOptions opt;
    opt.seed = 5;
    opt.solar_cap_max_kw = 400.0;
    auto sc = make_synthetic_scenario(opt);
    sc.solve.mip_gap = 1e-4;
    auto cm = build_cluster_model(sc);
    auto r = milp::solve(cm->model, sc.solve);
    REQUIRE(r.has_solution());
    auto audits = run_solution_audits(sc, *cm, r.x, r.objective);
    CHECK(audits.max_buy_and_spill_kw <= 1e-6);
    CHECK(audits.max_complementarity <= 1e-6 * sc.der.big_m_kw);
}
