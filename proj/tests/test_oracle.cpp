#include <catch2/catch_amalgamated.hpp>

#include "depotplan/milp/solve.hpp"
#include "depotplan/oracle.hpp"
#include "depotplan/random_instance.hpp"

using namespace depotplan;

namespace {

Scenario two_block_scenario() {
    SyntheticOptions opt;
    opt.seed = 7;
    opt.include_bev_long = false;
    auto sc = make_synthetic_scenario(opt);
    sc.blocks = {{"a", 0, 5.0, 9.0, 60.0}, {"b", 0, 6.0, 10.0, 50.0}};
    sc.solve.mip_gap = 1e-6;
    return sc;
}

}  // namespace

TEST_CASE("the pool holds one slot per feasible block of the busiest day") {
    auto sc = two_block_scenario();
    auto im = build_individual_model(sc);
    CHECK(im->vehicle_type.size() == 2);
    // Symmetry pruning drops the second-slot pairing with the first block.
    CHECK(im->assignment.size() == 3);
}

TEST_CASE("overlapping blocks pigeonhole into separate purchased vehicles") {
    auto sc = two_block_scenario();
    auto im = build_individual_model(sc);
    auto r = milp::solve(im->model, sc.solve);
    REQUIRE(r.has_solution());
    double bought = r.x.at(im->purchased[0].index) + r.x.at(im->purchased[1].index);
    CHECK(bought == Catch::Approx(2.0));
    // Symmetry breaking keeps the used slots in front.
    CHECK(r.x.at(im->purchased[0].index) >= r.x.at(im->purchased[1].index) - 1e-6);
}

TEST_CASE("a block beyond every vehicle's range is infeasible in both models") {
    auto sc = two_block_scenario();
    sc.blocks[0].distance_km = 5000.0;
    auto cm = build_cluster_model(sc);
    auto im = build_individual_model(sc);
    auto results = milp::solve_batch({&cm->model, &im->model}, sc.solve);
    CHECK(results[0].status == milp::SolveStatus::Infeasible);
    CHECK(results[1].status == milp::SolveStatus::Infeasible);
}

TEST_CASE("the variable budget guards against oversized pools") {
    auto sc = two_block_scenario();
    CHECK_THROWS_AS(build_individual_model(sc, 10), TooLarge);
}

TEST_CASE("clustering bounds the individual model from below") {
    auto sc = make_oracle_instance(4);
    sc.solve.mip_gap = 1e-6;
    auto cmp = oracle_compare(sc, sc.solve);
    REQUIRE(cmp.surplus.has_solution());
    REQUIRE(cmp.exact.has_solution());
    REQUIRE(cmp.individual.has_solution());
    CHECK(cmp.ordering_ok());
}

TEST_CASE("disaggregation reproduces the pooled aggregates in exact mode") {
    auto sc = two_block_scenario();
    sc.mode = DepartureEnergyMode::Exact;
    auto cm = build_cluster_model(sc);
    auto r = milp::solve(cm->model, sc.solve);
    REQUIRE(r.has_solution());
    auto schedule = disaggregate(sc, *cm, r.x);
    REQUIRE(schedule.success);
    REQUIRE(schedule.vehicles.size() == 2);

    const int i = 0;
    const double cap = sc.vehicles[i].energy_capacity_kwh;
    for (int t = 1; t <= sc.grid.intervals_per_day; ++t) {
        double soe_sum = 0, charge_sum = 0;
        for (const auto& v : schedule.vehicles) {
            soe_sum += v.soe_kwh[0][t - 1];
            charge_sum += v.charge_kw[0][t - 1];
            CHECK(v.soe_kwh[0][t - 1] >= -1e-6);
            CHECK(v.soe_kwh[0][t - 1] <= cap + 1e-6);
        }
        CHECK(charge_sum == Catch::Approx(r.x.at(cm->fleet.pv(i, 0, t).index)).margin(1e-6));
    }
    // Both blocks got a vehicle.
    std::size_t assigned = 0;
    for (const auto& v : schedule.vehicles) assigned += v.blocks.size();
    CHECK(assigned == 2);
}

TEST_CASE("disaggregation certifies a pooled-energy deficit") {
    auto sc = two_block_scenario();
    // Both blocks leave in the same interval.
    sc.blocks = {{"a", 0, 5.0, 9.0, 60.0}, {"b", 0, 5.0, 10.0, 50.0}};
    auto cm = build_cluster_model(sc);

    // Fabricated cluster solution: the pool holds 400 kWh split evenly, but
    // block a's departure energy exceeds any single vehicle's share.
    std::vector<double> x(cm->model.vars().size(), 0.0);
    x[cm->fleet.vehicle_count[0].index] = 2.0;
    x[cm->fleet.assignment.at({0, 0}).index] = 1.0;
    x[cm->fleet.assignment.at({1, 0}).index] = 1.0;
    x[cm->fleet.departure_energy.at({0, 0}).index] = 210.0;
    x[cm->fleet.departure_energy.at({1, 0}).index] = 190.0;
    x[cm->fleet.q(0, 0, 1).index] = 400.0;

    auto schedule = disaggregate(sc, *cm, x);
    CHECK_FALSE(schedule.success);
    CHECK(schedule.failure_reason.find("block a") != std::string::npos);
}

TEST_CASE("surplus redistribution stays within vehicle capacity") {
    auto sc = two_block_scenario();
    sc.blocks = {{"a", 0, 5.0, 9.0, 60.0}};
    auto cm = build_cluster_model(sc);
    // One vehicle, pooled energy above its capacity share is impossible to
    // park anywhere once it departs.
    std::vector<double> x(cm->model.vars().size(), 0.0);
    x[cm->fleet.vehicle_count[0].index] = 1.0;
    x[cm->fleet.assignment.at({0, 0}).index] = 1.0;
    x[cm->fleet.departure_energy.at({0, 0}).index] = 130.0;
    x[cm->fleet.q(0, 0, 1).index] = 200.0;
    auto schedule = disaggregate(sc, *cm, x);
    CHECK_FALSE(schedule.success);
    CHECK(schedule.failure_reason.find("surplus") != std::string::npos);
}
