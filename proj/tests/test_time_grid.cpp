#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "depotplan/time_grid.hpp"

using namespace depotplan;

TEST_CASE("discretize rounds start down and end up") {
    auto grid = make_grid(1, 96);
    TripBlock b{"b1", 0, 10.0 / 60.0, 40.0 / 60.0, 5.0};
    auto span = discretize_block(b, grid);
    CHECK(span.t0 == 1);
    CHECK(span.t1 == 3);
}

TEST_CASE("discretize boundary-aligned times") {
    auto grid = make_grid(1, 96);
    TripBlock b{"b", 0, 0.25, 0.5, 1.0};
    auto span = discretize_block(b, grid);
    CHECK(span.t0 == 2);
    CHECK(span.t1 == 2);
}

TEST_CASE("full-day block spans the whole grid") {
    auto grid = make_grid(1, 96);
    TripBlock b{"b", 0, 0.0, 24.0, 100.0};
    auto span = discretize_block(b, grid);
    CHECK(span.t0 == 1);
    CHECK(span.t1 == 96);
}

TEST_CASE("out-of-day and degenerate blocks are rejected") {
    auto grid = make_grid(1, 96);
    CHECK_THROWS_AS(discretize_block({"x", 0, -1.0, 2.0, 1.0}, grid), BlockOutOfDay);
    CHECK_THROWS_AS(discretize_block({"x", 0, 1.0, 25.0, 1.0}, grid), BlockOutOfDay);
    CHECK_THROWS_AS(discretize_block({"x", 0, 2.0, 1.0, 1.0}, grid), DegenerateBlock);
}

TEST_CASE("trip matrices: single block rows") {
    auto grid = make_grid(1, 4);
    std::vector<TripBlock> blocks{{"b", 0, 0.5, 16.0, 10.0}};  // t0=1, t1=3 with dT=6h
    auto m = build_trip_matrices(blocks, grid);
    CHECK(m.span(0).t0 == 1);
    CHECK(m.span(0).t1 == 3);
    CHECK(m.active(0, 1));
    CHECK(m.active(0, 2));
    CHECK(m.active(0, 3));
    CHECK_FALSE(m.active(0, 4));
    CHECK(m.depart(0, 1));
    CHECK(m.arrive(0, 4));
    CHECK(m.depart_row_sum(0) == 1);
    CHECK(m.arrive_row_sum(0) == 1);
    CHECK(m.active_row_sum(0) == 3);
}

TEST_CASE("trip matrices: wraparound augmentation for a block ending in the last interval") {
    auto grid = make_grid(1, 4);
    std::vector<TripBlock> blocks{{"b", 0, 7.0, 24.0, 10.0}};  // t0=2, t1=4
    auto m = build_trip_matrices(blocks, grid);
    CHECK(m.span(0).t1 == 4);
    CHECK(m.arrive(0, 5));
    CHECK(m.arrive(0, 1));  // V(T_d+1) = V(1)
    CHECK(m.arrive_row_sum(0) == 1);
}

TEST_CASE("trip matrices: overlapping blocks stay independent") {
    auto grid = make_grid(1, 8);
    // dT = 3h. Block A covers intervals 1..3, block B covers 2..3.
    std::vector<TripBlock> blocks{{"a", 0, 0.0, 9.0, 10.0}, {"b", 0, 3.5, 8.0, 5.0}};
    auto m = build_trip_matrices(blocks, grid);
    CHECK(m.active_row_sum(0) == 3);
    CHECK(m.active_row_sum(1) == 2);
    CHECK(m.active(0, 2));
    CHECK(m.active(1, 2));
    CHECK_FALSE(m.active(1, 1));
}

TEST_CASE("property: discrete span contains the continuous interval") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.0, 24.0);
    for (int trial = 0; trial < 200; ++trial) {
        int T = std::vector<int>{24, 48, 96}[trial % 3];
        auto grid = make_grid(1, T);
        double a = u(rng), b = u(rng);
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        TripBlock block{"r", 0, a, b, 1.0};
        auto span = discretize_block(block, grid);
        double lo = (span.t0 - 1) * grid.interval_hours;
        double hi = span.t1 * grid.interval_hours;
        CHECK(lo <= a + 1e-12);
        CHECK(hi >= b - 1e-12);
    }
}

TEST_CASE("property: refining the grid never lengthens the discrete span") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0.0, 24.0);
    for (int trial = 0; trial < 200; ++trial) {
        double a = u(rng), b = u(rng);
        if (a >= b) continue;
        TripBlock block{"r", 0, a, b, 1.0};
        auto coarse = make_grid(1, 24);
        for (int factor : {2, 4}) {
            auto fine = make_grid(1, 24 * factor);
            auto cs = discretize_block(block, coarse);
            auto fs = discretize_block(block, fine);
            double coarse_hours = (cs.t1 - cs.t0 + 1) * coarse.interval_hours;
            double fine_hours = (fs.t1 - fs.t0 + 1) * fine.interval_hours;
            CHECK(fine_hours <= coarse_hours + 1e-12);
        }
    }
}

TEST_CASE("clock times shift by the reference and respect the day boundary") {
    auto grid = make_grid(1, 96, 3.0);
    CHECK(clock_to_grid_hours(3.0, grid, false) == 0.0);
    CHECK(clock_to_grid_hours(3.0, grid, true) == 24.0);
    CHECK(clock_to_grid_hours(2.0, grid, false) == Catch::Approx(23.0));
    CHECK(clock_to_grid_hours(4.5, grid, false) == Catch::Approx(1.5));
}

TEST_CASE("grid invariants are validated") {
    TimeGrid g;
    g.num_days = 1;
    g.intervals_per_day = 96;
    g.interval_hours = 0.3;  // 96 * 0.3 != 24
    g.day_weights = {365.0};
    CHECK_THROWS_AS(g.validate(), ConfigError);
    CHECK_NOTHROW(make_grid(8, 96).validate());
    CHECK(make_grid(8, 96).year_days() == Catch::Approx(365.0));
}
