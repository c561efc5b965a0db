#pragma once

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "depotplan/errors.hpp"

namespace depotplan {

// Discrete representative-day grid. Interval indices are 1-based to match
// the convention used throughout the constraint formulation; an augmented
// index T_d+1 aliases index 1 for the cyclic conditions.
struct TimeGrid {
    int num_days = 1;             // S
    int intervals_per_day = 96;   // T_d
    double interval_hours = 0.25; // dT
    double reference_time = 3.0;  // clock hour of day the grid starts at
    std::vector<double> day_weights;  // days per year per representative day

    void validate() const {
        if (num_days < 1) throw ConfigError("TimeGrid: num_days must be >= 1");
        if (interval_hours <= 0) throw ConfigError("TimeGrid: interval_hours must be > 0");
        if (std::fabs(intervals_per_day * interval_hours - 24.0) > 1e-9)
            throw ConfigError("TimeGrid: intervals_per_day * interval_hours must equal 24");
        if (static_cast<int>(day_weights.size()) != num_days)
            throw ConfigError("TimeGrid: day_weights size must equal num_days");
    }

    double year_days() const {
        return std::accumulate(day_weights.begin(), day_weights.end(), 0.0);
    }
};

inline TimeGrid make_grid(int num_days, int intervals_per_day, double reference_time = 3.0,
                          double year_length = 365.0) {
    TimeGrid g;
    g.num_days = num_days;
    g.intervals_per_day = intervals_per_day;
    g.interval_hours = 24.0 / intervals_per_day;
    g.reference_time = reference_time;
    g.day_weights.assign(num_days, year_length / num_days);
    return g;
}

// One return-to-depot trip sequence. Times are continuous hours measured
// from the grid's reference time, so they lie in [0, 24].
struct TripBlock {
    std::string id;
    int day = 0;           // 0-based representative-day index
    double start_time = 0; // hours from reference
    double end_time = 0;
    double distance_km = 0;
};

struct DiscreteSpan {
    int t0 = 0;  // first active interval, 1-based
    int t1 = 0;  // last active interval, 1-based
};

// Conservative discretization: start rounded down, end rounded up, so the
// discrete span always contains the continuous one.
inline DiscreteSpan discretize_block(const TripBlock& block, const TimeGrid& grid) {
    grid.validate();
    if (block.start_time >= block.end_time)
        throw DegenerateBlock("block " + block.id + ": start_time must precede end_time");
    if (block.start_time < 0 || block.end_time > 24.0 + 1e-9)
        throw BlockOutOfDay("block " + block.id + ": times must lie within the representative day");
    DiscreteSpan span;
    span.t0 = static_cast<int>(std::floor(block.start_time / grid.interval_hours)) + 1;
    span.t1 = static_cast<int>(std::ceil(block.end_time / grid.interval_hours));
    if (span.t0 < 1 || span.t1 > grid.intervals_per_day)
        throw BlockOutOfDay("block " + block.id + ": discrete span escapes the day grid");
    if (span.t0 > span.t1)
        throw DegenerateBlock("block " + block.id + ": empty discrete span");
    return span;
}

// Sparse A/U/V indicator rows for a set of blocks. Each depart/arrive row
// has exactly one nonzero in 1..T_d; the augmented column T_d+1 mirrors
// column 1.
class TripMatrices {
public:
    TripMatrices(const std::vector<TripBlock>& blocks, const TimeGrid& grid)
        : intervals_per_day_(grid.intervals_per_day) {
        spans_.reserve(blocks.size());
        for (const auto& b : blocks) spans_.push_back(discretize_block(b, grid));
    }

    std::size_t num_blocks() const { return spans_.size(); }
    int intervals_per_day() const { return intervals_per_day_; }
    const DiscreteSpan& span(std::size_t k) const { return spans_.at(k); }

    // A_k(t), t in 1..T_d
    bool active(std::size_t k, int t) const {
        const auto& s = spans_.at(k);
        return s.t0 <= t && t <= s.t1;
    }

    // U_k(t), t in 1..T_d+1 with U(T_d+1) = U(1)
    bool depart(std::size_t k, int t) const {
        int u = spans_.at(k).t0;
        return t == u || (t == intervals_per_day_ + 1 && u == 1);
    }

    // V_k(t), t in 1..T_d+1 with V(T_d+1) = V(1); a block ending in the
    // last interval arrives at the augmented index (equivalently index 1).
    bool arrive(std::size_t k, int t) const {
        int v = spans_.at(k).t1 + 1;
        if (v == intervals_per_day_ + 1)
            return t == 1 || t == intervals_per_day_ + 1;
        return t == v || (t == intervals_per_day_ + 1 && v == 1);
    }

    // Row sums over the dynamics' index window t = 2..T_d+1, which touches
    // each block's single event exactly once thanks to the augmentation.
    int depart_row_sum(std::size_t k) const {
        int sum = 0;
        for (int t = 2; t <= intervals_per_day_ + 1; ++t) sum += depart(k, t) ? 1 : 0;
        return sum;
    }
    int arrive_row_sum(std::size_t k) const {
        int sum = 0;
        for (int t = 2; t <= intervals_per_day_ + 1; ++t) sum += arrive(k, t) ? 1 : 0;
        return sum;
    }
    int active_row_sum(std::size_t k) const {
        const auto& s = spans_.at(k);
        return s.t1 - s.t0 + 1;
    }

private:
    int intervals_per_day_;
    std::vector<DiscreteSpan> spans_;
};

inline TripMatrices build_trip_matrices(const std::vector<TripBlock>& blocks,
                                        const TimeGrid& grid) {
    return TripMatrices(blocks, grid);
}

// Shifts a local clock time (hours of day) into grid-relative hours.
// A time equal to the reference maps to 0 when used as a start and 24 when
// used as an end of a block.
inline double clock_to_grid_hours(double clock_hour, const TimeGrid& grid, bool is_end) {
    double shifted = std::fmod(clock_hour - grid.reference_time + 24.0, 24.0);
    if (is_end && shifted == 0.0) shifted = 24.0;
    return shifted;
}

}  // namespace depotplan
