#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "depotplan/scenario.hpp"

namespace depotplan {

// Catalog entries loosely following the published bus/charger datasheets,
// with capital costs annualized over vehicle lifetime.
inline VehicleType bev_short_type() {
    return {"bev_short", 225.0, 66667.0, 0.64, 2.0, FuelKind::Battery, 0.69, 0.85};
}
inline VehicleType bev_long_type() {
    return {"bev_long", 450.0, 68495.0, 0.64, 2.1, FuelKind::Battery, 0.69, 0.85};
}
inline VehicleType fcev_type() {
    return {"fcev", 700.0, 79092.0, 0.64, 2.2, FuelKind::Hydrogen, 0.42, 0.69};
}
inline VehicleType diesel_type() {
    // Nominal zero capital (existing fleet); a token cost keeps unused
    // counts from floating in degenerate optima.
    return {"diesel", 5013.0, 10.0, 0.88, 10.0, FuelKind::Diesel, 0.72, 0.01};
}

inline ChargerType level4_charger(std::size_t num_vehicles,
                                  const std::vector<VehicleType>& vehicles) {
    ChargerType c{"level4", 2415.0, FuelKind::Battery, std::vector<double>(num_vehicles, 0.0)};
    for (std::size_t i = 0; i < vehicles.size(); ++i)
        if (vehicles[i].fuel == FuelKind::Battery) c.power_kw_by_vehicle[i] = 150.0;
    return c;
}
inline ChargerType h2_dispenser(std::size_t num_vehicles,
                                const std::vector<VehicleType>& vehicles) {
    ChargerType c{"h2_dispenser", 2321.0, FuelKind::Hydrogen,
                  std::vector<double>(num_vehicles, 0.0)};
    for (std::size_t i = 0; i < vehicles.size(); ++i)
        if (vehicles[i].fuel == FuelKind::Hydrogen) c.power_kw_by_vehicle[i] = 7000.0;
    return c;
}
inline ChargerType diesel_dispenser(std::size_t num_vehicles,
                                    const std::vector<VehicleType>& vehicles) {
    ChargerType c{"diesel_dispenser", 1.0, FuelKind::Diesel,
                  std::vector<double>(num_vehicles, 0.0)};
    for (std::size_t i = 0; i < vehicles.size(); ++i)
        if (vehicles[i].fuel == FuelKind::Diesel) c.power_kw_by_vehicle[i] = 72000.0;
    return c;
}

struct SyntheticOptions {
    std::uint64_t seed = 1;
    int num_days = 1;
    int intervals_per_day = 24;
    double mean_blocks_per_day = 5.0;
    int max_blocks_per_day = 8;
    double min_duration_h = 1.0;
    double max_duration_h = 5.0;
    double min_distance_km = 20.0;
    double max_distance_km = 100.0;
    bool include_bev_long = true;
    bool include_fcev = false;
    bool include_diesel = false;
    double solar_cap_max_kw = 0.0;
    double delivered_h2_price = 8.0;
    double diesel_price_per_gal = 4.0;
};

inline constexpr double kDieselKwhPerGallon = 40.7;

// Builds a complete desk-scale scenario: catalogs, flat TOU-ish tariff,
// one demand-charge group, neutral temperatures, and the hydrogen station
// with a mid-day delivery window.
inline Scenario make_synthetic_scenario(const SyntheticOptions& opt) {
    std::mt19937_64 rng(opt.seed);
    Scenario sc;
    sc.name = "synthetic-" + std::to_string(opt.seed);
    sc.grid = make_grid(opt.num_days, opt.intervals_per_day);
    const int S = opt.num_days;
    const int T = opt.intervals_per_day;

    sc.vehicles.push_back(bev_short_type());
    if (opt.include_bev_long) sc.vehicles.push_back(bev_long_type());
    if (opt.include_fcev) sc.vehicles.push_back(fcev_type());
    if (opt.include_diesel) sc.vehicles.push_back(diesel_type());

    sc.chargers.push_back(level4_charger(sc.vehicles.size(), sc.vehicles));
    if (opt.include_fcev) sc.chargers.push_back(h2_dispenser(sc.vehicles.size(), sc.vehicles));
    if (opt.include_diesel)
        sc.chargers.push_back(diesel_dispenser(sc.vehicles.size(), sc.vehicles));

    // Poisson arrivals across the operating window, uniform durations and
    // distances; distances stay within the short-range BEV's reach so every
    // block has at least one feasible type by construction.
    std::poisson_distribution<int> n_blocks(opt.mean_blocks_per_day);
    std::uniform_real_distribution<double> start(0.5, 17.0);
    std::uniform_real_distribution<double> duration(opt.min_duration_h, opt.max_duration_h);
    std::uniform_real_distribution<double> distance(opt.min_distance_km, opt.max_distance_km);
    for (int s = 0; s < S; ++s) {
        int n = std::clamp(n_blocks(rng), 1, opt.max_blocks_per_day);
        for (int b = 0; b < n; ++b) {
            TripBlock block;
            block.id = "d" + std::to_string(s) + "b" + std::to_string(b);
            block.day = s;
            block.start_time = start(rng);
            block.end_time = std::min(block.start_time + duration(rng), 23.5);
            block.distance_km = distance(rng);
            sc.blocks.push_back(block);
        }
    }

    sc.temperature_f = Series(S, T, 65.0);

    // Simple TOU shape: a flat price with an evening bump.
    sc.costs.grid_price = Series(S, T, 0.11);
    for (int s = 0; s < S; ++s)
        for (int t = 1; t <= T; ++t) {
            double hour = (t - 0.5) * sc.grid.interval_hours;  // hours past 3 AM
            if (hour >= 14.0 && hour <= 19.0) sc.costs.grid_price.set(s, t, 0.19);
        }
    sc.costs.diesel_price_per_kwh =
        Series(S, T, opt.diesel_price_per_gal / kDieselKwhPerGallon);
    sc.costs.delivered_h2_price = Series(S, T, opt.delivered_h2_price);
    sc.costs.peak_rate = {17.92};

    sc.der.solar_cap_factor = Series(S, T, 0.0);
    for (int s = 0; s < S; ++s)
        for (int t = 1; t <= T; ++t) {
            double hour = (t - 0.5) * sc.grid.interval_hours + 3.0;  // clock time
            if (hour >= 7.0 && hour <= 19.0) {
                double x = (hour - 13.0) / 6.0;
                sc.der.solar_cap_factor.set(s, t, std::max(0.0, 0.85 * (1.0 - x * x)));
            }
        }
    sc.der.solar_cap_max_kw = opt.solar_cap_max_kw;
    sc.der.big_m_kw = 5000.0;
    sc.der.peak_groups = {std::vector<int>{}};
    for (int s = 0; s < S; ++s) sc.der.peak_groups[0].push_back(s);

    // Delivery window 08:00-18:00 local time.
    for (int t = 1; t <= T; ++t) {
        double clock = std::fmod((t - 1) * sc.grid.interval_hours + sc.grid.reference_time, 24.0);
        if (clock >= 8.0 && clock < 18.0) sc.h2.delivery_intervals.push_back(t);
    }

    sc.emissions.grid_factor_kg_per_kwh = Series(S, T, 0.35);
    sc.emissions.diesel_factor_kg_per_kwh = 0.25;
    sc.emissions.delivered_h2_factor_kg_per_kg = 0.0;

    sc.solve.mip_gap = 0.005;
    return sc;
}

// Tiny instances for the individual-vehicle oracle comparisons.
inline Scenario make_oracle_instance(std::uint64_t seed) {
    SyntheticOptions opt;
    opt.seed = seed;
    opt.intervals_per_day = 12;
    opt.mean_blocks_per_day = 2.0;
    opt.max_blocks_per_day = 3;
    opt.include_bev_long = seed % 2 == 0;
    opt.max_distance_km = 90.0;
    auto sc = make_synthetic_scenario(opt);
    sc.name = "oracle-" + std::to_string(seed);
    return sc;
}

}  // namespace depotplan
