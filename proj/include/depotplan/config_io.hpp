#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "depotplan/builder.hpp"
#include "depotplan/scenario.hpp"

namespace depotplan {

namespace config_detail {

using nlohmann::json;

inline json require(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key))
        throw ConfigError(where + ": missing required key \"" + key + "\"");
    return j.at(key);
}

// A series value may be a scalar (flat), a length-T array (same profile
// every day), or an S x T array.
inline Series parse_series(const json& j, int S, int T, const std::string& where) {
    if (j.is_number()) return Series(S, T, j.get<double>());
    if (!j.is_array()) throw ConfigError(where + ": expected a number or array");
    if (!j.empty() && j[0].is_array()) {
        auto data = j.get<std::vector<std::vector<double>>>();
        Series series(std::move(data));
        series.require_shape(S, T, where);
        return series;
    }
    auto profile = j.get<std::vector<double>>();
    if (static_cast<int>(profile.size()) != T)
        throw ConfigError(where + ": daily profile has " + std::to_string(profile.size()) +
                          " entries, expected " + std::to_string(T));
    std::vector<std::vector<double>> data(S, profile);
    return Series(std::move(data));
}

inline FuelKind parse_fuel(const std::string& s, const std::string& where) {
    if (s == "battery") return FuelKind::Battery;
    if (s == "hydrogen") return FuelKind::Hydrogen;
    if (s == "diesel") return FuelKind::Diesel;
    throw ConfigError(where + ": unknown fuel \"" + s + "\"");
}

// "HH:MM" on a 24h clock.
inline double parse_clock(const std::string& s, const std::string& where) {
    int h = 0, m = 0;
    char colon = 0;
    std::istringstream is(s);
    if (!(is >> h >> colon >> m) || colon != ':' || h < 0 || h > 24 || m < 0 || m >= 60)
        throw ConfigError(where + ": bad clock time \"" + s + "\", expected HH:MM");
    return h + m / 60.0;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) {
        auto b = field.find_first_not_of(" \t\r");
        auto e = field.find_last_not_of(" \t\r");
        fields.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
    }
    return fields;
}

}  // namespace config_detail

// Parses a blocks table with header block_id,day_index,start_hhmm,end_hhmm,
// distance_km. Clock times are shifted into grid-relative hours.
inline std::vector<TripBlock> load_blocks_csv(std::istream& is, const TimeGrid& grid,
                                              const std::string& where = "blocks csv") {
    using namespace config_detail;
    std::string line;
    if (!std::getline(is, line)) throw ConfigError(where + ": empty file");
    auto header = split_csv_line(line);
    const std::vector<std::string> expected{"block_id", "day_index", "start_hhmm", "end_hhmm",
                                            "distance_km"};
    if (header != expected)
        throw ConfigError(where + ": header must be block_id,day_index,start_hhmm,end_hhmm,"
                          "distance_km");
    std::vector<TripBlock> blocks;
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto f = split_csv_line(line);
        std::string ctx = where + " line " + std::to_string(lineno);
        if (f.size() != 5) throw ConfigError(ctx + ": expected 5 fields, got " +
                                             std::to_string(f.size()));
        TripBlock b;
        b.id = f[0];
        try {
            b.day = std::stoi(f[1]);
            b.distance_km = std::stod(f[4]);
        } catch (const std::exception&) {
            throw ConfigError(ctx + ": non-numeric day_index or distance_km");
        }
        b.start_time = clock_to_grid_hours(parse_clock(f[2], ctx), grid, false);
        b.end_time = clock_to_grid_hours(parse_clock(f[3], ctx), grid, true);
        blocks.push_back(std::move(b));
    }
    return blocks;
}

inline Scenario load_scenario_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
    using namespace config_detail;
    Scenario sc;
    sc.name = j.value("name", "scenario");

    auto g = require(j, "grid", "config");
    sc.grid.num_days = require(g, "num_days", "grid");
    sc.grid.intervals_per_day = require(g, "intervals_per_day", "grid");
    sc.grid.interval_hours = 24.0 / sc.grid.intervals_per_day;
    sc.grid.reference_time = g.value("reference_time", 3.0);
    if (g.contains("day_weights"))
        sc.grid.day_weights = g.at("day_weights").get<std::vector<double>>();
    else
        sc.grid.day_weights.assign(sc.grid.num_days, 365.0 / sc.grid.num_days);
    sc.grid.validate();
    const int S = sc.grid.num_days;
    const int T = sc.grid.intervals_per_day;

    if (j.contains("blocks_csv")) {
        auto path = base_dir / j.at("blocks_csv").get<std::string>();
        std::ifstream is(path);
        if (!is) throw ConfigError("cannot open blocks_csv at " + path.string());
        sc.blocks = load_blocks_csv(is, sc.grid, path.string());
    } else {
        for (const auto& bj : require(j, "blocks", "config")) {
            TripBlock b;
            b.id = require(bj, "id", "block");
            b.day = bj.value("day", 0);
            std::string ctx = "block " + b.id;
            b.start_time = clock_to_grid_hours(
                parse_clock(require(bj, "start_hhmm", ctx), ctx), sc.grid, false);
            b.end_time = clock_to_grid_hours(parse_clock(require(bj, "end_hhmm", ctx), ctx),
                                             sc.grid, true);
            b.distance_km = require(bj, "distance_km", ctx);
            sc.blocks.push_back(std::move(b));
        }
    }

    for (const auto& vj : require(j, "vehicles", "config")) {
        VehicleType v;
        v.id = require(vj, "id", "vehicle");
        std::string ctx = "vehicle " + v.id;
        v.energy_capacity_kwh = require(vj, "energy_capacity_kwh", ctx);
        v.capital_cost_per_year = require(vj, "capital_cost_per_year", ctx);
        v.maintenance_cost_per_km = vj.value("maintenance_cost_per_km", 0.0);
        v.kwh_per_km = require(vj, "kwh_per_km", ctx);
        v.fuel = parse_fuel(require(vj, "fuel", ctx), ctx);
        v.hot_coeff_pct_per_degF = vj.value("hot_coeff_pct_per_degF", 0.0);
        v.cold_coeff_pct_per_degF = vj.value("cold_coeff_pct_per_degF", 0.0);
        sc.vehicles.push_back(std::move(v));
    }
    for (const auto& cj : require(j, "chargers", "config")) {
        ChargerType c;
        c.id = require(cj, "id", "charger");
        std::string ctx = "charger " + c.id;
        c.capital_cost_per_year = require(cj, "capital_cost_per_year", ctx);
        c.fuel = parse_fuel(require(cj, "fuel", ctx), ctx);
        c.power_kw_by_vehicle =
            require(cj, "power_kw_by_vehicle", ctx).get<std::vector<double>>();
        sc.chargers.push_back(std::move(c));
    }

    sc.temperature_f = parse_series(j.value("temperature_f", nlohmann::json(65.0)), S, T,
                                    "temperature_f");

    const auto d = j.value("der", nlohmann::json::object());
    sc.der.solar_cap_factor =
        parse_series(d.value("solar_cap_factor", nlohmann::json(0.0)), S, T, "solar_cap_factor");
    sc.der.solar_cap_max_kw = d.value("solar_cap_max_kw", 0.0);
    sc.der.charge_eff = d.value("charge_eff", 0.9);
    sc.der.discharge_eff = d.value("discharge_eff", 0.9);
    sc.der.soc_lower_frac = d.value("soc_lower_frac", 0.2);
    sc.der.soc_upper_frac = d.value("soc_upper_frac", 0.9);
    sc.der.grid_cap_kw = d.value("grid_cap_kw", kInf);
    sc.der.curtail_cap_kw = d.value("curtail_cap_kw", kInf);
    sc.der.big_m_kw = d.value("big_m_kw", 10000.0);
    sc.der.battery_power_max_kw = d.value("battery_power_max_kw", kInf);
    if (d.contains("peak_groups"))
        sc.der.peak_groups = d.at("peak_groups").get<std::vector<std::vector<int>>>();
    else {
        sc.der.peak_groups.resize(1);
        for (int s = 0; s < S; ++s) sc.der.peak_groups[0].push_back(s);
    }

    const auto h = j.value("h2", nlohmann::json::object());
    sc.h2.elz_kwh_per_kg = h.value("elz_kwh_per_kg", 41.97);
    sc.h2.lcpr_kwh_per_kg = h.value("lcpr_kwh_per_kg", 0.15);
    sc.h2.cpr_kwh_per_kg = h.value("cpr_kwh_per_kg", 3.0);
    sc.h2.cl_kwh_per_kg = h.value("cl_kwh_per_kg", 0.2);
    sc.h2.tank_lower_frac = h.value("tank_lower_frac", 0.057);
    sc.h2.buffer_lower_frac = h.value("buffer_lower_frac", 0.029);
    if (h.contains("delivery_intervals"))
        sc.h2.delivery_intervals = h.at("delivery_intervals").get<std::vector<int>>();
    sc.h2.delivery_cap_kg = h.value("delivery_cap_kg", kInf);
    sc.h2.energy_content_kwh_per_kg = h.value("energy_content_kwh_per_kg", 33.3);

    const auto c = j.value("costs", nlohmann::json::object());
    if (c.contains("peak_rate"))
        sc.costs.peak_rate = c.at("peak_rate").get<std::vector<double>>();
    else
        sc.costs.peak_rate.assign(sc.der.peak_groups.size(), 0.0);
    sc.costs.grid_price = parse_series(c.value("grid_price", nlohmann::json(0.0)), S, T,
                                       "grid_price");
    sc.costs.diesel_price_per_kwh =
        parse_series(c.value("diesel_price_per_kwh", nlohmann::json(0.0)), S, T,
                     "diesel_price_per_kwh");
    sc.costs.delivered_h2_price =
        parse_series(c.value("delivered_h2_price", nlohmann::json(0.0)), S, T,
                     "delivered_h2_price");
    sc.costs.solar_capital_per_kw = c.value("solar_capital_per_kw", 152.0);
    sc.costs.battery_capital_per_kwh = c.value("battery_capital_per_kwh", 27.4);
    sc.costs.tank_capital_per_kg = c.value("tank_capital_per_kg", 20.9);
    sc.costs.buffer_capital_per_kg = c.value("buffer_capital_per_kg", 33.3);
    sc.costs.elz_capital_per_kg_h = c.value("elz_capital_per_kg_h", 80.0);
    sc.costs.lcpr_capital_per_kg_h = c.value("lcpr_capital_per_kg_h", 15.4);
    sc.costs.cpr_capital_per_kg_h = c.value("cpr_capital_per_kg_h", 308.3);
    sc.costs.cl_capital_per_kg_h = c.value("cl_capital_per_kg_h", 94.1);
    sc.costs.grid_upgrade_cost_per_kw = c.value("grid_upgrade_cost_per_kw", 500.0);
    sc.costs.grid_upgrade_base_kw = c.value("grid_upgrade_base_kw", 1000.0);

    const auto e = j.value("emissions", nlohmann::json::object());
    sc.emissions.grid_factor_kg_per_kwh =
        parse_series(e.value("grid_factor_kg_per_kwh", nlohmann::json(0.0)), S, T,
                     "grid_factor_kg_per_kwh");
    sc.emissions.diesel_factor_kg_per_kwh = e.value("diesel_factor_kg_per_kwh", 0.25);
    sc.emissions.delivered_h2_factor_kg_per_kg = e.value("delivered_h2_factor_kg_per_kg", 0.0);
    if (e.contains("annual_cap_kg")) sc.emissions.annual_cap_kg = e.at("annual_cap_kg");

    std::string mode = j.value("mode", "surplus");
    if (mode == "surplus") sc.mode = DepartureEnergyMode::Surplus;
    else if (mode == "exact") sc.mode = DepartureEnergyMode::Exact;
    else throw ConfigError("mode must be \"surplus\" or \"exact\", got \"" + mode + "\"");
    sc.grid_upgrade_variant = j.value("grid_upgrade_variant", false);

    const auto sj = j.value("solve", nlohmann::json::object());
    sc.solve.mip_gap = sj.value("mip_gap", 0.005);
    sc.solve.time_limit_sec = sj.value("time_limit_sec", 600.0);
    return sc;
}

inline Scenario load_scenario(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file " + path);
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path + ": invalid JSON: " + e.what());
    }
    return load_scenario_json(j, std::filesystem::path(path).parent_path());
}

// Non-fatal checks beyond what validate_scenario_shape enforces.
inline std::vector<std::string> lint_scenario(const Scenario& sc) {
    std::vector<std::string> warnings;
    const int S = sc.grid.num_days;
    const int T = sc.grid.intervals_per_day;
    bool solar_flagged = false, price_flagged = false;
    for (int s = 0; s < S; ++s) {
        for (int t = 1; t <= T; ++t) {
            if (!solar_flagged && sc.der.solar_cap_factor.at(s, t) > 1.0 + 1e-9) {
                warnings.push_back("solar capacity factor exceeds 1 at day " + std::to_string(s) +
                                   " interval " + std::to_string(t));
                solar_flagged = true;
            }
            if (!price_flagged &&
                (sc.costs.grid_price.at(s, t) < 0 || sc.costs.diesel_price_per_kwh.at(s, t) < 0 ||
                 sc.costs.delivered_h2_price.at(s, t) < 0)) {
                warnings.push_back("negative energy price at day " + std::to_string(s) +
                                   " interval " + std::to_string(t));
                price_flagged = true;
            }
        }
    }
    bool has_fcev = false;
    for (const auto& v : sc.vehicles)
        if (v.fuel == FuelKind::Hydrogen) has_fcev = true;
    if (has_fcev && sc.h2.delivery_intervals.empty())
        warnings.push_back("FCEVs present but the hydrogen delivery window is empty; all "
                           "hydrogen must be electrolyzed on site");
    for (const auto& v : sc.vehicles)
        if (v.capital_cost_per_year == 0.0)
            warnings.push_back("vehicle " + v.id + " has zero capital cost; unused counts may "
                               "take arbitrary values");
    return warnings;
}

}  // namespace depotplan
