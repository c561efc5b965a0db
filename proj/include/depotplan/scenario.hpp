#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "depotplan/errors.hpp"
#include "depotplan/milp/solve.hpp"
#include "depotplan/time_grid.hpp"

namespace depotplan {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class FuelKind { Battery, Hydrogen, Diesel };

inline std::string to_string(FuelKind f) {
    switch (f) {
        case FuelKind::Battery: return "battery";
        case FuelKind::Hydrogen: return "hydrogen";
        case FuelKind::Diesel: return "diesel";
    }
    return "?";
}

// Per-(representative day, interval) parameter table. Interval access is
// 1-based to match the constraint indexing.
class Series {
public:
    Series() = default;
    Series(int num_days, int intervals_per_day, double value)
        : data_(num_days, std::vector<double>(intervals_per_day, value)) {}
    explicit Series(std::vector<std::vector<double>> data) : data_(std::move(data)) {}

    double at(int s, int t) const { return data_.at(s).at(t - 1); }
    void set(int s, int t, double v) { data_.at(s).at(t - 1) = v; }
    bool empty() const { return data_.empty(); }
    int num_days() const { return static_cast<int>(data_.size()); }
    int intervals_per_day() const {
        return data_.empty() ? 0 : static_cast<int>(data_[0].size());
    }
    const std::vector<std::vector<double>>& data() const { return data_; }

    void require_shape(int num_days, int intervals_per_day, const std::string& name) const {
        if (this->num_days() != num_days || this->intervals_per_day() != intervals_per_day)
            throw ConfigError("series " + name + " does not match the time grid shape");
    }

private:
    std::vector<std::vector<double>> data_;
};

struct VehicleType {
    std::string id;
    double energy_capacity_kwh = 0;   // R_i
    double capital_cost_per_year = 0; // c^v_i, annualized
    double maintenance_cost_per_km = 0;
    double kwh_per_km = 0;            // nominal driving efficiency
    FuelKind fuel = FuelKind::Battery;
    double hot_coeff_pct_per_degF = 0;
    double cold_coeff_pct_per_degF = 0;
};

struct ChargerType {
    std::string id;
    double capital_cost_per_year = 0; // c^c_j
    FuelKind fuel = FuelKind::Battery;
    std::vector<double> power_kw_by_vehicle;  // P_ij, indexed like Scenario::vehicles
};

// Which departure-energy bound set the fleet constraints use: Exact pins
// d_ki to the trip need, Surplus lets a dispatched vehicle carry up to its
// capacity.
enum class DepartureEnergyMode { Exact, Surplus };

struct DerParameters {
    Series solar_cap_factor;          // a^pv in [0,1]
    double solar_cap_max_kw = 0;
    double charge_eff = 0.9;
    double discharge_eff = 0.9;
    double soc_lower_frac = 0.2;
    double soc_upper_frac = 0.9;
    double grid_cap_kw = kInf;
    double curtail_cap_kw = kInf;
    double big_m_kw = 10000.0;
    double battery_power_max_kw = kInf;
    // Partition of representative days into demand-charge season groups;
    // rates live in CostBook::peak_rate aligned by group index.
    std::vector<std::vector<int>> peak_groups;
};

struct H2Parameters {
    double elz_kwh_per_kg = 41.97;
    double lcpr_kwh_per_kg = 0.15;
    double cpr_kwh_per_kg = 3.0;
    double cl_kwh_per_kg = 0.2;
    double tank_lower_frac = 0.057;
    double buffer_lower_frac = 0.029;
    std::vector<int> delivery_intervals;  // 1-based interval indices
    double delivery_cap_kg = kInf;
    double energy_content_kwh_per_kg = 33.3;  // lower heating value
};

struct CostBook {
    std::vector<double> peak_rate;       // c^pk_l, $/kW per season group
    Series grid_price;                   // c^g, $/kWh
    Series diesel_price_per_kwh;         // c^df, $/kWh of diesel energy
    Series delivered_h2_price;           // c^del, $/kg
    double solar_capital_per_kw = 152.0;
    double battery_capital_per_kwh = 27.4;
    double tank_capital_per_kg = 20.9;
    double buffer_capital_per_kg = 33.3;
    double elz_capital_per_kg_h = 80.0;  // rate applied to p/C throughput (kg/h)
    double lcpr_capital_per_kg_h = 15.4;
    double cpr_capital_per_kg_h = 308.3;
    double cl_capital_per_kg_h = 94.1;
    double grid_upgrade_cost_per_kw = 500.0;
    double grid_upgrade_base_kw = 1000.0;
};

struct EmissionBook {
    Series grid_factor_kg_per_kwh;          // e^g
    double diesel_factor_kg_per_kwh = 0.25; // e^df
    double delivered_h2_factor_kg_per_kg = 0.0;
    std::optional<double> annual_cap_kg;    // absent means no cap
};

struct Scenario {
    std::string name = "scenario";
    TimeGrid grid;
    std::vector<TripBlock> blocks;
    std::vector<VehicleType> vehicles;
    std::vector<ChargerType> chargers;
    Series temperature_f;  // ambient temperature per (s,t)
    DerParameters der;
    H2Parameters h2;
    CostBook costs;
    EmissionBook emissions;
    DepartureEnergyMode mode = DepartureEnergyMode::Surplus;
    bool grid_upgrade_variant = false;
    milp::SolveConfig solve;
};

// Blocks of one representative day, as indices into Scenario::blocks.
inline std::vector<std::vector<std::size_t>> blocks_by_day(const std::vector<TripBlock>& blocks,
                                                           int num_days) {
    std::vector<std::vector<std::size_t>> by_day(num_days);
    for (std::size_t k = 0; k < blocks.size(); ++k) {
        int s = blocks[k].day;
        if (s < 0 || s >= num_days)
            throw ConfigError("block " + blocks[k].id + " references unknown day index " +
                              std::to_string(s));
        by_day[s].push_back(k);
    }
    return by_day;
}

}  // namespace depotplan
