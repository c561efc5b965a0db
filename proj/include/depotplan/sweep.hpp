#pragma once

#include <memory>
#include <string>
#include <vector>

#include "depotplan/builder.hpp"
#include "depotplan/report.hpp"
#include "depotplan/scenario.hpp"

namespace depotplan {

enum class SweepParameter { CarbonCapKg, DeliveredH2Price, GridCapKw };

inline SweepParameter parse_sweep_parameter(const std::string& s) {
    if (s == "carbon_cap_kg") return SweepParameter::CarbonCapKg;
    if (s == "delivered_h2_price") return SweepParameter::DeliveredH2Price;
    if (s == "grid_cap_kw") return SweepParameter::GridCapKw;
    throw ConfigError("unknown sweep parameter \"" + s +
                      "\"; expected carbon_cap_kg, delivered_h2_price, or grid_cap_kw");
}

inline std::string to_string(SweepParameter p) {
    switch (p) {
        case SweepParameter::CarbonCapKg: return "carbon_cap_kg";
        case SweepParameter::DeliveredH2Price: return "delivered_h2_price";
        case SweepParameter::GridCapKw: return "grid_cap_kw";
    }
    return "?";
}

inline Scenario apply_sweep_value(Scenario sc, SweepParameter p, double v) {
    switch (p) {
        case SweepParameter::CarbonCapKg:
            sc.emissions.annual_cap_kg = v;
            break;
        case SweepParameter::DeliveredH2Price:
            sc.costs.delivered_h2_price =
                Series(sc.grid.num_days, sc.grid.intervals_per_day, v);
            break;
        case SweepParameter::GridCapKw:
            sc.der.grid_cap_kw = v;
            break;
    }
    return sc;
}

struct SweepPoint {
    double value = 0;
    bool ok = false;
    std::string error;
    SolutionReport report;
};

struct SweepResult {
    SweepParameter parameter = SweepParameter::CarbonCapKg;
    std::vector<SweepPoint> points;
    std::vector<std::string> diagnostics;
};

namespace sweep_detail {

// Primal objectives of gap-limited solves can wobble; only flag an
// ordering violation the dual bounds cannot explain.
inline void check_monotone_cost(SweepResult& out, bool tighter_is_later) {
    for (std::size_t a = 0; a + 1 < out.points.size(); ++a) {
        const auto& loose = tighter_is_later ? out.points[a] : out.points[a + 1];
        const auto& tight = tighter_is_later ? out.points[a + 1] : out.points[a];
        if (!loose.ok || !tight.ok) continue;
        double tol = 1e-6 * (1.0 + std::fabs(loose.report.objective));
        if (tight.report.objective + tol < loose.report.dual_bound)
            out.diagnostics.push_back(
                "objective at " + to_string(out.parameter) + "=" +
                std::to_string(tight.value) + " undercuts the dual bound of the looser point " +
                std::to_string(loose.value) + "; check solver tolerances");
    }
}

}  // namespace sweep_detail

// Solves the scenario once per parameter value. Points are batched to the
// backend in groups of `jobs`; one failed point is recorded and does not
// abort the rest.
inline SweepResult run_sweep(const Scenario& base, SweepParameter param,
                             const std::vector<double>& values, int jobs = 0) {
    SweepResult out;
    out.parameter = param;
    if (jobs <= 0) jobs = static_cast<int>(values.size());

    for (std::size_t chunk = 0; chunk < values.size(); chunk += jobs) {
        std::size_t end = std::min(values.size(), chunk + jobs);
        std::vector<Scenario> scenarios;
        std::vector<std::unique_ptr<ClusterModel>> models;
        std::vector<const milp::ModelInstance*> instances;
        std::vector<SweepPoint> points;
        for (std::size_t p = chunk; p < end; ++p) {
            SweepPoint point;
            point.value = values[p];
            scenarios.push_back(apply_sweep_value(base, param, values[p]));
            try {
                models.push_back(build_cluster_model(scenarios.back()));
                instances.push_back(&models.back()->model);
            } catch (const Error& e) {
                models.push_back(nullptr);
                point.error = e.what();
            }
            points.push_back(std::move(point));
        }
        std::vector<milp::SolveResult> results;
        if (!instances.empty()) {
            try {
                results = milp::solve_batch(instances, base.solve);
            } catch (const Error& e) {
                for (auto& point : points)
                    if (point.error.empty()) point.error = e.what();
            }
        }
        std::size_t r = 0;
        for (std::size_t p = 0; p < points.size(); ++p) {
            auto& point = points[p];
            if (!point.error.empty() || !models[p]) {
                out.points.push_back(std::move(point));
                continue;
            }
            if (r >= results.size()) {
                point.error = "backend returned no result";
                out.points.push_back(std::move(point));
                continue;
            }
            const auto& res = results[r++];
            point.report = extract_report(scenarios[p], *models[p], res);
            point.ok = point.report.feasible();
            if (!point.ok && point.error.empty())
                point.error = "solve ended with status " + milp::to_string(res.status);
            out.points.push_back(std::move(point));
        }
    }

    // Tightening a cap or raising a price can only increase optimal cost;
    // values are conventionally passed loosest first for caps and
    // cheapest-last for prices, so check both orientations generically.
    if (param == SweepParameter::CarbonCapKg || param == SweepParameter::GridCapKw)
        sweep_detail::check_monotone_cost(out, /*tighter_is_later=*/true);
    return out;
}

inline nlohmann::json to_json(const SweepResult& sr) {
    nlohmann::json points = nlohmann::json::array();
    for (const auto& p : sr.points) {
        nlohmann::json pj;
        pj["value"] = p.value;
        pj["ok"] = p.ok;
        if (!p.error.empty()) pj["error"] = p.error;
        if (p.ok || !p.report.values.empty()) pj["report"] = to_json(p.report);
        points.push_back(std::move(pj));
    }
    return {{"parameter", to_string(sr.parameter)},
            {"points", points},
            {"diagnostics", sr.diagnostics}};
}

}  // namespace depotplan
