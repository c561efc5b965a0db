#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "depotplan/errors.hpp"
#include "depotplan/milp/audit.hpp"
#include "depotplan/milp/model.hpp"

namespace depotplan::milp {

enum class SolveStatus { Optimal, GapFeasible, Infeasible, Unbounded, TimeLimit, Error };

inline std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::GapFeasible: return "gap-feasible";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::Unbounded: return "unbounded";
        case SolveStatus::TimeLimit: return "time-limit";
        case SolveStatus::Error: return "error";
    }
    return "error";
}

struct SolveConfig {
    double mip_gap = 0.005;  // default per the reference experiments
    double time_limit_sec = 600.0;
    double integrality_tol = 1e-6;
    double feasibility_tol = 1e-6;
    int threads = 1;
};

struct SolveResult {
    SolveStatus status = SolveStatus::Error;
    double objective = std::numeric_limits<double>::quiet_NaN();
    double dual_bound = std::numeric_limits<double>::quiet_NaN();
    double gap = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> x;
    std::string message;
    ResidualAudit audit;
    bool audit_ok = false;

    bool has_solution() const {
        return status == SolveStatus::Optimal || status == SolveStatus::GapFeasible ||
               status == SolveStatus::TimeLimit;
    }
};

namespace detail {

inline std::string backend_script_path() {
    if (const char* env = std::getenv("DEPOTPLAN_BACKEND")) return env;
#ifdef DEPOTPLAN_BACKEND_SCRIPT
    return DEPOTPLAN_BACKEND_SCRIPT;
#else
    return "tools/solve_backend.py";
#endif
}

inline nlohmann::json bound_json(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

inline nlohmann::json problem_json(const ModelInstance& m) {
    nlohmann::json p;
    p["minimize"] = m.minimize();
    p["offset"] = m.objective_offset();
    std::vector<double> obj(m.vars().size(), 0.0);
    for (const auto& t : m.objective()) obj[t.var] = t.coef;
    p["obj"] = obj;
    std::string kind;
    kind.reserve(m.vars().size());
    nlohmann::json lb = nlohmann::json::array();
    nlohmann::json ub = nlohmann::json::array();
    for (const auto& v : m.vars()) {
        kind.push_back(v.kind == VarKind::Continuous ? 'c' : (v.kind == VarKind::Integer ? 'i' : 'b'));
        lb.push_back(bound_json(v.lower));
        ub.push_back(bound_json(v.upper));
    }
    p["kind"] = kind;
    p["lb"] = std::move(lb);
    p["ub"] = std::move(ub);
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& c : m.constraints()) {
        nlohmann::json row;
        row["sense"] = c.sense == Sense::LessEqual ? "<="
                       : c.sense == Sense::GreaterEqual ? ">="
                                                        : "=";
        row["rhs"] = c.rhs;
        nlohmann::json terms = nlohmann::json::array();
        for (const auto& t : c.terms) terms.push_back({t.var, t.coef});
        row["terms"] = std::move(terms);
        rows.push_back(std::move(row));
    }
    p["rows"] = std::move(rows);
    return p;
}

class TempDir {
public:
    TempDir() {
        auto base = std::filesystem::temp_directory_path();
        std::random_device rd;
        for (int attempt = 0; attempt < 16; ++attempt) {
            auto candidate = base / ("depotplan-" + std::to_string(rd()));
            std::error_code ec;
            if (std::filesystem::create_directory(candidate, ec)) {
                path_ = candidate;
                return;
            }
        }
        throw Error("could not create temporary directory");
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline std::vector<SolveResult> run_backend(const nlohmann::json& batch, std::size_t count) {
    TempDir tmp;
    auto in_path = tmp.path() / "batch.json";
    auto out_path = tmp.path() / "result.json";
    auto err_path = tmp.path() / "stderr.txt";
    {
        std::ofstream os(in_path);
        os << batch.dump();
    }
    std::string python = "python3";
    if (const char* env = std::getenv("DEPOTPLAN_PYTHON")) python = env;
    std::string cmd = python + " '" + backend_script_path() + "' '" + in_path.string() + "' '" +
                      out_path.string() + "' 2>'" + err_path.string() + "'";
    int rc = std::system(cmd.c_str());
    if (rc != 0 || !std::filesystem::exists(out_path)) {
        std::ifstream err(err_path);
        std::stringstream msg;
        msg << err.rdbuf();
        throw BackendUnavailable("MILP backend failed (exit " + std::to_string(rc) +
                                 "): " + msg.str());
    }
    nlohmann::json out;
    {
        std::ifstream is(out_path);
        is >> out;
    }
    const auto& results = out.at("results");
    if (results.size() != count)
        throw BackendUnavailable("MILP backend returned wrong result count");

    std::vector<SolveResult> parsed;
    parsed.reserve(count);
    for (const auto& r : results) {
        SolveResult sr;
        std::string status = r.at("status");
        if (status == "optimal")
            sr.status = SolveStatus::Optimal;
        else if (status == "infeasible")
            sr.status = SolveStatus::Infeasible;
        else if (status == "unbounded")
            sr.status = SolveStatus::Unbounded;
        else if (status == "time-limit" || status == "time-limit-feasible")
            sr.status = SolveStatus::TimeLimit;
        else
            sr.status = SolveStatus::Error;
        if (r.contains("message")) sr.message = r["message"];
        if (r.contains("objective")) sr.objective = r["objective"];
        if (r.contains("dual_bound")) sr.dual_bound = r["dual_bound"];
        if (r.contains("gap")) sr.gap = r["gap"];
        if (r.contains("x")) sr.x = r["x"].get<std::vector<double>>();
        parsed.push_back(std::move(sr));
    }
    return parsed;
}

}  // namespace detail

// Solves several independent instances in one backend invocation. Results
// are in input order. The residual audit always runs on any solution,
// regardless of the status the solver claims; a claimed-feasible solution
// that fails the audit keeps its values but audit_ok is false.
inline std::vector<SolveResult> solve_batch(const std::vector<const ModelInstance*>& instances,
                                            const SolveConfig& config = {}) {
    nlohmann::json batch;
    batch["mip_gap"] = config.mip_gap;
    batch["time_limit"] = config.time_limit_sec;
    nlohmann::json problems = nlohmann::json::array();
    for (const auto* m : instances) problems.push_back(detail::problem_json(*m));
    batch["problems"] = std::move(problems);

    auto results = detail::run_backend(batch, instances.size());
    for (std::size_t i = 0; i < results.size(); ++i) {
        auto& r = results[i];
        if (!r.x.empty() || (r.has_solution() && instances[i]->vars().empty())) {
            r.audit = audit_solution(*instances[i], r.x);
            r.audit_ok = r.audit.clean(config.feasibility_tol);
        }
        // A solve that met the gap target but not to proof is reported as
        // gap-feasible rather than optimal.
        if (r.status == SolveStatus::Optimal && std::isfinite(r.gap) && r.gap > 1e-9)
            r.status = SolveStatus::GapFeasible;
    }
    return results;
}

inline SolveResult solve(const ModelInstance& instance, const SolveConfig& config = {}) {
    return solve_batch({&instance}, config)[0];
}

// Solves a previously exported MPS file through the same backend.
inline SolveResult solve_mps_file(const std::string& path, const SolveConfig& config = {}) {
    nlohmann::json batch;
    batch["mip_gap"] = config.mip_gap;
    batch["time_limit"] = config.time_limit_sec;
    batch["problems"] = nlohmann::json::array({nlohmann::json{{"mps", path}}});
    auto results = detail::run_backend(batch, 1);
    return results[0];
}

}  // namespace depotplan::milp
