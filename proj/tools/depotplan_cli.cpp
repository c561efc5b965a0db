#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "depotplan/builder.hpp"
#include "depotplan/config_io.hpp"
#include "depotplan/milp/export.hpp"
#include "depotplan/milp/solve.hpp"
#include "depotplan/oracle.hpp"
#include "depotplan/report.hpp"
#include "depotplan/sweep.hpp"

namespace {

using namespace depotplan;

struct CommonOpts {
    std::string config_path;
    std::string out_path;
    double mip_gap = -1;
    double time_limit = -1;
    std::string mode;
    int jobs = 0;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool needs_config = true) {
    auto* c = cmd->add_option("--config", opts.config_path, "Scenario config JSON");
    if (needs_config) c->required();
    cmd->add_option("--out", opts.out_path, "Output path (default stdout)");
    cmd->add_option("--mip-gap", opts.mip_gap, "Relative MIP gap override");
    cmd->add_option("--time-limit", opts.time_limit, "Solve time limit in seconds");
    cmd->add_option("--mode", opts.mode, "Departure energy mode: exact or surplus")
        ->check(CLI::IsMember({"exact", "surplus"}));
    cmd->add_option("--jobs", opts.jobs, "Solves per backend batch (sweep)");
}

Scenario load_with_overrides(const CommonOpts& opts) {
    Scenario sc = load_scenario(opts.config_path);
    if (opts.mip_gap >= 0) sc.solve.mip_gap = opts.mip_gap;
    if (opts.time_limit >= 0) sc.solve.time_limit_sec = opts.time_limit;
    if (opts.mode == "exact") sc.mode = DepartureEnergyMode::Exact;
    if (opts.mode == "surplus") sc.mode = DepartureEnergyMode::Surplus;
    return sc;
}

void emit(const CommonOpts& opts, const std::string& text) {
    if (opts.out_path.empty()) {
        std::cout << text << "\n";
        return;
    }
    std::ofstream os(opts.out_path);
    if (!os) throw Error("cannot write to " + opts.out_path);
    os << text << "\n";
}

int cmd_validate(const CommonOpts& opts) {
    Scenario sc = load_with_overrides(opts);
    validate_scenario_shape(sc);
    auto counts = predict_variable_counts(sc);
    auto warnings = lint_scenario(sc);
    // Surface per-block coverage problems without paying for a full build.
    TripMatrices matrices(sc.blocks, sc.grid);
    for (std::size_t k = 0; k < sc.blocks.size(); ++k) {
        bool any = false;
        for (const auto& v : sc.vehicles) {
            double eta = compute_driving_efficiency(matrices.span(k), v, sc.temperature_f,
                                                    sc.blocks[k].day);
            if (eta * sc.blocks[k].distance_km <= v.energy_capacity_kwh + 1e-9) any = true;
        }
        if (!any)
            warnings.push_back("block " + sc.blocks[k].id +
                               ": no vehicle type can cover its energy demand");
    }
    std::printf("scenario %s: %zu blocks, %zu vehicle types, %zu charger types\n",
                sc.name.c_str(), sc.blocks.size(), sc.vehicles.size(), sc.chargers.size());
    std::printf("model size: %d continuous, %d integer, %d binary variables\n",
                counts.continuous, counts.integer, counts.binary);
    for (const auto& w : warnings) std::printf("warning: %s\n", w.c_str());
    std::printf("%s\n", warnings.empty() ? "ok" : "ok with warnings");
    return 0;
}

int cmd_run(const CommonOpts& opts, const std::string& dispatch_csv) {
    Scenario sc = load_with_overrides(opts);
    auto cm = build_cluster_model(sc);
    for (const auto& w : cm->warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    auto result = milp::solve(cm->model, sc.solve);
    auto report = extract_report(sc, *cm, result);
    emit(opts, to_json(report).dump(2));
    if (!dispatch_csv.empty() && result.has_solution()) {
        std::ofstream os(dispatch_csv);
        if (!os) throw Error("cannot write to " + dispatch_csv);
        write_dispatch_csv(sc, *cm, result.x, os);
    }
    return report.feasible() ? 0 : 1;
}

int cmd_sweep(const CommonOpts& opts, const std::string& param_name,
              const std::vector<double>& values) {
    Scenario sc = load_with_overrides(opts);
    auto param = parse_sweep_parameter(param_name);
    auto result = run_sweep(sc, param, values, opts.jobs);
    emit(opts, to_json(result).dump(2));
    for (const auto& d : result.diagnostics) std::fprintf(stderr, "diagnostic: %s\n", d.c_str());
    for (const auto& p : result.points)
        if (!p.ok) return 1;
    return 0;
}

int cmd_export(const CommonOpts& opts, const std::string& format) {
    Scenario sc = load_with_overrides(opts);
    auto cm = build_cluster_model(sc);
    auto fmt = format == "lp" ? milp::ExportFormat::LP : milp::ExportFormat::MPS;
    auto exported = export_model(cm->model, fmt);
    emit(opts, exported.text);
    if (!exported.mangle_table.empty() && !opts.out_path.empty()) {
        std::ofstream os(opts.out_path + ".names");
        for (const auto& [mangled, original] : exported.mangle_table)
            os << mangled << " " << original << "\n";
    }
    return 0;
}

int cmd_disaggregate(const CommonOpts& opts) {
    Scenario sc = load_with_overrides(opts);
    auto cm = build_cluster_model(sc);
    auto result = milp::solve(cm->model, sc.solve);
    if (!result.has_solution()) {
        std::fprintf(stderr, "no solution to disaggregate (status %s)\n",
                     milp::to_string(result.status).c_str());
        return 1;
    }
    auto schedule = disaggregate(sc, *cm, result.x);
    nlohmann::json j;
    j["success"] = schedule.success;
    if (!schedule.success) j["failure_reason"] = schedule.failure_reason;
    nlohmann::json vehicles = nlohmann::json::array();
    for (const auto& v : schedule.vehicles) {
        nlohmann::json vj;
        vj["type"] = sc.vehicles[v.type].id;
        nlohmann::json blocks = nlohmann::json::array();
        for (std::size_t k : v.blocks) blocks.push_back(sc.blocks[k].id);
        vj["blocks"] = blocks;
        vj["soe_kwh"] = v.soe_kwh;
        vj["charge_kw"] = v.charge_kw;
        vehicles.push_back(std::move(vj));
    }
    j["vehicles"] = vehicles;
    emit(opts, j.dump(2));
    return schedule.success ? 0 : 1;
}

int cmd_oracle_compare(const CommonOpts& opts) {
    Scenario sc = load_with_overrides(opts);
    milp::SolveConfig config = sc.solve;
    auto cmp = oracle_compare(sc, config);
    nlohmann::json j;
    j["surplus_objective"] = cmp.surplus.objective;
    j["exact_objective"] = cmp.exact.objective;
    j["individual_objective"] = cmp.individual.objective;
    j["ordering_ok"] = cmp.ordering_ok();
    emit(opts, j.dump(2));
    return cmp.ordering_ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Depot fleet and infrastructure co-design planner"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string format = "mps";
    std::string param_name;
    std::string dispatch_csv;
    std::vector<double> sweep_values;

    auto* validate = app.add_subcommand("validate", "Check a scenario config");
    add_common(validate, opts);

    auto* run = app.add_subcommand("run", "Solve a scenario and write a report");
    add_common(run, opts);
    run->add_option("--dispatch-csv", dispatch_csv, "Also write per-interval dispatch");

    auto* sweep = app.add_subcommand("sweep", "Solve across a parameter range");
    add_common(sweep, opts);
    sweep->add_option("--param", param_name,
                      "Parameter: carbon_cap_kg, delivered_h2_price, or grid_cap_kw")
        ->required();
    sweep->add_option("--values", sweep_values, "Parameter values")->required();

    auto* exp = app.add_subcommand("export-model", "Write the model as MPS or LP");
    add_common(exp, opts);
    exp->add_option("--format", format, "mps or lp")->check(CLI::IsMember({"mps", "lp"}));

    auto* dis = app.add_subcommand("disaggregate",
                                   "Solve, then recover per-vehicle schedules");
    add_common(dis, opts);

    auto* oracle = app.add_subcommand("oracle-compare",
                                      "Compare against the individual-vehicle model");
    add_common(oracle, opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) return cmd_validate(opts);
        if (run->parsed()) return cmd_run(opts, dispatch_csv);
        if (sweep->parsed()) return cmd_sweep(opts, param_name, sweep_values);
        if (exp->parsed()) return cmd_export(opts, format);
        if (dis->parsed()) return cmd_disaggregate(opts);
        if (oracle->parsed()) return cmd_oracle_compare(opts);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
