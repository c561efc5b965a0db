#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "depotplan/milp/audit.hpp"
#include "depotplan/milp/export.hpp"
#include "depotplan/milp/model.hpp"
#include "depotplan/milp/solve.hpp"

using namespace depotplan;
using namespace depotplan::milp;

TEST_CASE("variable registry enforces unique names and counts by kind") {
    ModelInstance m;
    auto x = m.add_continuous("x");
    m.add_integer("n", 0, 10);
    m.add_binary("b");
    CHECK_THROWS(m.add_continuous("x"));
    auto counts = m.count_variables();
    CHECK(counts == VarCounts{1, 1, 1});
    CHECK(m.find_var("x").index == x.index);
    CHECK_THROWS_AS(m.find_var("nope"), UnregisteredVariable);
    CHECK(m.count_variables().total() == 3);
}

TEST_CASE("empty model counts") {
    ModelInstance m;
    auto c = m.count_variables();
    CHECK(c == VarCounts{0, 0, 0});
}

TEST_CASE("linear expressions combine duplicate terms deterministically") {
    ModelInstance m;
    auto x = m.add_continuous("x");
    auto y = m.add_continuous("y");
    LinExpr e = 2.0 * x + 3.0 * y + 1.0 * x - 3.0 * y;
    auto combined = e.combined();
    REQUIRE(combined.size() == 1);
    CHECK(combined[0].var == x.index);
    CHECK(combined[0].coef == 3.0);
}

TEST_CASE("LP export of a minimal binary model") {
    ModelInstance m;
    auto x = m.add_binary("x");
    m.add_constraint("cap", LinExpr(x), Sense::LessEqual, 1.0);
    m.set_objective(LinExpr(x));
    auto lp = export_model(m, ExportFormat::LP);
    CHECK(lp.text.find("Binaries") != std::string::npos);
    CHECK(lp.text.find("Minimize") != std::string::npos);
    CHECK(lp.mangle_table.empty());
}

TEST_CASE("empty objective still exports") {
    ModelInstance m;
    m.add_continuous("x", 0, 5);
    auto mps = export_model(m, ExportFormat::MPS);
    CHECK(mps.text.find("COST") != std::string::npos);
    auto lp = export_model(m, ExportFormat::LP);
    CHECK(lp.text.find("obj:") != std::string::npos);
}

TEST_CASE("over-long names are mangled with a lookup table") {
    ModelInstance m;
    std::string longname(300, 'z');
    m.add_continuous(longname);
    auto mps = export_model(m, ExportFormat::MPS);
    REQUIRE(mps.mangle_table.size() == 1);
    CHECK(mps.mangle_table[0].second == longname);
    CHECK(mps.text.find(longname) == std::string::npos);
    CHECK(mps.text.find(mps.mangle_table[0].first) != std::string::npos);
}

TEST_CASE("solve a trivial integer model") {
    ModelInstance m;
    auto x = m.add_integer("x");
    m.add_constraint("lb", LinExpr(x), Sense::GreaterEqual, 3.0);
    m.set_objective(LinExpr(x));
    m.freeze();
    auto r = solve(m);
    REQUIRE(r.status == SolveStatus::Optimal);
    CHECK(r.objective == Catch::Approx(3.0));
    CHECK(r.x[0] == Catch::Approx(3.0));
    CHECK(r.audit_ok);
}

TEST_CASE("contradictory bounds are reported infeasible") {
    ModelInstance m;
    auto x = m.add_continuous("x", 0.0, kInf);
    m.add_constraint("hi", LinExpr(x), Sense::LessEqual, 0.0);
    m.add_constraint("lo", LinExpr(x), Sense::GreaterEqual, 1.0);
    m.set_objective(LinExpr(x));
    auto r = solve(m);
    CHECK(r.status == SolveStatus::Infeasible);
    CHECK_FALSE(r.has_solution());
}

TEST_CASE("objective offset and maximization survive the solve") {
    ModelInstance m;
    auto x = m.add_continuous("x", 0.0, 4.0);
    LinExpr obj = LinExpr(x) + 10.0;
    m.set_objective(obj, /*minimize=*/false);
    auto r = solve(m);
    REQUIRE(r.status == SolveStatus::Optimal);
    CHECK(r.objective == Catch::Approx(14.0));
}

TEST_CASE("batched solves preserve order") {
    ModelInstance a;
    auto xa = a.add_continuous("x", 2.0, 10.0);
    a.set_objective(LinExpr(xa));
    ModelInstance b;
    auto xb = b.add_continuous("x", 5.0, 10.0);
    b.set_objective(LinExpr(xb));
    auto results = solve_batch({&a, &b});
    REQUIRE(results.size() == 2);
    CHECK(results[0].objective == Catch::Approx(2.0));
    CHECK(results[1].objective == Catch::Approx(5.0));
}

TEST_CASE("audit recomputes residuals independently of solver claims") {
    ModelInstance m;
    auto x = m.add_continuous("x", 0.0, 10.0);
    auto y = m.add_integer("y", 0.0, 10.0);
    m.add_constraint("sum[0]", LinExpr(x) + LinExpr(y), Sense::Equal, 4.0);
    m.add_constraint("sum[1]", LinExpr(x) - LinExpr(y), Sense::LessEqual, 0.0);

    auto clean = audit_solution(m, {2.0, 2.0});
    CHECK(clean.max_violation == 0.0);
    CHECK(clean.constraint_families.at("sum").max_violation == 0.0);

    auto dirty = audit_solution(m, {3.5, 1.0});
    CHECK(dirty.constraint_families.at("sum").max_violation == Catch::Approx(2.5));
    CHECK(dirty.constraint_families.at("sum").worst_member == "sum[1]");

    auto frac = audit_solution(m, {2.5, 1.5});
    CHECK(frac.max_integrality_violation == Catch::Approx(0.5));
}

TEST_CASE("MPS export round-trips through the backend") {
    ModelInstance m;
    auto x = m.add_integer("pick.x[0]", 0, 7);
    auto y = m.add_continuous("pick.y[0]", 0.0, 3.5);
    auto b = m.add_binary("pick.flag");
    m.add_constraint("mix[0]", 2.0 * x + LinExpr(y) + 5.0 * b, Sense::GreaterEqual, 8.0);
    m.set_objective(3.0 * x + 1.0 * y + 2.0 * b + 1.5);
    m.freeze();

    auto direct = solve(m);
    REQUIRE(direct.status == SolveStatus::Optimal);

    auto mps = export_model(m, ExportFormat::MPS);
    auto dir = std::filesystem::temp_directory_path() / "depotplan_test_roundtrip.mps";
    {
        std::ofstream os(dir);
        os << mps.text;
    }
    auto via_mps = solve_mps_file(dir.string());
    std::filesystem::remove(dir);
    REQUIRE(via_mps.status == SolveStatus::Optimal);
    CHECK(via_mps.objective ==
          Catch::Approx(direct.objective).epsilon(1e-6));
}

TEST_CASE("deterministic build: identical inputs give byte-identical exports") {
    auto build = [] {
        ModelInstance m;
        auto x = m.add_continuous("a.x[1]");
        auto y = m.add_integer("a.y[1]", 0, 9);
        m.add_constraint("row[1]", 1.5 * x - 2.0 * y, Sense::LessEqual, 7.0);
        m.set_objective(LinExpr(x) + 2.0 * y);
        return export_model(m, ExportFormat::MPS).text;
    };
    CHECK(build() == build());
}
