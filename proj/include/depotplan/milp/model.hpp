#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "depotplan/errors.hpp"

namespace depotplan::milp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarKind { Continuous, Integer, Binary };

enum class Sense { LessEqual, Equal, GreaterEqual };

struct VarId {
    int index = -1;
    bool valid() const { return index >= 0; }
};

struct LinTerm {
    int var;
    double coef;
};

// Sparse linear expression with a constant offset. Terms are kept in
// insertion order; combine() merges duplicates and sorts by variable index.
class LinExpr {
public:
    LinExpr() = default;
    LinExpr(double c) : constant_(c) {}  // NOLINT(google-explicit-constructor)
    LinExpr(VarId v) { terms_.push_back({v.index, 1.0}); }  // NOLINT

    LinExpr& operator+=(const LinExpr& other) {
        terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
        constant_ += other.constant_;
        return *this;
    }
    LinExpr& operator-=(const LinExpr& other) {
        for (const auto& t : other.terms_) terms_.push_back({t.var, -t.coef});
        constant_ -= other.constant_;
        return *this;
    }
    LinExpr& operator*=(double a) {
        for (auto& t : terms_) t.coef *= a;
        constant_ *= a;
        return *this;
    }
    void add_term(VarId v, double coef) {
        if (!v.valid()) throw UnregisteredVariable("LinExpr: invalid variable id");
        terms_.push_back({v.index, coef});
    }
    void add_constant(double c) { constant_ += c; }

    const std::vector<LinTerm>& terms() const { return terms_; }
    double constant() const { return constant_; }
    bool empty() const { return terms_.empty(); }

    // Merge duplicate variables and drop exact zeros; ordering is by
    // variable index so identical expressions compare equal.
    std::vector<LinTerm> combined() const {
        std::map<int, double> acc;
        for (const auto& t : terms_) acc[t.var] += t.coef;
        std::vector<LinTerm> out;
        out.reserve(acc.size());
        for (const auto& [v, c] : acc)
            if (c != 0.0) out.push_back({v, c});
        return out;
    }

private:
    std::vector<LinTerm> terms_;
    double constant_ = 0.0;
};

inline LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
inline LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
inline LinExpr operator*(LinExpr a, double s) { return a *= s; }
inline LinExpr operator*(double s, LinExpr a) { return a *= s; }
inline LinExpr operator*(VarId v, double s) { return LinExpr(v) *= s; }
inline LinExpr operator*(double s, VarId v) { return LinExpr(v) *= s; }

struct VarDef {
    std::string name;
    VarKind kind = VarKind::Continuous;
    double lower = 0.0;
    double upper = kInf;
};

struct ConstraintDef {
    std::string name;
    std::vector<LinTerm> terms;  // combined, sorted by variable index
    Sense sense = Sense::LessEqual;
    double rhs = 0.0;
};

struct VarCounts {
    int continuous = 0;
    int integer = 0;
    int binary = 0;
    int total() const { return continuous + integer + binary; }
    bool operator==(const VarCounts&) const = default;
};

// Variable registry + constraint store + objective. Construction is
// single-writer; once frozen the instance is immutable and may be shared
// across solver/exporter threads.
class ModelInstance {
public:
    VarId add_var(std::string name, VarKind kind, double lower, double upper) {
        require_mutable();
        if (name_index_.count(name))
            throw Error("duplicate variable name: " + name);
        if (lower > upper)
            throw Error("variable " + name + ": lower bound exceeds upper bound");
        if (kind == VarKind::Binary) {
            lower = std::max(lower, 0.0);
            upper = std::min(upper, 1.0);
        }
        VarId id{static_cast<int>(vars_.size())};
        name_index_.emplace(name, id.index);
        vars_.push_back({std::move(name), kind, lower, upper});
        return id;
    }
    VarId add_continuous(std::string name, double lower = 0.0, double upper = kInf) {
        return add_var(std::move(name), VarKind::Continuous, lower, upper);
    }
    VarId add_integer(std::string name, double lower = 0.0, double upper = kInf) {
        return add_var(std::move(name), VarKind::Integer, lower, upper);
    }
    VarId add_binary(std::string name) {
        return add_var(std::move(name), VarKind::Binary, 0.0, 1.0);
    }

    void add_constraint(std::string name, const LinExpr& lhs, Sense sense, double rhs) {
        require_mutable();
        ConstraintDef c;
        c.name = std::move(name);
        c.terms = lhs.combined();
        for (const auto& t : c.terms) check_var(t.var, c.name);
        c.sense = sense;
        c.rhs = rhs - lhs.constant();
        constraints_.push_back(std::move(c));
    }

    void set_objective(const LinExpr& expr, bool minimize = true) {
        require_mutable();
        objective_ = expr.combined();
        for (const auto& t : objective_) check_var(t.var, "objective");
        objective_offset_ = expr.constant();
        minimize_ = minimize;
    }

    void fix_var(VarId v, double value) {
        require_mutable();
        vars_.at(v.index).lower = value;
        vars_.at(v.index).upper = value;
    }
    void set_upper(VarId v, double ub) {
        require_mutable();
        vars_.at(v.index).upper = ub;
    }
    void set_lower(VarId v, double lb) {
        require_mutable();
        vars_.at(v.index).lower = lb;
    }

    void freeze() { frozen_ = true; }
    bool frozen() const { return frozen_; }

    const std::vector<VarDef>& vars() const { return vars_; }
    const std::vector<ConstraintDef>& constraints() const { return constraints_; }
    const std::vector<LinTerm>& objective() const { return objective_; }
    double objective_offset() const { return objective_offset_; }
    bool minimize() const { return minimize_; }

    VarId find_var(const std::string& name) const {
        auto it = name_index_.find(name);
        if (it == name_index_.end())
            throw UnregisteredVariable("no variable named " + name);
        return VarId{it->second};
    }
    bool has_var(const std::string& name) const { return name_index_.count(name) > 0; }

    VarCounts count_variables() const {
        VarCounts c;
        for (const auto& v : vars_) {
            switch (v.kind) {
                case VarKind::Continuous: ++c.continuous; break;
                case VarKind::Integer: ++c.integer; break;
                case VarKind::Binary: ++c.binary; break;
            }
        }
        return c;
    }

    double eval(const LinExpr& expr, const std::vector<double>& values) const {
        double acc = expr.constant();
        for (const auto& t : expr.terms()) acc += t.coef * values.at(t.var);
        return acc;
    }

private:
    void require_mutable() const {
        if (frozen_) throw Error("ModelInstance is frozen");
    }
    void check_var(int index, const std::string& where) const {
        if (index < 0 || index >= static_cast<int>(vars_.size()))
            throw UnregisteredVariable(where + " references unregistered variable index " +
                                       std::to_string(index));
    }

    std::vector<VarDef> vars_;
    std::unordered_map<std::string, int> name_index_;
    std::vector<ConstraintDef> constraints_;
    std::vector<LinTerm> objective_;
    double objective_offset_ = 0.0;
    bool minimize_ = true;
    bool frozen_ = false;
};

}  // namespace depotplan::milp
