#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "depotplan/milp/model.hpp"

namespace depotplan::milp {

// Max violation observed within one constraint/bound family. A family is
// the constraint name up to the first '[', so "fleet.soe[i0,s0,t3]" and
// "fleet.soe[i1,s2,t9]" audit together.
struct FamilyResidual {
    double max_violation = 0.0;
    std::string worst_member;
};

struct ResidualAudit {
    std::map<std::string, FamilyResidual> constraint_families;
    double max_bound_violation = 0.0;
    double max_integrality_violation = 0.0;
    double max_violation = 0.0;

    bool clean(double tol) const { return max_violation <= tol; }
};

inline std::string family_of(const std::string& name) {
    auto pos = name.find('[');
    return pos == std::string::npos ? name : name.substr(0, pos);
}

// Recomputes every residual from the raw primal values; deliberately
// ignores whatever feasibility the solver claimed.
inline ResidualAudit audit_solution(const ModelInstance& m, const std::vector<double>& x) {
    ResidualAudit audit;
    auto note = [&](const std::string& family, const std::string& member, double viol) {
        auto& f = audit.constraint_families[family];
        if (viol > f.max_violation) {
            f.max_violation = viol;
            f.worst_member = member;
        }
        audit.max_violation = std::max(audit.max_violation, viol);
    };

    for (const auto& c : m.constraints()) {
        double lhs = 0.0;
        for (const auto& t : c.terms) lhs += t.coef * x.at(t.var);
        double viol = 0.0;
        switch (c.sense) {
            case Sense::LessEqual: viol = std::max(0.0, lhs - c.rhs); break;
            case Sense::GreaterEqual: viol = std::max(0.0, c.rhs - lhs); break;
            case Sense::Equal: viol = std::fabs(lhs - c.rhs); break;
        }
        note(family_of(c.name), c.name, viol);
    }

    for (std::size_t i = 0; i < m.vars().size(); ++i) {
        const auto& v = m.vars()[i];
        double val = x.at(i);
        double bviol = std::max(std::max(v.lower - val, val - v.upper), 0.0);
        audit.max_bound_violation = std::max(audit.max_bound_violation, bviol);
        if (v.kind != VarKind::Continuous) {
            double iviol = std::fabs(val - std::round(val));
            audit.max_integrality_violation = std::max(audit.max_integrality_violation, iviol);
        }
    }
    audit.max_violation = std::max(
        {audit.max_violation, audit.max_bound_violation, audit.max_integrality_violation});
    return audit;
}

}  // namespace depotplan::milp
