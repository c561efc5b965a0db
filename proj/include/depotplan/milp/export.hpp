#pragma once

#include <cmath>
#include <iomanip>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "depotplan/milp/model.hpp"

namespace depotplan::milp {

enum class ExportFormat { MPS, LP };

struct ExportResult {
    std::string text;
    // Pairs of (exported name, original name); populated only when a name
    // had to be mangled to stay within the MPS length limit.
    std::vector<std::pair<std::string, std::string>> mangle_table;
};

namespace detail {

inline constexpr std::size_t kMaxMpsNameLen = 255;

inline std::string format_num(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

class NameMangler {
public:
    NameMangler(ExportResult& result, char prefix) : result_(result), prefix_(prefix) {}

    std::string use(const std::string& name, std::size_t index) {
        if (name.size() <= kMaxMpsNameLen) return name;
        std::string mangled = std::string(1, prefix_) + "_" + std::to_string(index);
        result_.mangle_table.emplace_back(mangled, name);
        return mangled;
    }

private:
    ExportResult& result_;
    char prefix_;
};

inline std::string export_mps(const ModelInstance& m, ExportResult& result) {
    std::ostringstream os;
    NameMangler vnames(result, 'x');
    NameMangler cnames(result, 'c');

    std::vector<std::string> vn(m.vars().size());
    for (std::size_t i = 0; i < m.vars().size(); ++i) vn[i] = vnames.use(m.vars()[i].name, i);
    std::vector<std::string> cn(m.constraints().size());
    for (std::size_t i = 0; i < m.constraints().size(); ++i)
        cn[i] = cnames.use(m.constraints()[i].name, i);

    os << "NAME depotplan\n";
    os << "ROWS\n";
    os << " N COST\n";
    for (std::size_t i = 0; i < m.constraints().size(); ++i) {
        char s = '?';
        switch (m.constraints()[i].sense) {
            case Sense::LessEqual: s = 'L'; break;
            case Sense::Equal: s = 'E'; break;
            case Sense::GreaterEqual: s = 'G'; break;
        }
        os << " " << s << " " << cn[i] << "\n";
    }

    // Column-major coefficients; objective sign flipped for maximization so
    // the file is always a minimization problem.
    double obj_sign = m.minimize() ? 1.0 : -1.0;
    std::vector<std::vector<std::pair<std::size_t, double>>> col_entries(m.vars().size());
    for (std::size_t ci = 0; ci < m.constraints().size(); ++ci)
        for (const auto& t : m.constraints()[ci].terms)
            col_entries[t.var].emplace_back(ci, t.coef);
    std::vector<double> obj_coef(m.vars().size(), 0.0);
    for (const auto& t : m.objective()) obj_coef[t.var] = obj_sign * t.coef;

    os << "COLUMNS\n";
    bool in_int = false;
    int marker = 0;
    for (std::size_t vi = 0; vi < m.vars().size(); ++vi) {
        bool is_int = m.vars()[vi].kind != VarKind::Continuous;
        if (is_int != in_int) {
            os << "    MARKER" << marker++ << " 'MARKER' " << (is_int ? "'INTORG'" : "'INTEND'")
               << "\n";
            in_int = is_int;
        }
        if (obj_coef[vi] != 0.0)
            os << "    " << vn[vi] << " COST " << format_num(obj_coef[vi]) << "\n";
        for (const auto& [ci, coef] : col_entries[vi])
            os << "    " << vn[vi] << " " << cn[ci] << " " << format_num(coef) << "\n";
        // A column absent from every row and the objective still needs a
        // placeholder entry so readers register it.
        if (obj_coef[vi] == 0.0 && col_entries[vi].empty())
            os << "    " << vn[vi] << " COST 0\n";
    }
    if (in_int) os << "    MARKER" << marker++ << " 'MARKER' 'INTEND'\n";

    os << "RHS\n";
    if (m.objective_offset() != 0.0)
        os << "    RHS COST " << format_num(-obj_sign * m.objective_offset()) << "\n";
    for (std::size_t ci = 0; ci < m.constraints().size(); ++ci)
        if (m.constraints()[ci].rhs != 0.0)
            os << "    RHS " << cn[ci] << " " << format_num(m.constraints()[ci].rhs) << "\n";

    os << "BOUNDS\n";
    for (std::size_t vi = 0; vi < m.vars().size(); ++vi) {
        const auto& v = m.vars()[vi];
        if (v.kind == VarKind::Binary) {
            os << " BV BND " << vn[vi] << "\n";
            continue;
        }
        if (v.lower == v.upper) {
            os << " FX BND " << vn[vi] << " " << format_num(v.lower) << "\n";
            continue;
        }
        if (std::isinf(v.lower) && std::isinf(v.upper)) {
            os << " FR BND " << vn[vi] << "\n";
            continue;
        }
        if (std::isinf(v.lower))
            os << " MI BND " << vn[vi] << "\n";
        else
            os << " LO BND " << vn[vi] << " " << format_num(v.lower) << "\n";
        if (std::isinf(v.upper)) {
            // Integer columns default to an upper bound of 1 in some MPS
            // readers; state the unbounded upper explicitly.
            if (v.kind == VarKind::Integer) os << " PL BND " << vn[vi] << "\n";
        } else {
            os << " UP BND " << vn[vi] << " " << format_num(v.upper) << "\n";
        }
    }
    os << "ENDATA\n";
    return os.str();
}

inline void write_lp_expr(std::ostringstream& os, const std::vector<LinTerm>& terms,
                          const std::vector<std::string>& vn, double constant) {
    bool first = true;
    for (const auto& t : terms) {
        double c = t.coef;
        if (first) {
            if (c < 0) os << "- ";
            first = false;
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        os << format_num(std::fabs(c)) << " " << vn[t.var];
    }
    if (constant != 0.0 || first) {
        if (!first) os << (constant < 0 ? " - " : " + ");
        else if (constant < 0) os << "- ";
        os << format_num(std::fabs(constant));
    }
}

inline std::string export_lp(const ModelInstance& m, ExportResult& result) {
    std::ostringstream os;
    NameMangler vnames(result, 'x');
    NameMangler cnames(result, 'c');
    std::vector<std::string> vn(m.vars().size());
    for (std::size_t i = 0; i < m.vars().size(); ++i) vn[i] = vnames.use(m.vars()[i].name, i);

    os << (m.minimize() ? "Minimize\n" : "Maximize\n");
    os << " obj: ";
    write_lp_expr(os, m.objective(), vn, m.objective_offset());
    os << "\nSubject To\n";
    for (std::size_t ci = 0; ci < m.constraints().size(); ++ci) {
        const auto& c = m.constraints()[ci];
        os << " " << cnames.use(c.name, ci) << ": ";
        write_lp_expr(os, c.terms, vn, 0.0);
        switch (c.sense) {
            case Sense::LessEqual: os << " <= "; break;
            case Sense::Equal: os << " = "; break;
            case Sense::GreaterEqual: os << " >= "; break;
        }
        os << format_num(c.rhs) << "\n";
    }
    os << "Bounds\n";
    for (std::size_t vi = 0; vi < m.vars().size(); ++vi) {
        const auto& v = m.vars()[vi];
        if (v.kind == VarKind::Binary) continue;
        if (std::isinf(v.lower) && std::isinf(v.upper)) {
            os << " " << vn[vi] << " free\n";
        } else if (v.lower == v.upper) {
            os << " " << vn[vi] << " = " << format_num(v.lower) << "\n";
        } else {
            os << " " << (std::isinf(v.lower) ? std::string("-inf") : format_num(v.lower))
               << " <= " << vn[vi] << " <= "
               << (std::isinf(v.upper) ? std::string("+inf") : format_num(v.upper)) << "\n";
        }
    }
    bool any_gen = false;
    for (const auto& v : m.vars()) any_gen |= v.kind == VarKind::Integer;
    if (any_gen) {
        os << "General\n";
        for (std::size_t vi = 0; vi < m.vars().size(); ++vi)
            if (m.vars()[vi].kind == VarKind::Integer) os << " " << vn[vi] << "\n";
    }
    bool any_bin = false;
    for (const auto& v : m.vars()) any_bin |= v.kind == VarKind::Binary;
    if (any_bin) {
        os << "Binaries\n";
        for (std::size_t vi = 0; vi < m.vars().size(); ++vi)
            if (m.vars()[vi].kind == VarKind::Binary) os << " " << vn[vi] << "\n";
    }
    os << "End\n";
    return os.str();
}

}  // namespace detail

inline ExportResult export_model(const ModelInstance& m, ExportFormat format) {
    ExportResult result;
    result.text = format == ExportFormat::MPS ? detail::export_mps(m, result)
                                              : detail::export_lp(m, result);
    return result;
}

}  // namespace depotplan::milp
