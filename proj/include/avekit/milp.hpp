#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include "avekit/analysis.hpp"
#include "avekit/core/lp.hpp"
#include "avekit/core/problem.hpp"

namespace avekit {

struct MixedIntegerModel {
    struct Variable {
        std::string name;
        bool binary = false;
        double lower = 0.0;
        double upper = std::numeric_limits<double>::infinity();
        bool operator==(const Variable&) const = default;
    };
    struct Row {
        std::string name;
        char sense = 'E';  // 'E', 'G' or 'L'
        std::vector<std::pair<std::size_t, double>> coefs;
        double rhs = 0.0;
        bool operator==(const Row&) const = default;
    };

    std::string name = "AVE";
    bool maximize = false;
    std::vector<Variable> vars;
    std::vector<double> objective;
    std::vector<Row> rows;

    bool operator==(const MixedIntegerModel&) const = default;

    std::size_t add_var(std::string vname, bool binary, double lo, double hi) {
        vars.push_back({std::move(vname), binary, binary ? 0.0 : lo, binary ? 1.0 : hi});
        objective.push_back(0.0);
        return vars.size() - 1;
    }
    std::size_t num_binary() const {
        std::size_t k = 0;
        for (const auto& v : vars) k += v.binary;
        return k;
    }
    std::size_t find_var(const std::string& vname) const {
        for (std::size_t j = 0; j < vars.size(); ++j)
            if (vars[j].name == vname) return j;
        throw ParseError("unknown column " + vname);
    }
};

namespace detail {

inline std::string fmt_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw ParseError("bad number '" + s + "'");
    return v;
}

inline std::string pad(const std::string& s, std::size_t w) { return s.size() >= w ? s + " " : s + std::string(w - s.size(), ' '); }

}  // namespace detail

// Fixed-layout MPS: ROWS, COLUMNS, RHS, BOUNDS; binaries as BV bounds.
// Values are written as shortest round-trip decimals, so fields may be
// wider than the classic 12 characters.
inline std::string write_mps(const MixedIntegerModel& m) {
    std::ostringstream os;
    os << "NAME          " << m.name << '\n';
    if (m.maximize) os << "OBJSENSE\n    MAX\n";
    os << "ROWS\n N  OBJ\n";
    for (const auto& r : m.rows) os << ' ' << r.sense << "  " << r.name << '\n';
    os << "COLUMNS\n";
    std::vector<std::vector<std::pair<std::size_t, double>>> by_col(m.vars.size());
    for (std::size_t i = 0; i < m.rows.size(); ++i)
        for (const auto& [j, v] : m.rows[i].coefs) by_col[j].emplace_back(i, v);
    for (std::size_t j = 0; j < m.vars.size(); ++j) {
        const std::string col = "    " + detail::pad(m.vars[j].name, 10);
        const bool any = m.objective[j] != 0.0 || !by_col[j].empty();
        if (m.objective[j] != 0.0 || !any) os << col << detail::pad("OBJ", 10) << detail::fmt_double(m.objective[j]) << '\n';
        for (const auto& [i, v] : by_col[j]) os << col << detail::pad(m.rows[i].name, 10) << detail::fmt_double(v) << '\n';
    }
    os << "RHS\n";
    for (const auto& r : m.rows)
        if (r.rhs != 0.0) os << "    " << detail::pad("RHS", 10) << detail::pad(r.name, 10) << detail::fmt_double(r.rhs) << '\n';
    os << "BOUNDS\n";
    for (const auto& v : m.vars) {
        const std::string tail = detail::pad("BND", 10) + v.name;
        if (v.binary) {
            os << " BV " << tail << '\n';
            continue;
        }
        const bool lo_inf = std::isinf(v.lower), hi_inf = std::isinf(v.upper);
        if (lo_inf && hi_inf) {
            os << " FR " << tail << '\n';
            continue;
        }
        if (lo_inf) os << " MI " << tail << '\n';
        else if (v.lower != 0.0) os << " LO " << detail::pad("BND", 10) << detail::pad(v.name, 10) << detail::fmt_double(v.lower) << '\n';
        if (!hi_inf) os << " UP " << detail::pad("BND", 10) << detail::pad(v.name, 10) << detail::fmt_double(v.upper) << '\n';
    }
    os << "ENDATA\n";
    return os.str();
}

inline void write_mps_file(const MixedIntegerModel& m, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open " + path + " for writing");
    f << write_mps(m);
}

inline MixedIntegerModel parse_mps(const std::string& text) {
    MixedIntegerModel m;
    m.name.clear();
    std::istringstream in(text);
    std::string line, section;
    std::map<std::string, std::size_t> row_index;
    std::string obj_row;
    const double inf = std::numeric_limits<double>::infinity();
    bool ended = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '*') continue;
        std::istringstream ls(line);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) tok.push_back(t);
        if (tok.empty()) continue;
        if (line[0] != ' ') {
            section = tok[0];
            if (section == "NAME") m.name = tok.size() > 1 ? tok[1] : "";
            if (section == "ENDATA") {
                ended = true;
                break;
            }
            continue;
        }
        if (section == "OBJSENSE") {
            m.maximize = tok[0] == "MAX" || tok[0] == "MAXIMIZE";
        } else if (section == "ROWS") {
            if (tok.size() != 2) throw ParseError("bad ROWS line: " + line);
            if (tok[0] == "N") {
                if (obj_row.empty()) obj_row = tok[1];
                continue;
            }
            if (tok[0] != "E" && tok[0] != "G" && tok[0] != "L") throw ParseError("bad row type " + tok[0]);
            row_index[tok[1]] = m.rows.size();
            m.rows.push_back({tok[1], tok[0][0], {}, 0.0});
        } else if (section == "COLUMNS") {
            if (tok.size() >= 2 && tok[1] == "'MARKER'") continue;
            if (tok.size() != 3 && tok.size() != 5) throw ParseError("bad COLUMNS line: " + line);
            std::size_t j;
            if (m.vars.empty() || m.vars.back().name != tok[0]) j = m.add_var(tok[0], false, 0.0, inf);
            else j = m.vars.size() - 1;
            for (std::size_t k = 1; k + 1 < tok.size(); k += 2) {
                const double v = detail::parse_double(tok[k + 1]);
                if (tok[k] == obj_row) {
                    m.objective[j] = v;
                } else {
                    auto it = row_index.find(tok[k]);
                    if (it == row_index.end()) throw ParseError("unknown row " + tok[k]);
                    m.rows[it->second].coefs.emplace_back(j, v);
                }
            }
        } else if (section == "RHS") {
            if (tok.size() != 3 && tok.size() != 5) throw ParseError("bad RHS line: " + line);
            for (std::size_t k = 1; k + 1 < tok.size(); k += 2) {
                if (tok[k] == obj_row) continue;
                auto it = row_index.find(tok[k]);
                if (it == row_index.end()) throw ParseError("unknown row " + tok[k]);
                m.rows[it->second].rhs = detail::parse_double(tok[k + 1]);
            }
        } else if (section == "BOUNDS") {
            if (tok.size() < 3) throw ParseError("bad BOUNDS line: " + line);
            auto& v = m.vars[m.find_var(tok[2])];
            const std::string& t = tok[0];
            auto value = [&]() {
                if (tok.size() < 4) throw ParseError("bound needs a value: " + line);
                return detail::parse_double(tok[3]);
            };
            if (t == "BV") {
                v.binary = true;
                v.lower = 0.0;
                v.upper = 1.0;
            } else if (t == "FR") {
                v.lower = -inf;
                v.upper = inf;
            } else if (t == "MI") {
                v.lower = -inf;
            } else if (t == "PL") {
                v.upper = inf;
            } else if (t == "LO") {
                v.lower = value();
            } else if (t == "UP") {
                v.upper = value();
            } else if (t == "FX") {
                v.lower = v.upper = value();
            } else {
                throw ParseError("unsupported bound type " + t);
            }
        } else {
            throw ParseError("data outside a known section: " + line);
        }
    }
    if (!ended) throw ParseError("missing ENDATA");
    // Coefficients were collected column by column; restore row-major order by column index.
    for (auto& r : m.rows)
        std::stable_sort(r.coefs.begin(), r.coefs.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return m;
}

inline MixedIntegerModel read_mps_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_mps(ss.str());
}

// ---------- the two reformulations ----------

// max α  s.t.  Ax − y = αb,  0 ≤ y + x ≤ e − z,  0 ≤ y − x ≤ z,  α ≥ 0,  z binary.
// Variables in order x1..xn, y1..yn, z1..zn, alpha.
inline MixedIntegerModel export_milp_prokopyev(const AveProblem& p) {
    const std::size_t n = p.n();
    if (norm_inf(p.b) == 0.0) throw NotApplicable("the mixed 0-1 reformulation needs b != 0");
    const double inf = std::numeric_limits<double>::infinity();
    MixedIntegerModel m;
    m.maximize = true;
    for (std::size_t i = 0; i < n; ++i) m.add_var("x" + std::to_string(i + 1), false, -inf, inf);
    for (std::size_t i = 0; i < n; ++i) m.add_var("y" + std::to_string(i + 1), false, -inf, inf);
    for (std::size_t i = 0; i < n; ++i) m.add_var("z" + std::to_string(i + 1), true, 0, 1);
    const std::size_t alpha = m.add_var("alpha", false, 0.0, inf);
    m.objective[alpha] = 1.0;
    const std::size_t y0 = n, z0 = 2 * n;
    for (std::size_t i = 0; i < n; ++i) {
        const std::string k = std::to_string(i + 1);
        MixedIntegerModel::Row eq{"eq" + k, 'E', {}, 0.0};
        for (std::size_t j = 0; j < n; ++j)
            if (p.A(i, j) != 0.0) eq.coefs.emplace_back(j, p.A(i, j));
        eq.coefs.emplace_back(y0 + i, -1.0);
        if (p.b[i] != 0.0) eq.coefs.emplace_back(alpha, -p.b[i]);
        m.rows.push_back(eq);
        m.rows.push_back({"plo" + k, 'G', {{i, 1.0}, {y0 + i, 1.0}}, 0.0});
        m.rows.push_back({"pup" + k, 'L', {{i, 1.0}, {y0 + i, 1.0}, {z0 + i, 1.0}}, 1.0});
        m.rows.push_back({"mlo" + k, 'G', {{i, -1.0}, {y0 + i, 1.0}}, 0.0});
        m.rows.push_back({"mup" + k, 'L', {{i, -1.0}, {y0 + i, 1.0}, {z0 + i, -1.0}}, 0.0});
    }
    return m;
}

// With a box x̲ ≤ x ≤ x̄ containing all solutions:
// (A − I)x ≥ b,  (A − I)x ≤ b − 2 diag(x̲)z,  (A + I)x ≥ b,  (A + I)x ≤ b + 2 diag(x̄)(e − z).
// Variables in order x1..xn, z1..zn.
inline MixedIntegerModel export_milp_bounded(const AveProblem& p, const Vector& lo, const Vector& hi) {
    const std::size_t n = p.n();
    if (lo.size() != n || hi.size() != n) throw DimensionError("box has wrong length");
    for (std::size_t i = 0; i < n; ++i)
        if (!(lo[i] <= hi[i])) throw NotApplicable("empty box");
    const double inf = std::numeric_limits<double>::infinity();
    MixedIntegerModel m;
    for (std::size_t i = 0; i < n; ++i) m.add_var("x" + std::to_string(i + 1), false, -inf, inf);
    for (std::size_t i = 0; i < n; ++i) m.add_var("z" + std::to_string(i + 1), true, 0, 1);
    for (int shift : {-1, 1}) {
        const std::string tag = shift < 0 ? "am" : "ap";
        for (std::size_t i = 0; i < n; ++i) {
            const std::string k = std::to_string(i + 1);
            std::vector<std::pair<std::size_t, double>> row;
            for (std::size_t j = 0; j < n; ++j) {
                const double v = p.A(i, j) + (i == j ? shift : 0.0);
                if (v != 0.0) row.emplace_back(j, v);
            }
            m.rows.push_back({tag + "lo" + k, 'G', row, p.b[i]});
            auto up = row;
            if (shift < 0) {
                if (lo[i] != 0.0) up.emplace_back(n + i, 2.0 * lo[i]);
                m.rows.push_back({tag + "up" + k, 'L', up, p.b[i]});
            } else {
                if (hi[i] != 0.0) up.emplace_back(n + i, 2.0 * hi[i]);
                m.rows.push_back({tag + "up" + k, 'L', up, p.b[i] + 2.0 * hi[i]});
            }
        }
    }
    return m;
}

inline MixedIntegerModel export_milp_bounded(const AveProblem& p, const SolutionBounds& sb) {
    return export_milp_bounded(p, scaled(sb.u, -1.0), sb.u);
}

// ---------- brute-force evaluation ----------

struct MilpAssignment {
    std::vector<int> z;  // binary values in variable order
    LpStatus status = LpStatus::Infeasible;
    Vector values;       // all variables, binaries included
    double objective = 0.0;
};

// Solves the LP restriction for every binary assignment; returns the
// assignments whose LP is feasible.
inline std::vector<MilpAssignment> milp_brute_force(const MixedIntegerModel& m, std::size_t enum_cap = kDefaultEnumCap) {
    std::vector<std::size_t> bins, conts;
    for (std::size_t j = 0; j < m.vars.size(); ++j) (m.vars[j].binary ? bins : conts).push_back(j);
    check_enum_cap(bins.size(), enum_cap);
    std::vector<long> cpos(m.vars.size(), -1);
    for (std::size_t k = 0; k < conts.size(); ++k) cpos[conts[k]] = static_cast<long>(k);
    const std::size_t nc = conts.size();
    std::vector<MilpAssignment> out;
    const std::uint64_t count = std::uint64_t{1} << bins.size();
    for (std::uint64_t mask = 0; mask < count; ++mask) {
        Vector zval(m.vars.size(), 0.0);
        std::vector<int> z(bins.size());
        for (std::size_t k = 0; k < bins.size(); ++k) {
            z[k] = static_cast<int>((mask >> k) & 1u);
            zval[bins[k]] = z[k];
        }
        LinearProgram lp;
        lp.c.assign(nc, 0.0);
        lp.nonneg.assign(nc, 0);
        lp.G = Matrix(0, nc);
        for (std::size_t k = 0; k < nc; ++k) lp.c[k] = (m.maximize ? -1.0 : 1.0) * m.objective[conts[k]];
        for (const auto& r : m.rows) {
            Vector g(nc, 0.0);
            double rhs = r.rhs;
            for (const auto& [j, v] : r.coefs) {
                if (cpos[j] >= 0) g[static_cast<std::size_t>(cpos[j])] += v;
                else rhs -= v * zval[j];
            }
            if (r.sense == 'L') lp.add_row(scaled(g, -1.0), -rhs);
            else lp.add_row(g, rhs, r.sense == 'E');
        }
        for (std::size_t k = 0; k < nc; ++k) {
            const auto& v = m.vars[conts[k]];
            Vector e(nc, 0.0);
            if (v.lower == 0.0) {
                lp.nonneg[k] = 1;
            } else if (std::isfinite(v.lower)) {
                e[k] = 1.0;
                lp.add_row(e, v.lower);
            }
            if (std::isfinite(v.upper)) {
                e.assign(nc, 0.0);
                e[k] = -1.0;
                lp.add_row(e, -v.upper);
            }
        }
        const auto sol = solve_lp(lp);
        if (sol.status == LpStatus::Infeasible || sol.status == LpStatus::PivotLimit) continue;
        MilpAssignment a;
        a.z = z;
        a.status = sol.status;
        a.values = zval;
        for (std::size_t k = 0; k < nc; ++k) a.values[conts[k]] = sol.x[k];
        a.objective = 0.0;
        for (std::size_t j = 0; j < m.vars.size(); ++j) a.objective += m.objective[j] * a.values[j];
        out.push_back(std::move(a));
    }
    return out;
}

// Distinct x-parts (first n variables) of the feasible assignments.
inline std::vector<Vector> milp_bounded_points(const MixedIntegerModel& m, std::size_t n, double dedup_tol = 1e-8) {
    std::vector<Vector> pts;
    for (const auto& a : milp_brute_force(m)) {
        Vector x(a.values.begin(), a.values.begin() + static_cast<std::ptrdiff_t>(n));
        bool dup = false;
        for (const auto& q : pts) dup = dup || dist_inf(q, x) < dedup_tol;
        if (!dup) pts.push_back(std::move(x));
    }
    return pts;
}

struct ProkopyevResult {
    double alpha = 0.0;
    std::optional<Vector> x;  // x*/α*, a solution of minimum ∞-norm
};

inline ProkopyevResult milp_prokopyev_optimum(const MixedIntegerModel& m, std::size_t n) {
    ProkopyevResult r;
    for (const auto& a : milp_brute_force(m)) {
        if (a.status != LpStatus::Optimal) continue;
        const double alpha = a.values.back();
        if (alpha > r.alpha) {
            r.alpha = alpha;
            r.x = scaled(Vector(a.values.begin(), a.values.begin() + static_cast<std::ptrdiff_t>(n)), 1.0 / alpha);
        }
    }
    if (r.alpha <= 1e-12) r.x.reset();
    return r;
}

}  // namespace avekit
