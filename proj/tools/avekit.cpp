#include <cstdio>
#include <exception>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "avekit/analysis.hpp"
#include "avekit/correction.hpp"
#include "avekit/io/bench.hpp"
#include "avekit/io/bundle.hpp"
#include "avekit/io/generate.hpp"
#include "avekit/io/registry.hpp"
#include "avekit/milp.hpp"
#include "avekit/solvers.hpp"
#include "avekit/transforms.hpp"

using namespace avekit;
using namespace avekit::io;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitNegative = 2;

// ---- formatting ----

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string vec_str(const Vector& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + num(v[i]);
    return out + "]";
}

std::string sign_str(const SignVector& s) {
    std::string out = "(";
    for (std::size_t i = 0; i < s.size(); ++i) out += s[i] > 0 ? '+' : '-';
    return out + ")";
}

void print_matrix(const Matrix& m, const std::string& indent) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        std::cout << indent;
        for (std::size_t j = 0; j < m.cols(); ++j) std::printf("%16.10g", m(i, j));
        std::cout << "\n";
    }
}

json matrix_json(const Matrix& m) { return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", m.data()}}; }

json sign_json(const SignVector& s) {
    std::vector<int> v(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) v[i] = s[i];
    return v;
}

json verdict_json(const Verdict& v) {
    json j{{"state", to_string(v.state)}, {"kind", v.cert.kind}};
    if (!v.reason.empty()) j["reason"] = v.reason;
    if (!v.cert.detail.empty()) j["detail"] = v.cert.detail;
    if (v.cert.scalar) j["scalar"] = *v.cert.scalar;
    if (!v.cert.vec.empty()) j["vector"] = v.cert.vec;
    if (v.cert.sign) j["sign"] = sign_json(*v.cert.sign);
    if (v.cert.matrix) j["matrix"] = matrix_json(*v.cert.matrix);
    return j;
}

void write_json_out(const std::string& path, const json& j) {
    if (!path.empty()) write_text_file(path, j.dump(2) + "\n");
}

// "k=v" pairs from --param.
std::map<std::string, double> parse_params(const std::vector<std::string>& kvs) {
    std::map<std::string, double> out;
    for (const auto& kv : kvs) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) throw Error("--param expects k=v, got '" + kv + "'");
        const std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(val, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != val.size() || val.empty()) throw Error("--param " + key + ": '" + val + "' is not a number");
        out[key] = v;
    }
    return out;
}

// ---- input ----

struct InputOptions {
    std::string input;
    std::string matrix;
    std::string rhs;
};

void add_input_options(CLI::App* cmd, InputOptions& in) {
    auto* f = cmd->add_option("--input,-i", in.input, "problem bundle (JSON)");
    auto* m = cmd->add_option("--matrix", in.matrix, "A as a Matrix Market array file");
    auto* r = cmd->add_option("--rhs", in.rhs, "b as a Matrix Market array file");
    m->needs(r);
    r->needs(m);
    f->excludes(m);
}

ProblemBundle load_problem(const InputOptions& in) {
    if (!in.input.empty()) return read_bundle(in.input);
    if (in.matrix.empty()) throw Error("either --input or --matrix/--rhs is required");
    ProblemBundle pb;
    pb.A = read_matrix_market(in.matrix);
    pb.b = read_matrix_market_vector(in.rhs);
    pb.n = pb.b.size();
    pb.validate();
    return pb;
}

// ---- gen ----

struct GenOptions {
    std::string kind;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> params;
    std::string out;
    std::string mm_prefix;
};

int cmd_gen(const GenOptions& o) {
    const ProblemBundle pb = gen_instance(o.kind, o.n, o.seed, parse_params(o.params));
    if (o.out.empty()) std::cout << bundle_to_string(pb);
    else write_bundle(o.out, pb);
    if (!o.mm_prefix.empty()) {
        write_text_file(o.mm_prefix + "_A.mtx", write_matrix_market(pb.A));
        write_text_file(o.mm_prefix + "_b.mtx", write_matrix_market(pb.b));
    }
    if (!o.out.empty()) std::cout << "wrote " << o.kind << " instance n=" << o.n << " seed=" << o.seed << " to " << o.out << "\n";
    return kExitOk;
}

// ---- solve ----

struct SolveOptions {
    InputOptions in;
    std::string method;
    double tol = kDefaultTol;
    int max_iters = 1000;
    std::string x0;
    std::string x0_file;
    std::vector<std::string> params;
    std::size_t enum_cap = kDefaultEnumCap;
    std::string out;
};

int cmd_solve(const SolveOptions& o) {
    const ProblemBundle pb = load_problem(o.in);
    SolverConfig cfg;
    cfg.tol = o.tol;
    cfg.max_iters = o.max_iters;
    cfg.params = parse_params(o.params);
    if (!cfg.params.count("enum_cap")) cfg.params["enum_cap"] = static_cast<double>(o.enum_cap);
    if (o.x0 == "zero") {
        cfg.x0 = Vector(pb.n, 0.0);
    } else if (o.x0 == "ones") {
        cfg.x0 = ones(pb.n);
    } else if (o.x0 == "picard") {
        Lu lu(pb.A);
        if (lu.singular()) throw NotApplicable("--x0 picard needs a nonsingular A");
        cfg.x0 = lu.solve(pb.b);
    } else if (o.x0 == "file") {
        if (o.x0_file.empty()) throw Error("--x0 file needs --x0-file");
        cfg.x0 = read_matrix_market_vector(o.x0_file);
    }
    const SolveOutcome out = run_method(o.method, pb, cfg);
    std::cout << "method         " << o.method << (out.method.empty() || out.method == o.method ? "" : " (" + out.method + ")") << "\n"
              << "status         " << to_string(out.status) << "\n"
              << "iterations     " << out.iterations << "\n"
              << "linear solves  " << out.linear_solves << "\n"
              << "residual_inf   " << num(out.residual_inf) << "\n";
    if (!out.message.empty()) std::cout << "message        " << out.message << "\n";
    if (!out.x.empty()) {
        std::cout << "x\n";
        for (std::size_t i = 0; i < out.x.size(); ++i) std::printf("  %4zu  %22.17g\n", i, out.x[i] + 0.0);
    }
    if (!o.out.empty()) {
        json j{{"method", o.method},
               {"status", to_string(out.status)},
               {"iterations", out.iterations},
               {"linear_solves", out.linear_solves},
               {"residual_inf", out.residual_inf},
               {"x", out.x},
               {"message", out.message},
               {"info", out.info}};
        if (out.sign_certificate) j["sign_certificate"] = sign_json(*out.sign_certificate);
        if (!out.ray.empty()) j["ray"] = out.ray;
        write_json_out(o.out, j);
    }
    return out.converged() ? kExitOk : kExitNegative;
}

// ---- analyze ----

struct AnalyzeOptions {
    InputOptions in;
    std::size_t enum_cap = kDefaultEnumCap;
    std::string out;
};

void print_report(const std::string& title, const AnalysisReport& rep, json& j) {
    std::cout << title << "\n";
    json arr = json::object();
    for (const auto& [name, v] : rep.verdicts) {
        std::printf("  %-28s %-8s", name.c_str(), to_string(v.state));
        if (v.cert.scalar) std::cout << " " << num(*v.cert.scalar);
        if (!v.cert.detail.empty()) std::cout << "  (" << v.cert.detail << ")";
        if (!v.reason.empty()) std::cout << "  " << v.reason;
        std::cout << "\n";
        arr[name] = verdict_json(v);
    }
    j["verdicts"] = arr;
    j["unique_for_all_b"] = to_string(rep.unique_for_all_b);
    j["solvable_hint"] = to_string(rep.solvable_hint);
}

int cmd_analyze(const AnalyzeOptions& o) {
    const ProblemBundle pb = load_problem(o.in);
    json j;
    if (!pb.is_ave()) {
        json u;
        const auto rep = check_unique_all_rhs_gave(pb.A, *pb.B, o.enum_cap);
        print_report("unique solvability for every b (Ax - B|x| = b)", rep, u);
        j["unique_all_rhs"] = u;
        write_json_out(o.out, j);
        return kExitOk;
    }
    const AveProblem p = pb.ave();
    json u;
    const auto uniq = check_unique_all_rhs(p.A, o.enum_cap);
    print_report("unique solvability for every b", uniq, u);
    j["unique_all_rhs"] = u;
    const Verdict& exact = uniq.at("exact_regularity");
    if (exact.fails()) {
        std::cout << "  => not regular: [A - I, A + I] contains a singular member\n";
        if (exact.cert.matrix) print_matrix(*exact.cert.matrix, "     ");
    } else if (uniq.unique_for_all_b == Tri::Yes) {
        std::cout << "  => regular: unique solution for every b\n";
    } else {
        std::cout << "  => undecided\n";
    }

    json s;
    const auto uns = check_unsolvable(p);
    print_report("unsolvability certificates", uns, s);
    j["unsolvable"] = s;

    const Verdict exp2n = check_exponential_solutions(p);
    std::printf("exponentially many solutions  %s\n", to_string(exp2n.state));
    j["exponential_solutions"] = verdict_json(exp2n);

    if (const auto sb = try_solution_bounds(p)) {
        std::cout << "solution bounds |x| <= u     " << (sb->empty ? "empty (some u_i < 0)" : vec_str(sb->u)) << "\n";
        j["bounds"] = {{"u", sb->u}, {"empty", sb->empty}};
    }
    if (p.n() <= o.enum_cap) {
        const auto cond = condition_numbers(p.A, 2, o.enum_cap);
        std::cout << "condition number c(A)        " << num(cond.c) << "\n";
        j["condition_number"] = cond.c;
    }
    write_json_out(o.out, j);
    return kExitOk;
}

// ---- enum ----

struct EnumOptions {
    InputOptions in;
    bool prune = false;
    std::size_t enum_cap = kDefaultEnumCap;
    std::string out;
};

int cmd_enum(const EnumOptions& o) {
    const ProblemBundle pb = load_problem(o.in);
    EnumerateOptions opt;
    opt.prune = o.prune;
    opt.enum_cap = o.enum_cap;
    const SolutionSet set = pb.is_ave() ? enumerate_solutions(pb.ave(), opt) : enumerate_solutions(pb.gave(), opt);
    std::cout << set.summary() << "\n";
    json pieces = json::array();
    for (const auto& piece : set.pieces) {
        json pj{{"sign", sign_json(piece.s)}, {"x", piece.x}};
        if (piece.kind == OrthantPiece::Kind::Point) {
            std::cout << "  point   " << sign_str(piece.s) << "  x = " << vec_str(piece.x) << "\n";
            pj["kind"] = "point";
        } else {
            std::cout << "  affine  " << sign_str(piece.s) << "  x0 = " << vec_str(piece.x) << "  dim " << piece.dimension();
            if (piece.dimension() == 1)
                std::cout << "  t in [" << num(piece.t_lo) << ", " << num(piece.t_hi) << "]";
            std::cout << "\n";
            for (const auto& d : piece.directions) std::cout << "          d = " << vec_str(d) << "\n";
            pj["kind"] = piece.is_ray() ? "ray" : "affine";
            pj["directions"] = piece.directions;
            if (piece.dimension() == 1) {
                pj["t_lo"] = std::isfinite(piece.t_lo) ? json(piece.t_lo) : json(nullptr);
                pj["t_hi"] = std::isfinite(piece.t_hi) ? json(piece.t_hi) : json(nullptr);
            }
        }
        pieces.push_back(pj);
    }
    std::cout << "orthants visited " << set.orthants_visited << ", pruned " << set.orthants_pruned
              << (set.complete ? "" : ", incomplete") << "\n";
    write_json_out(o.out, json{{"summary", set.summary()},
                               {"complete", set.complete},
                               {"orthants_visited", set.orthants_visited},
                               {"orthants_pruned", set.orthants_pruned},
                               {"pieces", pieces}});
    return set.empty() && set.complete ? kExitNegative : kExitOk;
}

// ---- correct ----

struct CorrectOptions {
    InputOptions in;
    std::string mode;
    std::size_t enum_cap = kDefaultEnumCap;
    std::string out;
};

int cmd_correct(const CorrectOptions& o) {
    const AveProblem p = load_problem(o.in).ave();
    CorrectionResult r;
    if (o.mode == "rhs") r = correct_rhs(p);
    else if (o.mode == "both") r = correct_both(p);
    else r = correct_chebyshev(p, o.enum_cap);
    std::cout << "mode       " << r.mode << "\n"
              << "objective  " << num(r.objective) << "\n"
              << "infimum    " << num(r.infimum) << "\n"
              << "attained   " << to_string(r.attained) << "\n"
              << "x*         " << vec_str(r.x_star) << "\n"
              << "r          " << vec_str(r.r) << "\n";
    if (!r.R.empty()) {
        std::cout << "R\n";
        print_matrix(r.R, "  ");
    }
    std::cout << "corrected b  " << vec_str(r.corrected_b) << "\n";
    json j{{"mode", r.mode},
           {"objective", r.objective},
           {"infimum", r.infimum},
           {"attained", to_string(r.attained)},
           {"x_star", r.x_star},
           {"r", r.r},
           {"corrected_b", r.corrected_b}};
    if (!r.R.empty()) j["R"] = matrix_json(r.R);
    if (!r.corrected_A.empty()) j["corrected_A"] = matrix_json(r.corrected_A);
    write_json_out(o.out, j);
    return kExitOk;
}

// ---- transform ----

struct TransformOptions {
    std::string input;
    std::string to;
    std::string out;
    std::string variant = "prokopyev";
    std::size_t enum_cap = kDefaultEnumCap;
};

int cmd_transform(const TransformOptions& o) {
    const json src = parse_json_text(read_text_file(o.input), o.input);
    if (o.to == "ave" && src.is_object() && src.contains("Q")) {
        const std::size_t n = src.at("n").get<std::size_t>();
        const Lcp lcp(Matrix::from_row_major(n, n, io::detail::json_numbers(src["Q"], "Q", n * n)),
                      io::detail::json_numbers(src.at("q"), "q", n));
        const LcpToAve t = lcp_to_ave(lcp);
        write_bundle(o.out, ProblemBundle::from_ave(t.ave));
        std::cout << "LCP (n=" << n << ") -> AVE written to " << o.out << "\n";
        return kExitOk;
    }
    const ProblemBundle pb = bundle_from_json(src);
    if (o.to == "lcp") {
        const AveToLcp t = ave_to_lcp(pb.ave());
        write_text_file(o.out, json{{"n", pb.n}, {"Q", t.lcp.Q.data()}, {"q", t.lcp.q}}.dump(2) + "\n");
        std::cout << "AVE (n=" << pb.n << ") -> LCP written to " << o.out << "\n";
    } else if (o.to == "ave") {
        if (pb.is_ave()) throw NotApplicable("input is already a plain AVE");
        const GaveToAve t = gave_to_ave(pb.gave(), GaveReduction::InverseB);
        write_bundle(o.out, ProblemBundle::from_ave(t.ave));
        std::cout << "GAVE -> AVE (B^-1 A x - |x| = B^-1 b) written to " << o.out << "\n";
    } else if (o.to == "gave3n") {
        const GaveToAve t = gave_to_ave(pb.gave(), GaveReduction::Block3n);
        write_bundle(o.out, ProblemBundle::from_ave(t.ave));
        std::cout << "GAVE (n=" << pb.n << ") -> AVE (n=" << t.ave.n() << ") written to " << o.out << "\n";
    } else if (o.to == "milp-mps") {
        const AveProblem p = pb.ave();
        MixedIntegerModel m;
        if (o.variant == "bounded") {
            const auto sb = try_solution_bounds(p);
            if (!sb) throw NotApplicable("bounded model needs rho(|A|) < 1 for the box");
            m = export_milp_bounded(p, *sb);
        } else {
            m = export_milp_prokopyev(p);
        }
        write_mps_file(m, o.out);
        std::cout << o.variant << " MILP (" << m.vars.size() << " columns, " << m.rows.size() << " rows, "
                  << m.num_binary() << " binary) written to " << o.out << "\n";
    } else if (o.to == "hull") {
        const IntervalMatrix ai(pb.A, pb.A_radius ? *pb.A_radius : Matrix(pb.n, pb.n));
        const IntervalVector bi(pb.b, pb.b_radius ? *pb.b_radius : Vector(pb.n, 0.0));
        const HullVertices hv = interval_hull_vertices(ai, bi, o.enum_cap);
        if (!hv.ok()) {
            std::cout << "interval matrix is not regular; hull not available\n";
            write_text_file(o.out, json{{"regularity", verdict_json(hv.regularity)}}.dump(2) + "\n");
            return kExitNegative;
        }
        Vector lo(pb.n, INFINITY), hi(pb.n, -INFINITY);
        json verts = json::array();
        for (const auto& [s, x] : hv.vertices) {
            for (std::size_t i = 0; i < pb.n; ++i) {
                lo[i] = std::min(lo[i], x[i]);
                hi[i] = std::max(hi[i], x[i]);
            }
            verts.push_back({{"sign", sign_json(s)}, {"x", x}});
        }
        write_text_file(o.out, json{{"vertices", verts}, {"lower", lo}, {"upper", hi}}.dump(2) + "\n");
        std::cout << hv.vertices.size() << " hull vertices; box " << vec_str(lo) << " .. " << vec_str(hi) << "\n";
    }
    return kExitOk;
}

// ---- bench ----

struct BenchOptions {
    std::string suite;
    std::string out;
    std::string summary;
    unsigned jobs = 1;
};

int cmd_bench(const BenchOptions& o) {
    const BenchSuite suite = read_suite(o.suite);
    const auto records = run_bench(suite, o.jobs);
    write_text_file(o.out, records_to_csv(records));
    const auto summary = summarize(records);
    const std::string summary_path = o.summary.empty() ? o.out + ".summary.json" : o.summary;
    write_text_file(summary_path, summary_to_json(summary).dump(2) + "\n");
    std::printf("%-24s %6s %10s %9s %9s\n", "solver", "runs", "success", "med.iter", "med.ms");
    for (const auto& s : summary)
        std::printf("%-24s %6zu %9.1f%% %9.1f %9.3f\n", s.solver_id.c_str(), s.runs, 100.0 * s.success_rate, s.median_iterations,
                    s.median_wall_time_ms);
    std::cout << records.size() << " records written to " << o.out << "\n";
    return kExitOk;
}

std::vector<std::string> method_names() {
    std::vector<std::string> out;
    for (const auto& m : methods()) out.emplace_back(m.name);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"avekit: absolute value equation toolkit"};
    app.require_subcommand(1);

    GenOptions gen;
    auto* g = app.add_subcommand("gen", "generate a seeded instance");
    g->add_option("--kind", gen.kind, "generator kind")->required()->check(CLI::IsMember(generator_kinds()));
    g->add_option("--n", gen.n, "dimension")->required()->check(CLI::PositiveNumber);
    g->add_option("--seed", gen.seed, "64-bit seed");
    g->add_option("--param", gen.params, "generator parameter k=v (repeatable)");
    g->add_option("--out,-o", gen.out, "bundle path (stdout when absent)");
    g->add_option("--mm-prefix", gen.mm_prefix, "also write PREFIX_A.mtx and PREFIX_b.mtx");

    SolveOptions solve;
    auto* s = app.add_subcommand("solve", "run one solver");
    add_input_options(s, solve.in);
    s->add_option("--method,-m", solve.method, "solver")->required()->check(CLI::IsMember(method_names()));
    s->add_option("--tol", solve.tol, "relative residual tolerance")->check(CLI::PositiveNumber);
    s->add_option("--max-iters", solve.max_iters, "iteration cap")->check(CLI::PositiveNumber);
    s->add_option("--x0", solve.x0, "starting point")->check(CLI::IsMember({"zero", "picard", "ones", "file"}));
    s->add_option("--x0-file", solve.x0_file, "starting point (Matrix Market vector) for --x0 file");
    s->add_option("--param", solve.params, "solver parameter k=v (repeatable)");
    s->add_option("--enum-cap", solve.enum_cap, "largest n for 2^n enumeration");
    s->add_option("--out,-o", solve.out, "JSON result path");

    AnalyzeOptions analyze;
    auto* a = app.add_subcommand("analyze", "solvability and regularity certificates");
    add_input_options(a, analyze.in);
    a->add_option("--enum-cap", analyze.enum_cap, "largest n for 2^n enumeration");
    a->add_option("--out,-o", analyze.out, "JSON report path");

    EnumOptions en;
    auto* e = app.add_subcommand("enum", "enumerate the full solution set");
    add_input_options(e, en.in);
    e->add_flag("--prune", en.prune, "skip orthants excluded by the solution bounds");
    e->add_option("--enum-cap", en.enum_cap, "largest n for 2^n enumeration");
    e->add_option("--out,-o", en.out, "JSON result path");

    CorrectOptions corr;
    auto* c = app.add_subcommand("correct", "optimal correction of an infeasible system");
    add_input_options(c, corr.in);
    c->add_option("--mode", corr.mode, "correction mode")->required()->check(CLI::IsMember({"rhs", "both", "chebyshev"}));
    c->add_option("--enum-cap", corr.enum_cap, "largest n for 2^n enumeration");
    c->add_option("--out,-o", corr.out, "JSON result path");

    TransformOptions tr;
    auto* t = app.add_subcommand("transform", "rewrite the problem in another form");
    t->add_option("--input,-i", tr.input, "bundle or LCP JSON")->required();
    t->add_option("--to", tr.to, "target form")->required()->check(CLI::IsMember({"lcp", "ave", "milp-mps", "gave3n", "hull"}));
    t->add_option("--out,-o", tr.out, "output path")->required();
    t->add_option("--variant", tr.variant, "MILP model for milp-mps")->check(CLI::IsMember({"prokopyev", "bounded"}));
    t->add_option("--enum-cap", tr.enum_cap, "largest n for 2^n enumeration");

    BenchOptions bench;
    auto* b = app.add_subcommand("bench", "run a benchmark suite");
    b->add_option("--suite", bench.suite, "suite JSON")->required();
    b->add_option("--out,-o", bench.out, "CSV output path")->required();
    b->add_option("--summary", bench.summary, "summary JSON path (default OUT.summary.json)");
    b->add_option("--jobs,-j", bench.jobs, "worker threads")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& ex) {
        return app.exit(ex) == 0 ? kExitOk : kExitInternal;
    }

    try {
        if (*g) return cmd_gen(gen);
        if (*s) return cmd_solve(solve);
        if (*a) return cmd_analyze(analyze);
        if (*e) return cmd_enum(en);
        if (*c) return cmd_correct(corr);
        if (*t) return cmd_transform(tr);
        if (*b) return cmd_bench(bench);
    } catch (const NotApplicable& ex) {
        std::cerr << "not applicable: " << ex.what() << "\n";
        return kExitNegative;
    } catch (const Unsolvable& ex) {
        std::cerr << "unsolvable: " << ex.what() << "\n";
        return kExitNegative;
    } catch (const SingularMatrix& ex) {
        std::cerr << "not applicable: " << ex.what() << "\n";
        return kExitNegative;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitInternal;
    }
    return kExitInternal;
}
