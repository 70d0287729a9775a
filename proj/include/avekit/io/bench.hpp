#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "avekit/io/generate.hpp"
#include "avekit/io/registry.hpp"

namespace avekit::io {

struct GeneratorSpec {
    std::string id;
    std::string kind;
    std::map<std::string, double> params;
};

struct SolverSpec {
    std::string id;
    std::string method;
    std::map<std::string, double> params;
    double tol = kDefaultTol;
    int max_iters = 1000;
};

struct BenchSuite {
    std::vector<GeneratorSpec> generators;
    std::vector<std::size_t> sizes;
    std::vector<std::uint64_t> seeds;
    std::vector<SolverSpec> solvers;
};

struct BenchmarkRecord {
    std::string instance_id;
    std::string generator;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::string solver_id;
    std::string params;
    std::string status;
    int iterations = 0;
    int linear_solves = 0;
    double residual_inf = INFINITY;
    double wall_time_ms = 0.0;
};

struct SolverSummary {
    std::string solver_id;
    std::size_t runs = 0;
    std::size_t converged = 0;
    double success_rate = 0.0;
    double median_iterations = 0.0;  // over converged runs
    double mean_iterations = 0.0;    // over converged runs
    double median_wall_time_ms = 0.0;
};

namespace detail {

inline std::map<std::string, double> json_params(const nlohmann::json& j, const std::string& where) {
    std::map<std::string, double> out;
    if (!j.is_object()) throw ParseError(where + ": expected an object");
    for (const auto& [k, v] : j.items()) {
        if (!v.is_number()) throw ParseError(where + "." + k + ": expected a number");
        out[k] = v.get<double>();
    }
    return out;
}

inline std::string params_label(const std::map<std::string, double>& params) {
    std::string out;
    for (const auto& [k, v] : params) {
        if (!out.empty()) out += ';';
        out += k + "=" + format_double(v);
    }
    return out;
}

inline double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

// Runs fn(0..count-1) on up to `jobs` threads; each index runs exactly once.
template <class F>
void parallel_for(std::size_t count, unsigned jobs, F&& fn) {
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    if (jobs == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (unsigned t = 0; t < jobs; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) fn(i);
        });
    for (auto& th : pool) th.join();
}

}  // namespace detail

// Suite file:
// { "generators": ["sigma_gt1", {"id": ..., "kind": ..., "params": {...}}],
//   "sizes": [50, 100],
//   "seeds": [0, 1] or {"start": 0, "count": 100},
//   "solvers": ["newton", {"id": ..., "method": ..., "params": {...}, "tol": ..., "max_iters": ...}],
//   "tol": 1e-10, "max_iters": 1000 }
inline BenchSuite suite_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ParseError("suite: top level must be an object");
    BenchSuite suite;
    double tol = kDefaultTol;
    int max_iters = 1000;
    if (j.contains("tol")) {
        if (!j["tol"].is_number()) throw ParseError("field 'tol': expected a number");
        tol = j["tol"].get<double>();
    }
    if (j.contains("max_iters")) {
        if (!j["max_iters"].is_number_integer()) throw ParseError("field 'max_iters': expected an integer");
        max_iters = j["max_iters"].get<int>();
    }
    auto array_of = [&](const char* field) -> const nlohmann::json& {
        if (!j.contains(field) || !j[field].is_array() || j[field].empty())
            throw ParseError(std::string("field '") + field + "': expected a non-empty array");
        return j[field];
    };
    for (const auto& g : array_of("generators")) {
        GeneratorSpec spec;
        if (g.is_string()) {
            spec.kind = g.get<std::string>();
        } else if (g.is_object() && g.contains("kind") && g["kind"].is_string()) {
            spec.kind = g["kind"].get<std::string>();
            if (g.contains("id")) spec.id = g["id"].get<std::string>();
            if (g.contains("params")) spec.params = detail::json_params(g["params"], "generators[].params");
        } else {
            throw ParseError("field 'generators': entries must be a kind string or an object with 'kind'");
        }
        if (std::find(generator_kinds().begin(), generator_kinds().end(), spec.kind) == generator_kinds().end())
            throw ParseError("field 'generators': unknown kind '" + spec.kind + "'");
        if (spec.id.empty()) spec.id = spec.kind;
        suite.generators.push_back(std::move(spec));
    }
    for (const auto& s : array_of("sizes")) {
        if (!s.is_number_unsigned() || s.get<std::size_t>() == 0) throw ParseError("field 'sizes': entries must be positive integers");
        suite.sizes.push_back(s.get<std::size_t>());
    }
    if (!j.contains("seeds")) throw ParseError("field 'seeds': missing");
    const auto& seeds = j["seeds"];
    if (seeds.is_array()) {
        for (const auto& s : seeds) {
            if (!s.is_number_unsigned()) throw ParseError("field 'seeds': entries must be non-negative integers");
            suite.seeds.push_back(s.get<std::uint64_t>());
        }
    } else if (seeds.is_object() && seeds.contains("count") && seeds["count"].is_number_unsigned()) {
        const std::uint64_t start = seeds.contains("start") ? seeds["start"].get<std::uint64_t>() : 0;
        const std::uint64_t count = seeds["count"].get<std::uint64_t>();
        for (std::uint64_t k = 0; k < count; ++k) suite.seeds.push_back(start + k);
    } else {
        throw ParseError("field 'seeds': expected an array or {\"start\", \"count\"}");
    }
    if (suite.seeds.empty()) throw ParseError("field 'seeds': no seeds");
    for (const auto& s : array_of("solvers")) {
        SolverSpec spec;
        spec.tol = tol;
        spec.max_iters = max_iters;
        if (s.is_string()) {
            spec.method = s.get<std::string>();
        } else if (s.is_object() && s.contains("method") && s["method"].is_string()) {
            spec.method = s["method"].get<std::string>();
            if (s.contains("id")) spec.id = s["id"].get<std::string>();
            if (s.contains("params")) spec.params = detail::json_params(s["params"], "solvers[].params");
            if (s.contains("tol")) spec.tol = s["tol"].get<double>();
            if (s.contains("max_iters")) spec.max_iters = s["max_iters"].get<int>();
        } else {
            throw ParseError("field 'solvers': entries must be a method string or an object with 'method'");
        }
        if (!is_method(spec.method)) throw ParseError("field 'solvers': unknown method '" + spec.method + "'");
        if (spec.id.empty()) spec.id = spec.method;
        suite.solvers.push_back(std::move(spec));
    }
    return suite;
}

inline BenchSuite read_suite(const std::string& path) { return suite_from_json(parse_json_text(read_text_file(path), path)); }

inline std::string instance_id(const GeneratorSpec& g, std::size_t n, std::uint64_t seed) {
    return g.id + "-n" + std::to_string(n) + "-s" + std::to_string(seed);
}

// One record per (instance, solver) pair, ordered by generator, size, seed,
// solver regardless of which worker finished first. Failures are recorded.
inline std::vector<BenchmarkRecord> run_bench(const BenchSuite& suite, unsigned jobs = 1) {
    struct Inst {
        const GeneratorSpec* gen;
        std::size_t n;
        std::uint64_t seed;
        std::optional<ProblemBundle> bundle;
        std::string error;
    };
    std::vector<Inst> insts;
    for (const auto& g : suite.generators)
        for (std::size_t n : suite.sizes)
            for (std::uint64_t s : suite.seeds) insts.push_back({&g, n, s, std::nullopt, {}});
    detail::parallel_for(insts.size(), jobs, [&](std::size_t i) {
        auto& in = insts[i];
        try {
            in.bundle = gen_instance(in.gen->kind, in.n, in.seed, in.gen->params);
        } catch (const GenerationFailed&) {
            in.error = "GenerationFailed";
        } catch (const std::exception&) {
            in.error = "Error";
        }
    });
    const std::size_t ns = suite.solvers.size();
    std::vector<BenchmarkRecord> records(insts.size() * ns);
    detail::parallel_for(records.size(), jobs, [&](std::size_t k) {
        const Inst& in = insts[k / ns];
        const SolverSpec& sv = suite.solvers[k % ns];
        BenchmarkRecord& r = records[k];
        r.instance_id = instance_id(*in.gen, in.n, in.seed);
        r.generator = in.gen->id;
        r.n = in.n;
        r.seed = in.seed;
        r.solver_id = sv.id;
        r.params = detail::params_label(sv.params);
        if (!in.bundle) {
            r.status = in.error;
            return;
        }
        SolverConfig cfg;
        cfg.tol = sv.tol;
        cfg.max_iters = sv.max_iters;
        cfg.params = sv.params;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            const SolveOutcome out = run_method(sv.method, *in.bundle, cfg);
            r.status = to_string(out.status);
            r.iterations = out.iterations;
            r.linear_solves = out.linear_solves;
            r.residual_inf = out.residual_inf;
        } catch (const std::exception&) {
            r.status = "Error";
        }
        const auto t1 = std::chrono::steady_clock::now();
        r.wall_time_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    });
    return records;
}

inline const char* kBenchCsvHeader =
    "instance_id,generator,n,seed,solver_id,params,status,iterations,linear_solves,residual_inf,wall_time_ms";

inline std::string records_to_csv(const std::vector<BenchmarkRecord>& records) {
    std::string out = std::string(kBenchCsvHeader) + "\n";
    char ms[64];
    for (const auto& r : records) {
        std::snprintf(ms, sizeof ms, "%.3f", r.wall_time_ms);
        out += detail::csv_field(r.instance_id) + "," + detail::csv_field(r.generator) + "," + std::to_string(r.n) + "," +
               std::to_string(r.seed) + "," + detail::csv_field(r.solver_id) + "," + detail::csv_field(r.params) + "," +
               r.status + "," + std::to_string(r.iterations) + "," + std::to_string(r.linear_solves) + "," +
               format_double(r.residual_inf) + "," + ms + "\n";
    }
    return out;
}

inline std::vector<SolverSummary> summarize(const std::vector<BenchmarkRecord>& records) {
    std::vector<SolverSummary> out;
    std::map<std::string, std::size_t> index;
    std::vector<std::vector<double>> iters, times;
    for (const auto& r : records) {
        auto [it, fresh] = index.emplace(r.solver_id, out.size());
        if (fresh) {
            out.push_back({r.solver_id});
            iters.emplace_back();
            times.emplace_back();
        }
        const std::size_t k = it->second;
        ++out[k].runs;
        times[k].push_back(r.wall_time_ms);
        if (r.status == "Converged") {
            ++out[k].converged;
            iters[k].push_back(r.iterations);
        }
    }
    for (std::size_t k = 0; k < out.size(); ++k) {
        auto& s = out[k];
        s.success_rate = s.runs ? static_cast<double>(s.converged) / static_cast<double>(s.runs) : 0.0;
        s.median_iterations = detail::median(iters[k]);
        double sum = 0.0;
        for (double v : iters[k]) sum += v;
        s.mean_iterations = iters[k].empty() ? 0.0 : sum / static_cast<double>(iters[k].size());
        s.median_wall_time_ms = detail::median(times[k]);
    }
    return out;
}

inline nlohmann::json summary_to_json(const std::vector<SolverSummary>& summary) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& s : summary)
        arr.push_back({{"solver_id", s.solver_id},
                       {"runs", s.runs},
                       {"converged", s.converged},
                       {"success_rate", s.success_rate},
                       {"median_iterations", s.median_iterations},
                       {"mean_iterations", s.mean_iterations},
                       {"median_wall_time_ms", s.median_wall_time_ms}});
    return {{"solvers", arr}};
}

}  // namespace avekit::io
