#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "avekit/core/errors.hpp"
#include "avekit/core/matrix.hpp"
#include "avekit/core/problem.hpp"

namespace avekit::io {

inline constexpr int kSchemaVersion = 1;

struct BundleMetadata {
    std::optional<std::string> kind;
    std::optional<std::uint64_t> seed;
    std::map<std::string, double> params;

    friend bool operator==(const BundleMetadata&, const BundleMetadata&) = default;
};

// On-disk problem instance. B absent means the plain AVE (B = I).
// A_radius / b_radius describe an interval system centred at (A, b).
struct ProblemBundle {
    int schema_version = kSchemaVersion;
    std::size_t n = 0;
    Matrix A;
    std::optional<Matrix> B;
    Vector b;
    std::optional<Matrix> A_radius;
    std::optional<Vector> b_radius;
    std::optional<BundleMetadata> metadata;

    friend bool operator==(const ProblemBundle&, const ProblemBundle&) = default;

    static ProblemBundle from_ave(const AveProblem& p) {
        ProblemBundle out;
        out.n = p.n();
        out.A = p.A;
        out.b = p.b;
        return out;
    }

    bool is_ave() const { return !B || *B == Matrix::identity(n); }
    AveProblem ave() const {
        if (!is_ave()) throw NotApplicable("bundle carries B != I; this operation needs a plain AVE");
        return {A, b};
    }
    GaveProblem gave() const { return {A, B ? *B : Matrix::identity(n), b}; }

    void validate() const {
        if (schema_version != kSchemaVersion) throw ParseError("unsupported schema_version " + std::to_string(schema_version));
        if (n == 0) throw ParseError("field 'n': must be at least 1");
        if (A.rows() != n || A.cols() != n) throw ParseError("field 'A': expected " + std::to_string(n * n) + " entries");
        if (B && (B->rows() != n || B->cols() != n)) throw ParseError("field 'B': expected " + std::to_string(n * n) + " entries");
        if (b.size() != n) throw ParseError("field 'b': expected " + std::to_string(n) + " entries");
        if (A_radius && (A_radius->rows() != n || A_radius->cols() != n))
            throw ParseError("field 'A_radius': expected " + std::to_string(n * n) + " entries");
        if (b_radius && b_radius->size() != n) throw ParseError("field 'b_radius': expected " + std::to_string(n) + " entries");
    }
};

namespace detail {

inline Vector json_numbers(const nlohmann::json& j, const char* field, std::size_t expect) {
    if (!j.is_array()) throw ParseError(std::string("field '") + field + "': expected an array of numbers");
    if (j.size() != expect)
        throw ParseError(std::string("field '") + field + "': expected " + std::to_string(expect) + " entries, found " +
                         std::to_string(j.size()));
    Vector out;
    out.reserve(expect);
    for (std::size_t k = 0; k < j.size(); ++k) {
        if (!j[k].is_number())
            throw ParseError(std::string("field '") + field + "': entry " + std::to_string(k) + " is not a number");
        out.push_back(j[k].get<double>());
    }
    return out;
}

inline void require_finite(const Vector& v, const char* field) {
    for (std::size_t k = 0; k < v.size(); ++k)
        if (!std::isfinite(v[k])) throw ParseError(std::string("field '") + field + "': entry " + std::to_string(k) + " is not finite");
}

}  // namespace detail

inline nlohmann::json to_json(const ProblemBundle& pb) {
    pb.validate();
    nlohmann::json j;
    j["schema_version"] = pb.schema_version;
    j["n"] = pb.n;
    j["A"] = pb.A.data();
    if (pb.B) j["B"] = pb.B->data();
    j["b"] = pb.b;
    if (pb.A_radius) j["A_radius"] = pb.A_radius->data();
    if (pb.b_radius) j["b_radius"] = *pb.b_radius;
    if (pb.metadata) {
        nlohmann::json m = nlohmann::json::object();
        if (pb.metadata->kind) m["kind"] = *pb.metadata->kind;
        if (pb.metadata->seed) m["seed"] = *pb.metadata->seed;
        if (!pb.metadata->params.empty()) m["params"] = pb.metadata->params;
        j["metadata"] = m;
    }
    return j;
}

inline ProblemBundle bundle_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ParseError("bundle: top level must be an object");
    ProblemBundle pb;
    if (j.contains("schema_version")) {
        if (!j["schema_version"].is_number_integer()) throw ParseError("field 'schema_version': expected an integer");
        pb.schema_version = j["schema_version"].get<int>();
    }
    if (!j.contains("n") || !j["n"].is_number_unsigned()) throw ParseError("field 'n': expected a positive integer");
    pb.n = j["n"].get<std::size_t>();
    if (pb.n == 0) throw ParseError("field 'n': must be at least 1");
    const std::size_t n = pb.n;
    auto square = [&](const char* field) {
        if (!j.contains(field)) throw ParseError(std::string("field '") + field + "': missing");
        auto v = detail::json_numbers(j[field], field, n * n);
        detail::require_finite(v, field);
        return Matrix::from_row_major(n, n, std::move(v));
    };
    auto vec = [&](const char* field) {
        if (!j.contains(field)) throw ParseError(std::string("field '") + field + "': missing");
        auto v = detail::json_numbers(j[field], field, n);
        detail::require_finite(v, field);
        return v;
    };
    pb.A = square("A");
    if (j.contains("B")) pb.B = square("B");
    pb.b = vec("b");
    if (j.contains("A_radius")) pb.A_radius = square("A_radius");
    if (j.contains("b_radius")) pb.b_radius = vec("b_radius");
    if (j.contains("metadata")) {
        const auto& m = j["metadata"];
        if (!m.is_object()) throw ParseError("field 'metadata': expected an object");
        BundleMetadata md;
        if (m.contains("kind")) {
            if (!m["kind"].is_string()) throw ParseError("field 'metadata.kind': expected a string");
            md.kind = m["kind"].get<std::string>();
        }
        if (m.contains("seed")) {
            if (!m["seed"].is_number_unsigned()) throw ParseError("field 'metadata.seed': expected a non-negative integer");
            md.seed = m["seed"].get<std::uint64_t>();
        }
        if (m.contains("params")) {
            if (!m["params"].is_object()) throw ParseError("field 'metadata.params': expected an object");
            for (const auto& [k, v] : m["params"].items()) {
                if (!v.is_number()) throw ParseError("field 'metadata.params." + k + "': expected a number");
                md.params[k] = v.get<double>();
            }
        }
        pb.metadata = md;
    }
    pb.validate();
    return pb;
}

inline nlohmann::json parse_json_text(const std::string& text, const std::string& what) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(what + ": " + e.what());
    }
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << text;
    if (!out) throw Error("write failed for " + path);
}

inline std::string bundle_to_string(const ProblemBundle& pb) { return to_json(pb).dump(2) + "\n"; }
inline ProblemBundle bundle_from_string(const std::string& text) { return bundle_from_json(parse_json_text(text, "bundle")); }
inline void write_bundle(const std::string& path, const ProblemBundle& pb) { write_text_file(path, bundle_to_string(pb)); }
inline ProblemBundle read_bundle(const std::string& path) { return bundle_from_json(parse_json_text(read_text_file(path), path)); }

// ---- Matrix Market, dense "array real general" ----

inline std::string format_double(double v) {
    char buf[32];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

inline std::string write_matrix_market(const Matrix& m) {
    std::string out = "%%MatrixMarket matrix array real general\n";
    out += std::to_string(m.rows()) + " " + std::to_string(m.cols()) + "\n";
    for (std::size_t j = 0; j < m.cols(); ++j)
        for (std::size_t i = 0; i < m.rows(); ++i) out += format_double(m(i, j)) + "\n";
    return out;
}

inline std::string write_matrix_market(const Vector& v) {
    return write_matrix_market(Matrix::from_row_major(v.size(), 1, v));
}

inline Matrix parse_matrix_market(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    auto lower = [](std::string s) {
        for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        return s;
    };
    if (!std::getline(in, line)) throw ParseError("line 1: empty file");
    ++lineno;
    {
        std::istringstream hs(line);
        std::string banner, object, format, field, symmetry;
        hs >> banner >> object >> format >> field >> symmetry;
        if (banner != "%%MatrixMarket") throw ParseError("line 1: missing %%MatrixMarket banner");
        if (lower(object) != "matrix") throw ParseError("line 1: object '" + object + "' is not 'matrix'");
        if (lower(format) != "array") throw ParseError("line 1: format '" + format + "' is not 'array'");
        if (lower(field) != "real") throw ParseError("line 1: field '" + field + "' is not 'real'");
        if (lower(symmetry) != "general") throw ParseError("line 1: symmetry '" + symmetry + "' is not 'general'");
    }
    auto next_content = [&](std::string& out) {
        while (std::getline(in, line)) {
            ++lineno;
            const auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos || line[first] == '%') continue;
            out = line;
            return true;
        }
        return false;
    };
    std::string content;
    if (!next_content(content)) throw ParseError("line " + std::to_string(lineno + 1) + ": missing size line");
    std::size_t rows = 0, cols = 0;
    {
        std::istringstream ss(content);
        std::string extra;
        if (!(ss >> rows >> cols) || (ss >> extra))
            throw ParseError("line " + std::to_string(lineno) + ": size line must hold two integers");
    }
    const std::size_t total = rows * cols;
    std::vector<double> col_major;
    col_major.reserve(total);
    while (next_content(content)) {
        std::istringstream ss(content);
        std::string tok;
        while (ss >> tok) {
            if (col_major.size() == total)
                throw ParseError("line " + std::to_string(lineno) + ": more than " + std::to_string(total) + " entries");
            double v = 0.0;
            const char* first = tok.data();
            if (*first == '+') ++first;
            auto r = std::from_chars(first, tok.data() + tok.size(), v);
            if (r.ec != std::errc{} || r.ptr != tok.data() + tok.size() || !std::isfinite(v))
                throw ParseError("line " + std::to_string(lineno) + ": entry '" + tok + "' is not a finite real");
            col_major.push_back(v);
        }
    }
    if (col_major.size() != total)
        throw ParseError("line " + std::to_string(lineno) + ": expected " + std::to_string(total) + " entries, found " +
                         std::to_string(col_major.size()));
    Matrix m(rows, cols);
    for (std::size_t j = 0, k = 0; j < cols; ++j)
        for (std::size_t i = 0; i < rows; ++i) m(i, j) = col_major[k++];
    return m;
}

inline Vector parse_matrix_market_vector(const std::string& text) {
    const Matrix m = parse_matrix_market(text);
    if (m.cols() != 1) throw ParseError("vector file must have exactly one column");
    return m.column(0);
}

inline Matrix read_matrix_market(const std::string& path) {
    try {
        return parse_matrix_market(read_text_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

inline Vector read_matrix_market_vector(const std::string& path) {
    try {
        return parse_matrix_market_vector(read_text_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

}  // namespace avekit::io
