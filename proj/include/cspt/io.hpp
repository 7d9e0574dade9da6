#pragma once

// Plain-text matrix files and table emission.
//
// Matrix file: first line "rows cols", then rows*cols row-major numbers.
// Every number that reaches CSV or JSON goes through format_number, so both
// formats carry identical digits.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cspt/errors.hpp"
#include "cspt/linalg.hpp"

namespace cspt::io {

using Json = nlohmann::ordered_json;

inline Matrix parse_matrix(std::istream& in, const std::string& source) {
    long rows = 0, cols = 0;
    if (!(in >> rows >> cols) || rows < 1 || cols < 1) {
        throw IoError(source + ": expected header 'rows cols' with positive sizes");
    }
    Matrix a(rows, cols);
    for (long i = 0; i < rows; ++i) {
        for (long j = 0; j < cols; ++j) {
            std::string tok;
            if (!(in >> tok)) {
                std::ostringstream os;
                os << source << ": expected " << rows * cols << " values, found " << i * cols + j;
                throw IoError(os.str());
            }
            try {
                std::size_t used = 0;
                a(i, j) = std::stod(tok, &used);
                if (used != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                throw IoError(source + ": not a number: '" + tok + "'");
            }
        }
    }
    std::string extra;
    if (in >> extra) throw IoError(source + ": trailing data after " + std::to_string(rows * cols) + " values");
    return a;
}

inline Matrix read_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    return parse_matrix(in, path);
}

/// A vector file is a matrix file of shape n x 1 or 1 x n.
inline Vector read_vector(const std::string& path) {
    const Matrix m = read_matrix(path);
    if (m.cols() == 1) return m.col(0);
    if (m.rows() == 1) return m.row(0).transpose();
    throw IoError(path + ": vector file must have shape n x 1 or 1 x n");
}

/// Shortest decimal that round-trips the double (at most 17 significant digits).
inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return Json(v).dump();
}

/// JSON value for a number; non-finite values become strings.
inline Json number(double v) {
    if (std::isfinite(v)) return Json(v);
    return Json(format_number(v));
}

inline void write_matrix(std::ostream& out, const Matrix& a) {
    out << a.rows() << ' ' << a.cols() << '\n';
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) out << (j ? " " : "") << format_number(a(i, j));
        out << '\n';
    }
}

inline void write_matrix(const std::string& path, const Matrix& a) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path + "'");
    write_matrix(out, a);
    if (!out) throw IoError("write failed for '" + path + "'");
}

/// FNV-1a 64-bit.
inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::string checksum(std::string_view payload) {
    std::ostringstream os;
    os << "fnv1a64:" << std::hex;
    os.width(16);
    os.fill('0');
    os << fnv1a(payload);
    return os.str();
}

/// Table of preformatted cells. Cells go to CSV verbatim; in JSON a cell that
/// parses as a JSON number is emitted as a number, otherwise as a string.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }

    std::string csv() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
        os << '\n';
        for (const auto& r : rows) {
            for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
            os << '\n';
        }
        return os.str();
    }

    Json json() const {
        Json arr = Json::array();
        for (const auto& r : rows) {
            Json obj = Json::object();
            for (std::size_t i = 0; i < r.size() && i < header.size(); ++i) {
                Json parsed = Json::parse(r[i], nullptr, false);
                obj[header[i]] = parsed.is_number() ? parsed : Json(r[i]);
            }
            arr.push_back(std::move(obj));
        }
        return arr;
    }
};

inline Json envelope(std::string_view command, std::string_view version, const Json& parameters,
                     const Json& payload) {
    Json env = Json::object();
    env["command"] = command;
    env["version"] = version;
    env["parameters"] = parameters;
    env["payload"] = payload;
    env["checksum"] = checksum(payload.dump());
    return env;
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << text;
    if (!out) throw IoError("write failed for '" + path + "'");
}

} // namespace cspt::io
