#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "trex/core.hpp"
#include "trex/error.hpp"

namespace trex::io {

struct CsvMatrix {
    Matrix data;
    std::vector<std::string> header;  // empty when the file has no header row
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

inline bool parse_number(std::string_view s, double& out) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return false;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

inline std::string unquote(std::string_view s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    return std::string(s);
}

}  // namespace detail

/// Comma-separated numeric matrix, rows are samples; a first row with any non-numeric field is a header.
inline CsvMatrix parse_csv_matrix(std::istream& in, const std::string& source = "<stream>") {
    CsvMatrix out;
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    std::size_t width = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        const auto fields = detail::split(line);
        std::vector<double> row(fields.size());
        bool numeric = true;
        for (std::size_t i = 0; i < fields.size() && numeric; ++i) numeric = detail::parse_number(fields[i], row[i]);
        if (first && !numeric) {
            for (auto f : fields) out.header.push_back(detail::unquote(f));
            width = fields.size();
            first = false;
            continue;
        }
        first = false;
        if (!numeric) {
            for (std::size_t i = 0; i < fields.size(); ++i)
                if (double v; !detail::parse_number(fields[i], v))
                    throw InputError(source + ":" + std::to_string(line_no) + ": field " + std::to_string(i + 1) +
                                     " is not a number: '" + std::string(fields[i]) + "'");
        }
        if (width == 0) width = fields.size();
        if (fields.size() != width)
            throw InputError(source + ":" + std::to_string(line_no) + ": expected " + std::to_string(width) +
                             " fields, found " + std::to_string(fields.size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw InputError(source + ": no numeric rows");
    out.data.resize(static_cast<Index>(rows.size()), static_cast<Index>(width));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < width; ++j) out.data(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    return out;
}

inline CsvMatrix read_csv_matrix(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path.string() + "'");
    return parse_csv_matrix(in, path.string());
}

inline Vector read_csv_vector(const std::filesystem::path& path) {
    const CsvMatrix m = read_csv_matrix(path);
    if (m.data.cols() != 1)
        throw InputError("'" + path.string() + "' must hold a single column, found " + std::to_string(m.data.cols()));
    return m.data.col(0);
}

/// Dataset from an X file (optional header gives the names) and a single-column y file.
inline Dataset read_dataset(const std::filesystem::path& x_path, const std::filesystem::path& y_path) {
    CsvMatrix x = read_csv_matrix(x_path);
    Vector y = read_csv_vector(y_path);
    if (y.size() != x.data.rows())
        throw InputError("response '" + y_path.string() + "' has " + std::to_string(y.size()) + " rows but '" +
                         x_path.string() + "' has " + std::to_string(x.data.rows()));
    return Dataset(std::move(x.data), std::move(y), std::move(x.header));
}

/// Header plus string fields; used for the mixed-type tables the tools write.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const {
        for (std::size_t j = 0; j < header.size(); ++j)
            if (header[j] == name) return j;
        throw InputError("no column named '" + name + "'");
    }
};

inline CsvTable parse_csv_table(std::istream& in, const std::string& source = "<stream>") {
    CsvTable t;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        std::vector<std::string> fields;
        for (auto f : detail::split(line)) fields.push_back(detail::unquote(f));
        if (t.header.empty()) {
            t.header = std::move(fields);
            continue;
        }
        if (fields.size() != t.header.size())
            throw InputError(source + ":" + std::to_string(line_no) + ": expected " + std::to_string(t.header.size()) +
                             " fields, found " + std::to_string(fields.size()));
        t.rows.push_back(std::move(fields));
    }
    if (t.header.empty()) throw InputError(source + ": empty table");
    return t;
}

inline CsvTable read_csv_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path.string() + "'");
    return parse_csv_table(in, path.string());
}

/// Shortest round-trip decimal representation.
inline std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

inline void write_csv_matrix(std::ostream& out, const Matrix& M, const std::vector<std::string>& header = {}) {
    if (!header.empty()) {
        for (std::size_t j = 0; j < header.size(); ++j) out << (j ? "," : "") << header[j];
        out << '\n';
    }
    for (Index i = 0; i < M.rows(); ++i) {
        for (Index j = 0; j < M.cols(); ++j) out << (j ? "," : "") << format_double(M(i, j));
        out << '\n';
    }
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw InputError("failed writing '" + path.string() + "'");
}

inline std::string json_text(const nlohmann::json& j) { return j.dump(2) + "\n"; }

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j) { write_text(path, json_text(j)); }

inline nlohmann::json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path.string() + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw InputError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

}  // namespace trex::io
