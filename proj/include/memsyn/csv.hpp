/**
 * (C) Copyright 2026 the memsyn authors.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace memsyn {

using CsvValue = std::variant<double, long long, std::string>;

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<CsvValue>> rows;

    void add_row(std::vector<CsvValue> row) { rows.push_back(std::move(row)); }
};

/// 15 significant digits; scientific notation for small nonzero magnitudes.
inline std::string format_csv_number(double x) {
    char buf[40];
    if (x != 0.0 && std::abs(x) < 1e-3)
        std::snprintf(buf, sizeof buf, "%.14e", x);
    else
        std::snprintf(buf, sizeof buf, "%.15g", x);
    return buf;
}

inline std::string format_csv_value(const CsvValue& v) {
    if (const auto* d = std::get_if<double>(&v)) return format_csv_number(*d);
    if (const auto* i = std::get_if<long long>(&v)) return std::to_string(*i);
    const std::string& s = std::get<std::string>(v);
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

/// Write a table as RFC-4180-style CSV with a header row. Fails before any
/// byte is written if the path cannot be opened.
inline void write_csv(const CsvTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path);
    std::string line;
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (i) line += ',';
        line += table.header[i];
    }
    line += '\n';
    out << line;
    for (const auto& row : table.rows) {
        line.clear();
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) line += ',';
            line += format_csv_value(row[i]);
        }
        line += '\n';
        out << line;
    }
    if (!out) throw std::runtime_error("write_csv: write failure on " + path);
}

}  // namespace memsyn
