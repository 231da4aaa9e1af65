/**
 * (C) Copyright 2026 the memsyn authors.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <cctype>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>

namespace memsyn {

/**
 * Parse a number with an optional SI prefix and unit, e.g. "20nA", "8ms",
 * "6kohm", "0.9V", "100Hz", "1.8". The unit itself is not checked against a
 * dimension; the prefix scales the value into base units. Explicit suffixes
 * in config files avoid silent pico/nano mistakes.
 */
inline double parse_si(std::string_view text) {
    std::size_t pos = 0;
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    std::size_t end = pos;
    while (end < text.size() &&
           (std::isdigit(static_cast<unsigned char>(text[end])) || text[end] == '+' ||
            text[end] == '-' || text[end] == '.' || text[end] == 'e' || text[end] == 'E')) {
        // 'e' only counts as part of the number when followed by a digit or sign
        if ((text[end] == 'e' || text[end] == 'E') &&
            !(end + 1 < text.size() &&
              (std::isdigit(static_cast<unsigned char>(text[end + 1])) || text[end + 1] == '+' ||
               text[end + 1] == '-')))
            break;
        ++end;
    }
    const std::string num(text.substr(pos, end - pos));
    if (num.empty()) throw std::invalid_argument("parse_si: no number in '" + std::string(text) + "'");
    std::size_t consumed = 0;
    double value = 0.0;
    try {
        value = std::stod(num, &consumed);
    } catch (const std::exception&) {
        throw std::invalid_argument("parse_si: bad number in '" + std::string(text) + "'");
    }
    if (consumed != num.size())
        throw std::invalid_argument("parse_si: bad number in '" + std::string(text) + "'");

    std::string suffix;
    for (std::size_t i = end; i < text.size(); ++i)
        if (!std::isspace(static_cast<unsigned char>(text[i]))) suffix += text[i];
    if (suffix.empty()) return value;

    // Strip a trailing unit word (A, V, s, Hz, ohm, Ohm) before reading the prefix.
    auto strip = [&](std::string_view unit) {
        if (suffix.size() >= unit.size() &&
            std::string_view(suffix).substr(suffix.size() - unit.size()) == unit)
            suffix.erase(suffix.size() - unit.size());
    };
    strip("ohm");
    strip("Ohm");
    strip("Hz");
    strip("A");
    strip("V");
    strip("s");

    if (suffix.empty()) return value;
    if (suffix.size() > 1)
        throw std::invalid_argument("parse_si: unknown suffix in '" + std::string(text) + "'");
    switch (suffix[0]) {
        case 'G': return value * 1e9;
        case 'M': return value * 1e6;
        case 'k': return value * 1e3;
        case 'm': return value * 1e-3;
        case 'u': return value * 1e-6;
        case 'n': return value * 1e-9;
        case 'p': return value * 1e-12;
        case 'f': return value * 1e-15;
        default:
            throw std::invalid_argument("parse_si: unknown prefix in '" + std::string(text) + "'");
    }
}

/// Format a value in base units with an SI prefix and the given unit word.
/// Chooses the prefix that puts the mantissa in [1, 1000) where possible.
inline std::string format_si(double value, std::string_view unit) {
    static constexpr struct { double scale; const char* prefix; } kScales[] = {
        {1e9, "G"}, {1e6, "M"}, {1e3, "k"}, {1.0, ""},
        {1e-3, "m"}, {1e-6, "u"}, {1e-9, "n"}, {1e-12, "p"}, {1e-15, "f"},
    };
    char buf[64];
    if (unit.empty()) {  // dimensionless values stay plain
        std::snprintf(buf, sizeof buf, "%.12g", value);
        return buf;
    }
    if (value == 0.0) {
        std::snprintf(buf, sizeof buf, "0%s", std::string(unit).c_str());
        return buf;
    }
    const double mag = std::abs(value);
    for (const auto& s : kScales) {
        if (mag >= s.scale) {
            std::snprintf(buf, sizeof buf, "%.9g%s%s", value / s.scale, s.prefix,
                          std::string(unit).c_str());
            return buf;
        }
    }
    std::snprintf(buf, sizeof buf, "%.9g%s", value, std::string(unit).c_str());
    return buf;
}

}  // namespace memsyn
