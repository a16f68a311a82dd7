#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "lqw/errors.hpp"

namespace lqw::csv {

/// Shortest decimal text that parses back to exactly `v`.
inline std::string format_double(double v)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s)
{
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw std::runtime_error("csv: bad number '" + std::string(s) + "'");
    }
    return v;
}

inline std::int64_t parse_int(std::string_view s)
{
    std::int64_t v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw std::runtime_error("csv: bad integer '" + std::string(s) + "'");
    }
    return v;
}

inline std::vector<std::string> split_row(const std::string& line)
{
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) {
        cells.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        cells.emplace_back();
    }
    return cells;
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

inline Table read(std::istream& in)
{
    Table t;
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("csv: missing header");
    }
    t.header = split_row(line);
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        auto row = split_row(line);
        if (row.size() != t.header.size()) {
            throw std::runtime_error("csv: row width does not match header");
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

/// Opens `path` for writing or throws std::runtime_error naming the path.
inline std::ofstream open_output(const std::string& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open '" + path + "' for writing");
    }
    return out;
}

} // namespace lqw::csv
