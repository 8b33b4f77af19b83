#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "catenoid_ac/errors.hpp"

namespace catenoid_ac {

/// Locale-free rendering with 17 significant digits.
inline std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    if (res.ec != std::errc()) throw IoError("format_double: conversion failed");
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
    double x = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw IoError("parse_double: not a number: '" + std::string(s) + "'");
    }
    return x;
}

using CsvRow = std::vector<double>;

/// Appends one row, comma separated, LF terminated.
inline void append_row(std::ostream& os, const CsvRow& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) os << ',';
        os << format_double(row[i]);
    }
    os << '\n';
}

inline void append_header(std::ostream& os, const std::vector<std::string>& header) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) os << ',';
        os << header[i];
    }
    os << '\n';
}

inline std::ofstream open_output(const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    return os;
}

/// Overwrites `path` with the header and rows.
inline void write_csv(const std::string& path, const std::vector<std::string>& header,
                      const std::vector<CsvRow>& rows) {
    auto os = open_output(path);
    append_header(os, header);
    for (const auto& row : rows) append_row(os, row);
    os.flush();
    if (!os) throw IoError("write to '" + path + "' failed");
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<CsvRow> rows;
};

inline std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

/// Reads a numeric CSV written by write_csv; lines starting with '#' are skipped.
inline CsvTable read_csv(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open '" + path + "' for reading");
    CsvTable table;
    std::string line;
    if (!std::getline(is, line)) return table;
    table.header = split_fields(line);
    while (std::getline(is, line)) {
        if (line.empty() || line.front() == '#') continue;
        CsvRow row;
        for (const auto& f : split_fields(line)) row.push_back(parse_double(f));
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace catenoid_ac
