#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "minkgeo/errors.hpp"

namespace minkgeo {

/// Fixed 17-significant-digit decimal formatting; round-trips doubles exactly
/// and keeps CSV output byte-reproducible across runs.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Minimal CSV table: '#' lines are metadata comments, first plain line is the
/// column header.
struct CsvTable {
    std::vector<std::string> comments;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void write(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw InvalidParameter("cannot open for writing: " + path);
        for (const auto& c : comments) out << "# " << c << "\n";
        for (std::size_t i = 0; i < columns.size(); ++i)
            out << columns[i] << (i + 1 < columns.size() ? "," : "\n");
        for (const auto& row : rows)
            for (std::size_t i = 0; i < row.size(); ++i)
                out << row[i] << (i + 1 < row.size() ? "," : "\n");
    }

    static CsvTable read(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw InvalidParameter("cannot open for reading: " + path);
        CsvTable t;
        std::string line;
        bool header_seen = false;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            if (line.front() == '#') {
                t.comments.push_back(line.substr(line.size() > 1 && line[1] == ' ' ? 2 : 1));
                continue;
            }
            std::vector<std::string> cells;
            std::stringstream ss(line);
            std::string cell;
            while (std::getline(ss, cell, ',')) cells.push_back(cell);
            if (!header_seen) {
                t.columns = std::move(cells);
                header_seen = true;
            } else {
                t.rows.push_back(std::move(cells));
            }
        }
        return t;
    }

    std::size_t column_index(const std::string& name) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name) return i;
        throw InvalidParameter("CSV is missing column '" + name + "'");
    }

    std::vector<double> numeric_column(const std::string& name) const {
        const std::size_t idx = column_index(name);
        std::vector<double> out;
        out.reserve(rows.size());
        for (const auto& row : rows) {
            if (idx >= row.size()) throw InvalidParameter("short CSV row");
            out.push_back(std::stod(row[idx]));
        }
        return out;
    }
};

} // namespace minkgeo
