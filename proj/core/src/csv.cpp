#include "pursuit/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace pursuit {

int CsvTable::column_index(const std::string& name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    return it == columns.end() ? -1 : static_cast<int>(it - columns.begin());
}

std::vector<double> CsvTable::column(const std::string& name) const {
    const int c = column_index(name);
    if (c < 0) throw std::runtime_error("CsvTable: no column \"" + name + "\"");
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows) out.push_back(row[size_t(c)]);
    return out;
}

void write_csv(const CsvTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path);
    for (size_t c = 0; c < table.columns.size(); ++c) {
        if (c) out << ',';
        out << table.columns[c];
    }
    out << '\n';
    char buf[64];
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size())
            throw std::runtime_error("write_csv: ragged row in " + path);
        for (size_t c = 0; c < row.size(); ++c) {
            if (c) out << ',';
            std::snprintf(buf, sizeof(buf), "%.17g", row[c]);
            out << buf;
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write_csv: write failed for " + path);
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_csv: cannot open " + path);
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("read_csv: empty file " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) table.columns.push_back(cell);

    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        row.reserve(table.columns.size());
        std::stringstream rs(line);
        while (std::getline(rs, cell, ',')) {
            try {
                size_t used = 0;
                row.push_back(std::stod(cell, &used));
                if (used != cell.size()) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw std::runtime_error("read_csv: " + path + ":" + std::to_string(lineno) +
                                         ": bad number \"" + cell + "\"");
            }
        }
        if (row.size() != table.columns.size())
            throw std::runtime_error("read_csv: " + path + ":" + std::to_string(lineno) +
                                     ": expected " + std::to_string(table.columns.size()) +
                                     " cells, got " + std::to_string(row.size()));
        table.rows.push_back(std::move(row));
    }
    return table;
}

CompareReport compare_tables(const CsvTable& a, const CsvTable& b) {
    if (a.columns != b.columns)
        throw std::runtime_error("compare_tables: schema mismatch");
    CompareReport rep;
    rep.schema_match = true;
    rep.row_count_match = a.rows.size() == b.rows.size();
    const size_t nrows = std::min(a.rows.size(), b.rows.size());
    for (size_t c = 0; c < a.columns.size(); ++c) {
        double worst = 0.0;
        for (size_t r = 0; r < nrows; ++r) {
            const double x = a.rows[r][c], y = b.rows[r][c];
            double d;
            if (std::isnan(x) && std::isnan(y))
                d = 0.0;
            else if (!std::isfinite(x) || !std::isfinite(y))
                d = (x == y) ? 0.0 : std::numeric_limits<double>::infinity();
            else
                d = std::abs(x - y);
            worst = std::max(worst, d);
        }
        rep.per_column.emplace_back(a.columns[c], worst);
        if (worst > rep.worst_diff) {
            rep.worst_diff = worst;
            rep.worst_column = a.columns[c];
        }
    }
    rep.identical = rep.row_count_match && rep.worst_diff == 0.0;
    return rep;
}

std::string format_report(const CompareReport& rep) {
    std::ostringstream os;
    os << (rep.identical ? "IDENTICAL" : "DIFFERENT") << "\n";
    if (!rep.row_count_match) os << "row counts differ\n";
    for (const auto& [name, diff] : rep.per_column)
        if (diff > 0.0) os << name << " max_abs_diff=" << diff << "\n";
    if (!rep.identical && rep.worst_diff > 0.0)
        os << "worst: " << rep.worst_column << " " << rep.worst_diff << "\n";
    return os.str();
}

}  // namespace pursuit
