#pragma once

#include <string>
#include <vector>

namespace pursuit {

// Flat numeric table with a header row. All run artifacts use this shape.
struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    int column_index(const std::string& name) const;  // -1 when absent

    // Column extracted as a vector; throws when the name is unknown.
    std::vector<double> column(const std::string& name) const;
};

// Doubles are printed with max_digits10 precision so a written table reads
// back bit-identically and same-seed reruns diff to zero.
void write_csv(const CsvTable& table, const std::string& path);
CsvTable read_csv(const std::string& path);

struct CompareReport {
    bool schema_match = false;
    bool row_count_match = false;
    bool identical = false;  // zero max-abs diff over all shared cells
    double worst_diff = 0.0;
    std::string worst_column;
    std::vector<std::pair<std::string, double>> per_column;  // max abs diff each
};

// Field-wise comparison; throws on schema mismatch.
CompareReport compare_tables(const CsvTable& a, const CsvTable& b);

std::string format_report(const CompareReport& rep);

}  // namespace pursuit
