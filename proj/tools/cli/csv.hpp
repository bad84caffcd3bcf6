#pragma once

#include <string>
#include <vector>

namespace gcpc_cli {

/// Strict CSV: comma separated, required header row, '.' decimal point,
/// UTF-8, no quoting. Parsing is locale-independent.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;  // column-major

    std::size_t rows() const { return columns.empty() ? 0 : columns[0].size(); }

    /// Column by name, or by 0-based index when `spec` is an integer that
    /// does not match any header name.
    const std::vector<double>& column(const std::string& spec) const;
};

CsvTable read_csv(const std::string& path);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);
std::string format_csv(const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& columns);

}  // namespace gcpc_cli
