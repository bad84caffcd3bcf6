#include "cli/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gcpc_cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

double parse_double(const std::string& s, std::size_t line_no) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw std::runtime_error("csv: unparseable numeric value '" + s + "' on line " +
                                 std::to_string(line_no));
    return v;
}

}  // namespace

const std::vector<double>& CsvTable::column(const std::string& spec) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == spec) return columns[i];
    // fall back to a 0-based index
    std::size_t idx = 0;
    const auto [ptr, ec] = std::from_chars(spec.data(), spec.data() + spec.size(), idx);
    if (ec == std::errc() && ptr == spec.data() + spec.size() && idx < columns.size())
        return columns[idx];
    throw std::runtime_error("csv: no column named '" + spec + "'");
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("csv: '" + path + "' is empty");
    CsvTable t;
    t.header = split(line);
    if (t.header.empty()) throw std::runtime_error("csv: header row required");
    t.columns.resize(t.header.size());
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split(line);
        if (cells.size() != t.header.size())
            throw std::runtime_error("csv: line " + std::to_string(line_no) + " has " +
                                     std::to_string(cells.size()) + " cells, expected " +
                                     std::to_string(t.header.size()));
        for (std::size_t i = 0; i < cells.size(); ++i)
            t.columns[i].push_back(parse_double(cells[i], line_no));
    }
    return t;
}

std::string format_csv(const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& columns) {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) {
        out += header[i];
        out += (i + 1 < header.size()) ? ',' : '\n';
    }
    const std::size_t rows = columns.empty() ? 0 : columns[0].size();
    char buf[64];
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", columns[c][r]);
            out += buf;
            out += (c + 1 < columns.size()) ? ',' : '\n';
        }
    }
    return out;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << format_csv(header, columns);
}

}  // namespace gcpc_cli
