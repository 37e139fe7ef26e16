#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace tsc {

using Cell = std::variant<std::monostate, long long, double, std::string>;

struct Table {
    std::string name;  // file stem
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

enum class Format { csv, json };

std::uint64_t fnv1a64(const std::string& data);
std::string hex64(std::uint64_t h);
// Fixed scientific notation; NaN prints as "nan".
std::string format_number(double x);
std::string format_cell(const Cell& c);

std::string csv_header(const std::string& command, const std::string& hash,
                       const std::vector<std::pair<std::string, std::string>>& meta,
                       const std::vector<std::string>& columns);
std::string csv_row(const std::vector<Cell>& row);

struct Emitter {
    std::string command;
    std::string hash;
    Format format = Format::csv;
    std::optional<std::filesystem::path> dir;  // stdout when empty

    std::filesystem::path path_for(const std::string& name) const;
    void write(const Table& t) const;
};

// Minimal CSV reader for files written by this tool: '#' lines skipped, first
// remaining line is the header.
struct CsvData {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    int column(const std::string& name) const;  // -1 if absent
};
CsvData read_csv(const std::filesystem::path& path);

}  // namespace tsc
