#include "output.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <fmt/format.h>
#include "json.hpp"

#include "errors.hpp"

namespace tsc {

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t h) { return fmt::format("{:016x}", h); }

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (x == 0.0) x = 0.0;  // no negative zero
    return fmt::format("{:.12e}", x);
}

std::string format_cell(const Cell& c) {
    if (std::holds_alternative<long long>(c)) return std::to_string(std::get<long long>(c));
    if (std::holds_alternative<double>(c)) return format_number(std::get<double>(c));
    if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
    return "";
}

std::string csv_header(const std::string& command, const std::string& hash,
                       const std::vector<std::pair<std::string, std::string>>& meta,
                       const std::vector<std::string>& columns) {
    std::string s = "# trapspec " + command + "\n# config_hash: fnv1a64:" + hash + "\n";
    for (const auto& [k, v] : meta) s += "# " + k + ": " + v + "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) s += (i ? "," : "") + columns[i];
    return s + "\n";
}

std::string csv_row(const std::vector<Cell>& row) {
    std::string s;
    for (std::size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + format_cell(row[i]);
    return s + "\n";
}

std::filesystem::path Emitter::path_for(const std::string& name) const {
    return *dir / (name + (format == Format::csv ? ".csv" : ".json"));
}

namespace {

nlohmann::ordered_json json_cell(const Cell& c) {
    if (std::holds_alternative<long long>(c)) return std::get<long long>(c);
    if (std::holds_alternative<double>(c)) {
        double x = std::get<double>(c);
        if (!std::isfinite(x)) return nullptr;
        return x;
    }
    if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
    return nullptr;
}

std::string render(const Emitter& e, const Table& t) {
    if (e.format == Format::csv) {
        std::string s = csv_header(e.command, e.hash, t.meta, t.columns);
        for (const auto& r : t.rows) s += csv_row(r);
        return s;
    }
    nlohmann::ordered_json j;
    j["tool"] = "trapspec";
    j["command"] = e.command;
    j["table"] = t.name;
    j["config_hash"] = "fnv1a64:" + e.hash;
    auto& meta = j["meta"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : t.meta) meta[k] = v;
    j["columns"] = t.columns;
    auto& rows = j["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : t.rows) {
        auto row = nlohmann::ordered_json::array();
        for (const auto& c : r) row.push_back(json_cell(c));
        rows.push_back(std::move(row));
    }
    return j.dump(1) + "\n";
}

}  // namespace

void Emitter::write(const Table& t) const {
    std::string text = render(*this, t);
    if (!dir) {
        std::cout << text;
        std::cout.flush();
        return;
    }
    auto p = path_for(t.name);
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw CliError(Exit::config, "cannot write " + p.string());
    out << text;
    if (!out) throw CliError(Exit::config, "write failed for " + p.string());
}

int CsvData::column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return static_cast<int>(i);
    return -1;
}

CsvData read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw CliError(Exit::config, "cannot open " + path.string());
    CsvData d;
    std::string line;
    bool header = false;
    auto split = [](const std::string& l) {
        std::vector<std::string> f;
        std::stringstream ss(l);
        std::string x;
        while (std::getline(ss, x, ',')) f.push_back(x);
        if (!l.empty() && l.back() == ',') f.emplace_back();
        return f;
    };
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            d.columns = split(line);
            header = true;
        } else {
            d.rows.push_back(split(line));
            if (d.rows.back().size() != d.columns.size())
                throw CliError(Exit::config, path.string() + ": row with wrong number of fields");
        }
    }
    if (!header) throw CliError(Exit::config, path.string() + ": no header line");
    return d;
}

}  // namespace tsc
