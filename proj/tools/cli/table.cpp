#include "cli/table.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace cgl::cli {

namespace fs = std::filesystem;

void Table::add(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw std::logic_error("row width does not match the header of " + name);
    rows.push_back(std::move(row));
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string cell_text(const Cell& c) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) return format_number(v);
            else if constexpr (std::is_same_v<T, long long>) return std::to_string(v);
            else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
            else return csv_field(v);
        },
        c);
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(line);
    while (std::getline(in, item, ',')) out.push_back(trim(item));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

void write_csv(std::ostream& out, const Table& t) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << csv_field(t.columns[i]);
    out << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_text(row[i]);
        out << '\n';
    }
}

void write_json(std::ostream& out, const Table& t) {
    nlohmann::ordered_json records = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json rec = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i)
            std::visit([&](const auto& v) { rec[t.columns[i]] = v; }, row[i]);
        records.push_back(std::move(rec));
    }
    out << records.dump(2) << '\n';
}

void write(std::ostream& out, const Table& t, Format f) {
    if (f == Format::json) write_json(out, t);
    else write_csv(out, t);
}

fs::path write_file(const fs::path& dir, const Table& t, Format f) {
    fs::create_directories(dir);
    const fs::path target = dir / (t.name + (f == Format::json ? ".json" : ".csv"));
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        write(out, t, f);
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, target);
    return target;
}

std::vector<std::vector<double>> read_numeric_csv(const fs::path& path, const std::vector<std::string>& header) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read table '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line)) throw ConfigError(path.string() + ": empty file");
    const auto got = split(line);
    if (got != header) {
        std::string want;
        for (const auto& h : header) want += (want.empty() ? "" : ",") + h;
        throw ConfigError(path.string() + ": expected header '" + want + "'");
    }
    std::vector<std::vector<double>> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto fields = split(line);
        if (fields.size() != header.size())
            throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": wrong number of columns");
        std::vector<double> row;
        for (const auto& f : fields) {
            try {
                row.push_back(parse_scalar(f));
            } catch (const ConfigError&) {
                throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": not a number: '" + f + "'");
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace cgl::cli
