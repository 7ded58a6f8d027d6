#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "cli/config.hpp"

namespace cgl::cli {

using Cell = std::variant<double, long long, bool, std::string>;

struct Table {
    std::string name;  // file stem
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row);
};

/// Shortest decimal that reads back to the same double.
std::string format_number(double v);

void write_csv(std::ostream& out, const Table& t);
void write_json(std::ostream& out, const Table& t);
void write(std::ostream& out, const Table& t, Format f);

/// Writes dir/<name>.csv or .json through a temporary file and a rename.
std::filesystem::path write_file(const std::filesystem::path& dir, const Table& t, Format f);

/// Reads a numeric CSV (cells may also be written as sqrt(x)) after checking
/// its header. Throws ConfigError on any mismatch.
std::vector<std::vector<double>> read_numeric_csv(const std::filesystem::path& path,
                                                  const std::vector<std::string>& header);

}  // namespace cgl::cli
