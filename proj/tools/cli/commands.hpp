#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "cli/config.hpp"

namespace cgl::cli {

int cmd_fixed_points(const RunConfig& cfg, std::ostream& out);
int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err);
/// Writes to out_dir when given, otherwise to `out`.
int cmd_rescale(const RunConfig& cfg, const std::filesystem::path& input, bool inverse,
                const std::optional<std::filesystem::path>& out_dir, std::ostream& out);

}  // namespace cgl::cli
