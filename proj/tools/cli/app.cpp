#include "cli/app.hpp"

#include <filesystem>
#include <ostream>

#include <CLI11.hpp>

#include "cgl/errors.hpp"
#include "cli/commands.hpp"
#include "cli/config.hpp"

namespace cgl::cli {

namespace {

// Pulls "--section.key=value" / "--section.key value" out of the argument
// list; everything else goes to the regular parser.
KeyValues extract_overrides(std::vector<std::string>& args) {
    KeyValues kv;
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a.rfind("--", 0) != 0) {
            rest.push_back(a);
            continue;
        }
        const auto eq = a.find('=');
        const std::string key = a.substr(2, eq == std::string::npos ? std::string::npos : eq - 2);
        if (key.find('.') == std::string::npos) {
            rest.push_back(a);
            continue;
        }
        std::string value;
        if (eq != std::string::npos) {
            value = a.substr(eq + 1);
        } else {
            if (i + 1 >= args.size()) throw ConfigError("missing value for --" + key);
            value = args[++i];
        }
        kv.set(key, value, "--" + key);
    }
    args = std::move(rest);
    return kv;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Two-field kink solver: fixed points, eigenvalue shooting and table export", "cgl"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string out_dir;
    std::string format;
    bool paper = false;
    int workers = 0;
    app.add_option("--config", config_path, "flat key = value configuration file");
    app.add_option("--out", out_dir, "output directory (output.dir)");
    app.add_option("--format", format, "csv or json (output.format)")->check(CLI::IsMember({"csv", "json"}));
    app.add_flag("--paper-defaults", paper, "load the reference couplings and the eight chi0 values");
    app.add_option("--workers", workers, "concurrent sweep rows (shooting.workers)")->check(CLI::PositiveNumber);
    app.footer("Any configuration key can be overridden as --section.key=value, e.g. --model.lambda1=0.1");

    auto* fp = app.add_subcommand("fixed-points", "classify the fixed points of the model");
    auto* solve = app.add_subcommand("solve", "find the eigenvalue pair for a single chi0");
    auto* sw = app.add_subcommand("sweep", "solve every chi0 and export the tables");
    auto* rs = app.add_subcommand("rescale", "map a table2 CSV to table3 (or back with --inverse)");
    std::string input;
    bool inverse = false;
    rs->add_option("input", input, "input CSV")->required();
    rs->add_flag("--inverse", inverse, "table3 -> table2");

    try {
        std::vector<std::string> args = raw_args;
        const KeyValues overrides = extract_overrides(args);
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);

        KeyValues kv;
        if (paper) kv.overlay(paper_defaults());
        if (!config_path.empty()) kv.overlay(load_config_file(config_path));
        KeyValues flags;
        if (!out_dir.empty()) flags.set("output.dir", out_dir, "--out");
        if (!format.empty()) flags.set("output.format", format, "--format");
        if (workers > 0) flags.set("shooting.workers", std::to_string(workers), "--workers");
        kv.overlay(flags);
        kv.overlay(overrides);
        const RunConfig cfg = resolve(kv);

        if (fp->parsed()) return cmd_fixed_points(cfg, out);
        if (solve->parsed()) return cmd_solve(cfg, out, err);
        if (sw->parsed()) return cmd_sweep(cfg, out, err);
        std::optional<std::filesystem::path> dir;
        if (kv.has("output.dir")) dir = cfg.out_dir;
        return cmd_rescale(cfg, input, inverse, dir, out);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : config_error;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const DomainError& e) {
        err << "invalid input: " << e.what() << '\n';
        return config_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return solver_failure;
    } catch (...) {
        err << "error: unknown failure\n";
        return solver_failure;
    }
}

}  // namespace cgl::cli
