#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cgl/integrator.hpp"
#include "cgl/model.hpp"
#include "cgl/shooting.hpp"

namespace cgl::cli {

/// Bad configuration: unknown key, malformed value, conflicting blocks.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Format { csv, json };

/// Raw key/value layers, later layers win. Keys are dotted: "model.lambda1".
class KeyValues {
public:
    void set(const std::string& key, const std::string& value, const std::string& origin);
    /// Merge another layer on top of this one.
    void overlay(const KeyValues& other);
    std::optional<std::string> get(const std::string& key) const;
    bool has(const std::string& key) const { return values_.count(key) != 0; }
    bool has_prefix(const std::string& prefix) const;
    const std::map<std::string, std::string>& values() const { return values_; }
    const std::string& origin(const std::string& key) const { return origins_.at(key); }

private:
    std::map<std::string, std::string> values_;
    std::map<std::string, std::string> origins_;
};

/// Flat "key = value" text; '#' starts a comment. Duplicate keys are errors.
KeyValues parse_config_text(const std::string& text, const std::string& origin);
KeyValues load_config_file(const std::string& path);

/// The reference preset: eps = (+1, +1), lambda = (0.1, 1.0) and the eight
/// chi0 values of the reference sweep.
KeyValues paper_defaults();

const std::vector<std::string>& known_keys();

struct RunConfig {
    Sign eps1 = Sign::plus;
    Sign eps2 = Sign::plus;
    double lambda1 = 0.1;
    double lambda2 = 1.0;
    std::optional<double> mu1;  // only used by fixed-points
    std::optional<double> mu2;

    std::vector<double> chi0;
    double phi0 = 1.0;
    std::optional<Bracket> mu1_bracket;
    std::optional<Bracket> mu2_bracket;
    double mu_tol = 1e-12;
    double constraint_tol = 1e-4;
    double x_max_limit = 160.0;
    Nesting nesting = Nesting::mu1_outer;
    bool warm_start = true;
    int workers = 1;

    IntegratorConfig integrator;

    std::string out_dir = "results";
    Format format = Format::csv;
    std::size_t profile_points = 1024;

    /// Model for fixed-point analysis; mu defaults to the first sweep row.
    ModelParams fixed_point_model() const;
    /// Shooting setup for one chi0.
    ShootSpec shoot_spec(double chi0) const;
};

/// Validates keys and values and builds the typed configuration.
RunConfig resolve(const KeyValues& kv);

/// "0.3" or "sqrt(0.2)".
double parse_scalar(const std::string& text);
std::vector<double> parse_list(const std::string& text);

}  // namespace cgl::cli
