#include "cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace cgl::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& text) {
    const std::string t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size())
        throw ConfigError("not a number: '" + text + "'");
    return v;
}

bool parse_bool(const std::string& text) {
    const std::string t = trim(text);
    if (t == "true" || t == "1") return true;
    if (t == "false" || t == "0") return false;
    throw ConfigError("not a boolean: '" + text + "'");
}

Sign parse_sign(const std::string& text) {
    const double v = parse_number(text);
    if (v == 1.0) return Sign::plus;
    if (v == -1.0) return Sign::minus;
    throw ConfigError("sign must be +1 or -1, got '" + text + "'");
}

double positive(const std::string& key, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(key + " must be positive");
    return v;
}

}  // namespace

void KeyValues::set(const std::string& key, const std::string& value, const std::string& origin) {
    values_[key] = value;
    origins_[key] = origin;
}

void KeyValues::overlay(const KeyValues& other) {
    for (const auto& [k, v] : other.values_) set(k, v, other.origins_.at(k));
}

std::optional<std::string> KeyValues::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

bool KeyValues::has_prefix(const std::string& prefix) const {
    return std::any_of(values_.begin(), values_.end(),
                       [&](const auto& kv) { return kv.first.rfind(prefix, 0) == 0; });
}

KeyValues parse_config_text(const std::string& text, const std::string& origin) {
    KeyValues kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const std::string where = origin + ":" + std::to_string(lineno);
        if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(where + ": empty key");
        if (kv.has(key)) throw ConfigError(where + ": duplicate key '" + key + "'");
        kv.set(key, value, where);
    }
    return kv;
}

KeyValues load_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_config_text(buf.str(), path);
}

KeyValues paper_defaults() {
    KeyValues kv;
    const std::string origin = "--paper-defaults";
    kv.set("model.eps1", "1", origin);
    kv.set("model.eps2", "1", origin);
    kv.set("model.lambda1", "0.1", origin);
    kv.set("model.lambda2", "1.0", origin);
    kv.set("shooting.chi0", "0.3, sqrt(0.2), sqrt(0.4), sqrt(0.6), sqrt(0.8), 1, sqrt(1.2), sqrt(1.4)", origin);
    return kv;
}

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys{
        "model.eps1",          "model.eps2",          "model.lambda1",        "model.lambda2",
        "model.mu1",           "model.mu2",           "physical.Lambda1",     "physical.Lambda2",
        "physical.Lambda3",    "physical.m1",         "physical.m2",          "physical.phi0",
        "shooting.chi0",       "shooting.phi0",       "shooting.mu1_min",     "shooting.mu1_max",
        "shooting.mu2_min",    "shooting.mu2_max",    "shooting.mu_tol",      "shooting.constraint_tol",
        "shooting.x_max_limit", "shooting.nesting",   "shooting.warm_start",  "shooting.workers",
        "integrator.rel_tol",  "integrator.abs_tol",  "integrator.initial_step", "integrator.max_step",
        "integrator.x_max",    "integrator.escape_radius", "integrator.max_samples",
        "output.dir",          "output.format",       "output.profile_points",
    };
    return keys;
}

double parse_scalar(const std::string& text) {
    const std::string t = trim(text);
    if (t.rfind("sqrt(", 0) == 0 && t.size() > 6 && t.back() == ')') {
        const double inner = parse_number(t.substr(5, t.size() - 6));
        if (inner < 0.0) throw ConfigError("sqrt of a negative number: '" + text + "'");
        return std::sqrt(inner);
    }
    return parse_number(t);
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        if (trim(item).empty()) continue;
        out.push_back(parse_scalar(item));
    }
    return out;
}

RunConfig resolve(const KeyValues& kv) {
    const auto& keys = known_keys();
    for (const auto& [k, v] : kv.values())
        if (std::find(keys.begin(), keys.end(), k) == keys.end())
            throw ConfigError(kv.origin(k) + ": unknown key '" + k + "'");

    const bool dimensionless = kv.has("model.lambda1") || kv.has("model.lambda2") || kv.has("model.mu1") ||
                               kv.has("model.mu2");
    const bool dimensionful = kv.has_prefix("physical.");
    if (dimensionless && dimensionful)
        throw ConfigError("give either model.lambda*/mu* or physical.*, not both");

    RunConfig c;
    auto num = [&](const std::string& key, double& dst) {
        if (auto v = kv.get(key)) dst = parse_scalar(*v);
    };
    auto pos = [&](const std::string& key, double& dst) {
        if (auto v = kv.get(key)) dst = positive(key, parse_scalar(*v));
    };

    if (auto v = kv.get("model.eps1")) c.eps1 = parse_sign(*v);
    if (auto v = kv.get("model.eps2")) c.eps2 = parse_sign(*v);
    if (dimensionful) {
        DimensionfulParams d;
        num("physical.Lambda1", d.Lambda1);
        num("physical.Lambda2", d.Lambda2);
        num("physical.Lambda3", d.Lambda3);
        num("physical.phi0", d.phi0);
        const bool masses = kv.has("physical.m1") || kv.has("physical.m2");
        if (masses && !(kv.has("physical.m1") && kv.has("physical.m2")))
            throw ConfigError("physical.m1 and physical.m2 go together");
        d.m1 = d.phi0;
        d.m2 = d.phi0;
        num("physical.m1", d.m1);
        num("physical.m2", d.m2);
        ModelParams p;
        try {
            p = nondimensionalize(d, c.eps1, c.eps2);
        } catch (const std::exception& e) {
            throw ConfigError(std::string("physical block: ") + e.what());
        }
        c.lambda1 = p.lambda1;
        c.lambda2 = p.lambda2;
        if (masses) {
            c.mu1 = p.mu1;
            c.mu2 = p.mu2;
        }
    } else {
        num("model.lambda1", c.lambda1);
        num("model.lambda2", c.lambda2);
        if (auto v = kv.get("model.mu1")) c.mu1 = positive("model.mu1", parse_scalar(*v));
        if (auto v = kv.get("model.mu2")) c.mu2 = positive("model.mu2", parse_scalar(*v));
    }
    if (!std::isfinite(c.lambda1) || !std::isfinite(c.lambda2)) throw ConfigError("couplings must be finite");

    if (auto v = kv.get("shooting.chi0")) {
        c.chi0 = parse_list(*v);
        for (double x : c.chi0)
            if (!(x > 0.0)) throw ConfigError("shooting.chi0 values must be positive");
    }
    pos("shooting.phi0", c.phi0);
    auto bracket = [&](const std::string& lo, const std::string& hi, std::optional<Bracket>& dst,
                       Bracket fallback) {
        if (!kv.has(lo) && !kv.has(hi)) return;
        Bracket b = fallback;
        pos(lo, b.lo);
        pos(hi, b.hi);
        if (!(b.hi > b.lo)) throw ConfigError(lo + " must be below " + hi);
        dst = b;
    };
    const ShootSpec reference = default_spec(0.3);
    bracket("shooting.mu1_min", "shooting.mu1_max", c.mu1_bracket, reference.mu1_bracket);
    bracket("shooting.mu2_min", "shooting.mu2_max", c.mu2_bracket, reference.mu2_bracket);
    pos("shooting.mu_tol", c.mu_tol);
    pos("shooting.constraint_tol", c.constraint_tol);
    pos("shooting.x_max_limit", c.x_max_limit);
    if (auto v = kv.get("shooting.nesting")) {
        if (*v == "mu1_outer") c.nesting = Nesting::mu1_outer;
        else if (*v == "mu2_outer") c.nesting = Nesting::mu2_outer;
        else throw ConfigError("shooting.nesting must be mu1_outer or mu2_outer");
    }
    if (auto v = kv.get("shooting.warm_start")) c.warm_start = parse_bool(*v);
    if (auto v = kv.get("shooting.workers")) {
        const double w = parse_number(*v);
        if (!(w >= 1.0) || w != std::floor(w) || w > 1024) throw ConfigError("shooting.workers must be a positive integer");
        c.workers = static_cast<int>(w);
    }

    pos("integrator.rel_tol", c.integrator.rel_tol);
    pos("integrator.abs_tol", c.integrator.abs_tol);
    pos("integrator.initial_step", c.integrator.initial_step);
    pos("integrator.max_step", c.integrator.max_step);
    pos("integrator.x_max", c.integrator.x_max);
    if (auto v = kv.get("integrator.escape_radius")) c.integrator.escape_radius = positive("integrator.escape_radius", parse_scalar(*v));
    if (auto v = kv.get("integrator.max_samples")) {
        const double n = parse_number(*v);
        if (!(n >= 2.0) || n != std::floor(n)) throw ConfigError("integrator.max_samples must be an integer >= 2");
        c.integrator.max_samples = static_cast<std::size_t>(n);
    }
    if (c.x_max_limit < c.integrator.x_max) throw ConfigError("shooting.x_max_limit must be >= integrator.x_max");

    if (auto v = kv.get("output.dir")) {
        if (v->empty()) throw ConfigError("output.dir must not be empty");
        c.out_dir = *v;
    }
    if (auto v = kv.get("output.format")) {
        if (*v == "csv") c.format = Format::csv;
        else if (*v == "json") c.format = Format::json;
        else throw ConfigError("output.format must be csv or json");
    }
    if (auto v = kv.get("output.profile_points")) {
        const double n = parse_number(*v);
        if (!(n >= 2.0) || n != std::floor(n)) throw ConfigError("output.profile_points must be an integer >= 2");
        c.profile_points = static_cast<std::size_t>(n);
    }
    return c;
}

ModelParams RunConfig::fixed_point_model() const {
    // first row of the reference sweep
    ModelParams p{eps1, eps2, lambda1, lambda2, mu1.value_or(1.25104535), mu2.value_or(1.1056305)};
    return p;
}

ShootSpec RunConfig::shoot_spec(double chi0) const {
    ShootSpec s = default_spec(chi0, phi0);
    s.eps1 = eps1;
    s.eps2 = eps2;
    s.lambda1 = lambda1;
    s.lambda2 = lambda2;
    if (mu1_bracket) s.mu1_bracket = *mu1_bracket;
    if (mu2_bracket) s.mu2_bracket = *mu2_bracket;
    s.mu_tol = mu_tol;
    s.constraint_tol = constraint_tol;
    s.integrator = integrator;
    s.x_max_limit = x_max_limit;
    s.nesting = nesting;
    return s;
}

}  // namespace cgl::cli
