#include "cgl/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <sstream>

#include "cgl/errors.hpp"
#include "cgl/fixed_points.hpp"
#include "cgl/observables.hpp"

namespace cgl {

namespace {

enum class Side { none, up, down };

double value_of(const FieldState& s, Field f) { return f == Field::phi ? s.phi : s.chi; }
double slope_of(const FieldState& s, Field f) { return f == Field::phi ? s.z : s.v; }
double target_of(const ModelParams& p, Field f) { return f == Field::phi ? p.mu1 : 0.0; }

Verdict verdict_of(Field f, Side side) {
    if (side == Side::none) return Verdict::undecided;
    if (f == Field::phi) return side == Side::up ? Verdict::phi_escape_up : Verdict::phi_escape_down;
    return side == Side::up ? Verdict::chi_escape_up : Verdict::chi_escape_down;
}

// Watches one field on its way from the initial value toward its value at A.
class DepartureWatch {
public:
    DepartureWatch(const ModelParams& p, Field field, const FieldState& init)
        : field_(field), target_(target_of(p, field)) {
        const double gap = target_ - value_of(init, field);
        approach_ = gap > 0.0 ? 1 : (gap < 0.0 ? -1 : 0);
    }

    // Returns true once the field has decided.
    bool observe(const FieldState& s) {
        if (side_ != Side::none) return true;
        const double dev = value_of(s, field_) - target_;
        if (approach_ == 0) {
            if (dev != 0.0) side_ = dev > 0.0 ? Side::up : Side::down;
        } else if (dev * approach_ > 0.0) {
            side_ = approach_ > 0 ? Side::up : Side::down;  // overshot the target
        } else if (slope_of(s, field_) * approach_ < 0.0) {
            side_ = approach_ > 0 ? Side::down : Side::up;  // turned back
        }
        if (side_ != Side::none) x_ = s.x;
        return side_ != Side::none;
    }

    Side side() const { return side_; }
    double x() const { return x_; }

private:
    Field field_;
    double target_;
    int approach_ = 0;
    Side side_ = Side::none;
    double x_ = 0.0;
};

// Sign of the growing linear mode of one field about its target at s.
Side growing_mode_side(const ModelParams& p, const FieldState& s, Field f) {
    const Matrix4 j = jacobian(p, s);
    const double q = f == Field::phi ? j[2][0] : j[3][1];
    const double sigma = std::sqrt(std::max(q, 0.0));
    const double proj = sigma * (value_of(s, f) - target_of(p, f)) + slope_of(s, f);
    if (proj > 0.0) return Side::up;
    if (proj < 0.0) return Side::down;
    return Side::none;
}

Verdict escape_verdict(const Termination& t) {
    if (t.kind != Termination::Kind::field_escaped) return Verdict::undecided;
    return verdict_of(t.field, t.sign > 0 ? Side::up : Side::down);
}

// A two-parameter shooting problem: `outer` is bisected against the verdict
// of `outer_field`, `inner` against that of the other field.
struct Problem {
    std::function<ModelParams(double outer, double inner)> model;
    std::function<std::pair<double, double>(double outer, double inner)> start;
    Field outer_field = Field::phi;
    Bracket outer_bracket;
    Bracket inner_bracket;
    double tol = 1e-8;
    IntegratorConfig cfg;
    double x_max_limit = 160.0;

    Field inner_field() const { return outer_field == Field::phi ? Field::chi : Field::phi; }
};

struct BisectionOutcome {
    double root = 0.0;
    double width = 0.0;
    std::vector<Probe> history;
};

class Shooter {
public:
    explicit Shooter(Problem problem) : pb_(std::move(problem)), cfg_(pb_.cfg) {}

    Verdict probe(double outer, double inner, Field field) {
        while (true) {
            const ModelParams p = pb_.model(outer, inner);
            const auto [phi0, chi0] = pb_.start(outer, inner);
            const Trajectory t = shoot(p, phi0, chi0, cfg_);
            const Verdict v = field_verdict(p, t, field);
            if (v != Verdict::undecided || cfg_.x_max >= pb_.x_max_limit) return v;
            // Still hugging A at the horizon: look further out.
            cfg_.x_max = std::min(2.0 * cfg_.x_max, pb_.x_max_limit);
        }
    }

    BisectionOutcome bisect_inner(double outer) {
        return bisect(pb_.inner_bracket, ShootingError::Level::inner,
                      [&](double inner) { return probe(outer, inner, pb_.inner_field()); });
    }

    // Outer verdict at the inner-converged partner value.
    Verdict outer_verdict(double outer, std::vector<Probe>* inner_history = nullptr) {
        const BisectionOutcome in = bisect_inner(outer);
        if (inner_history) *inner_history = in.history;
        return probe(outer, in.root, pb_.outer_field);
    }

    BisectionOutcome bisect_outer() {
        return bisect(pb_.outer_bracket, ShootingError::Level::outer,
                      [&](double outer) { return outer_verdict(outer); });
    }

    const IntegratorConfig& config() const { return cfg_; }

private:
    BisectionOutcome bisect(Bracket br, ShootingError::Level level, const std::function<Verdict(double)>& f) {
        BisectionOutcome out;
        std::size_t undecided = 0;
        auto eval = [&](double x) {
            const Verdict v = f(x);
            out.history.push_back({x, v});
            if (v == Verdict::undecided) ++undecided;
            return v;
        };
        const Verdict lo = eval(br.lo);
        const Verdict hi = eval(br.hi);
        if (lo == Verdict::undecided && hi == Verdict::undecided)
            throw ShootingError(ShootingError::Reason::undecided_dominated, level,
                                "both bracket ends undecided at the horizon limit");
        if (lo == Verdict::undecided || hi == Verdict::undecided || lo == hi) {
            std::ostringstream msg;
            msg << "verdicts at [" << br.lo << ", " << br.hi << "] are " << to_string(lo) << " / "
                << to_string(hi);
            throw ShootingError(ShootingError::Reason::unbracketed, level, msg.str());
        }
        while (br.width() > pb_.tol) {
            const double mid = br.mid();
            if (mid <= br.lo || mid >= br.hi) break;  // bracket at floating-point resolution
            const Verdict v = eval(mid);
            if (v == Verdict::undecided) {
                if (2 * undecided > out.history.size())
                    throw ShootingError(ShootingError::Reason::undecided_dominated, level,
                                        "most probes undecided at the horizon limit");
                throw ShootingError(ShootingError::Reason::undecided_dominated, level,
                                    "probe undecided at the horizon limit");
            }
            if (v == lo)
                br.lo = mid;
            else if (v == hi)
                br.hi = mid;
            else {
                std::ostringstream msg;
                msg << "verdict " << to_string(v) << " at " << mid << " matches neither endpoint";
                throw ShootingError(ShootingError::Reason::unbracketed, level, msg.str());
            }
        }
        out.root = br.mid();
        out.width = br.width();
        return out;
    }

    Problem pb_;
    IntegratorConfig cfg_;
};

std::size_t closest_approach(const ModelParams& p, const Trajectory& t) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    const auto s = t.samples();
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double dphi = s[i].phi - p.mu1;
        const double d = dphi * dphi + s[i].chi * s[i].chi + s[i].z * s[i].z + s[i].v * s[i].v;
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

// Last index of the initial run over which both |chi| and |phi - mu1| shrink.
std::size_t monotone_approach_end(const ModelParams& p, const Trajectory& t) {
    const auto s = t.samples();
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (std::abs(s[i].chi) > std::abs(s[i - 1].chi) ||
            std::abs(s[i].phi - p.mu1) > std::abs(s[i - 1].phi - p.mu1))
            return i - 1;
    }
    return s.empty() ? 0 : s.size() - 1;
}

// Integrates the converged parameters once more and cuts the solution where
// it passes closest to A, or earlier if the approach stops being monotone.
struct Converged {
    Trajectory trajectory;
    double x_end = 0.0;
};

Converged converged_solution(const ModelParams& p, double phi0, double chi0, const IntegratorConfig& cfg) {
    const Trajectory full = integrate(p, FieldState{0.0, phi0, chi0, 0.0, 0.0}, cfg);
    const std::size_t idx = std::min(closest_approach(p, full), monotone_approach_end(p, full));
    const double x_end = full.samples()[idx].x;
    if (idx == 0) throw ShootingError(ShootingError::Reason::integration_failed, ShootingError::Level::final,
                                      "solution never approaches the fixed point A");
    return {full.truncated(x_end, Termination{}), x_end};
}

}  // namespace

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::phi_escape_up: return "phi_escape_up";
        case Verdict::phi_escape_down: return "phi_escape_down";
        case Verdict::chi_escape_up: return "chi_escape_up";
        case Verdict::chi_escape_down: return "chi_escape_down";
        case Verdict::undecided: return "undecided";
    }
    return "?";
}

std::string_view to_string(ShootingError::Reason r) {
    switch (r) {
        case ShootingError::Reason::unbracketed: return "unbracketed";
        case ShootingError::Reason::undecided_dominated: return "undecided_dominated";
        case ShootingError::Reason::constraint_violation: return "constraint_violation";
        case ShootingError::Reason::integration_failed: return "integration_failed";
    }
    return "?";
}

std::string_view to_string(ShootingError::Level l) {
    switch (l) {
        case ShootingError::Level::inner: return "inner";
        case ShootingError::Level::outer: return "outer";
        case ShootingError::Level::final: return "final";
    }
    return "?";
}

ShootingError::ShootingError(Reason reason, Level level, const std::string& detail)
    : std::runtime_error(std::string(to_string(reason)) + " (" + std::string(to_string(level)) +
                         " level): " + detail),
      reason_(reason),
      level_(level) {}

ShootSpec default_spec(double chi0, double phi0) {
    ShootSpec s;
    s.phi0 = phi0;
    s.chi0 = chi0;
    s.mu1_bracket = {std::max(phi0, chi0), 5.0};
    s.mu2_bracket = {0.5, 5.0};
    return s;
}

void validate(const ShootSpec& spec) {
    auto good = [](const Bracket& b) { return b.lo > 0.0 && b.hi > b.lo && std::isfinite(b.hi); };
    if (!good(spec.mu1_bracket) || !good(spec.mu2_bracket))
        throw DomainError("brackets must be nonempty with positive endpoints");
    if (!(spec.mu_tol > 0.0)) throw DomainError("mu_tol must be positive");
    if (!std::isfinite(spec.phi0) || !std::isfinite(spec.chi0)) throw DomainError("initial values must be finite");
    if (!(spec.x_max_limit >= spec.integrator.x_max)) throw DomainError("x_max_limit must be >= integrator x_max");
}

ModelParams model_of(const ShootSpec& spec, double mu1, double mu2) {
    return ModelParams{spec.eps1, spec.eps2, spec.lambda1, spec.lambda2, mu1, mu2};
}

TrajectoryClass classify_trajectory(const ModelParams& p, const Trajectory& t) {
    if (t.empty()) return {};
    DepartureWatch phi(p, Field::phi, t.front());
    DepartureWatch chi(p, Field::chi, t.front());
    const auto s = t.samples();
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (phi.observe(s[i])) return {verdict_of(Field::phi, phi.side()), phi.x()};
        if (chi.observe(s[i])) return {verdict_of(Field::chi, chi.side()), chi.x()};
    }
    return {escape_verdict(t.termination()), t.back().x};
}

Verdict field_verdict(const ModelParams& p, const Trajectory& t, Field field) {
    if (t.empty()) return Verdict::undecided;
    DepartureWatch watch(p, field, t.front());
    const auto s = t.samples();
    for (std::size_t i = 1; i < s.size(); ++i)
        if (watch.observe(s[i])) return verdict_of(field, watch.side());
    if (t.termination().kind == Termination::Kind::reached_x_max) return Verdict::undecided;
    return verdict_of(field, growing_mode_side(p, t.back(), field));
}

Trajectory shoot(const ModelParams& p, double phi0, double chi0, const IntegratorConfig& cfg) {
    const FieldState init{0.0, phi0, chi0, 0.0, 0.0};
    DepartureWatch phi(p, Field::phi, init);
    DepartureWatch chi(p, Field::chi, init);
    return integrate(p, init, cfg, [&](const FieldState& s) {
        const bool a = phi.observe(s);
        const bool b = chi.observe(s);
        return a && b;
    });
}

Mu2Search bisect_mu2(const ShootSpec& spec, double mu1) {
    validate(spec);
    Problem pb;
    pb.model = [&](double, double mu2) { return model_of(spec, mu1, mu2); };
    pb.start = [&](double, double) { return std::pair{spec.phi0, spec.chi0}; };
    pb.outer_field = Field::phi;
    pb.inner_bracket = spec.mu2_bracket;
    pb.tol = spec.mu_tol;
    pb.cfg = spec.integrator;
    pb.x_max_limit = spec.x_max_limit;
    Shooter shooter(pb);
    BisectionOutcome out = shooter.bisect_inner(mu1);
    return {out.root, out.width, std::move(out.history)};
}

EigenResult solve_eigenpair(const ShootSpec& spec) {
    validate(spec);
    const bool mu1_outer = spec.nesting == Nesting::mu1_outer;
    Problem pb;
    if (mu1_outer)
        pb.model = [&](double a, double b) { return model_of(spec, a, b); };
    else
        pb.model = [&](double a, double b) { return model_of(spec, b, a); };
    pb.start = [&](double, double) { return std::pair{spec.phi0, spec.chi0}; };
    pb.outer_field = mu1_outer ? Field::phi : Field::chi;
    pb.outer_bracket = mu1_outer ? spec.mu1_bracket : spec.mu2_bracket;
    pb.inner_bracket = mu1_outer ? spec.mu2_bracket : spec.mu1_bracket;
    pb.tol = spec.mu_tol;
    pb.cfg = spec.integrator;
    pb.x_max_limit = spec.x_max_limit;

    Shooter shooter(pb);
    const BisectionOutcome outer = shooter.bisect_outer();
    const BisectionOutcome inner = shooter.bisect_inner(outer.root);

    EigenResult r;
    r.phi0 = spec.phi0;
    r.chi0 = spec.chi0;
    r.mu1 = mu1_outer ? outer.root : inner.root;
    r.mu2 = mu1_outer ? inner.root : outer.root;
    r.bracket_width_mu1 = mu1_outer ? outer.width : inner.width;
    r.bracket_width_mu2 = mu1_outer ? inner.width : outer.width;
    r.params = model_of(spec, r.mu1, r.mu2);
    r.x_max_used = shooter.config().x_max;

    r.constraint_residual = std::abs(potential(r.params, spec.phi0, spec.chi0));
    for (double s1 : {-0.5, 0.5})
        for (double s2 : {-0.5, 0.5}) {
            const ModelParams corner =
                model_of(spec, r.mu1 + s1 * r.bracket_width_mu1, r.mu2 + s2 * r.bracket_width_mu2);
            r.constraint_bound = std::max(r.constraint_bound, std::abs(potential(corner, spec.phi0, spec.chi0)));
        }
    if (r.constraint_residual > spec.constraint_tol) {
        std::ostringstream msg;
        msg << "|V(phi0, chi0)| = " << r.constraint_residual << " at mu1 = " << r.mu1 << ", mu2 = " << r.mu2;
        throw ShootingError(ShootingError::Reason::constraint_violation, ShootingError::Level::final, msg.str());
    }

    IntegratorConfig cfg = spec.integrator;
    cfg.x_max = r.x_max_used;
    Converged sol = converged_solution(r.params, spec.phi0, spec.chi0, cfg);
    r.trajectory = std::move(sol.trajectory);
    r.residual_phi = std::abs(r.trajectory.back().phi - r.mu1);
    r.residual_chi = std::abs(r.trajectory.back().chi);
    r.total_energy = total_energy(r.params, r.trajectory);
    return r;
}

std::vector<SweepRow> sweep(const std::vector<double>& chi0_values, const ShootSpec& base,
                            const SweepOptions& options) {
    std::vector<double> order = chi0_values;
    std::sort(order.begin(), order.end());

    auto solve_row = [&](double chi0, const std::optional<EigenResult>& previous) {
        SweepRow row;
        row.chi0 = chi0;
        if (!(chi0 > 0.0)) {
            row.error = "chi0 must be positive";
            return row;
        }
        ShootSpec spec = base;
        spec.chi0 = chi0;
        spec.mu1_bracket.lo = std::max(spec.mu1_bracket.lo, std::max(spec.phi0, chi0));
        if (previous) {
            ShootSpec warm = spec;
            warm.mu1_bracket.lo = std::max(warm.mu1_bracket.lo, previous->mu1);
            warm.mu2_bracket.lo = std::max(warm.mu2_bracket.lo, previous->mu2);
            try {
                if (warm.mu1_bracket.lo < warm.mu1_bracket.hi && warm.mu2_bracket.lo < warm.mu2_bracket.hi) {
                    row.result = solve_eigenpair(warm);
                    return row;
                }
            } catch (const std::exception&) {
                // fall back to the cold bracket below
            }
        }
        try {
            row.result = solve_eigenpair(spec);
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        return row;
    };

    std::vector<SweepRow> rows;
    rows.reserve(order.size());
    if (options.warm_start || options.workers <= 1) {
        std::optional<EigenResult> previous;
        for (double chi0 : order) {
            rows.push_back(solve_row(chi0, options.warm_start ? previous : std::nullopt));
            if (rows.back().result) previous = rows.back().result;
        }
        return rows;
    }

    rows.resize(order.size());
    std::size_t next = 0;
    while (next < order.size()) {
        std::vector<std::future<SweepRow>> batch;
        for (unsigned w = 0; w < options.workers && next < order.size(); ++w, ++next)
            batch.push_back(std::async(std::launch::async, solve_row, order[next], std::nullopt));
        const std::size_t first = next - batch.size();
        for (std::size_t i = 0; i < batch.size(); ++i) rows[first + i] = batch[i].get();
    }
    return rows;
}

BarredResult solve_barred(const BarredSpec& spec) {
    ShootSpec s = default_spec(spec.ratio, 1.0);
    s.lambda1 = spec.lambda1;
    s.lambda2 = spec.lambda2;
    s.integrator = spec.integrator;
    s.x_max_limit = spec.x_max_limit;
    s.mu_tol = spec.tol;
    const EigenResult r = solve_eigenpair(s);
    const RescaledResult bar = rescale_result(r, 1.0, spec.ratio);
    return {bar.phi0_bar, bar.chi0_bar, bar.mu, bar.M_bar};
}

BarredResult solve_barred_direct(const BarredSpec& spec) {
    if (!(spec.phi0_bar_bracket.lo > 0.0 && spec.phi0_bar_bracket.hi > spec.phi0_bar_bracket.lo) ||
        !(spec.mu_bracket.lo > 0.0 && spec.mu_bracket.hi > spec.mu_bracket.lo))
        throw DomainError("brackets must be nonempty with positive endpoints");
    auto model = [&](double, double mu) {
        return ModelParams{Sign::plus, Sign::plus, spec.lambda1, spec.lambda2, 1.0, mu};
    };
    Problem pb;
    pb.model = model;
    pb.start = [&](double phi0_bar, double) { return std::pair{phi0_bar, spec.ratio * phi0_bar}; };
    pb.outer_field = Field::phi;
    pb.outer_bracket = spec.phi0_bar_bracket;
    pb.inner_bracket = spec.mu_bracket;
    pb.tol = spec.tol;
    pb.cfg = spec.integrator;
    pb.x_max_limit = spec.x_max_limit;

    Shooter shooter(pb);
    const BisectionOutcome outer = shooter.bisect_outer();
    const BisectionOutcome inner = shooter.bisect_inner(outer.root);
    const double phi0_bar = outer.root;
    const double mu = inner.root;
    const ModelParams p = model(phi0_bar, mu);
    IntegratorConfig cfg = spec.integrator;
    cfg.x_max = shooter.config().x_max;
    const Converged sol = converged_solution(p, phi0_bar, spec.ratio * phi0_bar, cfg);
    return {phi0_bar, spec.ratio * phi0_bar, mu, total_energy(p, sol.trajectory)};
}

}  // namespace cgl
