#include "cgl/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cgl/errors.hpp"

namespace cgl {

namespace {

// Dormand-Prince 5(4) tableau with Hairer's dense-output weights.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 10.0;
constexpr double kEventResolution = 1e-9;

PhaseVector axpy(const PhaseVector& y, double h, std::initializer_list<std::pair<double, const PhaseVector*>> terms) {
    PhaseVector out = y;
    for (const auto& [coef, k] : terms)
        for (int i = 0; i < 4; ++i) out[i] += h * coef * (*k)[i];
    return out;
}

struct StepResult {
    PhaseVector y_new;
    PhaseVector k7;  // derivative at y_new (FSAL)
    double error_norm;
    Trajectory::Segment segment;
};

StepResult dopri_step(const ModelParams& p, double x, const PhaseVector& y, const PhaseVector& k1, double h,
                      const IntegratorConfig& cfg) {
    const PhaseVector k2 = rhs(p, axpy(y, h, {{a21, &k1}}));
    const PhaseVector k3 = rhs(p, axpy(y, h, {{a31, &k1}, {a32, &k2}}));
    const PhaseVector k4 = rhs(p, axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const PhaseVector k5 = rhs(p, axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const PhaseVector k6 =
        rhs(p, axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    const PhaseVector y_new = axpy(y, h, {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}});
    const PhaseVector k7 = rhs(p, y_new);

    double sum = 0.0;
    for (int i = 0; i < 4; ++i) {
        const double err =
            h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double scale = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
        sum += (err / scale) * (err / scale);
    }

    Trajectory::Segment seg;
    seg.x0 = x;
    seg.h = h;
    for (int i = 0; i < 4; ++i) {
        const double diff = y_new[i] - y[i];
        const double bspl = h * k1[i] - diff;
        seg.c0[i] = y[i];
        seg.c1[i] = diff;
        seg.c2[i] = bspl;
        seg.c3[i] = diff - h * k7[i] - bspl;
        seg.c4[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
    }
    return {y_new, k7, std::sqrt(sum / 4.0), seg};
}

bool outside(double value, double radius) { return std::abs(value) > radius; }

// Smallest x in (seg.x0, x_hi] where |component| exceeds radius, located by
// bisection on the dense output. The returned abscissa is past the crossing.
double locate_crossing(const Trajectory::Segment& seg, int component, double radius, double x_hi) {
    double lo = seg.x0;
    double hi = x_hi;
    while (hi - lo > kEventResolution) {
        const double mid = 0.5 * (lo + hi);
        if (outside(seg.eval(mid)[component], radius))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

}  // namespace

PhaseVector Trajectory::Segment::eval(double x) const {
    const double theta = (x - x0) / h;
    const double theta1 = 1.0 - theta;
    PhaseVector out;
    for (int i = 0; i < 4; ++i)
        out[i] = c0[i] + theta * (c1[i] + theta1 * (c2[i] + theta * (c3[i] + theta1 * c4[i])));
    return out;
}

Trajectory::Trajectory(std::vector<FieldState> samples, std::vector<Segment> segments, Termination termination)
    : samples_(std::move(samples)), segments_(std::move(segments)), termination_(termination) {}

FieldState Trajectory::at(double x) const {
    if (samples_.empty()) throw std::out_of_range("empty trajectory");
    if (x < samples_.front().x || x > samples_.back().x) throw std::out_of_range("x outside trajectory span");
    auto it = std::upper_bound(samples_.begin(), samples_.end(), x,
                               [](double value, const FieldState& s) { return value < s.x; });
    const std::size_t idx = static_cast<std::size_t>(it - samples_.begin()) - 1;
    if (samples_[idx].x == x) return samples_[idx];
    if (segments_.size() + 1 != samples_.size())
        throw std::logic_error("trajectory carries no continuous extension");
    return state_at(x, segments_[idx].eval(x));
}

Trajectory Trajectory::truncated(double x_end, Termination termination) const {
    if (samples_.empty() || x_end < samples_.front().x) throw std::out_of_range("x_end before start");
    if (x_end >= samples_.back().x) return Trajectory(samples_, segments_, termination);
    std::vector<FieldState> s;
    std::vector<Segment> g;
    for (std::size_t i = 0; i < samples_.size() && samples_[i].x <= x_end; ++i) {
        s.push_back(samples_[i]);
        if (i > 0 && i - 1 < segments_.size()) g.push_back(segments_[i - 1]);
    }
    if (s.back().x < x_end) {
        const FieldState end = at(x_end);
        if (segments_.size() + 1 == samples_.size()) g.push_back(segments_[s.size() - 1]);
        s.push_back(end);
    }
    return Trajectory(std::move(s), std::move(g), termination);
}

std::string to_string(const Termination& t) {
    switch (t.kind) {
        case Termination::Kind::reached_x_max: return "reached_x_max";
        case Termination::Kind::field_escaped:
            return std::string("field_escaped(") + (t.field == Field::phi ? "phi" : "chi") +
                   (t.sign > 0 ? ",+)" : ",-)");
        case Termination::Kind::step_underflow: return "step_underflow";
        case Termination::Kind::sample_cap: return "sample_cap";
        case Termination::Kind::observer_stop: return "observer_stop";
    }
    return "?";
}

double resolved_escape_radius(const IntegratorConfig& cfg, const ModelParams& p) {
    if (cfg.escape_radius) return *cfg.escape_radius;
    return 3.0 * std::max({p.mu1, p.mu2, 1.0});
}

void validate(const IntegratorConfig& cfg, const ModelParams& p) {
    if (!(cfg.rel_tol > 0.0 && cfg.rel_tol <= 1e-3)) throw DomainError("rel_tol must lie in (0, 1e-3]");
    if (!(cfg.abs_tol > 0.0 && cfg.abs_tol <= 1e-3)) throw DomainError("abs_tol must lie in (0, 1e-3]");
    if (!(cfg.initial_step > 0.0 && cfg.initial_step <= cfg.max_step))
        throw DomainError("require 0 < initial_step <= max_step");
    if (!(cfg.x_max > 0.0)) throw DomainError("x_max must be positive");
    if (!(resolved_escape_radius(cfg, p) > std::max(p.mu1, p.mu2)))
        throw DomainError("escape_radius must exceed max(mu1, mu2)");
    if (cfg.max_samples < 2) throw DomainError("max_samples must be at least 2");
}

Trajectory integrate(const ModelParams& p, const FieldState& init, const IntegratorConfig& cfg) {
    return integrate(p, init, cfg, StepObserver{});
}

Trajectory integrate(const ModelParams& p, const FieldState& init, const IntegratorConfig& cfg,
                     const StepObserver& observer) {
    validate(cfg, p);
    if (!init.finite()) throw DomainError("initial state must be finite");

    const double radius = resolved_escape_radius(cfg, p);
    const double x_end = init.x + cfg.x_max;
    const double h_min = 1e-14 * cfg.x_max;

    std::vector<FieldState> samples{init};
    std::vector<Trajectory::Segment> segments;
    Termination term;

    double x = init.x;
    PhaseVector y = phase_of(init);
    PhaseVector k1 = rhs(p, y);
    double h = cfg.initial_step;
    bool last_rejected = false;

    while (true) {
        if (x >= x_end) {
            term.kind = Termination::Kind::reached_x_max;
            break;
        }
        if (samples.size() >= cfg.max_samples) {
            term.kind = Termination::Kind::sample_cap;
            break;
        }
        h = std::min(h, cfg.max_step);
        bool clipped = false;
        if (x + h >= x_end) {
            h = x_end - x;
            clipped = true;
        }
        if (h < h_min && !clipped) {
            term.kind = Termination::Kind::step_underflow;
            break;
        }

        const StepResult step = dopri_step(p, x, y, k1, h, cfg);
        const bool finite = std::all_of(step.y_new.begin(), step.y_new.end(),
                                        [](double v) { return std::isfinite(v); });
        const double err = finite ? step.error_norm : std::numeric_limits<double>::infinity();

        if (!(err <= 1.0)) {
            const double factor = std::isfinite(err) ? std::max(kMinFactor, kSafety * std::pow(err, -0.2)) : kMinFactor;
            h *= std::min(1.0, factor);
            last_rejected = true;
            if (h < h_min) {
                term.kind = Termination::Kind::step_underflow;
                break;
            }
            continue;
        }

        const double x_new = clipped ? x_end : x + h;
        const bool phi_out = outside(step.y_new[0], radius);
        const bool chi_out = outside(step.y_new[1], radius);
        if (phi_out || chi_out) {
            const double x_phi = phi_out ? locate_crossing(step.segment, 0, radius, x_new) : x_new + 1.0;
            const double x_chi = chi_out ? locate_crossing(step.segment, 1, radius, x_new) : x_new + 1.0;
            const bool phi_first = x_phi <= x_chi;
            const double x_cross = std::min(x_phi, x_chi);
            const PhaseVector y_cross = x_cross >= x_new ? step.y_new : step.segment.eval(x_cross);
            if (x_cross > x) {
                samples.push_back(state_at(x_cross, y_cross));
                segments.push_back(step.segment);
            }
            term.kind = Termination::Kind::field_escaped;
            term.field = phi_first ? Field::phi : Field::chi;
            term.sign = (phi_first ? y_cross[0] : y_cross[1]) > 0.0 ? 1 : -1;
            break;
        }

        x = x_new;
        y = step.y_new;
        k1 = step.k7;
        samples.push_back(state_at(x, y));
        segments.push_back(step.segment);

        if (observer && observer(samples.back())) {
            term.kind = Termination::Kind::observer_stop;
            break;
        }

        double factor = err > 0.0 ? kSafety * std::pow(err, -0.2) : kMaxFactor;
        factor = std::clamp(factor, kMinFactor, last_rejected ? 1.0 : kMaxFactor);
        last_rejected = false;
        if (!clipped) h *= factor;
    }
    return Trajectory(std::move(samples), std::move(segments), term);
}

Trajectory dense_resample(const Trajectory& t, std::size_t n) {
    if (n < 2) throw DomainError("dense_resample needs at least 2 points");
    if (t.size() < 2) throw DomainError("dense_resample needs a trajectory with at least 2 samples");
    if (t.segments().size() + 1 != t.size()) throw DomainError("trajectory carries no continuous extension");
    const double x0 = t.front().x;
    const double x1 = t.back().x;
    std::vector<FieldState> out;
    out.reserve(n);
    out.push_back(t.front());
    const double dx = (x1 - x0) / static_cast<double>(n - 1);
    // Grid points are visited in order, so walk the segments alongside.
    const auto samples = t.samples();
    const auto segments = t.segments();
    std::size_t seg = 0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double x = x0 + dx * static_cast<double>(i);
        while (seg + 1 < samples.size() - 1 && samples[seg + 1].x <= x) ++seg;
        if (samples[seg].x == x)
            out.push_back(samples[seg]);
        else
            out.push_back(state_at(x, segments[seg].eval(x)));
    }
    out.push_back(t.back());
    return Trajectory(std::move(out), {}, t.termination());
}

double conserved_drift(const ModelParams& p, const Trajectory& t) {
    if (t.empty()) return 0.0;
    const double h0 = conserved_quantity(p, t.front());
    double drift = 0.0;
    for (const FieldState& s : t.samples()) drift = std::max(drift, std::abs(conserved_quantity(p, s) - h0));
    return drift;
}

}  // namespace cgl
