#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cgl/model.hpp"

namespace cgl {

struct IntegratorConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-10;
    double initial_step = 1e-3;
    double max_step = 0.1;
    double x_max = 40.0;
    /// Divergence cutoff on |phi| and |chi|; unset means 3 * max(mu1, mu2, 1).
    std::optional<double> escape_radius;
    std::size_t max_samples = 1'000'000;
};

double resolved_escape_radius(const IntegratorConfig& cfg, const ModelParams& p);

/// Throws DomainError when a field violates its documented range.
void validate(const IntegratorConfig& cfg, const ModelParams& p);

enum class Field { phi, chi };

struct Termination {
    enum class Kind { reached_x_max, field_escaped, step_underflow, sample_cap, observer_stop };
    Kind kind = Kind::reached_x_max;
    Field field = Field::phi;  // meaningful for field_escaped only
    int sign = 0;              // +1 / -1 for field_escaped

    friend bool operator==(const Termination&, const Termination&) = default;
};

std::string to_string(const Termination& t);

/// Integrated solution: accepted-step states plus the Dormand-Prince
/// continuous extension of every step, so the solution can be evaluated at
/// any x between the first and last sample.
class Trajectory {
public:
    /// Coefficients of the 4th-order dense output on [x0, x0 + h].
    struct Segment {
        double x0 = 0.0;
        double h = 0.0;
        PhaseVector c0{}, c1{}, c2{}, c3{}, c4{};

        PhaseVector eval(double x) const;
    };

    Trajectory() = default;
    Trajectory(std::vector<FieldState> samples, std::vector<Segment> segments, Termination termination);

    std::span<const FieldState> samples() const { return samples_; }
    std::span<const Segment> segments() const { return segments_; }
    const Termination& termination() const { return termination_; }

    const FieldState& front() const { return samples_.front(); }
    const FieldState& back() const { return samples_.back(); }
    std::size_t size() const { return samples_.size(); }
    bool empty() const { return samples_.empty(); }

    /// Dense-output state at x in [front().x, back().x]; exact sample values
    /// are returned at sample abscissae.
    FieldState at(double x) const;

    /// Copy truncated to samples with x <= x_end; the last kept sample is
    /// replaced by the dense state at x_end when x_end falls inside a step.
    Trajectory truncated(double x_end, Termination termination) const;

private:
    std::vector<FieldState> samples_;
    std::vector<Segment> segments_;  // segments_[i] spans samples_[i] .. samples_[i+1]
    Termination termination_;
};

/// Called with each accepted state; returning true stops the integration
/// with Termination::Kind::observer_stop.
using StepObserver = std::function<bool(const FieldState&)>;

/// Adaptive Dormand-Prince 5(4) integration of the field equations from
/// `init` toward x_max. Stops early on field escape (located on the dense
/// output to 1e-9 in x), step underflow, or the sample cap.
Trajectory integrate(const ModelParams& p, const FieldState& init, const IntegratorConfig& cfg);
Trajectory integrate(const ModelParams& p, const FieldState& init, const IntegratorConfig& cfg,
                     const StepObserver& observer);

/// n states on a uniform grid from the first to the last sample, evaluated
/// on the dense output. Endpoints are copied from the source.
Trajectory dense_resample(const Trajectory& t, std::size_t n);

/// max |H(s) - H(first)| over the samples of t.
double conserved_drift(const ModelParams& p, const Trajectory& t);

}  // namespace cgl
