#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cgl/integrator.hpp"
#include "cgl/model.hpp"

namespace cgl {

struct Bracket {
    double lo = 0.0;
    double hi = 0.0;

    double width() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
};

/// Which eigenvalue drives the outer bisection loop. The default pairs mu1
/// with the phi verdict (outer) and mu2 with the chi verdict (inner).
enum class Nesting { mu1_outer, mu2_outer };

struct ShootSpec {
    double phi0 = 1.0;
    double chi0 = 0.3;
    Sign eps1 = Sign::plus;
    Sign eps2 = Sign::plus;
    double lambda1 = 0.1;
    double lambda2 = 1.0;
    Bracket mu1_bracket{1.0, 5.0};
    Bracket mu2_bracket{0.5, 5.0};
    double mu_tol = 1e-12;
    double constraint_tol = 1e-4;
    IntegratorConfig integrator{};
    /// Horizon is doubled up to this value when most probes are undecided.
    double x_max_limit = 160.0;
    Nesting nesting = Nesting::mu1_outer;
};

/// Spec with the default brackets mu1 in [max(phi0, chi0), 5], mu2 in [0.5, 5].
ShootSpec default_spec(double chi0, double phi0 = 1.0);

void validate(const ShootSpec& spec);

ModelParams model_of(const ShootSpec& spec, double mu1, double mu2);

/// Direction in which a trajectory leaves the approach toward the target
/// fixed point A = (mu1, 0): a field either crosses its target value or turns
/// back before reaching it. "up" means the field ends on the high side of the
/// target path.
enum class Verdict { phi_escape_up, phi_escape_down, chi_escape_up, chi_escape_down, undecided };

std::string_view to_string(Verdict v);

struct TrajectoryClass {
    Verdict verdict = Verdict::undecided;
    double x = 0.0;  // abscissa at which the verdict was reached
};

/// First departure of either field from its approach to A. Without such an
/// event, a field_escaped termination supplies the verdict; otherwise undecided.
TrajectoryClass classify_trajectory(const ModelParams& p, const Trajectory& t);

/// Departure verdict of one field only. When the trajectory stopped before
/// that field decided (the other field escaped), the sign of its growing
/// linear mode at the last state is used. Undecided only for reached_x_max.
Verdict field_verdict(const ModelParams& p, const Trajectory& t, Field field);

/// Integrates from (phi0, chi0, 0, 0) and stops as soon as both fields have
/// decided (or the integrator terminates).
Trajectory shoot(const ModelParams& p, double phi0, double chi0, const IntegratorConfig& cfg);

class ShootingError : public std::runtime_error {
public:
    enum class Reason { unbracketed, undecided_dominated, constraint_violation, integration_failed };
    enum class Level { inner, outer, final };

    ShootingError(Reason reason, Level level, const std::string& detail);

    Reason reason() const { return reason_; }
    Level level() const { return level_; }

private:
    Reason reason_;
    Level level_;
};

std::string_view to_string(ShootingError::Reason r);
std::string_view to_string(ShootingError::Level l);

struct Probe {
    double value = 0.0;
    Verdict verdict = Verdict::undecided;
};

struct Mu2Search {
    double mu2 = 0.0;
    double bracket_width = 0.0;
    std::vector<Probe> history;
};

/// Bisection on mu2 at fixed mu1 until the chi verdict flips within mu_tol.
Mu2Search bisect_mu2(const ShootSpec& spec, double mu1);

struct EigenResult {
    double phi0 = 1.0;
    double chi0 = 0.0;
    double mu1 = 0.0;
    double mu2 = 0.0;
    ModelParams params{};
    /// Solution on [0, x_end]: x_end is the closest approach to A, or the end
    /// of the monotone approach if that comes first.
    Trajectory trajectory;
    double total_energy = 0.0;
    double residual_phi = 0.0;  // |phi(x_end) - mu1|
    double residual_chi = 0.0;  // |chi(x_end)|
    double bracket_width_mu1 = 0.0;
    double bracket_width_mu2 = 0.0;
    double constraint_residual = 0.0;  // |V(phi0, chi0)|
    double constraint_bound = 0.0;     // max |V(phi0, chi0)| over the final bracket corners
    double x_max_used = 0.0;
};

/// Two-parameter eigenvalue search by nested bisection.
EigenResult solve_eigenpair(const ShootSpec& spec);

struct SweepRow {
    double chi0 = 0.0;
    std::optional<EigenResult> result;
    std::string error;  // empty on success
};

struct SweepOptions {
    bool warm_start = true;
    unsigned workers = 1;  // used only without warm start
};

/// One eigen-solve per chi0, results ordered by chi0. A failing row is
/// recorded and the sweep continues.
std::vector<SweepRow> sweep(const std::vector<double>& chi0_values, const ShootSpec& base,
                            const SweepOptions& options = {});

/// Eigen-solution of the system scaled by m1 (mu1 = 1), for a fixed ratio
/// chi0_bar / phi0_bar.
struct BarredResult {
    double phi0_bar = 0.0;
    double chi0_bar = 0.0;
    double mu = 0.0;
    double M_bar = 0.0;
};

struct BarredSpec {
    double ratio = 0.3;
    double lambda1 = 0.1;
    double lambda2 = 1.0;
    Bracket phi0_bar_bracket{0.2, 0.999};
    Bracket mu_bracket{0.1, 5.0};
    double tol = 1e-12;
    IntegratorConfig integrator{};
    double x_max_limit = 160.0;
};

/// Solves the unscaled problem with phi0 = 1, chi0 = ratio and rescales.
BarredResult solve_barred(const BarredSpec& spec);

/// Shoots directly in the scaled variables: outer bisection on phi0_bar,
/// inner on mu, initial data (phi0_bar, ratio * phi0_bar, 0, 0).
BarredResult solve_barred_direct(const BarredSpec& spec);

}  // namespace cgl
