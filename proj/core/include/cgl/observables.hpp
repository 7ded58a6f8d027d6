#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "cgl/integrator.hpp"
#include "cgl/model.hpp"
#include "cgl/shooting.hpp"

namespace cgl {

/// Energy density of a Z2-even solution on [-x_end, x_end].
struct EnergyProfile {
    std::vector<double> grid;
    std::vector<double> density;
};

/// Rejects trajectories that ended in field_escaped.
EnergyProfile energy_profile(const ModelParams& p, const Trajectory& t, std::size_t n);

constexpr std::size_t kDefaultQuadraturePoints = 4096;
constexpr double kEnergyCutoff = 1e-12;

/// Mass M = 2 * int_0^x_cut eps dx by composite Simpson on a uniform dense
/// resample with `intervals` panels (rounded up to even, at least 4096).
double total_energy(const ModelParams& p, const Trajectory& t,
                    std::size_t intervals = kDefaultQuadraturePoints);

/// Largest x with |eps| > 1e-12, found on a dense resample of t.
double energy_cutoff(const ModelParams& p, const Trajectory& t,
                     std::size_t intervals = kDefaultQuadraturePoints);

/// Composite Simpson rule on uniformly spaced samples (odd count >= 3).
double simpson(const std::vector<double>& values, double dx);

using PhasePoint = std::pair<double, double>;

/// (value, derivative) series per field covering x in [-x_end, x_end]: the
/// mirrored branch flips the derivative sign.
struct PhaseSeries {
    std::vector<PhasePoint> phi;
    std::vector<PhasePoint> chi;
};

PhaseSeries phase_series(const Trajectory& t);

struct RescaledResult {
    double phi0_bar = 0.0;
    double chi0_bar = 0.0;
    double mu = 0.0;
    double M_bar = 0.0;
    double x_scale = 1.0;  // x_bar = x_scale * x
};

/// phi0_bar = phi0/mu1, chi0_bar = chi0/mu1, mu = mu2/mu1, M_bar = M/mu1^3.
RescaledResult rescale(double phi0, double chi0, double mu1, double mu2, double M);

/// Inverse of rescale given mu1.
struct UnscaledValues {
    double phi0 = 0.0;
    double chi0 = 0.0;
    double mu2 = 0.0;
    double M = 0.0;
};
UnscaledValues unscale(const RescaledResult& r, double mu1);

RescaledResult rescale_result(const EigenResult& r, double phi0, double chi0);

}  // namespace cgl
