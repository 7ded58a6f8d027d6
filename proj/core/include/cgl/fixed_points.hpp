#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cgl/model.hpp"

namespace cgl {

enum class FixedPointLabel { A, B, C, D, E, Fpp, Fpm, Fmp, Fmm };

std::string_view to_string(FixedPointLabel label);

/// Linear-stability verdict. The system is reversible, so the spectrum of the
/// linearization always comes in (xi, -xi) pairs: "unstable node" means every
/// eigenvalue is real (every direction is hyperbolic, a two-parameter family of
/// trajectories leaves the point). Any imaginary pair makes the point a
/// "saddle" in the sense of the classification table for A..E; a complex
/// quartet can only appear at F and is reported as a spiral.
enum class Classification { unstable_node, saddle, spiral, degenerate };

std::string_view to_string(Classification c);

/// Eigenvalue signature: how many +-pairs are real, purely imaginary, or part
/// of a complex quartet.
struct SpectrumSignature {
    int real_pairs = 0;
    int imaginary_pairs = 0;
    int complex_quartets = 0;
};

using Matrix4 = std::array<std::array<double, 4>, 4>;
using Spectrum = std::array<std::complex<double>, 4>;

struct FixedPoint {
    FixedPointLabel label = FixedPointLabel::A;
    double phi = 0.0;
    double chi = 0.0;
    double potential_value = 0.0;
    /// Roots k1, k2, k3, k4 as given by the closed-form characteristic-root
    /// table (k3 = k4 = 1 carried verbatim; they are not used anywhere).
    std::array<std::complex<double>, 4> closed_form_roots{};
    Spectrum jacobian_eigenvalues{};
    SpectrumSignature signature{};
    Classification classification = Classification::degenerate;

    FieldState state() const { return {0.0, phi, chi, 0.0, 0.0}; }
};

struct FixedPointReport {
    std::vector<FixedPoint> points;  // A, B, C, D, E, then F++, F+-, F-+, F-- if present
    /// Set when the F family is missing, e.g. "degenerate denominator".
    std::optional<std::string> f_absent_reason;
};

struct MinimaConditions {
    bool local_ok = false;   // lambda1 > 0 and mu1^2 > lambda2 mu2^2
    bool global_ok = false;  // lambda2 > 0 and mu2^2 > lambda1 mu1^2
};

/// V_F - V_A, V_F - V_C, V_F - V_E in closed form.
struct PotentialGaps {
    double f_minus_a = 0.0;
    double f_minus_c = 0.0;
    double f_minus_e = 0.0;
};

/// Location (phi, chi) of F++ or nullopt with the reason the family is absent.
struct SaddleLocation {
    std::optional<std::array<double, 2>> location;
    std::string absent_reason;
};
SaddleLocation saddle_location(const ModelParams& p);

FixedPointReport fixed_points(const ModelParams& p);

MinimaConditions minima_conditions(const ModelParams& p);

/// Throws DomainError when F does not exist.
PotentialGaps potential_gaps(const ModelParams& p);

/// max(V_A, V_C) <= V_E, with an absolute slack of 1e-12.
bool check_cond_max(const ModelParams& p);

/// Exact linearization of rhs at s, rows/cols ordered (phi, chi, z, v).
Matrix4 jacobian(const ModelParams& p, const FieldState& s);

/// Closed-form k-values for the point family of `label` (A/B, C/D, E, F*).
std::array<std::complex<double>, 4> characteristic_roots(const ModelParams& p,
                                                         FixedPointLabel label);

/// Spectrum of the Jacobian at s through its block structure: the
/// eigenvalues xi satisfy xi^2 = eigenvalue of diag(1/eps) * Hess V.
Spectrum biquadratic_spectrum(const ModelParams& p, const FieldState& s);

/// Spectrum of an arbitrary 4x4 real matrix (general eigensolver).
Spectrum general_spectrum(const Matrix4& m);

constexpr double kDegenerateTolerance = 1e-10;

SpectrumSignature signature_of(const Spectrum& spectrum);
Classification classify_spectrum(const Spectrum& spectrum);

/// Classification of a fixed point from its numeric Jacobian spectrum.
Classification classify(const ModelParams& p, const FixedPoint& f);

}  // namespace cgl
