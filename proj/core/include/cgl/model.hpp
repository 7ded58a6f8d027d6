#pragma once

#include <array>

namespace cgl {

/// Physical couplings and masses before scaling. The field value at the
/// symmetry plane, phi0, sets the unit of field and of length.
struct DimensionfulParams {
    double Lambda1 = 0.0;
    double Lambda2 = 0.0;
    double Lambda3 = 1.0;
    double m1 = 0.0;
    double m2 = 0.0;
    double phi0 = 1.0;
};

/// Kinetic sign of a field: +1 for an ordinary field, -1 for a phantom one.
enum class Sign : int { plus = 1, minus = -1 };

constexpr double to_double(Sign s) { return static_cast<double>(static_cast<int>(s)); }

/// Parse +1/-1 into a Sign; anything else is a DomainError.
Sign sign_from(double value);

/// Dimensionless model. eps flags enter the field equations as 1/eps.
struct ModelParams {
    Sign eps1 = Sign::plus;
    Sign eps2 = Sign::plus;
    double lambda1 = 0.1;
    double lambda2 = 1.0;
    double mu1 = 1.0;
    double mu2 = 1.0;
};

/// Throws DomainError unless mu1, mu2 are positive and finite.
void validate(const ModelParams& p);

/// A point of the first-order system: coordinate, both fields and their
/// first derivatives (z = phi', v = chi').
struct FieldState {
    double x = 0.0;
    double phi = 0.0;
    double chi = 0.0;
    double z = 0.0;
    double v = 0.0;

    bool finite() const;
    friend bool operator==(const FieldState&, const FieldState&) = default;
};

/// Phase-space vector (phi, chi, z, v), the part of FieldState that evolves.
using PhaseVector = std::array<double, 4>;

inline PhaseVector phase_of(const FieldState& s) { return {s.phi, s.chi, s.z, s.v}; }
inline FieldState state_at(double x, const PhaseVector& y) { return {x, y[0], y[1], y[2], y[3]}; }

struct Gradient {
    double dphi = 0.0;
    double dchi = 0.0;
};

/// lambda_i = Lambda_i / Lambda_3, mu_i = m_i / phi0.
ModelParams nondimensionalize(const DimensionfulParams& d, Sign eps1, Sign eps2);

/// Quartic double-well potential with the additive constant fixed so that
/// the local minimum A = (mu1, 0) sits at V = 0:
///   lambda1/4 (phi^2-mu1^2)^2 + lambda2/4 (chi^2-mu2^2)^2 + phi^2 chi^2/2 - lambda2 mu2^4/4
double potential(const ModelParams& p, double phi, double chi);

Gradient potential_gradient(const ModelParams& p, double phi, double chi);

/// d/dx of (phi, chi, z, v).
PhaseVector rhs(const ModelParams& p, const PhaseVector& y);
PhaseVector rhs(const ModelParams& p, const FieldState& s);

/// First integral of the autonomous system: eps1 z^2/2 + eps2 v^2/2 - V.
double conserved_quantity(const ModelParams& p, const FieldState& s);

/// Dimensionless energy density eps1 z^2/2 + eps2 v^2/2 + V.
double energy_density(const ModelParams& p, const FieldState& s);

}  // namespace cgl
