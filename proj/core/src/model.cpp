#include "cgl/model.hpp"

#include <cmath>
#include <string>

#include "cgl/errors.hpp"

namespace cgl {

Sign sign_from(double value) {
    if (value == 1.0) return Sign::plus;
    if (value == -1.0) return Sign::minus;
    throw DomainError("kinetic sign must be +1 or -1, got " + std::to_string(value));
}

void validate(const ModelParams& p) {
    if (!(p.mu1 > 0.0) || !std::isfinite(p.mu1) || !(p.mu2 > 0.0) || !std::isfinite(p.mu2))
        throw DomainError("mu1 and mu2 must be positive and finite");
    if (!std::isfinite(p.lambda1) || !std::isfinite(p.lambda2))
        throw DomainError("lambda1 and lambda2 must be finite");
}

bool FieldState::finite() const {
    return std::isfinite(x) && std::isfinite(phi) && std::isfinite(chi) && std::isfinite(z) &&
           std::isfinite(v);
}

ModelParams nondimensionalize(const DimensionfulParams& d, Sign eps1, Sign eps2) {
    if (!(d.Lambda3 > 0.0)) throw DomainError("Lambda3 must be positive");
    if (d.phi0 == 0.0 || !std::isfinite(d.phi0)) throw DomainError("phi0 must be finite and nonzero");
    ModelParams p;
    p.eps1 = eps1;
    p.eps2 = eps2;
    p.lambda1 = d.Lambda1 / d.Lambda3;
    p.lambda2 = d.Lambda2 / d.Lambda3;
    p.mu1 = d.m1 / d.phi0;
    p.mu2 = d.m2 / d.phi0;
    return p;
}

double potential(const ModelParams& p, double phi, double chi) {
    const double phi2 = phi * phi;
    const double chi2 = chi * chi;
    const double a = phi2 - p.mu1 * p.mu1;
    const double b = chi2 - p.mu2 * p.mu2;
    const double mu2sq = p.mu2 * p.mu2;
    return 0.25 * p.lambda1 * a * a + 0.25 * p.lambda2 * b * b + 0.5 * phi2 * chi2 -
           0.25 * p.lambda2 * mu2sq * mu2sq;
}

Gradient potential_gradient(const ModelParams& p, double phi, double chi) {
    const double phi2 = phi * phi;
    const double chi2 = chi * chi;
    return {phi * (chi2 + p.lambda1 * (phi2 - p.mu1 * p.mu1)),
            chi * (phi2 + p.lambda2 * (chi2 - p.mu2 * p.mu2))};
}

PhaseVector rhs(const ModelParams& p, const PhaseVector& y) {
    const Gradient g = potential_gradient(p, y[0], y[1]);
    // 1/eps == eps for eps in {+1, -1}
    return {y[2], y[3], to_double(p.eps1) * g.dphi, to_double(p.eps2) * g.dchi};
}

PhaseVector rhs(const ModelParams& p, const FieldState& s) { return rhs(p, phase_of(s)); }

double conserved_quantity(const ModelParams& p, const FieldState& s) {
    return 0.5 * to_double(p.eps1) * s.z * s.z + 0.5 * to_double(p.eps2) * s.v * s.v -
           potential(p, s.phi, s.chi);
}

double energy_density(const ModelParams& p, const FieldState& s) {
    return 0.5 * to_double(p.eps1) * s.z * s.z + 0.5 * to_double(p.eps2) * s.v * s.v +
           potential(p, s.phi, s.chi);
}

}  // namespace cgl
