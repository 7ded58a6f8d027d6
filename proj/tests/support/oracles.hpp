#pragma once

// Independent reference computations used only by the tests: central
// finite differences of the potential and of the right-hand side, and
// random parameter generators with fixed seeds.

#include <array>
#include <cmath>
#include <random>

#include "cgl/fixed_points.hpp"
#include "cgl/model.hpp"

namespace cgl::testing {

// Five-point central differences: exact (up to rounding) for the quartic
// potential and the cubic right-hand side, so only cancellation remains.
template <class F>
double fd5(F&& f, double h) {
    return (f(-2.0 * h) - 8.0 * f(-h) + 8.0 * f(h) - f(2.0 * h)) / (12.0 * h);
}

inline std::array<double, 2> fd_gradient(const ModelParams& p, double phi, double chi, double h = 1e-3) {
    return {fd5([&](double d) { return potential(p, phi + d, chi); }, h),
            fd5([&](double d) { return potential(p, phi, chi + d); }, h)};
}

inline Matrix4 fd_jacobian(const ModelParams& p, const FieldState& s, double h = 1e-3) {
    Matrix4 j{};
    const PhaseVector y = phase_of(s);
    for (int col = 0; col < 4; ++col)
        for (int row = 0; row < 4; ++row)
            j[row][col] = fd5(
                [&](double d) {
                    PhaseVector yd = y;
                    yd[col] += d;
                    return rhs(p, yd)[row];
                },
                h);
    return j;
}

// Extended-precision potential, written out independently of the library.
inline long double potential_ld(const ModelParams& p, long double phi, long double chi) {
    const long double l1 = p.lambda1, l2 = p.lambda2, m1 = p.mu1, m2 = p.mu2;
    const long double a = phi * phi - m1 * m1;
    const long double b = chi * chi - m2 * m2;
    return 0.5L * phi * phi * chi * chi + 0.25L * l1 * a * a + 0.25L * l2 * b * b - 0.25L * l2 * m2 * m2 * m2 * m2;
}

// Saddle F++ refined by Newton on grad V = 0 in long double, starting from a
// double-precision guess; returns V there.
inline long double saddle_potential_ld(const ModelParams& p, double phi0, double chi0) {
    const long double l1 = p.lambda1, l2 = p.lambda2, m1 = p.mu1, m2 = p.mu2;
    long double x = phi0, y = chi0;
    for (int it = 0; it < 8; ++it) {
        // grad/phi and grad/chi of V, divided by phi and chi respectively
        const long double f = y * y + l1 * (x * x - m1 * m1);
        const long double g = x * x + l2 * (y * y - m2 * m2);
        const long double a = 2.0L * l1 * x, b = 2.0L * y, c = 2.0L * x, d = 2.0L * l2 * y;
        const long double det = a * d - b * c;
        x -= (f * d - b * g) / det;
        y -= (a * g - c * f) / det;
    }
    return potential_ld(p, x, y);
}

inline bool close_rel(double a, double b, double rel, double abs_floor = 0.0) {
    return std::abs(a - b) <= std::max(rel * std::max(std::abs(a), std::abs(b)), abs_floor);
}

class ParamSampler {
public:
    explicit ParamSampler(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

    Sign sign() { return uniform(0.0, 1.0) < 0.5 ? Sign::plus : Sign::minus; }

    /// lambda_i, mu_i in (0, 3].
    ModelParams any() {
        ModelParams p;
        p.eps1 = sign();
        p.eps2 = sign();
        p.lambda1 = uniform(1e-3, 3.0);
        p.lambda2 = uniform(1e-3, 3.0);
        p.mu1 = uniform(1e-3, 3.0);
        p.mu2 = uniform(1e-3, 3.0);
        return p;
    }

    /// Both minima conditions hold with a relative margin (5% by default), so
    /// no root of the linearization at A..E is close to zero.
    ModelParams with_minima(Sign eps1 = Sign::plus, Sign eps2 = Sign::plus, double margin = 1.05) {
        while (true) {
            ModelParams p;
            p.eps1 = eps1;
            p.eps2 = eps2;
            p.lambda1 = uniform(0.01, 2.0);
            p.lambda2 = uniform(0.01, 2.0);
            p.mu1 = uniform(0.2, 3.0);
            p.mu2 = uniform(0.2, 3.0);
            const double m1 = p.mu1 * p.mu1;
            const double m2 = p.mu2 * p.mu2;
            if (m1 > margin * p.lambda2 * m2 && m2 > margin * p.lambda1 * m1) return p;
        }
    }

    /// Parameters for which the F family exists (lambda1 lambda2 < 1 and both
    /// radicands nonnegative).
    ModelParams with_saddles(double margin = 1.05, double max_lambda_product = 0.95) {
        while (true) {
            ModelParams p = with_minima(sign(), sign(), margin);
            if (p.lambda1 * p.lambda2 < max_lambda_product && saddle_location(p).location) return p;
        }
    }

private:
    std::mt19937_64 rng_;
};

}  // namespace cgl::testing
