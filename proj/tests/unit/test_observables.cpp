#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "cgl/errors.hpp"
#include "cgl/observables.hpp"
#include "cgl/shooting.hpp"
#include "oracles.hpp"

using namespace cgl;

namespace {

// Converged solutions are shared across cases; each takes ~50 ms.
const EigenResult& solution(double chi0_sq) {
    static std::map<double, EigenResult> cache;
    auto it = cache.find(chi0_sq);
    if (it == cache.end()) it = cache.emplace(chi0_sq, solve_eigenpair(default_spec(std::sqrt(chi0_sq)))).first;
    return it->second;
}

}  // namespace

TEST_CASE("energy profile") {
    const EigenResult& r = solution(0.09);
    const EnergyProfile e = energy_profile(r.params, r.trajectory, 2048);
    REQUIRE(e.grid.size() == e.density.size());
    REQUIRE(e.grid.size() % 2 == 1);
    const std::size_t n = e.grid.size();
    const std::size_t mid = n / 2;
    CHECK(e.grid[mid] == 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        REQUIRE(e.grid[i] == -e.grid[n - 1 - i]);
        REQUIRE(e.density[i] == e.density[n - 1 - i]);
    }
    CHECK(e.density[mid] == potential(r.params, 1.0, 0.3));
    CHECK(std::abs(e.density.front()) < 1e-4);
    CHECK(std::abs(e.density.back()) < 1e-4);

    SUBCASE("escaped trajectories are rejected") {
        const ModelParams p = model_of(default_spec(0.3), r.mu1 - 1e-2, r.mu2);
        const Trajectory t = integrate(p, {0, 1.0, 0.3, 0, 0}, {});
        REQUIRE(t.termination().kind == Termination::Kind::field_escaped);
        CHECK_THROWS_AS(energy_profile(p, t, 128), DomainError);
        CHECK_THROWS_AS(total_energy(p, t), DomainError);
    }
}

TEST_CASE("profile ordering across the sweep") {
    // the largest chi0 carries the most energy everywhere near the core
    const EigenResult& lo = solution(0.09);
    const EigenResult& hi = solution(1.4);
    auto peak = [](const EigenResult& r) {
        const EnergyProfile e = energy_profile(r.params, r.trajectory, 1024);
        return *std::max_element(e.density.begin(), e.density.end());
    };
    const double p_lo = peak(lo);
    const double p_hi = peak(hi);
    CHECK(p_hi > p_lo);
    for (double c2 : {0.2, 0.4, 0.6, 0.8, 1.0, 1.2}) {
        const double p = peak(solution(c2));
        CHECK(p > p_lo);
        CHECK(p < p_hi);
    }
}

TEST_CASE("total energy") {
    CHECK(solution(0.09).total_energy == doctest::Approx(0.0441854).epsilon(1e-3));
    CHECK(solution(0.8).total_energy == doctest::Approx(1.17074).epsilon(1e-3));

    for (double c2 : {0.09, 1.4}) {
        CAPTURE(c2);
        const EigenResult& r = solution(c2);
        const double m1 = total_energy(r.params, r.trajectory, 4096);
        const double m2 = total_energy(r.params, r.trajectory, 8192);
        CHECK(std::abs(m1 - m2) < 1e-8 * std::abs(m2));
        CHECK(m1 == r.total_energy);
        CHECK(m1 > 0.0);
    }
}

TEST_CASE("Simpson converges at fourth order on an eigen-profile") {
    const EigenResult& r = solution(0.4);
    const double x_cut = energy_cutoff(r.params, r.trajectory);
    REQUIRE(x_cut > 0.0);
    const Trajectory cut = r.trajectory.truncated(x_cut, Termination{});
    auto integral = [&](std::size_t panels) {
        const Trajectory d = dense_resample(cut, panels + 1);
        std::vector<double> eps;
        for (const FieldState& s : d.samples()) eps.push_back(energy_density(r.params, s));
        return simpson(eps, x_cut / static_cast<double>(panels));
    };
    // The integrand is even with a vanishing tail, so the endpoint corrections
    // cancel and convergence is at least (in practice much better than) h^4.
    const double a = integral(32);
    const double b = integral(64);
    const double c = integral(128);
    const double ratio = (a - b) / (b - c);
    CAPTURE(ratio);
    CHECK(ratio >= 16.0);
    CHECK(std::abs(c - r.total_energy / 2.0) < 1e-9);

    CHECK(simpson({0.0, 1.0, 4.0}, 1.0) == doctest::Approx(8.0 / 3.0));
    CHECK_THROWS_AS(simpson({1.0, 2.0}, 1.0), DomainError);
}

TEST_CASE("energy decays over the final tenth before the cutoff") {
    for (double c2 : {0.09, 0.6, 1.4}) {
        CAPTURE(c2);
        const EigenResult& r = solution(c2);
        const double x_cut = energy_cutoff(r.params, r.trajectory);
        const EnergyProfile e = energy_profile(r.params, r.trajectory.truncated(x_cut, Termination{}), 4096);
        const std::size_t mid = e.grid.size() / 2;
        for (std::size_t i = mid + 1; i < e.grid.size(); ++i) {
            if (e.grid[i] < 0.9 * x_cut) continue;
            REQUIRE(e.density[i] < e.density[i - 1]);
        }
    }
}

TEST_CASE("phase series") {
    const EigenResult& r = solution(0.09);
    const PhaseSeries ps = phase_series(r.trajectory);
    const std::size_t n = r.trajectory.size();
    REQUIRE(ps.phi.size() == 2 * n - 1);
    REQUIRE(ps.chi.size() == ps.phi.size());
    // the x = 0 sample sits in the middle; both ends are the tail near A
    CHECK(ps.phi[n - 1] == PhasePoint{1.0, 0.0});
    CHECK(ps.chi[n - 1] == PhasePoint{0.3, 0.0});
    CHECK(std::abs(ps.phi.back().first - 1.25104535) < 1e-4);
    CHECK(std::abs(ps.phi.back().second) < 1e-4);
    CHECK(std::abs(ps.chi.back().first) < 1e-4);
    CHECK(std::abs(ps.chi.back().second) < 1e-4);
    CHECK(ps.phi.front().first == ps.phi.back().first);
    CHECK(ps.phi.front().second == -ps.phi.back().second);

    const ModelParams p = r.params;
    const Trajectory still = integrate(p, {0, p.mu1, 0, 0, 0}, IntegratorConfig{.x_max = 1.0});
    const PhaseSeries fixed = phase_series(still);
    for (const PhasePoint& q : fixed.phi) REQUIRE(q == PhasePoint{p.mu1, 0.0});
    for (const PhasePoint& q : fixed.chi) REQUIRE(q == PhasePoint{0.0, 0.0});
}

TEST_CASE("rescaling") {
    SUBCASE("tabulated rows") {
        const RescaledResult a = rescale(1.0, 0.3, 1.25104535, 1.1056305, 0.0441854);
        CHECK(a.phi0_bar == doctest::Approx(0.799332).epsilon(5e-6));
        CHECK(a.chi0_bar == doctest::Approx(0.239799).epsilon(5e-6));
        CHECK(a.mu == doctest::Approx(0.883765).epsilon(5e-6));
        CHECK(a.M_bar == doctest::Approx(0.0225663).epsilon(5e-5));
        CHECK(a.x_scale == 1.25104535);
        const RescaledResult b = rescale_result(solution(1.0), 1.0, 1.0);
        CHECK(std::abs(b.phi0_bar - 0.428791) < 5e-6);
        CHECK(std::abs(b.chi0_bar - 0.428791) < 5e-6);
        CHECK(std::abs(b.mu - 0.675965) < 5e-6);
        CHECK(std::abs(b.M_bar - 0.128174) < 5e-6);
        CHECK(b.chi0_bar / b.phi0_bar == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("mu1 = 1 is the identity") {
        const RescaledResult r = rescale(1.0, 0.7, 1.0, 1.3, 2.5);
        CHECK(r.phi0_bar == 1.0);
        CHECK(r.chi0_bar == 0.7);
        CHECK(r.mu == 1.3);
        CHECK(r.M_bar == 2.5);
    }
    SUBCASE("round trip") {
        testing::ParamSampler g(42);
        for (int i = 0; i < 1000; ++i) {
            const double phi0 = g.uniform(0.1, 3.0);
            const double chi0 = g.uniform(0.1, 3.0);
            const double mu1 = g.uniform(0.1, 5.0);
            const double mu2 = g.uniform(0.1, 5.0);
            const double M = g.uniform(1e-3, 10.0);
            const UnscaledValues u = unscale(rescale(phi0, chi0, mu1, mu2, M), mu1);
            REQUIRE(testing::close_rel(u.phi0, phi0, 1e-14));
            REQUIRE(testing::close_rel(u.chi0, chi0, 1e-14));
            REQUIRE(testing::close_rel(u.mu2, mu2, 1e-14));
            REQUIRE(testing::close_rel(u.M, M, 1e-14));
        }
    }
    SUBCASE("domain") {
        CHECK_THROWS_AS(rescale(1.0, 0.3, 0.0, 1.0, 1.0), DomainError);
        CHECK_THROWS_AS(unscale(RescaledResult{}, -1.0), DomainError);
    }
}
