#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "cgl/errors.hpp"
#include "cgl/fixed_points.hpp"
#include "oracles.hpp"

using namespace cgl;
using cgl::testing::close_rel;

namespace {

ModelParams row1(Sign e1 = Sign::plus, Sign e2 = Sign::plus) {
    return {e1, e2, 0.1, 1.0, 1.25104535, 1.1056305};
}

const FixedPoint& find(const FixedPointReport& r, FixedPointLabel l) {
    return *std::find_if(r.points.begin(), r.points.end(), [&](const FixedPoint& f) { return f.label == l; });
}

// Table of expected verdicts for A/B, C/D, E by (eps1, eps2).
Classification table_cell(Sign e1, Sign e2, FixedPointLabel l) {
    const bool both_plus = e1 == Sign::plus && e2 == Sign::plus;
    const bool both_minus = e1 == Sign::minus && e2 == Sign::minus;
    if (l == FixedPointLabel::E) return both_minus ? Classification::unstable_node : Classification::saddle;
    return both_plus ? Classification::unstable_node : Classification::saddle;
}

double max_abs_rhs(const ModelParams& p, const FixedPoint& f) {
    const PhaseVector r = rhs(p, f.state());
    double m = 0.0;
    for (double c : r) m = std::max(m, std::abs(c));
    return m;
}

}  // namespace

TEST_CASE("fixed point locations") {
    const ModelParams p = row1();
    const FixedPointReport r = fixed_points(p);
    REQUIRE(r.points.size() == 9);
    CHECK_FALSE(r.f_absent_reason);
    const FixedPoint& a = find(r, FixedPointLabel::A);
    CHECK(a.phi == p.mu1);
    CHECK(a.chi == 0.0);
    CHECK(a.potential_value == 0.0);
    const FixedPoint& f = find(r, FixedPointLabel::Fpp);
    CHECK(f.phi == doctest::Approx(1.08827455469379894).epsilon(1e-13));
    CHECK(f.chi == doctest::Approx(0.19513404658404338).epsilon(1e-12));
    const FixedPoint& fmm = find(r, FixedPointLabel::Fmm);
    CHECK(fmm.phi == -f.phi);
    CHECK(fmm.chi == -f.chi);
    for (const FixedPoint& fp : r.points) CHECK(max_abs_rhs(p, fp) < 1e-12);
}

TEST_CASE("F family is absent for a degenerate denominator or negative radicands") {
    ModelParams p{Sign::plus, Sign::plus, 1.0, 1.0, 1.0, 2.0};
    FixedPointReport r = fixed_points(p);
    CHECK(r.points.size() == 5);
    REQUIRE(r.f_absent_reason);
    CHECK(*r.f_absent_reason == "degenerate denominator");
    CHECK_THROWS_AS(potential_gaps(p), DomainError);
    CHECK_THROWS_AS(characteristic_roots(p, FixedPointLabel::Fpp), DomainError);

    p = {Sign::plus, Sign::plus, 0.5, 0.5, 1.0, 2.0};  // lambda2 mu2^2 - lambda1 lambda2 mu1^2 > 0, other < 0
    r = fixed_points(p);
    REQUIRE(r.f_absent_reason);
    CHECK(*r.f_absent_reason == "negative radicand");
}

TEST_CASE("minima conditions") {
    const MinimaConditions m = minima_conditions(row1());
    CHECK(m.local_ok);
    CHECK(m.global_ok);
    CHECK_FALSE(minima_conditions({Sign::plus, Sign::plus, 1.0, 1.0, 1.0, 2.0}).local_ok);
    CHECK_FALSE(minima_conditions({Sign::plus, Sign::plus, 0.1, -1.0, 1.0, 1.0}).global_ok);
}

TEST_CASE("potential gaps") {
    const PotentialGaps g = potential_gaps(row1());
    CHECK(g.f_minus_a == doctest::Approx(0.00326223108235961).epsilon(1e-12));

    // mu1^2 = lambda2 mu2^2 puts F on A
    ModelParams p{Sign::plus, Sign::plus, 0.3, 0.25, 1.0, 2.0};
    CHECK(potential_gaps(p).f_minus_a == 0.0);

    cgl::testing::ParamSampler gen(0x5eed10);
    for (int i = 0; i < 1000; ++i) {
        const ModelParams q = gen.with_saddles();
        const PotentialGaps gq = potential_gaps(q);
        const auto [phi, chi] = *saddle_location(q).location;
        const double vf = potential(q, phi, chi);
        const double va = potential(q, q.mu1, 0.0);
        const double vc = potential(q, 0.0, q.mu2);
        const double ve = potential(q, 0.0, 0.0);
        // relative to the magnitude of the values being subtracted
        auto agree = [](double closed, double a, double b) {
            const double scale = std::max({std::abs(closed), std::abs(a), std::abs(b)});
            return std::abs(closed - (a - b)) <= 1e-12 * scale;
        };
        REQUIRE(agree(gq.f_minus_a, vf, va));
        REQUIRE(agree(gq.f_minus_c, vf, vc));
        REQUIRE(agree(gq.f_minus_e, vf, ve));
    }
}

TEST_CASE("cond_max") {
    CHECK(check_cond_max(row1()));
    CHECK(check_cond_max({Sign::plus, Sign::plus, 0.7, 0.7, 1.3, 1.3}));
    cgl::testing::ParamSampler gen(0x5eed11);
    for (int i = 0; i < 1000; ++i) REQUIRE(check_cond_max(gen.with_minima()));
}

TEST_CASE("jacobian") {
    const ModelParams p = row1();
    SUBCASE("at A") {
        const Matrix4 j = jacobian(p, FieldState{0, p.mu1, 0, 0, 0});
        CHECK(j[2][0] == doctest::Approx(2 * 0.1 * p.mu1 * p.mu1));
        CHECK(j[3][1] == doctest::Approx(p.mu1 * p.mu1 - p.mu2 * p.mu2));
        CHECK(j[0][2] == 1.0);
        CHECK(j[1][3] == 1.0);
        CHECK(j[2][1] == 0.0);
        CHECK(j[3][0] == 0.0);
        const Matrix4 fd = cgl::testing::fd_jacobian(p, FieldState{0, p.mu1, 0, 0, 0});
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) CHECK(close_rel(fd[r][c], j[r][c], 1e-6, 1e-9));
    }
    SUBCASE("at E with phantom signs") {
        const ModelParams q = row1(Sign::minus, Sign::minus);
        const Matrix4 j = jacobian(q, FieldState{});
        CHECK(j[2][0] == doctest::Approx(0.1 * p.mu1 * p.mu1));
        CHECK(j[3][1] == doctest::Approx(p.mu2 * p.mu2));
    }
    SUBCASE("property: finite differences") {
        cgl::testing::ParamSampler gen(0x5eed12);
        for (int i = 0; i < 100; ++i) {
            const ModelParams q = gen.any();
            const FieldState s{0, gen.uniform(-3, 3), gen.uniform(-3, 3), gen.uniform(-1, 1), gen.uniform(-1, 1)};
            const Matrix4 j = jacobian(q, s);
            const Matrix4 fd = cgl::testing::fd_jacobian(q, s);
            for (int r = 0; r < 4; ++r)
                for (int c = 0; c < 4; ++c) REQUIRE(close_rel(fd[r][c], j[r][c], 1e-6, 1e-9));
        }
    }
}

TEST_CASE("closed-form characteristic roots") {
    const auto ab = characteristic_roots(row1(), FixedPointLabel::A);
    CHECK(ab[0].real() == doctest::Approx(0.3130228935513245).epsilon(1e-14));
    CHECK(ab[1].real() == doctest::Approx(0.3426956652263725).epsilon(1e-13));
    CHECK(ab[2] == std::complex<double>(1.0, 0.0));
    CHECK(ab[3] == std::complex<double>(1.0, 0.0));

    const ModelParams ph = row1(Sign::minus, Sign::minus);
    const auto e = characteristic_roots(ph, FixedPointLabel::E);
    CHECK(e[0].real() == doctest::Approx(0.1 * ph.mu1 * ph.mu1));
    CHECK(e[1].real() == doctest::Approx(ph.mu2 * ph.mu2));

    const auto f = characteristic_roots(row1(), FixedPointLabel::Fpp);
    CHECK(f[0].imag() == 0.0);
    CHECK(f[1].imag() == 0.0);
}

TEST_CASE("property: squared Jacobian eigenvalues reproduce k1, k2 at A..E") {
    cgl::testing::ParamSampler gen(0x5eed13);
    const std::array<std::pair<Sign, Sign>, 4> rows{
        {{Sign::plus, Sign::plus}, {Sign::plus, Sign::minus}, {Sign::minus, Sign::plus}, {Sign::minus, Sign::minus}}};
    for (int i = 0; i < 500; ++i) {
        for (const auto& [e1, e2] : rows) {
            const ModelParams p = gen.with_minima(e1, e2);
            const FixedPointReport r = fixed_points(p);
            for (const FixedPoint& f : r.points) {
                if (f.label == FixedPointLabel::Fpp || f.label == FixedPointLabel::Fpm ||
                    f.label == FixedPointLabel::Fmp || f.label == FixedPointLabel::Fmm)
                    continue;
                std::vector<std::complex<double>> sq;
                for (const auto& xi : f.jacobian_eigenvalues) sq.push_back(xi * xi);
                const double k1 = f.closed_form_roots[0].real();
                const double k2 = f.closed_form_roots[1].real();
                int hits1 = 0;
                int hits2 = 0;
                for (const auto& s : sq) {
                    if (std::abs(s - k1) <= 1e-8 * std::abs(k1)) ++hits1;
                    else if (std::abs(s - k2) <= 1e-8 * std::abs(k2)) ++hits2;
                }
                REQUIRE(hits1 + hits2 == 4);
                if (std::abs(k1 - k2) > 1e-6 * std::max(std::abs(k1), std::abs(k2))) {
                    REQUIRE(hits1 == 2);
                    REQUIRE(hits2 == 2);
                }
            }
        }
    }
}

TEST_CASE("property: biquadratic and general eigensolvers agree") {
    cgl::testing::ParamSampler gen(0x5eed14);
    for (int i = 0; i < 300; ++i) {
        const ModelParams p = gen.with_saddles();
        const FixedPointReport r = fixed_points(p);
        for (const FixedPoint& f : r.points) {
            const Spectrum a = biquadratic_spectrum(p, f.state());
            const Spectrum b = general_spectrum(jacobian(p, f.state()));
            for (const auto& xa : a) {
                double d = std::numeric_limits<double>::infinity();
                for (const auto& xb : b) d = std::min(d, std::abs(xa - xb));
                REQUIRE(d <= 1e-8 * (1.0 + std::abs(xa)));
            }
        }
    }
}

TEST_CASE("closed-form F roots equal squared Jacobian eigenvalues") {
    cgl::testing::ParamSampler gen(0x5eed15);
    for (int i = 0; i < 300; ++i) {
        const ModelParams p = gen.with_saddles();
        const FixedPointReport r = fixed_points(p);
        const FixedPoint& f = find(r, FixedPointLabel::Fpp);
        const auto k = f.closed_form_roots;
        for (const auto& xi : f.jacobian_eigenvalues) {
            const auto s = xi * xi;
            const double d = std::min(std::abs(s - k[0]), std::abs(s - k[1]));
            REQUIRE(d <= 1e-8 * (1.0 + std::abs(s)));
        }
    }
}

TEST_CASE("classification follows the table for A..E") {
    CHECK(find(fixed_points(row1()), FixedPointLabel::A).classification == Classification::unstable_node);
    CHECK(find(fixed_points(row1(Sign::plus, Sign::minus)), FixedPointLabel::A).classification == Classification::saddle);
    CHECK(find(fixed_points(row1(Sign::minus, Sign::minus)), FixedPointLabel::E).classification ==
          Classification::unstable_node);

    cgl::testing::ParamSampler gen(0x5eed16);
    const std::array<std::pair<Sign, Sign>, 4> rows{
        {{Sign::plus, Sign::plus}, {Sign::plus, Sign::minus}, {Sign::minus, Sign::plus}, {Sign::minus, Sign::minus}}};
    for (int i = 0; i < 200; ++i) {
        for (const auto& [e1, e2] : rows) {
            const ModelParams p = gen.with_minima(e1, e2);
            const FixedPointReport r = fixed_points(p);
            for (const FixedPoint& f : r.points) {
                if (f.label == FixedPointLabel::Fpp || f.label == FixedPointLabel::Fpm ||
                    f.label == FixedPointLabel::Fmp || f.label == FixedPointLabel::Fmm)
                    continue;
                REQUIRE(classify(p, f) == table_cell(e1, e2, f.label));
                REQUIRE(f.classification == table_cell(e1, e2, f.label));
            }
        }
    }
}

TEST_CASE("degenerate spectrum") {
    // mu1^2 = lambda2 mu2^2 makes the chi root at A vanish
    const ModelParams p{Sign::plus, Sign::plus, 0.3, 0.25, 1.0, 2.0};
    CHECK(find(fixed_points(p), FixedPointLabel::A).classification == Classification::degenerate);
    const Spectrum s{std::complex<double>(1e-11, 0), -1e-11, 1.0, -1.0};
    CHECK(classify_spectrum(s) == Classification::degenerate);
}

TEST_CASE("spectrum signature") {
    const Spectrum quartet{std::complex<double>(-1, -1), {-1, 1}, {1, -1}, {1, 1}};
    CHECK(classify_spectrum(quartet) == Classification::spiral);
    CHECK(signature_of(quartet).complex_quartets == 1);
    const Spectrum mixed{std::complex<double>(-1, 0), {0, -2}, {0, 2}, {1, 0}};
    CHECK(signature_of(mixed).real_pairs == 1);
    CHECK(signature_of(mixed).imaginary_pairs == 1);
    CHECK(classify_spectrum(mixed) == Classification::saddle);
}
