#include "cgl/fixed_points.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "cgl/errors.hpp"

namespace cgl {

namespace {

using cplx = std::complex<double>;

void sort_spectrum(Spectrum& s) {
    std::sort(s.begin(), s.end(), [](const cplx& a, const cplx& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
}

// Entries of diag(1/eps) * Hess V at (phi, chi).
struct ReducedMatrix {
    double pp, pc, cp, cc;
};

ReducedMatrix reduced_matrix(const ModelParams& p, double phi, double chi) {
    const double phi2 = phi * phi;
    const double chi2 = chi * chi;
    const double v_pp = chi2 + p.lambda1 * (3.0 * phi2 - p.mu1 * p.mu1);
    const double v_pc = 2.0 * phi * chi;
    const double v_cc = phi2 + p.lambda2 * (3.0 * chi2 - p.mu2 * p.mu2);
    const double e1 = to_double(p.eps1);
    const double e2 = to_double(p.eps2);
    return {e1 * v_pp, e1 * v_pc, e2 * v_pc, e2 * v_cc};
}

FixedPoint make_point(const ModelParams& p, FixedPointLabel label, double phi, double chi) {
    FixedPoint f;
    f.label = label;
    f.phi = phi;
    f.chi = chi;
    f.potential_value = potential(p, phi, chi);
    f.closed_form_roots = characteristic_roots(p, label);
    const bool on_axis = label != FixedPointLabel::Fpp && label != FixedPointLabel::Fpm &&
                         label != FixedPointLabel::Fmp && label != FixedPointLabel::Fmm;
    f.jacobian_eigenvalues = on_axis ? biquadratic_spectrum(p, f.state())
                                     : general_spectrum(jacobian(p, f.state()));
    f.signature = signature_of(f.jacobian_eigenvalues);
    f.classification = classify_spectrum(f.jacobian_eigenvalues);
    return f;
}

bool is_saddle_family(FixedPointLabel label) {
    return label == FixedPointLabel::Fpp || label == FixedPointLabel::Fpm ||
           label == FixedPointLabel::Fmp || label == FixedPointLabel::Fmm;
}

}  // namespace

std::string_view to_string(FixedPointLabel label) {
    switch (label) {
        case FixedPointLabel::A: return "A";
        case FixedPointLabel::B: return "B";
        case FixedPointLabel::C: return "C";
        case FixedPointLabel::D: return "D";
        case FixedPointLabel::E: return "E";
        case FixedPointLabel::Fpp: return "F++";
        case FixedPointLabel::Fpm: return "F+-";
        case FixedPointLabel::Fmp: return "F-+";
        case FixedPointLabel::Fmm: return "F--";
    }
    return "?";
}

std::string_view to_string(Classification c) {
    switch (c) {
        case Classification::unstable_node: return "unstable node";
        case Classification::saddle: return "saddle";
        case Classification::spiral: return "spiral";
        case Classification::degenerate: return "degenerate";
    }
    return "?";
}

SaddleLocation saddle_location(const ModelParams& p) {
    const double denom = 1.0 - p.lambda1 * p.lambda2;
    if (denom == 0.0) return {std::nullopt, "degenerate denominator"};
    const double m1 = p.mu1 * p.mu1;
    const double m2 = p.mu2 * p.mu2;
    const double phi_sq = (p.lambda2 * m2 - p.lambda1 * p.lambda2 * m1) / denom;
    const double chi_sq = (p.lambda1 * m1 - p.lambda1 * p.lambda2 * m2) / denom;
    if (!(phi_sq >= 0.0) || !(chi_sq >= 0.0)) return {std::nullopt, "negative radicand"};
    return {std::array<double, 2>{std::sqrt(phi_sq), std::sqrt(chi_sq)}, {}};
}

FixedPointReport fixed_points(const ModelParams& p) {
    FixedPointReport r;
    r.points.push_back(make_point(p, FixedPointLabel::A, p.mu1, 0.0));
    r.points.push_back(make_point(p, FixedPointLabel::B, -p.mu1, 0.0));
    r.points.push_back(make_point(p, FixedPointLabel::C, 0.0, p.mu2));
    r.points.push_back(make_point(p, FixedPointLabel::D, 0.0, -p.mu2));
    r.points.push_back(make_point(p, FixedPointLabel::E, 0.0, 0.0));
    const SaddleLocation f = saddle_location(p);
    if (!f.location) {
        r.f_absent_reason = f.absent_reason;
        return r;
    }
    const auto [phi, chi] = *f.location;
    r.points.push_back(make_point(p, FixedPointLabel::Fpp, phi, chi));
    r.points.push_back(make_point(p, FixedPointLabel::Fpm, phi, -chi));
    r.points.push_back(make_point(p, FixedPointLabel::Fmp, -phi, chi));
    r.points.push_back(make_point(p, FixedPointLabel::Fmm, -phi, -chi));
    return r;
}

MinimaConditions minima_conditions(const ModelParams& p) {
    const double m1 = p.mu1 * p.mu1;
    const double m2 = p.mu2 * p.mu2;
    return {p.lambda1 > 0.0 && m1 > p.lambda2 * m2, p.lambda2 > 0.0 && m2 > p.lambda1 * m1};
}

PotentialGaps potential_gaps(const ModelParams& p) {
    const SaddleLocation f = saddle_location(p);
    if (!f.location) throw DomainError("fixed point F is absent: " + f.absent_reason);
    const double l1 = p.lambda1;
    const double l2 = p.lambda2;
    const double m1 = p.mu1 * p.mu1;
    const double m2 = p.mu2 * p.mu2;
    const double denom = 4.0 * (1.0 - l1 * l2);
    const double a = -m1 + l2 * m2;
    const double c = -m2 + l1 * m1;
    return {l1 * a * a / denom, l2 * c * c / denom,
            l1 * l2 * (m1 * (l1 * m1 - m2) + m2 * (l2 * m2 - m1)) / denom};
}

bool check_cond_max(const ModelParams& p) {
    const double va = potential(p, p.mu1, 0.0);
    const double vc = potential(p, 0.0, p.mu2);
    const double ve = potential(p, 0.0, 0.0);
    return std::max(va, vc) <= ve + 1e-12;
}

Matrix4 jacobian(const ModelParams& p, const FieldState& s) {
    const ReducedMatrix m = reduced_matrix(p, s.phi, s.chi);
    Matrix4 j{};
    j[0][2] = 1.0;
    j[1][3] = 1.0;
    j[2][0] = m.pp;
    j[2][1] = m.pc;
    j[3][0] = m.cp;
    j[3][1] = m.cc;
    return j;
}

std::array<std::complex<double>, 4> characteristic_roots(const ModelParams& p,
                                                         FixedPointLabel label) {
    const double e1 = to_double(p.eps1);
    const double e2 = to_double(p.eps2);
    const double l1 = p.lambda1;
    const double l2 = p.lambda2;
    const double m1 = p.mu1 * p.mu1;
    const double m2 = p.mu2 * p.mu2;
    const cplx one{1.0, 0.0};
    switch (label) {
        case FixedPointLabel::A:
        case FixedPointLabel::B:
            return {cplx{2.0 / e1 * l1 * m1}, cplx{(m1 - l2 * m2) / e2}, one, one};
        case FixedPointLabel::C:
        case FixedPointLabel::D:
            return {cplx{(m2 - l1 * m1) / e1}, cplx{2.0 / e2 * l2 * m2}, one, one};
        case FixedPointLabel::E:
            return {cplx{-l1 * m1 / e1}, cplx{-l2 * m2 / e2}, one, one};
        default: break;
    }
    if (!saddle_location(p).location) throw DomainError("fixed point F is absent");
    const double ll = l1 * l2;
    const double lead = -e2 * m1 * l1 * l1 * l2 - e1 * m2 * l1 * l2 * l2 + e1 * m1 * ll + e2 * m2 * ll;
    const double bracket = m1 * (e2 * l1 - e1) + m2 * (e1 * l2 - e2);
    const double radicand =
        ll * (4.0 * e1 * e2 * (m2 * l2 - m1) * (m2 - l1 * m1) * (ll - 1.0) + ll * bracket * bracket);
    const cplx root = std::sqrt(cplx{radicand, 0.0});
    const double pre = -1.0 / (e1 * e2 * (ll - 1.0));
    return {pre * (lead + root), pre * (lead - root), one, one};
}

Spectrum biquadratic_spectrum(const ModelParams& p, const FieldState& s) {
    const ReducedMatrix m = reduced_matrix(p, s.phi, s.chi);
    const double half_trace = 0.5 * (m.pp + m.cc);
    const double det = m.pp * m.cc - m.pc * m.cp;
    const cplx disc = std::sqrt(cplx{half_trace * half_trace - det, 0.0});
    const cplx k1 = half_trace + disc;
    const cplx k2 = half_trace - disc;
    const cplx r1 = std::sqrt(k1);
    const cplx r2 = std::sqrt(k2);
    Spectrum out{r1, -r1, r2, -r2};
    sort_spectrum(out);
    return out;
}

Spectrum general_spectrum(const Matrix4& m) {
    Eigen::Matrix4d a;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) a(i, j) = m[i][j];
    Eigen::EigenSolver<Eigen::Matrix4d> solver(a, false);
    const auto ev = solver.eigenvalues();
    Spectrum out{ev(0), ev(1), ev(2), ev(3)};
    sort_spectrum(out);
    return out;
}

SpectrumSignature signature_of(const Spectrum& spectrum) {
    constexpr double rel = 1e-9;
    int real = 0;
    int imag = 0;
    int other = 0;
    for (const cplx& xi : spectrum) {
        const double mag = std::abs(xi);
        if (std::abs(xi.imag()) <= rel * mag)
            ++real;
        else if (std::abs(xi.real()) <= rel * mag)
            ++imag;
        else
            ++other;
    }
    return {real / 2, imag / 2, other / 4};
}

Classification classify_spectrum(const Spectrum& spectrum) {
    for (const cplx& xi : spectrum)
        if (std::abs(xi) < kDegenerateTolerance) return Classification::degenerate;
    const SpectrumSignature sig = signature_of(spectrum);
    if (sig.complex_quartets > 0) return Classification::spiral;
    if (sig.real_pairs == 2) return Classification::unstable_node;
    return Classification::saddle;
}

Classification classify(const ModelParams& p, const FixedPoint& f) {
    const Spectrum s = is_saddle_family(f.label) ? general_spectrum(jacobian(p, f.state()))
                                                 : biquadratic_spectrum(p, f.state());
    return classify_spectrum(s);
}

}  // namespace cgl
