#include "cgl/observables.hpp"

#include <cmath>

#include "cgl/errors.hpp"

namespace cgl {

namespace {

void require_regular(const Trajectory& t) {
    if (t.termination().kind == Termination::Kind::field_escaped)
        throw DomainError("trajectory ended in field escape, not a converged eigen-solution");
    if (t.size() < 2) throw DomainError("trajectory has fewer than 2 samples");
}

std::size_t even_intervals(std::size_t n) {
    n = std::max(n, kDefaultQuadraturePoints);
    return n % 2 == 0 ? n : n + 1;
}

}  // namespace

EnergyProfile energy_profile(const ModelParams& p, const Trajectory& t, std::size_t n) {
    require_regular(t);
    const Trajectory dense = dense_resample(t, std::max<std::size_t>(n, 2));
    const auto s = dense.samples();
    EnergyProfile prof;
    prof.grid.reserve(2 * s.size() - 1);
    prof.density.reserve(2 * s.size() - 1);
    for (std::size_t i = s.size(); i-- > 1;) {
        prof.grid.push_back(-s[i].x);
        prof.density.push_back(energy_density(p, s[i]));
    }
    for (const FieldState& st : s) {
        prof.grid.push_back(st.x);
        prof.density.push_back(energy_density(p, st));
    }
    return prof;
}

double simpson(const std::vector<double>& f, double dx) {
    if (f.size() < 3 || f.size() % 2 == 0) throw DomainError("simpson needs an odd number (>= 3) of samples");
    double odd = 0.0;
    double even = 0.0;
    for (std::size_t i = 1; i + 1 < f.size(); ++i) (i % 2 ? odd : even) += f[i];
    return dx / 3.0 * (f.front() + 4.0 * odd + 2.0 * even + f.back());
}

double energy_cutoff(const ModelParams& p, const Trajectory& t, std::size_t intervals) {
    require_regular(t);
    const Trajectory dense = dense_resample(t, even_intervals(intervals) + 1);
    const auto s = dense.samples();
    for (std::size_t i = s.size(); i-- > 0;)
        if (std::abs(energy_density(p, s[i])) > kEnergyCutoff) return i + 1 < s.size() ? s[i + 1].x : s[i].x;
    return s.front().x;
}

double total_energy(const ModelParams& p, const Trajectory& t, std::size_t intervals) {
    require_regular(t);
    const std::size_t n = even_intervals(intervals);
    const double x_cut = energy_cutoff(p, t, n);
    if (x_cut <= t.front().x) return 0.0;
    const Trajectory head = t.truncated(x_cut, t.termination());
    const Trajectory dense = dense_resample(head, n + 1);
    std::vector<double> eps;
    eps.reserve(n + 1);
    for (const FieldState& s : dense.samples()) eps.push_back(energy_density(p, s));
    const double dx = (dense.back().x - dense.front().x) / static_cast<double>(n);
    return 2.0 * simpson(eps, dx);
}

PhaseSeries phase_series(const Trajectory& t) {
    PhaseSeries out;
    const auto s = t.samples();
    if (s.empty()) return out;
    out.phi.reserve(2 * s.size());
    out.chi.reserve(2 * s.size());
    for (std::size_t i = s.size(); i-- > 1;) {
        out.phi.emplace_back(s[i].phi, -s[i].z);
        out.chi.emplace_back(s[i].chi, -s[i].v);
    }
    for (const FieldState& st : s) {
        out.phi.emplace_back(st.phi, st.z);
        out.chi.emplace_back(st.chi, st.v);
    }
    return out;
}

RescaledResult rescale(double phi0, double chi0, double mu1, double mu2, double M) {
    if (!(mu1 > 0.0)) throw DomainError("rescaling requires mu1 > 0");
    return {phi0 / mu1, chi0 / mu1, mu2 / mu1, M / (mu1 * mu1 * mu1), mu1};
}

UnscaledValues unscale(const RescaledResult& r, double mu1) {
    if (!(mu1 > 0.0)) throw DomainError("rescaling requires mu1 > 0");
    return {r.phi0_bar * mu1, r.chi0_bar * mu1, r.mu * mu1, r.M_bar * mu1 * mu1 * mu1};
}

RescaledResult rescale_result(const EigenResult& r, double phi0, double chi0) {
    return rescale(phi0, chi0, r.mu1, r.mu2, r.total_energy);
}

}  // namespace cgl
