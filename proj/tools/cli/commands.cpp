#include "cli/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include "cgl/fixed_points.hpp"
#include "cgl/observables.hpp"
#include "cgl/shooting.hpp"
#include "cli/app.hpp"
#include "cli/table.hpp"

namespace cgl::cli {

namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kTable2Header{"#", "phi0", "chi0", "mu1", "mu2", "M"};
const std::vector<std::string> kTable3Header{"phi0_bar", "chi0_bar", "mu", "M_bar"};

void append_complex(std::vector<Cell>& row, const std::complex<double>& c) {
    row.emplace_back(c.real());
    row.emplace_back(c.imag());
}

std::string label_of(FixedPointLabel l) { return std::string(to_string(l)); }

bool is_saddle_family(FixedPointLabel l) {
    return l == FixedPointLabel::Fpp || l == FixedPointLabel::Fpm || l == FixedPointLabel::Fmp ||
           l == FixedPointLabel::Fmm;
}

Table summary_table(const std::string& name) { return Table{name, {"phi0", "chi0", "mu1", "mu2", "M"}, {}}; }

Table diagnostics_table() {
    return Table{"diagnostics",
                 {"#", "chi0", "residual_phi", "residual_chi", "constraint_residual", "constraint_bound",
                  "bracket_width_mu1", "bracket_width_mu2", "x_end", "x_max_used", "samples"},
                 {}};
}

void add_diagnostics(Table& t, long long index, const EigenResult& r) {
    t.add({index, r.chi0, r.residual_phi, r.residual_chi, r.constraint_residual, r.constraint_bound,
           r.bracket_width_mu1, r.bracket_width_mu2, r.trajectory.back().x, r.x_max_used,
           static_cast<long long>(r.trajectory.size())});
}

}  // namespace

int cmd_fixed_points(const RunConfig& cfg, std::ostream& out) {
    const ModelParams p = cfg.fixed_point_model();
    validate(p);
    const FixedPointReport report = fixed_points(p);

    Table points{"fixed_points", {"label", "phi", "chi", "V"}, {}};
    for (int i = 1; i <= 4; ++i) {
        points.columns.push_back("k" + std::to_string(i) + "_re");
        points.columns.push_back("k" + std::to_string(i) + "_im");
    }
    for (int i = 1; i <= 4; ++i) {
        points.columns.push_back("xi" + std::to_string(i) + "_re");
        points.columns.push_back("xi" + std::to_string(i) + "_im");
    }
    for (const char* c : {"real_pairs", "imaginary_pairs", "complex_quartets", "classification", "basis"})
        points.columns.emplace_back(c);

    for (const FixedPoint& f : report.points) {
        std::vector<Cell> row{label_of(f.label), f.phi, f.chi, f.potential_value};
        for (const auto& k : f.closed_form_roots) append_complex(row, k);
        for (const auto& xi : f.jacobian_eigenvalues) append_complex(row, xi);
        row.emplace_back(static_cast<long long>(f.signature.real_pairs));
        row.emplace_back(static_cast<long long>(f.signature.imaginary_pairs));
        row.emplace_back(static_cast<long long>(f.signature.complex_quartets));
        row.emplace_back(std::string(to_string(f.classification)));
        // A..E follow the classification table; F has no tabulated class
        row.emplace_back(std::string(is_saddle_family(f.label) ? "numeric" : "table"));
        points.add(std::move(row));
    }

    const MinimaConditions mc = minima_conditions(p);
    Table cond{"conditions",
               {"eps1", "eps2", "lambda1", "lambda2", "mu1", "mu2", "local_minimum_ok", "global_minimum_ok",
                "cond_max", "f_status", "VF_minus_VA", "VF_minus_VC", "VF_minus_VE"},
               {}};
    PotentialGaps gaps{std::nan(""), std::nan(""), std::nan("")};
    if (!report.f_absent_reason) gaps = potential_gaps(p);
    cond.add({static_cast<long long>(to_double(p.eps1)), static_cast<long long>(to_double(p.eps2)), p.lambda1,
              p.lambda2, p.mu1, p.mu2, mc.local_ok, mc.global_ok, check_cond_max(p),
              report.f_absent_reason ? "absent: " + *report.f_absent_reason : std::string("present"),
              gaps.f_minus_a, gaps.f_minus_c, gaps.f_minus_e});

    write_file(cfg.out_dir, points, cfg.format);
    write_file(cfg.out_dir, cond, cfg.format);

    char line[160];
    for (const FixedPoint& f : report.points) {
        std::snprintf(line, sizeof line, "%-4s phi = %-12.9g chi = %-12.9g V = %-14.9g %s%s\n",
                      label_of(f.label).c_str(), f.phi, f.chi, f.potential_value,
                      std::string(to_string(f.classification)).c_str(),
                      is_saddle_family(f.label) ? " (numeric, no tabulated class)" : "");
        out << line;
    }
    if (report.f_absent_reason) out << "F    absent: " << *report.f_absent_reason << '\n';
    out << "local minimum condition:  " << (mc.local_ok ? "holds" : "fails") << '\n'
        << "global minimum condition: " << (mc.global_ok ? "holds" : "fails") << '\n'
        << "max(V_A, V_C) <= V_E:     " << (check_cond_max(p) ? "holds" : "fails") << '\n';
    return ok;
}

int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.chi0.size() != 1) throw ConfigError("solve needs exactly one shooting.chi0 value");
    EigenResult r;
    try {
        r = solve_eigenpair(cfg.shoot_spec(cfg.chi0.front()));
    } catch (const ShootingError& e) {
        err << "solve failed: " << e.what() << '\n';
        return solver_failure;
    }

    Table summary = summary_table("summary");
    summary.add({r.phi0, r.chi0, r.mu1, r.mu2, r.total_energy});
    Table diag = diagnostics_table();
    add_diagnostics(diag, 1, r);

    Table field{"field", {"x", "phi", "chi"}, {}};
    for (const FieldState& s : r.trajectory.samples()) field.add({s.x, s.phi, s.chi});

    Table energy{"energy", {"x", "eps"}, {}};
    const EnergyProfile prof = energy_profile(r.params, r.trajectory, cfg.profile_points);
    for (std::size_t i = 0; i < prof.grid.size(); ++i) energy.add({prof.grid[i], prof.density[i]});

    const PhaseSeries ps = phase_series(r.trajectory);
    Table phase_phi{"phase_phi", {"phi", "dphi"}, {}};
    Table phase_chi{"phase_chi", {"chi", "dchi"}, {}};
    for (const auto& [a, b] : ps.phi) phase_phi.add({a, b});
    for (const auto& [a, b] : ps.chi) phase_chi.add({a, b});

    for (const Table* t : {&summary, &diag, &field, &energy, &phase_phi, &phase_chi})
        write_file(cfg.out_dir, *t, cfg.format);
    write(out, summary, cfg.format);
    return ok;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.chi0.empty()) throw ConfigError("sweep needs at least one shooting.chi0 value");
    const double first = *std::min_element(cfg.chi0.begin(), cfg.chi0.end());
    SweepOptions opts;
    opts.workers = cfg.workers;
    // rows run concurrently only from cold brackets
    opts.warm_start = cfg.warm_start && cfg.workers == 1;
    const std::vector<SweepRow> rows = sweep(cfg.chi0, cfg.shoot_spec(first), opts);

    Table table2{"table2", kTable2Header, {}};
    Table table3{"table3", kTable3Header, {}};
    Table fig3{"fig3", {"chi0", "mu1", "mu2", "M"}, {}};
    Table fig6{"fig6", {"mu", "phi0_bar", "chi0_bar", "M_bar"}, {}};
    Table diag = diagnostics_table();
    Table failures{"failures", {"#", "chi0", "error"}, {}};

    std::vector<RescaledResult> scaled;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto index = static_cast<long long>(i + 1);
        const SweepRow& row = rows[i];
        if (!row.result) {
            failures.add({index, row.chi0, row.error});
            continue;
        }
        const EigenResult& r = *row.result;
        table2.add({index, r.phi0, r.chi0, r.mu1, r.mu2, r.total_energy});
        const RescaledResult s = rescale(r.phi0, r.chi0, r.mu1, r.mu2, r.total_energy);
        table3.add({s.phi0_bar, s.chi0_bar, s.mu, s.M_bar});
        fig3.add({r.chi0, r.mu1, r.mu2, r.total_energy});
        scaled.push_back(s);
        add_diagnostics(diag, index, r);
    }
    std::stable_sort(scaled.begin(), scaled.end(), [](const auto& a, const auto& b) { return a.mu < b.mu; });
    for (const RescaledResult& s : scaled) fig6.add({s.mu, s.phi0_bar, s.chi0_bar, s.M_bar});

    for (const Table* t : {&table2, &table3, &fig3, &fig6, &diag}) write_file(cfg.out_dir, *t, cfg.format);
    const fs::path manifest = fs::path(cfg.out_dir) / (failures.name + (cfg.format == Format::json ? ".json" : ".csv"));
    if (failures.rows.empty()) {
        fs::remove(manifest);
    } else {
        write_file(cfg.out_dir, failures, cfg.format);
        for (const auto& f : failures.rows)
            err << "row " << std::get<long long>(f[0]) << " (chi0 = " << format_number(std::get<double>(f[1]))
                << ") failed: " << std::get<std::string>(f[2]) << '\n';
    }
    write(out, table2, cfg.format);
    return failures.rows.empty() ? ok : solver_failure;
}

int cmd_rescale(const RunConfig& cfg, const fs::path& input, bool inverse, const std::optional<fs::path>& out_dir,
                std::ostream& out) {
    Table result;
    if (!inverse) {
        result = Table{"table3", kTable3Header, {}};
        for (const auto& row : read_numeric_csv(input, kTable2Header)) {
            if (!(row[3] > 0.0)) throw ConfigError(input.string() + ": mu1 must be positive");
            const RescaledResult s = rescale(row[1], row[2], row[3], row[4], row[5]);
            result.add({s.phi0_bar, s.chi0_bar, s.mu, s.M_bar});
        }
    } else {
        result = Table{"table2", kTable2Header, {}};
        long long index = 0;
        for (const auto& row : read_numeric_csv(input, kTable3Header)) {
            if (!(row[0] > 0.0)) throw ConfigError(input.string() + ": phi0_bar must be positive");
            const double mu1 = cfg.phi0 / row[0];
            const UnscaledValues u = unscale(RescaledResult{row[0], row[1], row[2], row[3], mu1}, mu1);
            result.add({++index, u.phi0, u.chi0, mu1, u.mu2, u.M});
        }
    }
    if (out_dir) write_file(*out_dir, result, cfg.format);
    else write(out, result, cfg.format);
    return ok;
}

}  // namespace cgl::cli
