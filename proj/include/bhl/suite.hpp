#ifndef BHL_SUITE_HPP
#define BHL_SUITE_HPP

#include <atomic>
#include <chrono>
#include <limits>
#include <filesystem>
#include <functional>
#include <thread>
#include <vector>

#include "bhl/bogolyubov.hpp"
#include "bhl/bounds.hpp"
#include "bhl/config.hpp"
#include "bhl/csv.hpp"
#include "bhl/scan.hpp"

namespace bhl {

namespace detail {

// Points are pure functions of their index; workers race over indices, the
// results land in slot order, so output bytes never depend on `jobs`.
inline void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body) {
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    const int spawn = std::min<std::size_t>(jobs, count);
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(spawn));
    for (int w = 0; w < spawn; ++w) {
        workers.emplace_back([&, w] {
            try {
                for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& t : workers) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

inline std::string momentum_label(const Momentum& k) {
    std::string s;
    for (std::size_t a = 0; a < k.numerators.size(); ++a) {
        if (a) s += ';';
        s += std::to_string(k.numerators[a]);
    }
    return s;
}

} // namespace detail

struct GridPoint {
    int linear_size = 0;
    int cutoff = 0;
    double repulsion = 0.0;
    double chemical_potential = 0.0;
    double symmetry_breaking = 0.0;
    double inverse_temperature = 0.0;
};

inline std::vector<GridPoint> build_verify_grid(const VerifyGrid& g) {
    std::vector<GridPoint> grid;
    for (int n : g.linear_sizes)
        for (int m : g.cutoffs)
            for (double u : g.repulsions)
                for (double mu : g.chemical_potentials)
                    for (double lambda : g.symmetry_breakings)
                        for (double beta : g.inverse_temperatures)
                            grid.push_back({n, m, u, mu, lambda, beta});
    return grid;
}

namespace detail {

struct PointRecord {
    std::vector<ProjectionIdentityReport> projections;
    std::vector<ClosedFormReport> closed_forms;
    std::vector<BogolyubovReport> bogolyubov;
    ChainReport chain;
    FieldBoundReport field_bound;
    GroundEnergyReport ground;
    DensityBandReport band;
};

inline PointRecord evaluate_point(const RunConfig& cfg, const GridPoint& p) {
    const ModelSpec model = cfg.make_grid_model(p.linear_size, p.repulsion, p.chemical_potential,
                                                p.symmetry_breaking, p.inverse_temperature);
    PointRecord rec;
    const EDJob job = solve_model(model, p.cutoff, cfg.dimension_cap);
    for (const auto& k : brillouin_momenta(model.lattice)) {
        rec.projections.push_back(
            verify_projection_identities(model, p.cutoff, k, cfg.dimension_cap));
        rec.closed_forms.push_back(verify_closed_forms(job, model, k));
        rec.bogolyubov.push_back(verify_finite_bogolyubov(job, model, k));
    }
    rec.chain = verify_chain_inequality(job, model);
    rec.field_bound = verify_field_average_bound(job, model);

    rec.ground.admissibility_threshold = ground_energy_threshold(model);
    rec.ground.smallest_order = smallest_admissible_order(model);
    rec.ground.pass = true;
    for (int dk : {0, 1, 10}) {
        GroundEnergyRow row;
        row.order = rec.ground.smallest_order + dk;
        row.cutoff = p.cutoff;
        row.bound = ground_energy_bound_value(model, row.order);
        row.min_eigenvalue = job.spectrum.eigenvalues[0];
        row.slack = row.min_eigenvalue - row.bound;
        rec.ground.pass = rec.ground.pass && row.slack >= 0.0;
        rec.ground.rows.push_back(row);
    }

    rec.band = density_band_check(model, p.cutoff, 1e-8, cfg.dimension_cap);
    return rec;
}

struct LatticeRecord {
    std::vector<SectorNormReport> norms;
    std::vector<RelativeBoundReport> relative;
};

inline std::vector<std::string> point_fields(const GridPoint& p) {
    return {format_value(p.linear_size),         format_value(p.cutoff),
            format_value(p.repulsion),           format_value(p.chemical_potential),
            format_value(p.symmetry_breaking),   format_value(p.inverse_temperature)};
}

} // namespace detail

// Full invariant suite over the configured grid.  Writes one CSV per check
// family plus manifest.json into out_dir; returns per-family statuses.
inline SuiteResult run_verify(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    cfg.validate();
    std::filesystem::create_directories(out_dir);

    const std::vector<GridPoint> grid = build_verify_grid(cfg.verify);
    std::vector<detail::PointRecord> records(grid.size());
    const auto t0 = std::chrono::steady_clock::now();
    detail::parallel_for(grid.size(), cfg.jobs,
                         [&](std::size_t i) { records[i] = detail::evaluate_point(cfg, grid[i]); });

    // lattice-level families depend only on (N, M)
    std::vector<std::pair<int, int>> lattice_cases;
    for (int n : cfg.verify.linear_sizes)
        for (int m : cfg.verify.cutoffs) lattice_cases.emplace_back(n, m);
    std::vector<detail::LatticeRecord> lattice_records(lattice_cases.size());
    detail::parallel_for(lattice_cases.size(), cfg.jobs, [&](std::size_t i) {
        const auto [n, m] = lattice_cases[i];
        const LatticeSpec lat(1, n);
        const HoppingSpec hop = cfg.make_hopping_for(lat);
        TruncatedBasis basis(lat.site_count(), m, cfg.dimension_cap);
        for (int sector = 0; sector <= std::min(m, cfg.verify.sector_norm_max); ++sector)
            lattice_records[i].norms.push_back(sector_norm_checks(basis, lat, hop, sector));
        lattice_records[i].relative =
            relative_bound_checks(basis, lat, hop, cfg.verify.relative_bound_orders,
                                  cfg.verify.relative_bound_samples, cfg.seed);
    });

    const std::vector<std::string> point_header{"N", "M", "U", "mu", "lambda", "beta"};
    SuiteResult suite;
    const auto add_check = [&](const std::string& name, const std::string& status, double slack,
                               std::size_t rows) {
        const auto now = std::chrono::steady_clock::now();
        suite.checks.push_back(
            {name, status, slack, rows, std::chrono::duration<double>(now - t0).count()});
    };
    const double inf = std::numeric_limits<double>::infinity();

    {
        auto header = point_header;
        for (const char* c : {"k", "delta_commutator", "delta_double_commutator",
                              "delta_anticommutator", "correction_min_eig", "correction_avg",
                              "pass"})
            header.push_back(c);
        CsvWriter csv(out_dir / "projection_identities.csv", header);
        bool ok = true;
        double min_delta_slack = inf;
        std::size_t rows = 0;
        for (std::size_t i = 0; i < grid.size(); ++i)
            for (const auto& rep : records[i].projections) {
                auto fields = detail::point_fields(grid[i]);
                fields.push_back(detail::momentum_label(rep.k));
                fields.push_back(format_value(rep.delta_commutator));
                fields.push_back(format_value(rep.delta_double_commutator));
                fields.push_back(format_value(rep.delta_anticommutator));
                fields.push_back(format_value(rep.correction_min_eigenvalue));
                fields.push_back(format_value(rep.correction_average));
                fields.push_back(format_value(rep.pass));
                csv.write_row(fields);
                ok = ok && rep.pass;
                min_delta_slack = std::min(min_delta_slack, 1e-12 - rep.max_delta());
                ++rows;
            }
        add_check("projection_identities", ok ? "pass" : "fail", min_delta_slack, rows);
    }
    {
        auto header = point_header;
        for (const char* c : {"k", "delta_density_creation", "delta_density_field",
                              "delta_double_field", "delta_density_hopping", "delta_double_hopping",
                              "delta_double_hamiltonian", "double_commutator_avg", "pass"})
            header.push_back(c);
        CsvWriter csv(out_dir / "commutator_closed_forms.csv", header);
        bool ok = true;
        double min_slack = inf;
        std::size_t rows = 0;
        for (std::size_t i = 0; i < grid.size(); ++i)
            for (const auto& rep : records[i].closed_forms) {
                auto fields = detail::point_fields(grid[i]);
                fields.push_back(detail::momentum_label(rep.k));
                fields.push_back(format_value(rep.delta_density_creation));
                fields.push_back(format_value(rep.delta_density_field));
                fields.push_back(format_value(rep.delta_double_field));
                fields.push_back(format_value(rep.delta_density_hopping));
                fields.push_back(format_value(rep.delta_double_hopping));
                fields.push_back(format_value(rep.delta_double_hamiltonian));
                fields.push_back(format_value(rep.double_commutator_average));
                fields.push_back(format_value(rep.pass));
                csv.write_row(fields);
                ok = ok && rep.pass;
                min_slack = std::min(min_slack, 1e-11 - rep.max_delta());
                ++rows;
            }
        add_check("commutator_closed_forms", ok ? "pass" : "fail", min_slack, rows);
    }
    {
        auto header = point_header;
        for (const char* c : {"k", "anticommutator_avg", "double_commutator_direct",
                              "double_commutator_closed", "cross_check_delta",
                              "cross_check_delta_commutator", "lhs", "rhs", "slack", "pass"})
            header.push_back(c);
        CsvWriter csv(out_dir / "bogolyubov.csv", header);
        bool ok = true;
        double min_slack = inf;
        std::size_t rows = 0;
        for (std::size_t i = 0; i < grid.size(); ++i)
            for (const auto& rep : records[i].bogolyubov) {
                auto fields = detail::point_fields(grid[i]);
                fields.push_back(detail::momentum_label(rep.k));
                fields.push_back(format_value(rep.anticommutator_average));
                fields.push_back(format_value(rep.double_commutator_direct));
                fields.push_back(format_value(rep.double_commutator_closed));
                fields.push_back(format_value(rep.cross_check_delta));
                fields.push_back(format_value(rep.cross_check_delta_commutator));
                fields.push_back(format_value(rep.lhs));
                fields.push_back(format_value(rep.rhs));
                fields.push_back(format_value(rep.slack));
                fields.push_back(format_value(rep.pass));
                csv.write_row(fields);
                ok = ok && rep.pass;
                min_slack = std::min(min_slack, rep.slack);
                ++rows;
            }
        add_check("bogolyubov", ok ? "pass" : "fail", min_slack, rows);
    }
    {
        auto header = point_header;
        for (const char* c : {"k", "lhs", "rhs", "slack", "double_commutator_avg",
                              "double_commutator_bound", "pass"})
            header.push_back(c);
        CsvWriter csv(out_dir / "chain_inequality.csv", header);
        bool ok = true;
        double min_slack = inf;
        std::size_t rows = 0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const auto& rep = records[i].chain;
            for (const auto& row : rep.per_momentum) {
                auto fields = detail::point_fields(grid[i]);
                fields.push_back(detail::momentum_label(row.k));
                fields.push_back(format_value(row.lhs));
                fields.push_back(format_value(row.rhs));
                fields.push_back(format_value(row.slack));
                fields.push_back(format_value(row.double_commutator_average));
                fields.push_back(format_value(row.double_commutator_bound));
                fields.push_back(format_value(row.pass));
                csv.write_row(fields);
                ++rows;
            }
            auto fields = detail::point_fields(grid[i]);
            fields.push_back("sum");
            fields.push_back(format_value(rep.summed_lhs));
            fields.push_back(format_value(rep.summed_rhs));
            fields.push_back(format_value(rep.summed_slack));
            fields.push_back("");
            fields.push_back("");
            fields.push_back(format_value(rep.pass));
            csv.write_row(fields);
            ok = ok && rep.pass;
            min_slack = std::min(min_slack, rep.summed_slack);
            ++rows;
        }
        add_check("chain_inequality", ok ? "pass" : "fail", min_slack, rows);
    }
    {
        auto header = point_header;
        for (const char* c : {"field_avg", "number_avg", "slack", "pass"}) header.push_back(c);
        CsvWriter csv(out_dir / "field_bound.csv", header);
        bool ok = true;
        double min_slack = inf;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const auto& rep = records[i].field_bound;
            auto fields = detail::point_fields(grid[i]);
            fields.push_back(format_value(rep.field_average));
            fields.push_back(format_value(rep.number_average));
            fields.push_back(format_value(rep.slack));
            fields.push_back(format_value(rep.pass));
            csv.write_row(fields);
            ok = ok && rep.pass;
            min_slack = std::min(min_slack, rep.slack);
        }
        add_check("field_bound", ok ? "pass" : "fail", min_slack, grid.size());
    }
    {
        auto header = point_header;
        for (const char* c : {"K", "threshold", "bound", "min_eigenvalue", "slack", "pass"})
            header.push_back(c);
        CsvWriter csv(out_dir / "ground_energy.csv", header);
        bool ok = true;
        double min_slack = inf;
        std::size_t rows = 0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const auto& rep = records[i].ground;
            for (const auto& row : rep.rows) {
                auto fields = detail::point_fields(grid[i]);
                fields.push_back(format_value(row.order));
                fields.push_back(format_value(rep.admissibility_threshold));
                fields.push_back(format_value(row.bound));
                fields.push_back(format_value(row.min_eigenvalue));
                fields.push_back(format_value(row.slack));
                fields.push_back(format_value(row.slack >= 0.0));
                csv.write_row(fields);
                min_slack = std::min(min_slack, row.slack);
                ++rows;
            }
            ok = ok && rep.pass;
        }
        add_check("ground_energy", ok ? "pass" : "fail", min_slack, rows);
    }
    {
        auto header = point_header;
        for (const char* c : {"rate", "lower", "upper", "slack_lower", "slack_upper", "converged",
                              "status"})
            header.push_back(c);
        CsvWriter csv(out_dir / "density_band.csv", header);
        bool ok = true;
        bool any_inconclusive = false;
        double min_slack = inf;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const auto& rep = records[i].band;
            auto fields = detail::point_fields(grid[i]);
            fields.push_back(format_value(rep.rate));
            fields.push_back(format_value(rep.lower));
            fields.push_back(format_value(rep.upper));
            fields.push_back(format_value(rep.slack_lower));
            fields.push_back(format_value(rep.slack_upper));
            fields.push_back(format_value(rep.converged));
            fields.push_back(rep.status);
            csv.write_row(fields);
            ok = ok && rep.status != "fail";
            any_inconclusive = any_inconclusive || rep.status == "inconclusive";
            min_slack = std::min(min_slack, rep.slack_upper);
        }
        add_check("density_band", !ok ? "fail" : any_inconclusive ? "inconclusive" : "pass",
                  min_slack, grid.size());
    }
    {
        CsvWriter csv(out_dir / "sector_norms.csv",
                      {"N", "M", "sector", "hop_norm_formula", "hop_norm_max_delta", "offdiag_norm",
                       "offdiag_bound", "square_min_diag", "square_lower_bound", "pass"});
        bool ok = true;
        double min_slack = inf;
        std::size_t rows = 0;
        for (std::size_t i = 0; i < lattice_cases.size(); ++i)
            for (const auto& rep : lattice_records[i].norms) {
                csv.row(lattice_cases[i].first, lattice_cases[i].second, rep.sector,
                        rep.hop_norm_formula, rep.hop_norm_max_delta, rep.offdiag_norm,
                        rep.offdiag_bound, rep.square_min_diagonal, rep.square_lower_bound,
                        rep.pass);
                ok = ok && rep.pass;
                min_slack = std::min(min_slack, 1e-10 - rep.hop_norm_max_delta);
                ++rows;
            }
        add_check("sector_norms", ok ? "pass" : "fail", min_slack, rows);
    }
    {
        CsvWriter csv(out_dir / "relative_bounds.csv",
                      {"N", "M", "K", "samples", "violations", "min_slack_offdiag",
                       "min_slack_number", "min_slack_diag", "min_slack_field", "pass"});
        bool ok = true;
        double min_slack = inf;
        std::size_t rows = 0;
        for (std::size_t i = 0; i < lattice_cases.size(); ++i)
            for (const auto& rep : lattice_records[i].relative) {
                csv.row(lattice_cases[i].first, lattice_cases[i].second, rep.order, rep.samples,
                        rep.violations, rep.min_slack_offdiag, rep.min_slack_number,
                        rep.min_slack_diag, rep.min_slack_field, rep.pass);
                ok = ok && rep.pass;
                min_slack = std::min({min_slack, rep.min_slack_offdiag, rep.min_slack_number,
                                      rep.min_slack_diag, rep.min_slack_field});
                ++rows;
            }
        add_check("relative_bounds", ok ? "pass" : "fail", min_slack, rows);
    }

    // manifest: hash, version, seed and statuses only, so the file is
    // byte-stable across identical runs
    {
        json manifest;
        manifest["config_hash"] = cfg.config_hash.empty() ? "builtin-defaults" : cfg.config_hash;
        manifest["version"] = tool_version;
        manifest["seed"] = cfg.seed;
        manifest["grid_points"] = grid.size();
        json checks = json::array();
        for (const auto& c : suite.checks)
            checks.push_back({{"name", c.name}, {"status", c.status}, {"min_slack", c.min_slack},
                              {"rows", c.rows}});
        manifest["checks"] = checks;
        std::ofstream out(out_dir / "manifest.json", std::ios::binary | std::ios::trunc);
        out << manifest.dump(2) << "\n";
    }
    return suite;
}

// --- scans ------------------------------------------------------------------

inline void run_condensation_scan(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    CondensationScanConfig scan = cfg.condensation;
    scan.dimension_cap = cfg.dimension_cap;
    const auto points = condensation_scan(scan);
    CsvWriter csv(out_dir / "condensation.csv",
                  {"d", "N", "M_final", "U", "mu", "lambda", "beta", "rho", "m", "S", "bound",
                   "slack", "status"});
    for (const auto& p : points)
        csv.row(p.dimension, p.linear_size, p.final_cutoff, p.repulsion, p.chemical_potential,
                p.lambda, p.beta, p.density_value, p.order_value, p.ksum, p.bound, p.slack,
                p.status);
}

inline void run_density_scan(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const ModelSpec base = cfg.make_model();
    {
        CsvWriter csv(out_dir / "density_band.csv",
                      {"mu", "M", "rate", "lower", "upper", "slack_lower", "slack_upper",
                       "converged", "status"});
        for (double mu : cfg.density_scan.chemical_potentials) {
            const ModelSpec model = base.with_chemical_potential(mu);
            for (int m = cfg.density_scan.cutoff_start; m <= cfg.density_scan.cutoff_max; ++m) {
                const auto rep = density_band_check(model, m, cfg.density_scan.convergence_gate,
                                                    cfg.dimension_cap);
                csv.row(rep.mu, rep.cutoff, rep.rate, rep.lower, rep.upper, rep.slack_lower,
                        rep.slack_upper, rep.converged, rep.status);
                if (rep.converged) break; // ladder stops at the gate
            }
        }
    }
    {
        const ModelSpec centered =
            base.with_chemical_potential(cfg.density_scan.window_center).with_symmetry_breaking(0.0);
        const auto rep = density_window_check(centered, cfg.density_scan.window_cutoff,
                                              cfg.density_scan.window_fractions, 1e-9,
                                              cfg.dimension_cap);
        CsvWriter csv(out_dir / "density_window.csv",
                      {"mu0", "coupling", "lambda0", "rho1", "rho2", "mu_tilde", "lambda", "rho",
                       "inside"});
        for (const auto& s : rep.samples)
            csv.row(rep.window.mu0, rep.window.coupling, rep.window.lambda0, rep.window.rho1,
                    rep.window.rho2, rep.window.mu_tilde, s.lambda, s.density_value, s.inside);
    }
}

inline void run_convergence_scan(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const ModelSpec model = cfg.make_model();
    const auto table =
        convergence_study(model, cfg.convergence_scan.cutoffs, cfg.convergence_scan.tolerance,
                          cfg.dimension_cap);
    CsvWriter csv(out_dir / "convergence.csv",
                  {"M", "dim", "number_avg", "zero_mode_re", "zero_mode_im", "rho", "m",
                   "inc_number", "inc_zero_mode", "inc_rho", "inc_m", "cauchy"});
    for (const auto& row : table.rows)
        csv.row(row.cutoff, row.dim, row.number_average, row.zero_mode_average.real(),
                row.zero_mode_average.imag(), row.density_value, row.order_parameter_value,
                row.increment_number, row.increment_zero_mode, row.increment_density,
                row.increment_order, table.cauchy);
}

inline void run_ksum_scan(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    CsvWriter csv(out_dir / "ksum.csv",
                  {"d", "N", "second_moment", "alpha", "S", "limit", "error", "lower_bound"});
    for (const auto& c : cfg.ksum_cases) {
        const auto table = ksum_vs_integral(c.dimension, c.linear_sizes, c.second_moment, c.alpha);
        for (const auto& row : table.rows)
            csv.row(c.dimension, row.linear_size, c.second_moment, c.alpha, row.value,
                    table.has_limit ? format_value(table.limit) : std::string("nan"),
                    format_value(row.error),
                    table.has_lower_bound ? format_value(table.lower_bound) : std::string("nan"));
        if (table.has_limit)
            csv.row(c.dimension, "limit", c.second_moment, c.alpha, table.limit,
                    format_value(table.limit), 0.0,
                    table.has_lower_bound ? format_value(table.lower_bound) : std::string("nan"));
    }
}

inline void run_spectrum_dump(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const ModelSpec model = cfg.make_model();
    int cutoff = cfg.cutoff.fixed;
    if (cfg.cutoff.adaptive) {
        const auto res = solve_adaptive(model, cfg.cutoff.min, cfg.cutoff.max,
                                        cfg.cutoff.tolerance, cfg.dimension_cap);
        if (!res.job) throw dimension_error("spectrum: adaptive ladder exceeded the cap");
        cutoff = res.final_cutoff;
    }
    const EDJob job = solve_model(model, cutoff, cfg.dimension_cap);
    CsvWriter csv(out_dir / "spectrum.csv", {"index", "eigenvalue"});
    for (Eigen::Index i = 0; i < job.spectrum.eigenvalues.size(); ++i)
        csv.row(static_cast<std::size_t>(i), job.spectrum.eigenvalues[i]);
}

} // namespace bhl

#endif
