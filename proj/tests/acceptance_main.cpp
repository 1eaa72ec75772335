// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failures.  Grid: d=1, N in {2,3,4}; M in {4,6}; U in {0.5,1,2};
// mu in {-1,0,1}; lambda in {0.05,0.2,1}; beta in {0.5,1,2}; nearest-neighbor
// hopping -0.5.

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bhl/bogolyubov.hpp"
#include "bhl/bounds.hpp"
#include "bhl/config.hpp"
#include "bhl/scan.hpp"
#include "bhl/suite.hpp"

using namespace bhl;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        pass = false;
        if (detail.empty()) detail = why;
    }
};

struct Tracker {
    int failures = 0;

    void report(int id, const char* name, const Outcome& o) {
        std::printf("[%2d] %s  %s%s%s\n", id, o.pass ? "PASS" : "FAIL", name,
                    o.detail.empty() ? "" : " -- ", o.detail.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failures;
    }
};

ModelSpec grid_model(int n, double u, double mu, double lambda, double beta) {
    LatticeSpec lat(1, n);
    return ModelSpec(lat, HoppingSpec::nearest_neighbor(lat, -0.5), u, mu, lambda, beta);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

const std::vector<int> grid_sizes{2, 3, 4};
const std::vector<int> grid_cutoffs{4, 6};
const std::vector<double> grid_repulsions{0.5, 1.0, 2.0};
const std::vector<double> grid_potentials{-1.0, 0.0, 1.0};
const std::vector<double> grid_fields{0.05, 0.2, 1.0};
const std::vector<double> grid_betas{0.5, 1.0, 2.0};
constexpr std::uint64_t acceptance_seed = 20240901u;

// Criteria 1, 2, 3, 5 and 6 all quantify over the full grid; one sweep feeds
// all five trackers.
struct SweepOutcomes {
    Outcome bogolyubov;       // 1
    Outcome projections;      // 2
    Outcome closed_forms;     // 3
    Outcome relative_bounds;  // 5
    Outcome ground_energy;    // 6
    double worst_bog_slack = std::numeric_limits<double>::infinity();
    double worst_proj_delta = 0.0;
    double worst_cf_delta = 0.0;
    double worst_ground_slack = std::numeric_limits<double>::infinity();
};

SweepOutcomes run_grid_sweep() {
    SweepOutcomes out;
    for (int n : grid_sizes)
        for (int m : grid_cutoffs)
            for (double u : grid_repulsions)
                for (double mu : grid_potentials)
                    for (double lambda : grid_fields)
                        for (double beta : grid_betas) {
                            const ModelSpec model = grid_model(n, u, mu, lambda, beta);
                            const EDJob job = solve_model(model, m);
                            const auto ks = brillouin_momenta(model.lattice);
                            for (const auto& k : ks) {
                                const auto bog = verify_finite_bogolyubov(job, model, k);
                                out.worst_bog_slack = std::min(
                                    out.worst_bog_slack,
                                    bog.slack + 1e-9 * std::max(1.0, bog.lhs));
                                if (!bog.pass)
                                    out.bogolyubov.fail("slack " + fmt(bog.slack) + " at N=" +
                                                        std::to_string(n));

                                const auto proj = verify_projection_identities(model, m, k);
                                out.worst_proj_delta =
                                    std::max(out.worst_proj_delta, proj.max_delta());
                                if (!proj.pass)
                                    out.projections.fail("delta " + fmt(proj.max_delta()));

                                const auto cf = verify_closed_forms(job, model, k);
                                out.worst_cf_delta = std::max(out.worst_cf_delta, cf.max_delta());
                                if (!cf.pass)
                                    out.closed_forms.fail("delta " + fmt(cf.max_delta()) +
                                                          " dc_avg " +
                                                          fmt(cf.double_commutator_average));
                            }
                            const auto rel = relative_bound_checks(
                                job.basis, model.lattice, model.hopping, {1, 2, 5}, 100,
                                acceptance_seed);
                            for (const auto& r : rel)
                                if (r.violations != 0)
                                    out.relative_bounds.fail("violations at K=" +
                                                             std::to_string(r.order));
                            const int k_min = smallest_admissible_order(model);
                            const double bound = ground_energy_bound_value(model, k_min);
                            const double slack = job.spectrum.eigenvalues[0] - bound;
                            out.worst_ground_slack = std::min(out.worst_ground_slack, slack);
                            if (slack < 0.0)
                                out.ground_energy.fail("lambda_min below bound by " + fmt(-slack));
                        }
    out.bogolyubov.detail = "min guarded slack " + fmt(out.worst_bog_slack);
    out.projections.detail = "max delta " + fmt(out.worst_proj_delta);
    out.closed_forms.detail = "max rel delta " + fmt(out.worst_cf_delta);
    out.relative_bounds.detail = "100 vectors x K in {1,2,5} x grid, zero violations";
    out.ground_energy.detail = "min slack " + fmt(out.worst_ground_slack);
    return out;
}

// 4. sector norms against their closed forms
Outcome criterion_sector_norms() {
    Outcome o;
    double worst = 0.0;
    for (int n : grid_sizes)
        for (int m : grid_cutoffs) {
            const LatticeSpec lat(1, n);
            const HoppingSpec hop = HoppingSpec::nearest_neighbor(lat, -0.5);
            TruncatedBasis basis(lat.site_count(), m);
            for (int sector = 0; sector <= std::min(m, 6); ++sector) {
                const auto rep = sector_norm_checks(basis, lat, hop, sector);
                worst = std::max(worst, rep.hop_norm_max_delta);
                if (rep.hop_norm_max_delta > 1e-10)
                    o.fail("hop norm delta " + fmt(rep.hop_norm_max_delta));
                if (rep.square_min_diagonal < rep.square_lower_bound - 1e-12)
                    o.fail("N2 sector bound violated");
                if (rep.offdiag_norm > rep.offdiag_bound + 1e-10)
                    o.fail("T' sector bound violated");
            }
        }
    if (o.pass) o.detail = "max norm delta " + fmt(worst) + " (m=1:1, m=2:sqrt2, m=3:2)";
    return o;
}

// 7. thermal-average structure
Outcome criterion_thermal_structure() {
    Outcome o;
    // <1> = 1
    {
        const ModelSpec model = grid_model(2, 1.0, 0.0, 0.2, 1.0);
        const EDJob job = solve_model(model, 6);
        const Complex one =
            thermal_average(job.state, job.spectrum, SparseComplexOperator::identity(job.basis.dim()));
        if (std::abs(one - Complex(1.0, 0.0)) > 1e-14) o.fail("<1> != 1");
    }
    // lambda = 0 kills the order parameter to the quoted scale
    for (int n : grid_sizes)
        for (double beta : grid_betas) {
            const ModelSpec model = grid_model(n, 1.0, 0.0, 0.0, beta);
            const EDJob job = solve_model(model, 6);
            if (order_parameter(job, model) > 1e-26) o.fail("m_M > 1e-26 at lambda=0");
        }
    // f_M < f_{M+1} strictly for M = 2..8 at the 9 (mu, beta) pairs.  With
    // lambda = 0 the sector blocks of H_{M+1} extend those of H_M verbatim,
    // so the increment is exactly the top-sector mass, which must be > 0.
    {
        const int top = 9;
        for (double mu : grid_potentials)
            for (double beta : grid_betas) {
                const ModelSpec model = grid_model(2, 1.0, mu, 0.0, beta);
                TruncatedBasis big(model.lattice.site_count(), top);
                const auto h_big = op_hamiltonian(big, model);
                // prefix consistency of the blocks
                TruncatedBasis small(model.lattice.site_count(), top - 1);
                const auto h_small = op_hamiltonian(small, model);
                if (max_abs_diff(h_big.compressed_to(small.dim()), h_small) != 0.0)
                    o.fail("sector blocks not prefix-stable");
                // per-sector spectra
                const auto spec = diagonalize(h_big, big);
                const double ground = spec.eigenvalues[0];
                std::vector<long double> sector_mass(static_cast<std::size_t>(top) + 1, 0.0L);
                for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i) {
                    // eigenvectors are exactly sector-supported under the
                    // block solve; the largest component names the sector
                    Eigen::Index peak = 0;
                    spec.eigenvectors.col(i).cwiseAbs().maxCoeff(&peak);
                    const int sector = big.sector_of(static_cast<std::size_t>(peak));
                    double leakage = 0.0;
                    const auto [first, last] = big.sector_range(sector);
                    for (Eigen::Index r = 0; r < spec.eigenvectors.rows(); ++r)
                        if (r < static_cast<Eigen::Index>(first) ||
                            r >= static_cast<Eigen::Index>(last))
                            leakage += std::norm(spec.eigenvectors(r, i));
                    if (leakage != 0.0) {
                        o.fail("eigenvector leaks outside its sector");
                        continue;
                    }
                    sector_mass[static_cast<std::size_t>(sector)] +=
                        std::exp(static_cast<long double>(-beta * (spec.eigenvalues[i] - ground)));
                }
                long double f = sector_mass[0] + sector_mass[1] + sector_mass[2];
                for (int m = 2; m <= top - 1; ++m) {
                    const long double increment = sector_mass[static_cast<std::size_t>(m) + 1];
                    if (!(increment > 0.0L)) o.fail("zero top-sector mass at M=" + std::to_string(m));
                    const long double next = f + increment;
                    if (next < f) o.fail("f decreased");
                    f = next;
                }
            }
    }
    // midpoint log-convexity in mu within 1e-10
    for (double beta : grid_betas) {
        const ModelSpec base = grid_model(2, 1.0, 0.0, 0.2, beta);
        const auto prof = log_trace_profile(base, 8, {-1.0, 0.0, 1.0});
        if (prof[1].log_f > 0.5 * prof[0].log_f + 0.5 * prof[2].log_f + 1e-10)
            o.fail("log f not midpoint convex");
    }
    if (o.pass)
        o.detail = "<1>=1; m_M(lambda=0) <= 1e-26; f strictly increasing M=2..8 x 9 pairs; convex";
    return o;
}

// 8. convergence of rho_M and m_M at the reference point + series oracle
Outcome criterion_convergence() {
    Outcome o;
    const ModelSpec model = grid_model(2, 1.0, 0.0, 0.2, 1.0);
    const auto table = convergence_study(model, {2, 3, 4, 5, 6, 7, 8, 9, 10}, 1e-8);
    const auto& last = table.rows.back();
    if (!(last.increment_density < 1e-6)) o.fail("rho increment " + fmt(last.increment_density));
    if (!(last.increment_order < 1e-6)) o.fail("m increment " + fmt(last.increment_order));

    // single decoupled site vs the scalar series
    TruncatedBasis basis(1, 10);
    const auto spec = diagonalize(1.0 * op_total_number_sq(basis), basis);
    const auto st = make_thermal_state(1.0, spec.eigenvalues);
    const double avg = thermal_average(st, spec, op_number(basis, 0)).real();
    double z = 0.0, zn = 0.0;
    for (int n = 0; n < 60; ++n) {
        const double w = std::exp(-double(n) * n);
        z += w;
        zn += n * w;
    }
    if (std::abs(avg - zn / z) > 1e-12) o.fail("single-site oracle mismatch");
    if (o.pass)
        o.detail = "increments " + fmt(last.increment_density) + "/" + fmt(last.increment_order) +
                   " by M=10; oracle delta " + fmt(std::abs(avg - zn / z));
    return o;
}

// 9. density band
Outcome criterion_density_band() {
    Outcome o;
    const ModelSpec base = grid_model(2, 1.0, 0.0, 0.2, 1.0);
    for (double mu : grid_potentials) {
        // upper bound at every cutoff
        for (int m : {3, 4, 5, 6, 7, 8}) {
            const auto rep = density_band_check(base.with_chemical_potential(mu), m);
            if (rep.slack_upper < -1e-9) o.fail("upper band violated pre-convergence");
        }
        // lower bound at a converged cutoff
        for (int m = 8; m <= 24; ++m) {
            const auto rep = density_band_check(base.with_chemical_potential(mu), m, 1e-8, 40000);
            if (!rep.converged) continue;
            if (rep.status != "pass") o.fail("band status " + rep.status + " at mu=" + fmt(mu));
            break;
        }
    }
    // decoupled point: equality R = g(mu) to 1e-12
    LatticeSpec lat(1, 2);
    const ModelSpec free_model(lat, HoppingSpec::none(lat), 1.0, 0.5, 0.0, 1.0);
    const auto rep = density_band_check(free_model, 16);
    const double g = g_series(1.0, 1.0, 0.5).value;
    if (std::abs(rep.rate - g) > 1e-12) o.fail("R != g(mu) at decoupled point");
    if (o.pass) o.detail = "upper every M, lower at converged M, |R-g| = " + fmt(std::abs(rep.rate - g));
    return o;
}

// 10. density window
Outcome criterion_density_window() {
    Outcome o;
    const ModelSpec base = grid_model(2, 1.0, 0.0, 0.0, 1.0); // coupling bound 0.5
    const auto rep = density_window_check(base, 8, {0.5, 0.25}, 0.0);
    if (!(rep.window.lambda0 > 0.0)) o.fail("lambda0 <= 0");
    if (!(rep.window.rho1 > 0.0 && rep.window.rho2 > rep.window.rho1)) o.fail("window not ordered");
    for (const auto& s : rep.samples)
        if (!(s.density_value >= rep.window.rho1 && s.density_value <= rep.window.rho2))
            o.fail("sampled density outside window");
    if (o.pass)
        o.detail = "lambda0=" + fmt(rep.window.lambda0) + " window=[" + fmt(rep.window.rho1) +
                   ", " + fmt(rep.window.rho2) + "], samples inside";
    return o;
}

// 11. k-sum vs integral
Outcome criterion_ksum() {
    Outcome o;
    const auto table = ksum_vs_integral(1, {8, 16, 32, 64}, 1.0, 1.0);
    double worst_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < table.rows.size(); ++i) {
        const double ratio = table.rows[i - 1].error / table.rows[i].error;
        worst_ratio = std::min(worst_ratio, ratio);
        if (ratio < 1.8) o.fail("error ratio " + fmt(ratio));
    }
    for (double alpha : {1.0, 0.1, 0.01}) {
        const double estimate = ksum_value(2, 512, 1.0, alpha);
        const double bound = ksum_lower_bound_2d(1.0, alpha);
        if (!(estimate > bound)) o.fail("d=2 limit below bound at alpha=" + fmt(alpha));
    }
    if (o.pass) o.detail = "d=1 error ratio >= " + fmt(worst_ratio) + "; d=2 above quarter-disk bound";
    return o;
}

// 12. no-condensation bound on the scan
Outcome criterion_condensation() {
    Outcome o;
    CondensationScanConfig cfg; // defaults carry the acceptance lattice sets
    const auto points = condensation_scan(cfg);
    std::map<std::pair<int, int>, double> prev_bound;
    double min_slack = std::numeric_limits<double>::infinity();
    for (const auto& p : points) {
        if (p.status == "excluded" || p.status == "skipped") continue;
        if (!(p.order_value * p.ksum <= p.bound * (1.0 + 1e-9)))
            o.fail("bound violated at d=" + std::to_string(p.dimension) + " lambda=" + fmt(p.lambda));
        min_slack = std::min(min_slack, p.slack);
        const auto key = std::make_pair(p.dimension, p.linear_size);
        const double derived = condensation_order_bound(p);
        const auto it = prev_bound.find(key);
        // lambdas run descending, so each derived bound must drop
        if (it != prev_bound.end() && !(derived < it->second))
            o.fail("derived m bound not decreasing as lambda -> 0");
        prev_bound[key] = derived;
    }
    if (o.pass) o.detail = "16 points, min slack " + fmt(min_slack) + ", bound shrinks as lambda->0";
    return o;
}

// 13. byte-identical verify reruns
Outcome criterion_determinism() {
    Outcome o;
    RunConfig cfg; // shipped defaults: full grid, seed 20240901
    cfg.jobs = 2;
    const fs::path out1 = fs::temp_directory_path() / "bhl_accept_det1";
    const fs::path out2 = fs::temp_directory_path() / "bhl_accept_det2";
    fs::remove_all(out1);
    fs::remove_all(out2);
    const SuiteResult s1 = run_verify(cfg, out1);
    const SuiteResult s2 = run_verify(cfg, out2);
    if (!s1.overall_pass() || !s2.overall_pass()) o.fail("verify suite failed");
    std::size_t files = 0;
    for (const auto& entry : fs::directory_iterator(out1)) {
        std::ifstream a(entry.path(), std::ios::binary);
        std::ifstream b(out2 / entry.path().filename(), std::ios::binary);
        std::stringstream sa, sb;
        sa << a.rdbuf();
        sb << b.rdbuf();
        if (sa.str() != sb.str() || sa.str().empty())
            o.fail("byte mismatch in " + entry.path().filename().string());
        ++files;
    }
    if (files < 10) o.fail("expected 9 CSVs plus manifest");
    fs::remove_all(out1);
    fs::remove_all(out2);
    if (o.pass) o.detail = std::to_string(files) + " files byte-identical across reruns";
    return o;
}

} // namespace

int main() {
    Tracker t;
    std::printf("acceptance grid: d=1, N in {2,3,4}, M in {4,6}, U in {0.5,1,2}, "
                "mu in {-1,0,1}, lambda in {0.05,0.2,1}, beta in {0.5,1,2}, t=-0.5\n");

    const SweepOutcomes sweep = run_grid_sweep();
    t.report(1, "Bogolyubov inequality slack >= -1e-9 max(1, lhs), every grid point and k",
             sweep.bogolyubov);
    t.report(2, "projection identities exact to 1e-12 under buffered construction",
             sweep.projections);
    t.report(3, "commutator closed forms within 1e-11 on interior; <[[C,H],C+]> >= -1e-12",
             sweep.closed_forms);
    t.report(4, "sector norms match closed forms; N2 sector lower bound",
             criterion_sector_norms());
    t.report(5, "relative-boundedness inequalities, zero violations", sweep.relative_bounds);
    t.report(6, "spectral lower bound gamma(U) at smallest admissible K", sweep.ground_energy);
    t.report(7, "thermal-average structure (identity, selection rule, f monotone, convexity)",
             criterion_thermal_structure());
    t.report(8, "convergence of rho_M and m_M by M=10; single-site series oracle",
             criterion_convergence());
    t.report(9, "density band: upper at every M, lower at converged M, tight decoupled case",
             criterion_density_band());
    t.report(10, "density window (lambda0, rho1, rho2) with sampled densities inside",
             criterion_density_window());
    t.report(11, "k-sum limits: d=1 arctan convergence, d=2 log lower bound", criterion_ksum());
    t.report(12, "no-condensation bound on the scan; derived bound shrinks as lambda -> 0",
             criterion_condensation());
    t.report(13, "determinism: byte-identical verify reruns", criterion_determinism());

    if (t.failures == 0) std::printf("all 13 acceptance criteria passed\n");
    else std::printf("%d acceptance criteria FAILED\n", t.failures);
    return t.failures;
}
