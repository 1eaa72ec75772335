#ifndef BHL_BOUNDS_HPP
#define BHL_BOUNDS_HPP

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "bhl/bogolyubov.hpp"
#include "bhl/operators.hpp"
#include "bhl/rng.hpp"
#include "bhl/thermal.hpp"

namespace bhl {

// ---------------------------------------------------------------------------
// Sector norms

// ||(c^dag_x c_y)|D_m||^2 = max_{k<=m} max_l (l+1)(k-l), which closes to
// ((m+1)/2)^2 for odd m and m(m+2)/4 for even m.
inline double hop_sector_norm_formula(int m) {
    if (m <= 0) return 0.0;
    if (m % 2 == 1) return (m + 1) / 2.0;
    return std::sqrt(m * (m + 2.0)) / 2.0;
}

struct SectorNormReport {
    int sector = 0;
    double hop_norm_max_delta = 0.0; // worst |sigma_max - formula| over site pairs
    double hop_norm_formula = 0.0;
    double offdiag_norm = 0.0;       // ||T'|D_m||
    double offdiag_bound = 0.0;      // M (m+1) |L| / 2
    double square_min_diagonal = 0.0;
    double square_lower_bound = 0.0; // m^2 / |L|
    bool pass = false;
};

inline double sector_block_sv_max(const SparseComplexOperator& op, const TruncatedBasis& basis,
                                  int m) {
    const auto [first, last] = basis.sector_range(m);
    if (last == first) return 0.0;
    const Eigen::MatrixXcd block = op.dense_block(first, last, first, last);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(block);
    return svd.singularValues().size() > 0 ? svd.singularValues()[0] : 0.0;
}

inline SectorNormReport sector_norm_checks(const TruncatedBasis& basis, const LatticeSpec& lattice,
                                           const HoppingSpec& hopping, int m, double tol = 1e-10) {
    if (m > basis.cutoff()) throw domain_error("sector above basis cutoff");
    SectorNormReport rep;
    rep.sector = m;
    rep.hop_norm_formula = hop_sector_norm_formula(m);
    for (int x = 0; x < lattice.site_count(); ++x)
        for (int y = 0; y < lattice.site_count(); ++y) {
            if (x == y) continue;
            const double sv = sector_block_sv_max(op_hop(basis, x, y), basis, m);
            rep.hop_norm_max_delta =
                std::max(rep.hop_norm_max_delta, std::abs(sv - rep.hop_norm_formula));
        }
    rep.offdiag_norm = sector_block_sv_max(op_hopping_offdiag(basis, lattice, hopping), basis, m);
    rep.offdiag_bound = hopping.coupling_bound() * (m + 1) * lattice.site_count() / 2.0;

    const auto [first, last] = basis.sector_range(m);
    double min_diag = std::numeric_limits<double>::infinity();
    for (std::size_t i = first; i < last; ++i)
        min_diag = std::min(min_diag, double(occupation_square_total(basis.state_at(i))));
    rep.square_min_diagonal = last > first ? min_diag : 0.0;
    rep.square_lower_bound = double(m) * m / lattice.site_count();

    rep.pass = rep.hop_norm_max_delta <= tol && rep.offdiag_norm <= rep.offdiag_bound + tol &&
               rep.square_min_diagonal >= rep.square_lower_bound - tol;
    return rep;
}

// ---------------------------------------------------------------------------
// Relative boundedness of T', N, T'' and L against N2

struct RelativeBoundReport {
    int order = 0; // K
    int samples = 0;
    int violations = 0;
    double min_slack_offdiag = 0.0;
    double min_slack_number = 0.0;
    double min_slack_diag = 0.0;
    double min_slack_field = 0.0;
    bool pass = false;
};

// The four estimates hold for every K and every vector; samples are drawn in
// D^(M-1) so L acts without truncation.
inline std::vector<RelativeBoundReport> relative_bound_checks(
    const TruncatedBasis& basis, const LatticeSpec& lattice, const HoppingSpec& hopping,
    const std::vector<int>& orders, int samples, std::uint64_t seed) {
    const double vol = lattice.site_count();
    const double coupling = hopping.coupling_bound();
    const double onsite = hopping.onsite_bound();

    const auto offdiag = op_hopping_offdiag(basis, lattice, hopping);
    const auto diag = op_hopping_diag(basis, lattice, hopping);
    const auto number = op_total_number(basis);
    const auto square = op_total_number_sq(basis);
    const auto field = op_field(basis);

    std::vector<RelativeBoundReport> reports;
    for (int k : orders) {
        if (k < 1) throw domain_error("relative-bound order K must be >= 1");
        RelativeBoundReport rep;
        rep.order = k;
        rep.samples = samples;
        rep.min_slack_offdiag = std::numeric_limits<double>::infinity();
        rep.min_slack_number = rep.min_slack_offdiag;
        rep.min_slack_diag = rep.min_slack_offdiag;
        rep.min_slack_field = rep.min_slack_offdiag;
        reports.push_back(rep);
    }

    SplitMix64 rng(seed);
    for (int s = 0; s < samples; ++s) {
        const Eigen::VectorXcd psi = random_state(basis, basis.cutoff() - 1, rng);
        const double norm_sq = psi.squaredNorm();
        const double offdiag_sq = (offdiag.matrix() * psi).squaredNorm();
        const double number_sq = (number.matrix() * psi).squaredNorm();
        const double diag_sq = (diag.matrix() * psi).squaredNorm();
        const double field_norm = (field.matrix() * psi).norm();
        const double square_sq = (square.matrix() * psi).squaredNorm();
        const double square_norm = std::sqrt(square_sq);

        for (std::size_t i = 0; i < reports.size(); ++i) {
            auto& rep = reports[i];
            const double kp1 = rep.order + 1.0;
            const double s1 = 0.25 * coupling * coupling * vol * vol * kp1 * kp1 * norm_sq +
                              0.75 * coupling * coupling * vol * vol * vol * vol / (kp1 * kp1) *
                                  square_sq -
                              offdiag_sq;
            const double s2 = double(rep.order) * rep.order * norm_sq +
                              vol * vol / (kp1 * kp1) * square_sq - number_sq;
            const double s3 = onsite * onsite * rep.order * rep.order * norm_sq +
                              onsite * onsite * vol * vol / (kp1 * kp1) * square_sq - diag_sq;
            const double s4 =
                2.0 * vol * kp1 * std::sqrt(norm_sq) + 2.0 * vol * vol / kp1 * square_norm -
                field_norm;
            rep.min_slack_offdiag = std::min(rep.min_slack_offdiag, s1);
            rep.min_slack_number = std::min(rep.min_slack_number, s2);
            rep.min_slack_diag = std::min(rep.min_slack_diag, s3);
            rep.min_slack_field = std::min(rep.min_slack_field, s4);
            if (s1 < 0.0 || s2 < 0.0 || s3 < 0.0 || s4 < 0.0) ++rep.violations;
        }
    }
    for (auto& rep : reports) rep.pass = rep.violations == 0;
    return reports;
}

// ---------------------------------------------------------------------------
// Spectral lower bound gamma(U)

struct GroundEnergyRow {
    int order = 0; // K
    double bound = 0.0;
    double min_eigenvalue = 0.0;
    double slack = 0.0;
    int cutoff = 0;
};

struct GroundEnergyReport {
    double admissibility_threshold = 0.0;
    int smallest_order = 0;
    std::vector<GroundEnergyRow> rows;
    bool pass = false;
};

inline double ground_energy_threshold(const ModelSpec& model) {
    const double vol = model.lattice.site_count();
    const double coupling = model.hopping.coupling_bound();
    const double onsite = model.hopping.onsite_bound();
    return vol / model.repulsion *
           (vol * (std::sqrt(3.0) / 2.0 * coupling + 2.0 * std::abs(model.symmetry_breaking)) +
            onsite + std::abs(model.chemical_potential));
}

inline double ground_energy_bound_value(const ModelSpec& model, int order) {
    const double threshold = ground_energy_threshold(model);
    if (!(order > threshold))
        throw domain_error("K=" + std::to_string(order) + " is inadmissible; need K > " +
                           std::to_string(threshold));
    const double vol = model.lattice.site_count();
    const double coupling = model.hopping.coupling_bound();
    const double onsite = model.hopping.onsite_bound();
    const double numerator =
        order * (vol * (coupling / 2.0 + 2.0 * std::abs(model.symmetry_breaking)) +
                 (onsite + std::abs(model.chemical_potential)));
    const double denominator = 1.0 - threshold / order;
    return -numerator / denominator;
}

inline int smallest_admissible_order(const ModelSpec& model) {
    const double threshold = ground_energy_threshold(model);
    const int k = static_cast<int>(std::floor(threshold)) + 1;
    return std::max(1, k);
}

inline GroundEnergyReport ground_energy_bound(const ModelSpec& model, const std::vector<int>& cutoffs,
                                              std::size_t dimension_cap = TruncatedBasis::default_dimension_cap) {
    GroundEnergyReport rep;
    rep.admissibility_threshold = ground_energy_threshold(model);
    rep.smallest_order = smallest_admissible_order(model);
    rep.pass = true;
    for (int cutoff : cutoffs) {
        TruncatedBasis basis = enumerate_basis(model.lattice.site_count(), cutoff, dimension_cap);
        const auto spec = diagonalize(op_hamiltonian(basis, model), basis);
        const double min_ev = spec.eigenvalues[0];
        for (int dk : {0, 1, 10}) {
            GroundEnergyRow row;
            row.order = rep.smallest_order + dk;
            row.cutoff = cutoff;
            row.bound = ground_energy_bound_value(model, row.order);
            row.min_eigenvalue = min_ev;
            row.slack = min_ev - row.bound;
            rep.pass = rep.pass && row.slack >= 0.0;
            rep.rows.push_back(row);
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// The single-site series g(r) = beta^{-1} log sum_n e^{-beta(U n^2 - r n)}

struct GSeries {
    double repulsion = 0.0;
    double beta = 0.0;
    double argument = 0.0;
    double value = 0.0;
    int terms = 0;
};

namespace detail {

// shifted exponents x_n - x_peak and the peak value; terminates on relative
// tail below 1e-16 (U > 0 gives super-exponential decay)
template <typename Fn>
inline int g_series_accumulate(double u, double beta, double r, Fn&& take) {
    const int peak = std::max(0, static_cast<int>(std::llround(r / (2.0 * u))));
    const double x_peak = -beta * (u * double(peak) * peak - r * peak);
    double sum = 0.0;
    int n = 0;
    for (;; ++n) {
        const double x = -beta * (u * double(n) * n - r * n) - x_peak;
        const double term = std::exp(x);
        sum += term;
        take(n, term, x_peak);
        if (n > peak && term < 1e-16 * sum) break;
        if (n > 100000) throw error("g series failed to converge");
    }
    return n + 1;
}

} // namespace detail

inline GSeries g_series(double u, double beta, double r) {
    if (!(u > 0.0) || !(beta > 0.0)) throw validation_error("g series needs U > 0 and beta > 0");
    GSeries g;
    g.repulsion = u;
    g.beta = beta;
    g.argument = r;
    double sum = 0.0;
    double peak = 0.0;
    bool peak_at_zero = false;
    double sum_above_zero = 0.0; // sum of n >= 1 terms when the peak is n = 0
    g.terms = detail::g_series_accumulate(u, beta, r, [&](int n, double term, double x_peak) {
        sum += term;
        peak = x_peak;
        if (n == 0) peak_at_zero = x_peak == 0.0;
        else sum_above_zero += term;
    });
    // log1p keeps g(r) strictly positive deep in the r -> -inf tail
    g.value = peak_at_zero ? std::log1p(sum_above_zero) / beta : (peak + std::log(sum)) / beta;
    return g;
}

// g'(r) = <n> of the single-site weights
inline double g_series_derivative(double u, double beta, double r) {
    double sum = 0.0, weighted = 0.0;
    detail::g_series_accumulate(u, beta, r, [&](int n, double term, double) {
        sum += term;
        weighted += n * term;
    });
    return weighted / sum;
}

// ---------------------------------------------------------------------------
// Density band  -|lambda| + g(r1) <= R <= |lambda| + g(r2)

struct DensityBandReport {
    double mu = 0.0;
    int cutoff = 0;
    double rate = 0.0;  // R at this cutoff
    double lower = 0.0; // -|lambda| + g(mu - M - |lambda|)
    double upper = 0.0; // +|lambda| + g(mu + M + |lambda|)
    double slack_lower = 0.0;
    double slack_upper = 0.0;
    bool converged = false; // last relative f increment below the gate
    std::string status;     // "pass", "inconclusive" (lower gated), "fail"
};

inline DensityBandReport density_band_check(const ModelSpec& model, int cutoff,
                                            double convergence_gate = 1e-8,
                                            std::size_t dimension_cap = TruncatedBasis::default_dimension_cap,
                                            double tol = 1e-9) {
    if (cutoff < 1) throw domain_error("density band check needs cutoff >= 1");
    const double lambda_abs = std::abs(model.symmetry_breaking);
    const double coupling = model.hopping.coupling_bound();
    DensityBandReport rep;
    rep.mu = model.chemical_potential;
    rep.cutoff = cutoff;

    const EDJob job = solve_model(model, cutoff, dimension_cap);
    const double vol = model.lattice.site_count();
    const double beta = model.inverse_temperature;
    rep.rate = job.state.log_trace() / (beta * vol);
    rep.lower = -lambda_abs + g_series(model.repulsion, beta,
                                       model.chemical_potential - coupling - lambda_abs).value;
    rep.upper = lambda_abs + g_series(model.repulsion, beta,
                                      model.chemical_potential + coupling + lambda_abs).value;
    rep.slack_lower = rep.rate - rep.lower;
    rep.slack_upper = rep.upper - rep.rate;

    // gate: compare against the previous cutoff
    const EDJob prev = solve_model(model, cutoff - 1, dimension_cap);
    const double increment = job.state.log_trace() - prev.state.log_trace();
    rep.converged = increment < convergence_gate;

    const bool upper_ok = rep.slack_upper >= -tol;
    const bool lower_ok = rep.slack_lower >= -tol;
    if (!upper_ok) rep.status = "fail";
    else if (!rep.converged) rep.status = "inconclusive";
    else rep.status = lower_ok ? "pass" : "fail";
    return rep;
}

// ---------------------------------------------------------------------------
// Density window (lambda0, rho1, rho2) for a fixed mu0

struct DensityWindow {
    double mu0 = 0.0;
    double coupling = 0.0; // M entering r1/r2
    double lambda0 = 0.0;
    double rho1 = 0.0;
    double rho2 = 0.0;
    double tail_limit = 0.0;      // C = lim_{r -> -inf} g(r) = 0
    double lower_at_mu0 = 0.0;    // P1 = g(mu0 - M)
    double upper_at_mu0 = 0.0;    // P2 = g(mu0 + M)
    double lower_envelope = 0.0;  // Q1(lambda0) = g(mu0 - M - lambda0) - lambda0
    double mu_tilde = 0.0;
    double upper_envelope_at_mu_tilde = 0.0; // G0(mu_tilde)
    int halvings = 0;
};

// Constructive version of the existence argument: pick lambda0 at half its
// admissible ceiling, walk mu_tilde leftward in unit steps until the upper
// envelope G0 dips under Q1, then ternary-refine mu_tilde to fatten rho1.
inline DensityWindow density_window(double u, double beta, double coupling, double mu0) {
    DensityWindow w;
    w.mu0 = mu0;
    w.coupling = coupling;
    w.tail_limit = 0.0;
    w.lower_at_mu0 = g_series(u, beta, mu0 - coupling).value;
    w.upper_at_mu0 = g_series(u, beta, mu0 + coupling).value;

    const double ceiling =
        (w.lower_at_mu0 - w.tail_limit) / (2.0 + g_series_derivative(u, beta, mu0 - coupling));
    double lambda0 = 0.5 * ceiling;

    const auto g0 = [&](double mu, double l0) {
        return g_series(u, beta, mu + coupling + l0).value + l0;
    };

    for (int attempt = 0; attempt <= 40; ++attempt, lambda0 *= 0.5) {
        const double q1 = g_series(u, beta, mu0 - coupling - lambda0).value - lambda0;
        // leftward search for G0(mu_tilde) < Q1(lambda0)
        std::optional<double> found;
        for (int step = 1; step <= 200; ++step) {
            const double mu = mu0 - step;
            if (g0(mu, lambda0) < q1) {
                found = mu;
                break;
            }
        }
        if (!found) continue;

        // rho1(mu) = (Q1 - G0(mu)) / (mu0 - mu); ternary search for the best
        // mu in [found-1, found+1] keeps any admissible value valid
        const auto rho1_of = [&](double mu) { return (q1 - g0(mu, lambda0)) / (mu0 - mu); };
        double lo = *found - 1.0, hi = std::min(*found + 1.0, mu0 - 1e-6);
        for (int it = 0; it < 80; ++it) {
            const double a = lo + (hi - lo) / 3.0, b = hi - (hi - lo) / 3.0;
            if (rho1_of(a) < rho1_of(b)) lo = a;
            else hi = b;
        }
        double mu_tilde = 0.5 * (lo + hi);
        if (g0(mu_tilde, lambda0) >= q1) mu_tilde = *found; // keep the admissible step point

        w.lambda0 = lambda0;
        w.halvings = attempt;
        w.lower_envelope = q1;
        w.mu_tilde = mu_tilde;
        w.upper_envelope_at_mu_tilde = g0(mu_tilde, lambda0);
        w.rho1 = rho1_of(mu_tilde);
        w.rho2 = g0(mu0 + 1.0, lambda0) - q1;
        if (w.rho1 > 0.0 && w.rho2 > w.rho1) return w;
    }
    throw error("density window construction failed after 40 halvings");
}

struct WindowSample {
    double lambda = 0.0;
    double density_value = 0.0;
    bool inside = false;
};

struct WindowCheckReport {
    DensityWindow window;
    std::vector<WindowSample> samples;
    bool pass = false;
};

// Empirical side: sample |lambda| < lambda0 and verify rho_M stays inside
// [rho1 - tol, rho2 + tol] by exact diagonalization.
inline WindowCheckReport density_window_check(const ModelSpec& base, int cutoff,
                                              const std::vector<double>& lambda_fractions,
                                              double tol = 1e-9,
                                              std::size_t dimension_cap = TruncatedBasis::default_dimension_cap) {
    WindowCheckReport rep;
    rep.window = density_window(base.repulsion, base.inverse_temperature,
                                base.hopping.coupling_bound(), base.chemical_potential);
    rep.pass = true;
    for (double frac : lambda_fractions) {
        const double lambda = rep.window.lambda0 * frac;
        const ModelSpec model = base.with_symmetry_breaking(lambda);
        const EDJob job = solve_model(model, cutoff, dimension_cap);
        WindowSample s;
        s.lambda = lambda;
        s.density_value = density(job, model);
        s.inside = s.density_value >= rep.window.rho1 - tol &&
                   s.density_value <= rep.window.rho2 + tol;
        rep.pass = rep.pass && s.inside;
        rep.samples.push_back(s);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Brillouin-zone sum vs its thermodynamic-limit integral

// S_N = (2*pi/N)^d sum_k [M2 |k|^2 + alpha]^{-1}
inline double ksum_value(int dimension, int linear_size, double second_moment, double alpha) {
    if (!(alpha > 0.0)) throw domain_error("ksum needs alpha > 0");
    const LatticeSpec lat(dimension, linear_size);
    double sum = 0.0;
    for (const auto& k : brillouin_momenta(lat))
        sum += 1.0 / (second_moment * k.norm_sq() + alpha);
    double cell = 1.0;
    for (int a = 0; a < dimension; ++a) cell *= 2.0 * std::numbers::pi / linear_size;
    return cell * sum;
}

// d=1: integral over [0, 2*pi] in closed form
inline double ksum_limit_1d(double second_moment, double alpha) {
    if (second_moment == 0.0) return 2.0 * std::numbers::pi / alpha;
    return std::atan(2.0 * std::numbers::pi * std::sqrt(second_moment / alpha)) /
           std::sqrt(second_moment * alpha);
}

// d=2: quarter-disk lower bound pi/(4 M2) log(1 + 4 M2 pi^2 / alpha)
inline double ksum_lower_bound_2d(double second_moment, double alpha) {
    return std::numbers::pi / (4.0 * second_moment) *
           std::log(1.0 + 4.0 * second_moment * std::numbers::pi * std::numbers::pi / alpha);
}

struct KsumRow {
    int linear_size = 0;
    double value = 0.0;
    double error = 0.0; // |S_N - limit| when a limit value is known, else NaN
};

struct KsumTable {
    int dimension = 0;
    double second_moment = 0.0;
    double alpha = 0.0;
    std::vector<KsumRow> rows;
    double limit = 0.0;       // d=1 closed form; exact (2 pi)^d / alpha when M2 = 0
    bool has_limit = false;
    double lower_bound = 0.0; // d=2 only
    bool has_lower_bound = false;
};

inline KsumTable ksum_vs_integral(int dimension, const std::vector<int>& linear_sizes,
                                  double second_moment, double alpha) {
    if (second_moment < 0.0) throw domain_error("second moment must be >= 0");
    KsumTable table;
    table.dimension = dimension;
    table.second_moment = second_moment;
    table.alpha = alpha;
    if (second_moment == 0.0) {
        table.limit = std::pow(2.0 * std::numbers::pi, dimension) / alpha;
        table.has_limit = true;
    } else if (dimension == 1) {
        table.limit = ksum_limit_1d(second_moment, alpha);
        table.has_limit = true;
    }
    if (dimension == 2 && second_moment > 0.0) {
        table.lower_bound = ksum_lower_bound_2d(second_moment, alpha);
        table.has_lower_bound = true;
    }
    for (int n : linear_sizes) {
        KsumRow row;
        row.linear_size = n;
        row.value = ksum_value(dimension, n, second_moment, alpha);
        row.error = table.has_limit ? std::abs(row.value - table.limit)
                                    : std::numeric_limits<double>::quiet_NaN();
        table.rows.push_back(row);
    }
    return table;
}

} // namespace bhl

#endif
