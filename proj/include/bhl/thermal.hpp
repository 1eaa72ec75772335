#ifndef BHL_THERMAL_HPP
#define BHL_THERMAL_HPP

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "bhl/model.hpp"
#include "bhl/operators.hpp"
#include "bhl/spectral.hpp"

namespace bhl {

// One exact-diagonalization job: basis, Hamiltonian, spectrum and Gibbs state
// for a model at a fixed cutoff.
struct EDJob {
    TruncatedBasis basis;
    SparseComplexOperator hamiltonian;
    SpectralDecomposition spectrum;
    ThermalState state;
};

inline EDJob solve_model(const ModelSpec& model, int cutoff,
                         std::size_t dimension_cap = TruncatedBasis::default_dimension_cap) {
    model.validate();
    TruncatedBasis basis = enumerate_basis(model.lattice.site_count(), cutoff, dimension_cap);
    SparseComplexOperator h = op_hamiltonian(basis, model);
    SpectralDecomposition spec = diagonalize(h, basis);
    ThermalState st = make_thermal_state(model.inverse_temperature, spec.eigenvalues);
    return EDJob{std::move(basis), std::move(h), std::move(spec), std::move(st)};
}

// rho_M = <N_M>_M / |L|
inline double density(const EDJob& job, const ModelSpec& model) {
    const Complex n_avg = thermal_average(job.state, job.spectrum, op_total_number(job.basis));
    return n_avg.real() / model.lattice.site_count();
}

// <(c^dag(0))_M>_M, the unscaled order-parameter average
inline Complex zero_mode_creation_average(const EDJob& job, const ModelSpec& model) {
    const Momentum k0{Coords(static_cast<std::size_t>(model.lattice.dimension()), 0),
                      model.lattice.linear_size()};
    return thermal_average(job.state, job.spectrum,
                           op_momentum_create(job.basis, model.lattice, k0));
}

// m_M = |<(c^dag(0))_M>_M|^2 / |L|
inline double order_parameter(const EDJob& job, const ModelSpec& model) {
    return std::norm(zero_mode_creation_average(job, model)) / model.lattice.site_count();
}

struct LogTraceSample {
    double mu = 0.0;
    double log_f = 0.0; // log Tr_{D^(M)} e^{-beta H_M(mu)}
    double rate = 0.0;  // R = log_f / (beta |L|)
};

// f_M(mu) over a mu grid; log f is assembled from the ground-shifted weights
// so the profile never overflows.
inline std::vector<LogTraceSample> log_trace_profile(const ModelSpec& base, int cutoff,
                                                     const std::vector<double>& mu_grid,
                                                     std::size_t dimension_cap = TruncatedBasis::default_dimension_cap) {
    std::vector<LogTraceSample> out;
    out.reserve(mu_grid.size());
    for (double mu : mu_grid) {
        const EDJob job = solve_model(base.with_chemical_potential(mu), cutoff, dimension_cap);
        LogTraceSample row;
        row.mu = mu;
        row.log_f = job.state.log_trace();
        row.rate = row.log_f / (base.inverse_temperature * base.lattice.site_count());
        out.push_back(row);
    }
    return out;
}

struct ConvergenceRow {
    int cutoff = 0;
    std::size_t dim = 0;
    double number_average = 0.0;     // <N_M>_M
    Complex zero_mode_average{0.0, 0.0}; // <(c^dag(0))_M>_M
    double density_value = 0.0;          // rho_M
    double order_parameter_value = 0.0;  // m_M
    // absolute increments against the previous cutoff (NaN on the first row)
    double increment_number = 0.0;
    double increment_zero_mode = 0.0;
    double increment_density = 0.0;
    double increment_order = 0.0;
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    double tolerance = 1e-8;
    bool cauchy = false; // all last increments below tolerance
};

inline ConvergenceTable convergence_study(const ModelSpec& model, const std::vector<int>& cutoffs,
                                          double tolerance = 1e-8,
                                          std::size_t dimension_cap = TruncatedBasis::default_dimension_cap) {
    ConvergenceTable table;
    table.tolerance = tolerance;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < cutoffs.size(); ++i) {
        const EDJob job = solve_model(model, cutoffs[i], dimension_cap);
        ConvergenceRow row;
        row.cutoff = cutoffs[i];
        row.dim = job.basis.dim();
        row.number_average = thermal_average(job.state, job.spectrum, op_total_number(job.basis)).real();
        row.zero_mode_average = zero_mode_creation_average(job, model);
        row.density_value = row.number_average / model.lattice.site_count();
        row.order_parameter_value = std::norm(row.zero_mode_average) / model.lattice.site_count();
        if (i == 0) {
            row.increment_number = nan;
            row.increment_zero_mode = nan;
            row.increment_density = nan;
            row.increment_order = nan;
        } else {
            const ConvergenceRow& prev = table.rows.back();
            row.increment_number = std::abs(row.number_average - prev.number_average);
            row.increment_zero_mode = std::abs(row.zero_mode_average - prev.zero_mode_average);
            row.increment_density = std::abs(row.density_value - prev.density_value);
            row.increment_order = std::abs(row.order_parameter_value - prev.order_parameter_value);
        }
        table.rows.push_back(row);
    }
    if (table.rows.size() >= 2) {
        const ConvergenceRow& last = table.rows.back();
        table.cauchy = last.increment_number < tolerance && last.increment_zero_mode < tolerance &&
                       last.increment_density < tolerance && last.increment_order < tolerance;
    }
    return table;
}

// Adaptive cutoff ladder: raise M until both rho_M and m_M move less than
// `tolerance`, the cutoff ceiling, or the dimension cap.
struct AdaptiveResult {
    std::optional<EDJob> job;
    int final_cutoff = 0;
    double last_increment_density = 0.0;
    double last_increment_order = 0.0;
    // "converged", "max_cutoff" (ceiling hit first) or "capped" (dimension cap)
    std::string status = "converged";
};

inline AdaptiveResult solve_adaptive(const ModelSpec& model, int min_cutoff, int max_cutoff,
                                     double tolerance,
                                     std::size_t dimension_cap = TruncatedBasis::default_dimension_cap) {
    AdaptiveResult res;
    if (min_cutoff > max_cutoff) {
        res.status = "skipped";
        return res;
    }
    double prev_rho = 0.0, prev_m = 0.0;
    bool have_prev = false;
    for (int m = min_cutoff; m <= max_cutoff; ++m) {
        if (binomial(m + model.lattice.site_count(), model.lattice.site_count()) > dimension_cap) {
            res.status = res.job ? "capped" : "skipped";
            return res;
        }
        EDJob job = solve_model(model, m, dimension_cap);
        const double rho = density(job, model);
        const double mm = order_parameter(job, model);
        res.job = std::move(job);
        res.final_cutoff = m;
        if (have_prev) {
            res.last_increment_density = std::abs(rho - prev_rho);
            res.last_increment_order = std::abs(mm - prev_m);
            if (res.last_increment_density < tolerance && res.last_increment_order < tolerance) {
                res.status = "converged";
                return res;
            }
        }
        prev_rho = rho;
        prev_m = mm;
        have_prev = true;
    }
    res.status = "max_cutoff";
    return res;
}

} // namespace bhl

#endif
