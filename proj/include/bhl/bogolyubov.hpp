#ifndef BHL_BOGOLYUBOV_HPP
#define BHL_BOGOLYUBOV_HPP

#include <cmath>
#include <vector>

#include "bhl/operators.hpp"
#include "bhl/thermal.hpp"

namespace bhl {

// Projection identities for V = D^(M), W = D^(M-1).  The subscript-M
// compressions on the right-hand sides are taken from a basis with cutoff
// M+2, so every identity is exact up to rounding rather than truncated.
struct ProjectionIdentityReport {
    int cutoff = 0;
    Momentum k;
    double delta_commutator = 0.0;        // [C_M, A_M] vs ([C,A])_M
    double delta_double_commutator = 0.0; // [[C_M,H_M],C_M^dag] vs ([[C,H],C^dag])_M
    double delta_anticommutator = 0.0;    // A_M A_M^dag + A_M^dag A_M vs (A A^dag + A^dag A)_M - q A^dag A q
    double correction_min_eigenvalue = 0.0; // q_M A^dag A q_M is PSD
    double correction_average = 0.0;        // <q_M A^dag A q_M>_M >= 0
    bool pass = false;

    double max_delta() const {
        return std::max({delta_commutator, delta_double_commutator, delta_anticommutator});
    }
};

inline ProjectionIdentityReport verify_projection_identities(
    const ModelSpec& model, int cutoff, const Momentum& k,
    std::size_t dimension_cap = TruncatedBasis::default_dimension_cap,
    double tol = 1e-12) {
    if (cutoff < 2) throw domain_error("projection identities need cutoff >= 2");

    TruncatedBasis ambient = enumerate_basis(model.lattice.site_count(), cutoff + 2, dimension_cap);
    TruncatedBasis target = enumerate_basis(model.lattice.site_count(), cutoff, dimension_cap);
    const std::size_t dim_m = target.dim();
    const std::size_t dim_w = target.prefix_dim(cutoff - 1);

    const auto density_amb = op_momentum_density(ambient, model.lattice, k); // C
    const auto creation_amb = op_momentum_create(ambient, model.lattice, k); // A
    const auto h_amb = op_hamiltonian(ambient, model);

    const auto density_m = density_amb.compressed_to(dim_m);
    const auto creation_m = creation_amb.compressed_to(dim_m);
    const auto h_m = h_amb.compressed_to(dim_m);

    ProjectionIdentityReport rep;
    rep.cutoff = cutoff;
    rep.k = k;

    // [C_M, A_M] = ([C,A])_M
    rep.delta_commutator = max_abs_diff(commutator(density_m, creation_m),
                                        commutator(density_amb, creation_amb).compressed_to(dim_m));

    // [[C_M, H_M], (C_M)^dag] = ([[C,H],C^dag])_M
    rep.delta_double_commutator = max_abs_diff(
        commutator(commutator(density_m, h_m), density_m.adjoint()),
        commutator(commutator(density_amb, h_amb), density_amb.adjoint()).compressed_to(dim_m));

    // A_M A_M^dag + A_M^dag A_M = (A A^dag + A^dag A)_M - q_M A^dag A q_M
    const auto lhs = creation_m * creation_m.adjoint() + creation_m.adjoint() * creation_m;
    const auto anti_m = (creation_amb * creation_amb.adjoint() +
                         creation_amb.adjoint() * creation_amb)
                            .compressed_to(dim_m);
    const auto lower_full = (creation_amb.adjoint() * creation_amb).compressed_to(dim_m);
    // q_M B q_M keeps only the top-sector block of B
    std::vector<Triplet> top;
    for (int c = 0; c < lower_full.matrix().outerSize(); ++c)
        for (SparseMatrix::InnerIterator it(lower_full.matrix(), c); it; ++it)
            if (it.row() >= static_cast<Eigen::Index>(dim_w) &&
                it.col() >= static_cast<Eigen::Index>(dim_w))
                top.emplace_back(it.row(), it.col(), it.value());
    const auto correction = SparseComplexOperator::from_triplets(dim_m, top, SectorShift::preserves);
    rep.delta_anticommutator = max_abs_diff(lhs, anti_m - correction);

    // correction positivity, as a matrix and as a thermal average
    {
        const Eigen::MatrixXcd block = correction.dense_block(dim_w, dim_m, dim_w, dim_m);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(block, Eigen::EigenvaluesOnly);
        rep.correction_min_eigenvalue = block.rows() > 0 ? es.eigenvalues().minCoeff() : 0.0;
        const auto spec = diagonalize(h_m, target);
        const auto st = make_thermal_state(model.inverse_temperature, spec.eigenvalues);
        rep.correction_average = thermal_average(st, spec, correction).real();
    }

    rep.pass = rep.max_delta() <= tol && rep.correction_min_eigenvalue >= -tol &&
               rep.correction_average >= -tol;
    return rep;
}

// Closed-form vs direct commutator agreement on the interior D^(M-2),
// measured in relative Frobenius norm, plus positivity of the thermal average
// of the double commutator with H.
struct ClosedFormReport {
    Momentum k;
    double delta_density_creation = 0.0;
    double delta_density_field = 0.0;
    double delta_double_field = 0.0;
    double delta_density_hopping = 0.0;
    double delta_double_hopping = 0.0;
    double delta_double_hamiltonian = 0.0;
    double double_commutator_average = 0.0;
    bool pass = false;

    double max_delta() const {
        return std::max({delta_density_creation, delta_density_field, delta_double_field,
                         delta_density_hopping, delta_double_hopping, delta_double_hamiltonian});
    }
};

inline ClosedFormReport verify_closed_forms(const EDJob& job, const ModelSpec& model,
                                            const Momentum& k, double tol = 1e-11,
                                            double positivity_tol = 1e-12) {
    const TruncatedBasis& basis = job.basis;
    const std::size_t interior = basis.prefix_dim(basis.cutoff() - 2);
    const auto density = op_momentum_density(basis, model.lattice, k);
    const auto creation = op_momentum_create(basis, model.lattice, k);
    const auto field = op_field(basis);
    const auto hop = op_hopping(basis, model.lattice, model.hopping);
    const auto cf = closed_form_commutators(basis, model, k);

    ClosedFormReport rep;
    rep.k = k;
    rep.delta_density_creation =
        interior_frobenius_rel_diff(commutator(density, creation), cf.density_creation, interior);
    rep.delta_density_field =
        interior_frobenius_rel_diff(commutator(density, field), cf.density_field, interior);
    rep.delta_double_field = interior_frobenius_rel_diff(
        commutator(commutator(density, field), density.adjoint()), cf.double_field, interior);
    rep.delta_density_hopping =
        interior_frobenius_rel_diff(commutator(density, hop), cf.density_hopping, interior);
    rep.delta_double_hopping = interior_frobenius_rel_diff(
        commutator(commutator(density, hop), density.adjoint()), cf.double_hopping, interior);
    rep.delta_double_hamiltonian = interior_frobenius_rel_diff(
        commutator(commutator(density, job.hamiltonian), density.adjoint()), cf.double_hamiltonian,
        interior);
    rep.double_commutator_average =
        thermal_average(job.state, job.spectrum, cf.double_hamiltonian).real();
    rep.pass = rep.max_delta() <= tol && rep.double_commutator_average >= -positivity_tol;
    return rep;
}

// One Bogolyubov inequality instance at momentum k:
//   (beta/2) <(A A^dag + A^dag A)_M>_M <[[C,H],C^dag]_M>_M >= |<[C,A]_M>_M|^2
struct BogolyubovReport {
    Momentum k;
    double anticommutator_average = 0.0;   // <(A A^dag + A^dag A)_M>_M = 2<c^dag(k)c(k)> + 1
    double double_commutator_direct = 0.0; // from [[C_M,H_M],C_M^dag]
    double double_commutator_closed = 0.0; // from the closed form
    double cross_check_delta = 0.0;            // double commutator, direct vs closed
    double cross_check_delta_commutator = 0.0; // <[C_M,A_M]> vs the closed form
    double lhs = 0.0;
    double rhs = 0.0; // |<[C,A]_M>|^2 = m_M
    double slack = 0.0;
    bool pass = false;
};

inline BogolyubovReport verify_finite_bogolyubov(const EDJob& job, const ModelSpec& model,
                                                 const Momentum& k, double rel_tol = 1e-9,
                                                 double positivity_tol = 1e-12) {
    const TruncatedBasis& basis = job.basis;
    const auto annihilate = op_momentum_annihilate(basis, model.lattice, k); // c(k)
    const auto density = op_momentum_density(basis, model.lattice, k);       // C(k)
    const auto cf = closed_form_commutators(basis, model, k);

    BogolyubovReport rep;
    rep.k = k;

    // <(A A^dag + A^dag A)_M> = 2 <(c^dag(k) c(k))_M> + 1; the product of
    // truncated factors is the exact compression (the intermediate sector
    // steps down).
    const Complex nk = thermal_average(job.state, job.spectrum, annihilate.adjoint() * annihilate);
    rep.anticommutator_average = 2.0 * nk.real() + 1.0;

    const auto direct =
        commutator(commutator(density, job.hamiltonian), density.adjoint());
    rep.double_commutator_direct = thermal_average(job.state, job.spectrum, direct).real();
    rep.double_commutator_closed =
        thermal_average(job.state, job.spectrum, cf.double_hamiltonian).real();
    rep.cross_check_delta =
        std::abs(rep.double_commutator_direct - rep.double_commutator_closed);

    const Complex zero_mode = thermal_average(job.state, job.spectrum, cf.density_creation);
    const Complex zero_mode_direct = thermal_average(
        job.state, job.spectrum,
        commutator(density, op_momentum_create(basis, model.lattice, k)));
    rep.cross_check_delta_commutator = std::abs(zero_mode - zero_mode_direct);
    rep.rhs = std::norm(zero_mode);
    rep.lhs = 0.5 * model.inverse_temperature * rep.anticommutator_average *
              rep.double_commutator_direct;
    rep.slack = rep.lhs - rep.rhs;
    rep.pass = rep.slack >= -rel_tol * std::max(1.0, rep.lhs) &&
               rep.double_commutator_direct >= -positivity_tol;
    return rep;
}

// |<L_M>_M| <= <N_M>_M + |L|
struct FieldBoundReport {
    double field_average = 0.0;  // <L_M>_M
    double number_average = 0.0; // <N_M>_M
    double slack = 0.0;
    bool pass = false;
};

inline FieldBoundReport verify_field_average_bound(const EDJob& job, const ModelSpec& model,
                                                   double tol_scale = 1e-10) {
    FieldBoundReport rep;
    rep.field_average = thermal_average(job.state, job.spectrum, op_field(job.basis)).real();
    rep.number_average =
        thermal_average(job.state, job.spectrum, op_total_number(job.basis)).real();
    const double vol = model.lattice.site_count();
    rep.slack = rep.number_average + vol - std::abs(rep.field_average);
    rep.pass = rep.slack >= -tol_scale * vol;
    return rep;
}

// The inequality chain: per momentum
//   m_M / (|lambda| + rho_M (M2 |k|^2 + |lambda|)) <= (beta/2)(2<c^dag(k)c(k)> + 1)
// and summed over the Brillouin zone
//   m_M (1/|L|) sum_k [rho_M M2 |k|^2 + |lambda|(rho_M+1)]^{-1} <= beta (rho_M + 1/2)
struct ChainRow {
    Momentum k;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
    // intermediate estimate feeding the display:
    //   <[[C,H],C^dag]_M>_M <= |lambda| + rho_M (M2 |k|^2 + |lambda|)
    double double_commutator_average = 0.0;
    double double_commutator_bound = 0.0;
    bool pass = false;
};

struct ChainReport {
    std::vector<ChainRow> per_momentum;
    double order_parameter_value = 0.0;
    double density_value = 0.0;
    double summed_lhs = 0.0;
    double summed_rhs = 0.0;
    double summed_slack = 0.0;
    bool pass = false;
};

inline ChainReport verify_chain_inequality(const EDJob& job, const ModelSpec& model,
                                           double rel_tol = 1e-9) {
    const double lambda_abs = std::abs(model.symmetry_breaking);
    const double m2 = model.hopping.second_moment();
    const double vol = model.lattice.site_count();

    ChainReport rep;
    rep.order_parameter_value = order_parameter(job, model);
    rep.density_value = density(job, model);

    double inv_sum = 0.0;
    for (const auto& k : brillouin_momenta(model.lattice)) {
        const double denom = lambda_abs + rep.density_value * (m2 * k.norm_sq() + lambda_abs);
        if (denom <= 0.0)
            throw domain_error("chain inequality needs lambda != 0 to cover the k = 0 mode");
        const Complex nk = thermal_average(
            job.state, job.spectrum,
            op_momentum_create(job.basis, model.lattice, k) *
                op_momentum_annihilate(job.basis, model.lattice, k));
        ChainRow row;
        row.k = k;
        row.lhs = rep.order_parameter_value / denom;
        row.rhs = 0.5 * model.inverse_temperature * (2.0 * nk.real() + 1.0);
        row.slack = row.rhs - row.lhs;
        const auto cf = closed_form_commutators(job.basis, model, k);
        row.double_commutator_average =
            thermal_average(job.state, job.spectrum, cf.double_hamiltonian).real();
        row.double_commutator_bound = denom;
        row.pass = row.slack >= -rel_tol * std::max(1.0, row.rhs) &&
                   row.double_commutator_average <=
                       row.double_commutator_bound * (1.0 + rel_tol) + 1e-12;
        rep.per_momentum.push_back(row);
        inv_sum += 1.0 / (rep.density_value * m2 * k.norm_sq() + lambda_abs * (rep.density_value + 1.0));
    }
    rep.summed_lhs = rep.order_parameter_value * inv_sum / vol;
    rep.summed_rhs = model.inverse_temperature * (rep.density_value + 0.5);
    rep.summed_slack = rep.summed_rhs - rep.summed_lhs;
    bool rows_ok = true;
    for (const auto& row : rep.per_momentum) rows_ok = rows_ok && row.pass;
    rep.pass = rows_ok && rep.summed_slack >= -rel_tol * std::max(1.0, rep.summed_rhs);
    return rep;
}

} // namespace bhl

#endif
