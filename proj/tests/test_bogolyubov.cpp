#include <gtest/gtest.h>

#include <cmath>

#include "bhl/bogolyubov.hpp"

using namespace bhl;

namespace {

ModelSpec ring_model(int n, double u = 1.0, double mu = 0.3, double lambda = 0.2,
                     double beta = 1.0) {
    LatticeSpec lat(1, n);
    return ModelSpec(lat, HoppingSpec::nearest_neighbor(lat, -0.5), u, mu, lambda, beta);
}

} // namespace

TEST(ProjectionIdentities, ExactOnBufferedConstruction) {
    const ModelSpec model = ring_model(2, 1.0, 0.4, 0.3, 1.0);
    for (const auto& k : brillouin_momenta(model.lattice)) {
        const auto rep = verify_projection_identities(model, 4, k);
        EXPECT_LE(rep.delta_commutator, 1e-12);
        EXPECT_LE(rep.delta_double_commutator, 1e-12);
        EXPECT_LE(rep.delta_anticommutator, 1e-12);
        EXPECT_GE(rep.correction_min_eigenvalue, -1e-12);
        EXPECT_GE(rep.correction_average, -1e-12);
        EXPECT_TRUE(rep.pass);
    }
}

TEST(ProjectionIdentities, SectorDiagonalAtZeroField) {
    // lambda=0, k=0: both sides of the double-commutator identity preserve
    // sectors (they are zero-hopping-free only in the k=0 case)
    const ModelSpec model = ring_model(2, 1.0, 0.4, 0.0, 1.0);
    TruncatedBasis basis(2, 4);
    const auto ks = brillouin_momenta(model.lattice);
    const auto density = op_momentum_density(basis, model.lattice, ks[0]);
    const auto h = op_hamiltonian(basis, model);
    const auto lhs = commutator(commutator(density, h), density.adjoint());
    EXPECT_FALSE(lhs.crosses_sectors(basis));
    const auto cf = closed_form_commutators(basis, model, ks[0]);
    EXPECT_FALSE(cf.double_hamiltonian.crosses_sectors(basis));
    const auto rep = verify_projection_identities(model, 4, ks[0]);
    EXPECT_TRUE(rep.pass);
}

TEST(ProjectionIdentities, RejectsTinyCutoff) {
    const ModelSpec model = ring_model(2);
    const auto ks = brillouin_momenta(model.lattice);
    EXPECT_THROW(verify_projection_identities(model, 1, ks[0]), domain_error);
}

TEST(ClosedForms, AgreeOnInteriorWithPositivity) {
    const ModelSpec model = ring_model(3, 2.0, -0.5, 0.4, 0.5);
    const EDJob job = solve_model(model, 5);
    for (const auto& k : brillouin_momenta(model.lattice)) {
        const auto rep = verify_closed_forms(job, model, k);
        EXPECT_LE(rep.max_delta(), 1e-11);
        EXPECT_GE(rep.double_commutator_average, -1e-12);
        EXPECT_TRUE(rep.pass);
    }
}

TEST(Bogolyubov, HoldsOnReferencePoint) {
    const ModelSpec model = ring_model(3, 1.0, 0.0, 0.2, 1.0);
    const EDJob job = solve_model(model, 5);
    for (const auto& k : brillouin_momenta(model.lattice)) {
        const auto rep = verify_finite_bogolyubov(job, model, k);
        EXPECT_GE(rep.slack, -1e-9 * std::max(1.0, rep.lhs));
        EXPECT_GE(rep.double_commutator_direct, -1e-12);
        EXPECT_LE(rep.cross_check_delta, 1e-11 * std::max(1.0, std::abs(rep.double_commutator_direct)));
        EXPECT_GE(rep.anticommutator_average, 1.0 - 1e-12);
        EXPECT_TRUE(rep.pass);
    }
}

TEST(Bogolyubov, ZeroFieldMakesRhsVanish) {
    const ModelSpec model = ring_model(2, 1.0, 0.3, 0.0, 1.0);
    const EDJob job = solve_model(model, 5);
    for (const auto& k : brillouin_momenta(model.lattice)) {
        const auto rep = verify_finite_bogolyubov(job, model, k);
        EXPECT_EQ(rep.rhs, 0.0);
        EXPECT_TRUE(rep.pass);
    }
}

TEST(Bogolyubov, HighTemperatureRhsCollapses) {
    const ModelSpec model = ring_model(2, 1.0, 0.0, 0.4, 1e-6);
    const EDJob job = solve_model(model, 5);
    const auto ks = brillouin_momenta(model.lattice);
    const auto rep = verify_finite_bogolyubov(job, model, ks[0]);
    // near-uniform trace of a sector-raising operator
    EXPECT_LE(rep.rhs, 1e-10);
    EXPECT_TRUE(rep.pass);
}

TEST(FieldBound, HoldsAndIsEvenInLambda) {
    const ModelSpec zero = ring_model(2, 1.0, 0.2, 0.0, 1.0);
    const auto rep0 = verify_field_average_bound(solve_model(zero, 6), zero);
    EXPECT_EQ(rep0.field_average, 0.0);
    EXPECT_GT(rep0.slack, 0.0);
    EXPECT_TRUE(rep0.pass);

    const ModelSpec plus = ring_model(2, 1.0, 0.0, 1.0, 1.0);
    const ModelSpec minus = plus.with_symmetry_breaking(-1.0);
    const auto repp = verify_field_average_bound(solve_model(plus, 6), plus);
    const auto repm = verify_field_average_bound(solve_model(minus, 6), minus);
    EXPECT_TRUE(repp.pass);
    EXPECT_NEAR(std::abs(repp.field_average), std::abs(repm.field_average), 1e-11);
}

TEST(Chain, HoldsPerMomentumAndSummed) {
    const ModelSpec model = ring_model(4, 1.0, 0.0, 0.2, 1.0);
    const EDJob job = solve_model(model, 5);
    const auto rep = verify_chain_inequality(job, model);
    EXPECT_TRUE(rep.pass);
    ASSERT_EQ(rep.per_momentum.size(), 4u);
    // the summed lhs is the mean of the per-momentum lhs values
    double mean = 0.0;
    for (const auto& row : rep.per_momentum) mean += row.lhs;
    mean /= rep.per_momentum.size();
    EXPECT_NEAR(rep.summed_lhs, mean, 1e-12 * std::max(1.0, mean));
    // the intermediate estimate feeding each row:
    // 0 <= <[[C,H],C+]> <= |lambda| + rho (M2 |k|^2 + |lambda|)
    for (const auto& row : rep.per_momentum) {
        EXPECT_GE(row.double_commutator_average, -1e-12);
        EXPECT_LE(row.double_commutator_average, row.double_commutator_bound * (1.0 + 1e-9));
    }
}

TEST(Chain, ZeroHoppingReduction) {
    // M2 = 0: every momentum denominator collapses to |lambda|(1 + rho)
    LatticeSpec lat(1, 3);
    const ModelSpec model(lat, HoppingSpec::none(lat), 1.0, 0.0, 0.3, 1.0);
    const EDJob job = solve_model(model, 6);
    const auto rep = verify_chain_inequality(job, model);
    EXPECT_TRUE(rep.pass);
    const double expect =
        rep.order_parameter_value / (0.3 * (1.0 + rep.density_value));
    EXPECT_NEAR(rep.summed_lhs, expect, 1e-12 * std::max(1.0, expect));
}

TEST(Bogolyubov, TwoDimensionalLattice) {
    // two-component momenta through the full verifier stack
    LatticeSpec lat(2, 2);
    ModelSpec model(lat, HoppingSpec::nearest_neighbor(lat, -0.5), 1.0, 0.0, 0.3, 1.0);
    const EDJob job = solve_model(model, 4);
    for (const auto& k : brillouin_momenta(lat)) {
        EXPECT_TRUE(verify_projection_identities(model, 3, k).pass);
        EXPECT_TRUE(verify_closed_forms(job, model, k).pass);
        EXPECT_TRUE(verify_finite_bogolyubov(job, model, k).pass);
    }
    EXPECT_TRUE(verify_chain_inequality(job, model).pass);
    EXPECT_TRUE(verify_field_average_bound(job, model).pass);
}

TEST(Chain, ZeroFieldIsOutsideDomain) {
    const ModelSpec model = ring_model(2, 1.0, 0.0, 0.0, 1.0);
    const EDJob job = solve_model(model, 4);
    EXPECT_THROW(verify_chain_inequality(job, model), domain_error);
}

TEST(Verifiers, LongerRangeComplexHopping) {
    // next-nearest neighbors with complex amplitudes: the second moment picks
    // up minimal-image weights 1 and 4
    LatticeSpec lat(1, 5);
    auto hop = HoppingSpec::build(lat, {{{1}, {-0.4, 0.1}},
                                        {{-1}, {-0.4, -0.1}},
                                        {{2}, {0.05, -0.02}},
                                        {{-2}, {0.05, 0.02}}});
    const double nn = std::abs(std::complex<double>(-0.4, 0.1));
    const double nnn = std::abs(std::complex<double>(0.05, -0.02));
    EXPECT_NEAR(hop.second_moment(), 2.0 * nn + 2.0 * 4.0 * nnn, 1e-15);
    ModelSpec model(lat, hop, 1.0, 0.1, 0.25, 1.0);
    const EDJob job = solve_model(model, 4);
    for (const auto& k : brillouin_momenta(lat)) {
        EXPECT_TRUE(verify_closed_forms(job, model, k).pass);
        EXPECT_TRUE(verify_finite_bogolyubov(job, model, k).pass);
        EXPECT_TRUE(verify_projection_identities(model, 4, k).pass);
    }
    EXPECT_TRUE(verify_chain_inequality(job, model).pass);
}
