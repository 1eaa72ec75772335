#ifndef BHL_SPECTRAL_HPP
#define BHL_SPECTRAL_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <lapacke.h>
#include <numeric>
#include <string>
#include <vector>

#include "bhl/errors.hpp"
#include "bhl/fock_basis.hpp"
#include "bhl/sparse_operator.hpp"

namespace bhl {

// Eigenvalues ascending, eigenvectors as unitary columns.  Ties are broken by
// the assembly order (sector blocks in basis order), and every column carries
// the phase convention "first significant component real positive" so repeated
// runs dump identical data.
struct SpectralDecomposition {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXcd eigenvectors;

    std::size_t dim() const { return static_cast<std::size_t>(eigenvalues.size()); }
};

namespace detail {

inline void heevd_inplace(Eigen::MatrixXcd& a, Eigen::VectorXd& w) {
    const auto n = static_cast<lapack_int>(a.rows());
    w.resize(n);
    if (n == 0) return;
    const lapack_int info = LAPACKE_zheevd(
        LAPACK_COL_MAJOR, 'V', 'L', n,
        reinterpret_cast<lapack_complex_double*>(a.data()), n, w.data());
    if (info != 0)
        throw error("zheevd failed with info=" + std::to_string(info));
}

inline void syevd_inplace(Eigen::MatrixXd& a, Eigen::VectorXd& w) {
    const auto n = static_cast<lapack_int>(a.rows());
    w.resize(n);
    if (n == 0) return;
    const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, a.data(), n, w.data());
    if (info != 0)
        throw error("dsyevd failed with info=" + std::to_string(info));
}

inline void fix_column_phase(Eigen::MatrixXcd& v, Eigen::Index col) {
    const Eigen::Index n = v.rows();
    double peak = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) peak = std::max(peak, std::abs(v(i, col)));
    if (peak == 0.0) return;
    for (Eigen::Index i = 0; i < n; ++i) {
        const Complex z = v(i, col);
        if (std::abs(z) > 1e-12 * peak) {
            const Complex phase = z / std::abs(z);
            v.col(col) *= std::conj(phase);
            return;
        }
    }
}

// Dense Hermitian solve of one block; columns come back phase-fixed.
inline void solve_block(const Eigen::MatrixXcd& block, Eigen::VectorXd& w, Eigen::MatrixXcd& v,
                        bool real_path) {
    if (real_path) {
        Eigen::MatrixXd a = block.real();
        syevd_inplace(a, w);
        v = a.cast<Complex>();
        for (Eigen::Index c = 0; c < v.cols(); ++c) fix_column_phase(v, c);
    } else {
        v = block;
        heevd_inplace(v, w);
        for (Eigen::Index c = 0; c < v.cols(); ++c) fix_column_phase(v, c);
    }
}

} // namespace detail

// Full dense Hermitian eigendecomposition.  Sector-preserving operators are
// solved block-by-block, which keeps eigenvectors exactly sector-supported;
// averages of sector-shifting observables then vanish identically at lambda=0
// instead of at rounding level.
inline SpectralDecomposition diagonalize(const SparseComplexOperator& op, const TruncatedBasis& basis,
                                         double hermiticity_tol = 1e-12) {
    if (op.dim() != basis.dim())
        throw mismatch_error("operator dimension differs from basis");
    const double defect = op.hermiticity_defect();
    if (defect > hermiticity_tol)
        throw validation_error("operator is not Hermitian (defect " + std::to_string(defect) + ")");

    const auto n = static_cast<Eigen::Index>(op.dim());
    const bool real_path = op.is_real();
    SpectralDecomposition out;

    if (!op.crosses_sectors(basis)) {
        out.eigenvalues.resize(n);
        out.eigenvectors = Eigen::MatrixXcd::Zero(n, n);
        for (int m = 0; m <= basis.cutoff(); ++m) {
            const auto [first, last] = basis.sector_range(m);
            const auto len = static_cast<Eigen::Index>(last - first);
            if (len == 0) continue;
            Eigen::MatrixXcd block = op.dense_block(first, last, first, last);
            Eigen::VectorXd w;
            Eigen::MatrixXcd v;
            detail::solve_block(block, w, v, real_path);
            out.eigenvalues.segment(static_cast<Eigen::Index>(first), len) = w;
            out.eigenvectors.block(static_cast<Eigen::Index>(first),
                                   static_cast<Eigen::Index>(first), len, len) = v;
        }
        // global ascending order; stable so equal eigenvalues keep sector order
        std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
        std::iota(perm.begin(), perm.end(), 0);
        std::stable_sort(perm.begin(), perm.end(), [&](Eigen::Index a, Eigen::Index b) {
            return out.eigenvalues[a] < out.eigenvalues[b];
        });
        Eigen::VectorXd ev(n);
        Eigen::MatrixXcd vec(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            ev[i] = out.eigenvalues[perm[static_cast<std::size_t>(i)]];
            vec.col(i) = out.eigenvectors.col(perm[static_cast<std::size_t>(i)]);
        }
        out.eigenvalues = std::move(ev);
        out.eigenvectors = std::move(vec);
        return out;
    }

    Eigen::MatrixXcd dense = op.dense();
    Eigen::VectorXd w;
    Eigen::MatrixXcd v;
    detail::solve_block(dense, w, v, real_path);
    out.eigenvalues = std::move(w);
    out.eigenvectors = std::move(v);
    return out;
}

// Gibbs weights relative to the ground state: w_i = e^{-beta (E_i - E_0)},
// Z = sum w_i >= 1.  Keeping only gaps makes every derived average invariant
// under H -> H + omega I by construction.
struct ThermalState {
    double beta = 0.0;
    double ground_energy = 0.0;
    Eigen::VectorXd weights;
    double partition = 0.0;

    // log Tr e^{-beta H} = -beta E_0 + log Z
    double log_trace() const { return -beta * ground_energy + std::log(partition); }
};

inline ThermalState make_thermal_state(double beta, const Eigen::VectorXd& eigenvalues) {
    if (!(beta > 0.0)) throw validation_error("beta must be > 0");
    if (eigenvalues.size() == 0) throw validation_error("empty spectrum");
    ThermalState st;
    st.beta = beta;
    st.ground_energy = eigenvalues[0];
    st.weights = (-(beta) * (eigenvalues.array() - eigenvalues[0])).exp().matrix();
    st.partition = st.weights.sum();
    return st;
}

// <B> = sum_i w_i <v_i|B|v_i> / Z
inline Complex thermal_average(const ThermalState& state, const SpectralDecomposition& spec,
                               const SparseComplexOperator& observable) {
    if (observable.dim() != spec.dim())
        throw mismatch_error("observable dimension differs from decomposition");
    const Eigen::MatrixXcd applied = observable.matrix() * spec.eigenvectors;
    Complex acc(0.0, 0.0);
    for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i)
        acc += state.weights[i] * spec.eigenvectors.col(i).dot(applied.col(i));
    return acc / state.partition;
}

// Diagonal observables need only |v_ij|^2 weights.
inline double thermal_average_diagonal(const ThermalState& state, const SpectralDecomposition& spec,
                                       const Eigen::VectorXd& diagonal) {
    if (diagonal.size() != spec.eigenvalues.size())
        throw mismatch_error("diagonal length differs from decomposition");
    double acc = 0.0;
    for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i) {
        double q = 0.0;
        for (Eigen::Index j = 0; j < diagonal.size(); ++j)
            q += std::norm(spec.eigenvectors(j, i)) * diagonal[j];
        acc += state.weights[i] * q;
    }
    return acc / state.partition;
}

} // namespace bhl

#endif
