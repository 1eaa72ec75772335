#ifndef BHL_SPARSE_OPERATOR_HPP
#define BHL_SPARSE_OPERATOR_HPP

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <complex>
#include <string>
#include <vector>

#include "bhl/errors.hpp"
#include "bhl/fock_basis.hpp"

namespace bhl {

using Complex = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<Complex>;
using Triplet = Eigen::Triplet<Complex>;

// Entries at or below this magnitude are dropped after every assembly or
// product; commutator identities are integer/phase arithmetic up to rounding.
inline constexpr double entry_prune_threshold = 1e-15;

// How an operator moves total particle number between sectors.  "mixed"
// asserts nothing (L and generic sums/products land here).
enum class SectorShift { preserves, raises, lowers, mixed };

inline SectorShift shift_of_sum(SectorShift a, SectorShift b) {
    return a == b ? a : SectorShift::mixed;
}

inline SectorShift shift_of_product(SectorShift a, SectorShift b) {
    if (a == SectorShift::mixed || b == SectorShift::mixed) return SectorShift::mixed;
    const auto step = [](SectorShift s) {
        return s == SectorShift::raises ? 1 : s == SectorShift::lowers ? -1 : 0;
    };
    switch (step(a) + step(b)) {
        case 0: return SectorShift::preserves;
        case 1: return SectorShift::raises;
        case -1: return SectorShift::lowers;
        default: return SectorShift::mixed;
    }
}

inline SectorShift shift_of_adjoint(SectorShift a) {
    if (a == SectorShift::raises) return SectorShift::lowers;
    if (a == SectorShift::lowers) return SectorShift::raises;
    return a;
}

// Complex matrix on a truncated basis, stored sparsely in a canonical
// (compressed column, pruned) layout together with its sector-shift tag.
class SparseComplexOperator {
public:
    SparseComplexOperator() : shift_(SectorShift::mixed) {}

    SparseComplexOperator(SparseMatrix mat, SectorShift shift)
        : mat_(std::move(mat)), shift_(shift) {
        canonicalize();
    }

    static SparseComplexOperator from_triplets(std::size_t dim, const std::vector<Triplet>& entries,
                                               SectorShift shift) {
        SparseMatrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
        m.setFromTriplets(entries.begin(), entries.end());
        return SparseComplexOperator(std::move(m), shift);
    }

    static SparseComplexOperator zero(std::size_t dim, SectorShift shift = SectorShift::preserves) {
        return SparseComplexOperator(SparseMatrix(static_cast<Eigen::Index>(dim),
                                                  static_cast<Eigen::Index>(dim)), shift);
    }

    static SparseComplexOperator identity(std::size_t dim) {
        SparseMatrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
        m.setIdentity();
        return SparseComplexOperator(std::move(m), SectorShift::preserves);
    }

    std::size_t dim() const { return static_cast<std::size_t>(mat_.rows()); }
    std::size_t nonzeros() const { return static_cast<std::size_t>(mat_.nonZeros()); }
    SectorShift shift() const { return shift_; }
    const SparseMatrix& matrix() const { return mat_; }

    Eigen::MatrixXcd dense() const { return Eigen::MatrixXcd(mat_); }

    SparseComplexOperator adjoint() const {
        return SparseComplexOperator(SparseMatrix(mat_.adjoint()), shift_of_adjoint(shift_));
    }

    SparseComplexOperator operator+(const SparseComplexOperator& other) const {
        require_same_dim(other);
        return SparseComplexOperator(SparseMatrix(mat_ + other.mat_),
                                     shift_of_sum(shift_, other.shift_));
    }

    SparseComplexOperator operator-(const SparseComplexOperator& other) const {
        require_same_dim(other);
        return SparseComplexOperator(SparseMatrix(mat_ - other.mat_),
                                     shift_of_sum(shift_, other.shift_));
    }

    SparseComplexOperator operator*(const SparseComplexOperator& other) const {
        require_same_dim(other);
        return SparseComplexOperator(SparseMatrix(mat_ * other.mat_),
                                     shift_of_product(shift_, other.shift_));
    }

    friend SparseComplexOperator operator*(Complex scale, const SparseComplexOperator& op) {
        return SparseComplexOperator(SparseMatrix(scale * op.mat_), op.shift_);
    }

    friend SparseComplexOperator operator*(double scale, const SparseComplexOperator& op) {
        return Complex(scale, 0.0) * op;
    }

    // max |entry|
    double max_abs() const {
        double m = 0.0;
        for (int c = 0; c < mat_.outerSize(); ++c)
            for (SparseMatrix::InnerIterator it(mat_, c); it; ++it)
                m = std::max(m, std::abs(it.value()));
        return m;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (int c = 0; c < mat_.outerSize(); ++c)
            for (SparseMatrix::InnerIterator it(mat_, c); it; ++it)
                s += std::norm(it.value());
        return std::sqrt(s);
    }

    // max |A - A^dagger| entry; 0 means Hermitian as stored
    double hermiticity_defect() const {
        SparseMatrix d = SparseMatrix(mat_ - SparseMatrix(mat_.adjoint()));
        double m = 0.0;
        for (int c = 0; c < d.outerSize(); ++c)
            for (SparseMatrix::InnerIterator it(d, c); it; ++it)
                m = std::max(m, std::abs(it.value()));
        return m;
    }

    bool is_real() const {
        for (int c = 0; c < mat_.outerSize(); ++c)
            for (SparseMatrix::InnerIterator it(mat_, c); it; ++it)
                if (it.value().imag() != 0.0) return false;
        return true;
    }

    // Compression P B P onto the leading `new_dim` basis states.  Because the
    // basis is sector-major, this is exactly the projection onto a smaller
    // cutoff.
    SparseComplexOperator compressed_to(std::size_t new_dim) const {
        if (new_dim > dim()) throw mismatch_error("compression target larger than operator");
        std::vector<Triplet> kept;
        const auto n = static_cast<Eigen::Index>(new_dim);
        for (int c = 0; c < mat_.outerSize() && c < n; ++c)
            for (SparseMatrix::InnerIterator it(mat_, c); it; ++it)
                if (it.row() < n) kept.emplace_back(it.row(), it.col(), it.value());
        SparseMatrix m(n, n);
        m.setFromTriplets(kept.begin(), kept.end());
        return SparseComplexOperator(std::move(m), shift_);
    }

    // Dense block rows x cols = [r0, r1) x [c0, c1)
    Eigen::MatrixXcd dense_block(std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1) const {
        Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(r1 - r0),
                                                    static_cast<Eigen::Index>(c1 - c0));
        for (auto c = static_cast<Eigen::Index>(c0); c < static_cast<Eigen::Index>(c1); ++c)
            for (SparseMatrix::InnerIterator it(mat_, c); it; ++it)
                if (it.row() >= static_cast<Eigen::Index>(r0) && it.row() < static_cast<Eigen::Index>(r1))
                    b(it.row() - static_cast<Eigen::Index>(r0), c - static_cast<Eigen::Index>(c0)) = it.value();
        return b;
    }

    // True when every stored entry is consistent with the tag's sector move.
    bool tag_consistent(const TruncatedBasis& basis) const {
        if (shift_ == SectorShift::mixed) return true;
        const int want = shift_ == SectorShift::raises ? 1 : shift_ == SectorShift::lowers ? -1 : 0;
        for (int c = 0; c < mat_.outerSize(); ++c)
            for (SparseMatrix::InnerIterator it(mat_, c); it; ++it) {
                const int dr = basis.sector_of(static_cast<std::size_t>(it.row())) -
                               basis.sector_of(static_cast<std::size_t>(it.col()));
                if (dr != want) return false;
            }
        return true;
    }

    bool crosses_sectors(const TruncatedBasis& basis) const {
        for (int c = 0; c < mat_.outerSize(); ++c)
            for (SparseMatrix::InnerIterator it(mat_, c); it; ++it)
                if (basis.sector_of(static_cast<std::size_t>(it.row())) !=
                    basis.sector_of(static_cast<std::size_t>(it.col())))
                    return true;
        return false;
    }

private:
    void require_same_dim(const SparseComplexOperator& other) const {
        if (dim() != other.dim())
            throw mismatch_error("operator dimensions differ: " + std::to_string(dim()) +
                                 " vs " + std::to_string(other.dim()));
    }

    void canonicalize() {
        mat_.prune([](Eigen::Index, Eigen::Index, const Complex& v) {
            return std::abs(v) > entry_prune_threshold;
        });
        mat_.makeCompressed();
    }

    SparseMatrix mat_;
    SectorShift shift_;
};

// X Y - Y X
inline SparseComplexOperator commutator(const SparseComplexOperator& x, const SparseComplexOperator& y) {
    return x * y - y * x;
}

// max |A - B| entry
inline double max_abs_diff(const SparseComplexOperator& a, const SparseComplexOperator& b) {
    return (a - b).max_abs();
}

// max |A - B| entry over rows and columns below `interior_dim`
inline double interior_max_abs_diff(const SparseComplexOperator& a, const SparseComplexOperator& b,
                                    std::size_t interior_dim) {
    return (a - b).compressed_to(interior_dim).max_abs();
}

// Frobenius norm of (A - B) restricted to the leading `interior_dim` block,
// relative to the restricted norm of B (or absolute when B vanishes there).
inline double interior_frobenius_rel_diff(const SparseComplexOperator& a, const SparseComplexOperator& b,
                                          std::size_t interior_dim) {
    const double diff = (a - b).compressed_to(interior_dim).frobenius_norm();
    const double ref = b.compressed_to(interior_dim).frobenius_norm();
    return ref > 0.0 ? diff / ref : diff;
}

} // namespace bhl

#endif
