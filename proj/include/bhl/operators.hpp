#ifndef BHL_OPERATORS_HPP
#define BHL_OPERATORS_HPP

#include <cmath>
#include <complex>
#include <vector>

#include "bhl/fock_basis.hpp"
#include "bhl/lattice.hpp"
#include "bhl/model.hpp"
#include "bhl/sparse_operator.hpp"

namespace bhl {

// All builders return the compression P_M B P_M of the named operator onto the
// given truncated basis.  Identities that hold on the full Fock space are only
// exact on interior sectors; callers restrict by the total sector shift of the
// expression they check.

// c_x
inline SparseComplexOperator op_annihilate(const TruncatedBasis& basis, int site) {
    std::vector<Triplet> t;
    t.reserve(basis.dim());
    for (std::size_t j = 0; j < basis.dim(); ++j) {
        const OccupationState& s = basis.state_at(j);
        const int n = s.at(static_cast<std::size_t>(site));
        if (n == 0) continue;
        OccupationState down = s;
        down[static_cast<std::size_t>(site)] = n - 1;
        t.emplace_back(static_cast<Eigen::Index>(basis.index_of(down)),
                       static_cast<Eigen::Index>(j), Complex(std::sqrt(double(n)), 0.0));
    }
    return SparseComplexOperator::from_triplets(basis.dim(), t, SectorShift::lowers);
}

// c^dag_x; states in the top sector are annihilated by the truncation
inline SparseComplexOperator op_create(const TruncatedBasis& basis, int site) {
    std::vector<Triplet> t;
    t.reserve(basis.dim());
    for (std::size_t j = 0; j < basis.dim(); ++j) {
        const OccupationState& s = basis.state_at(j);
        if (occupation_total(s) >= basis.cutoff()) continue;
        OccupationState up = s;
        const int n = ++up[static_cast<std::size_t>(site)];
        t.emplace_back(static_cast<Eigen::Index>(basis.index_of(up)),
                       static_cast<Eigen::Index>(j), Complex(std::sqrt(double(n)), 0.0));
    }
    return SparseComplexOperator::from_triplets(basis.dim(), t, SectorShift::raises);
}

// n_x
inline SparseComplexOperator op_number(const TruncatedBasis& basis, int site) {
    std::vector<Triplet> t;
    t.reserve(basis.dim());
    for (std::size_t j = 0; j < basis.dim(); ++j) {
        const int n = basis.state_at(j).at(static_cast<std::size_t>(site));
        if (n != 0)
            t.emplace_back(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j),
                           Complex(double(n), 0.0));
    }
    return SparseComplexOperator::from_triplets(basis.dim(), t, SectorShift::preserves);
}

// c^dag_x c_y built directly (sector preserving, exact under truncation)
inline SparseComplexOperator op_hop(const TruncatedBasis& basis, int x, int y) {
    std::vector<Triplet> t;
    t.reserve(basis.dim());
    for (std::size_t j = 0; j < basis.dim(); ++j) {
        const OccupationState& s = basis.state_at(j);
        const int ny = s.at(static_cast<std::size_t>(y));
        if (ny == 0) continue;
        if (x == y) {
            t.emplace_back(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j),
                           Complex(double(ny), 0.0));
            continue;
        }
        OccupationState moved = s;
        --moved[static_cast<std::size_t>(y)];
        const int nx = ++moved[static_cast<std::size_t>(x)];
        t.emplace_back(static_cast<Eigen::Index>(basis.index_of(moved)),
                       static_cast<Eigen::Index>(j),
                       Complex(std::sqrt(double(ny)) * std::sqrt(double(nx)), 0.0));
    }
    return SparseComplexOperator::from_triplets(basis.dim(), t, SectorShift::preserves);
}

// N = sum_x n_x (diagonal)
inline SparseComplexOperator op_total_number(const TruncatedBasis& basis) {
    std::vector<Triplet> t;
    t.reserve(basis.dim());
    for (std::size_t j = 0; j < basis.dim(); ++j) {
        const int m = occupation_total(basis.state_at(j));
        if (m != 0)
            t.emplace_back(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j),
                           Complex(double(m), 0.0));
    }
    return SparseComplexOperator::from_triplets(basis.dim(), t, SectorShift::preserves);
}

// N2 = sum_x n_x^2 (diagonal)
inline SparseComplexOperator op_total_number_sq(const TruncatedBasis& basis) {
    std::vector<Triplet> t;
    t.reserve(basis.dim());
    for (std::size_t j = 0; j < basis.dim(); ++j) {
        const long long q = occupation_square_total(basis.state_at(j));
        if (q != 0)
            t.emplace_back(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j),
                           Complex(double(q), 0.0));
    }
    return SparseComplexOperator::from_triplets(basis.dim(), t, SectorShift::preserves);
}

namespace detail {

inline SparseComplexOperator op_hopping_part(const TruncatedBasis& basis, const LatticeSpec& lattice,
                                             const HoppingSpec& hopping, bool offdiagonal,
                                             bool diagonal) {
    if (basis.sites() != lattice.site_count())
        throw mismatch_error("basis site count differs from lattice");
    std::vector<Triplet> t;
    for (const auto& [zkey, amp] : hopping.amplitudes()) {
        const bool onsite = (zkey == 0);
        if (onsite && !diagonal) continue;
        if (!onsite && !offdiagonal) continue;
        for (int x = 0; x < lattice.site_count(); ++x) {
            const int y = torus_add_index(lattice, x, zkey);
            // t_{x,y} c^dag_x c_y with t_{x, x(+)z} = amp(z)
            for (std::size_t j = 0; j < basis.dim(); ++j) {
                const OccupationState& s = basis.state_at(j);
                const int ny = s.at(static_cast<std::size_t>(y));
                if (ny == 0) continue;
                if (x == y) {
                    t.emplace_back(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j),
                                   amp * double(ny));
                } else {
                    OccupationState moved = s;
                    --moved[static_cast<std::size_t>(y)];
                    const int nx = ++moved[static_cast<std::size_t>(x)];
                    t.emplace_back(static_cast<Eigen::Index>(basis.index_of(moved)),
                                   static_cast<Eigen::Index>(j),
                                   amp * std::sqrt(double(ny)) * std::sqrt(double(nx)));
                }
            }
        }
    }
    return SparseComplexOperator::from_triplets(basis.dim(), t, SectorShift::preserves);
}

} // namespace detail

// T = sum_{x,y} t_xy c^dag_x c_y
inline SparseComplexOperator op_hopping(const TruncatedBasis& basis, const LatticeSpec& lattice,
                                        const HoppingSpec& hopping) {
    return detail::op_hopping_part(basis, lattice, hopping, true, true);
}

// T' (off-diagonal part, x != y)
inline SparseComplexOperator op_hopping_offdiag(const TruncatedBasis& basis, const LatticeSpec& lattice,
                                                const HoppingSpec& hopping) {
    return detail::op_hopping_part(basis, lattice, hopping, true, false);
}

// T'' = t(0) N (diagonal part)
inline SparseComplexOperator op_hopping_diag(const TruncatedBasis& basis, const LatticeSpec& lattice,
                                             const HoppingSpec& hopping) {
    return detail::op_hopping_part(basis, lattice, hopping, false, true);
}

// L = sum_x (c^dag_x + c_x); couples adjacent sectors only
inline SparseComplexOperator op_field(const TruncatedBasis& basis) {
    std::vector<Triplet> t;
    t.reserve(2 * basis.dim() * static_cast<std::size_t>(basis.sites()));
    for (std::size_t j = 0; j < basis.dim(); ++j) {
        const OccupationState& s = basis.state_at(j);
        const bool can_raise = occupation_total(s) < basis.cutoff();
        for (int x = 0; x < basis.sites(); ++x) {
            const int n = s[static_cast<std::size_t>(x)];
            if (n > 0) {
                OccupationState down = s;
                down[static_cast<std::size_t>(x)] = n - 1;
                t.emplace_back(static_cast<Eigen::Index>(basis.index_of(down)),
                               static_cast<Eigen::Index>(j), Complex(std::sqrt(double(n)), 0.0));
            }
            if (can_raise) {
                OccupationState up = s;
                up[static_cast<std::size_t>(x)] = n + 1;
                t.emplace_back(static_cast<Eigen::Index>(basis.index_of(up)),
                               static_cast<Eigen::Index>(j), Complex(std::sqrt(double(n + 1)), 0.0));
            }
        }
    }
    return SparseComplexOperator::from_triplets(basis.dim(), t, SectorShift::mixed);
}

// H = U N2 + T - mu N + lambda L
inline SparseComplexOperator op_hamiltonian(const TruncatedBasis& basis, const ModelSpec& model) {
    SparseComplexOperator h = model.repulsion * op_total_number_sq(basis);
    if (!model.hopping.empty())
        h = h + op_hopping(basis, model.lattice, model.hopping);
    if (model.chemical_potential != 0.0)
        h = h - model.chemical_potential * op_total_number(basis);
    if (model.symmetry_breaking != 0.0)
        h = h + model.symmetry_breaking * op_field(basis);
    return h;
}

// c(k) = |L|^{-1/2} sum_x e^{ik.x} c_x
inline SparseComplexOperator op_momentum_annihilate(const TruncatedBasis& basis,
                                                    const LatticeSpec& lattice, const Momentum& k) {
    if (basis.sites() != lattice.site_count())
        throw mismatch_error("basis site count differs from lattice");
    const double scale = 1.0 / std::sqrt(double(lattice.site_count()));
    std::vector<Triplet> t;
    for (std::size_t j = 0; j < basis.dim(); ++j) {
        const OccupationState& s = basis.state_at(j);
        for (int x = 0; x < lattice.site_count(); ++x) {
            const int n = s[static_cast<std::size_t>(x)];
            if (n == 0) continue;
            OccupationState down = s;
            down[static_cast<std::size_t>(x)] = n - 1;
            const Complex phase = plane_wave(lattice, k, lattice.site(x));
            t.emplace_back(static_cast<Eigen::Index>(basis.index_of(down)),
                           static_cast<Eigen::Index>(j), scale * phase * std::sqrt(double(n)));
        }
    }
    return SparseComplexOperator::from_triplets(basis.dim(), t, SectorShift::lowers);
}

// A(k) = c^dag(k)
inline SparseComplexOperator op_momentum_create(const TruncatedBasis& basis,
                                                const LatticeSpec& lattice, const Momentum& k) {
    return op_momentum_annihilate(basis, lattice, k).adjoint();
}

// C(k) = |L|^{-1/2} sum_x e^{ik.x} n_x (diagonal)
inline SparseComplexOperator op_momentum_density(const TruncatedBasis& basis,
                                                 const LatticeSpec& lattice, const Momentum& k) {
    if (basis.sites() != lattice.site_count())
        throw mismatch_error("basis site count differs from lattice");
    const double scale = 1.0 / std::sqrt(double(lattice.site_count()));
    std::vector<Triplet> t;
    t.reserve(basis.dim());
    for (std::size_t j = 0; j < basis.dim(); ++j) {
        const OccupationState& s = basis.state_at(j);
        Complex v(0.0, 0.0);
        for (int x = 0; x < lattice.site_count(); ++x)
            if (s[static_cast<std::size_t>(x)] != 0)
                v += plane_wave(lattice, k, lattice.site(x)) * double(s[static_cast<std::size_t>(x)]);
        if (v != Complex(0.0, 0.0))
            t.emplace_back(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j), scale * v);
    }
    return SparseComplexOperator::from_triplets(basis.dim(), t, SectorShift::preserves);
}

// Closed forms of the commutators between C(k), A(k) = c^dag(k) and the model
// operators, assembled directly from their displayed expressions.  Each is the
// compression of the corresponding Fock-space operator, so e.g. the double
// commutator with H inherits exact positivity of its thermal average.
struct ClosedFormCommutators {
    SparseComplexOperator density_creation;     // [C, A]   = |L|^{-1/2} c^dag(0)
    SparseComplexOperator density_field;        // [C, L]   = |L|^{-1/2} sum_x e^{ik.x}(c^dag_x - c_x)
    SparseComplexOperator double_field;         // [[C, L], C^dag] = -L/|L|
    SparseComplexOperator density_hopping;      // [C, T]
    SparseComplexOperator double_hopping;       // [[C, T], C^dag]
    SparseComplexOperator double_hamiltonian;   // [[C, H], C^dag] = [[C,T],C^dag] + lambda [[C,L],C^dag]
};

inline ClosedFormCommutators closed_form_commutators(const TruncatedBasis& basis,
                                                     const ModelSpec& model, const Momentum& k) {
    const LatticeSpec& lat = model.lattice;
    const double vol = double(lat.site_count());
    ClosedFormCommutators cf;

    cf.density_creation = (1.0 / std::sqrt(vol)) *
                          op_momentum_create(basis, lat, Momentum{Coords(static_cast<std::size_t>(lat.dimension()), 0),
                                                                  lat.linear_size()});

    {
        std::vector<Triplet> t;
        const double scale = 1.0 / std::sqrt(vol);
        for (std::size_t j = 0; j < basis.dim(); ++j) {
            const OccupationState& s = basis.state_at(j);
            const bool can_raise = occupation_total(s) < basis.cutoff();
            for (int x = 0; x < lat.site_count(); ++x) {
                const Complex phase = scale * plane_wave(lat, k, lat.site(x));
                const int n = s[static_cast<std::size_t>(x)];
                if (can_raise) {
                    OccupationState up = s;
                    up[static_cast<std::size_t>(x)] = n + 1;
                    t.emplace_back(static_cast<Eigen::Index>(basis.index_of(up)),
                                   static_cast<Eigen::Index>(j), phase * std::sqrt(double(n + 1)));
                }
                if (n > 0) {
                    OccupationState down = s;
                    down[static_cast<std::size_t>(x)] = n - 1;
                    t.emplace_back(static_cast<Eigen::Index>(basis.index_of(down)),
                                   static_cast<Eigen::Index>(j), -phase * std::sqrt(double(n)));
                }
            }
        }
        cf.density_field = SparseComplexOperator::from_triplets(basis.dim(), t, SectorShift::mixed);
    }

    cf.double_field = (-1.0 / vol) * op_field(basis);

    {
        // [C,T] = |L|^{-1/2} sum_{x,y} t_xy (e^{ik.x} - e^{ik.y}) c^dag_x c_y
        std::vector<Triplet> t;
        const double scale = 1.0 / std::sqrt(vol);
        for (const auto& [zkey, amp] : model.hopping.amplitudes()) {
            if (zkey == 0) continue; // phases cancel on site
            for (int x = 0; x < lat.site_count(); ++x) {
                const int y = torus_add_index(lat, x, zkey);
                const Complex coeff = scale * amp *
                                      (plane_wave(lat, k, lat.site(x)) - plane_wave(lat, k, lat.site(y)));
                if (std::abs(coeff) <= entry_prune_threshold) continue;
                for (std::size_t j = 0; j < basis.dim(); ++j) {
                    const OccupationState& s = basis.state_at(j);
                    const int ny = s[static_cast<std::size_t>(y)];
                    if (ny == 0) continue;
                    OccupationState moved = s;
                    --moved[static_cast<std::size_t>(y)];
                    const int nx = ++moved[static_cast<std::size_t>(x)];
                    t.emplace_back(static_cast<Eigen::Index>(basis.index_of(moved)),
                                   static_cast<Eigen::Index>(j),
                                   coeff * std::sqrt(double(ny)) * std::sqrt(double(nx)));
                }
            }
        }
        cf.density_hopping = SparseComplexOperator::from_triplets(basis.dim(), t, SectorShift::preserves);
    }

    {
        // [[C,T],C^dag] = -(2/|L|) sum_{x,y} t_xy (1 - cos(k.(x-y))) c^dag_x c_y
        std::vector<Triplet> t;
        for (const auto& [zkey, amp] : model.hopping.amplitudes()) {
            if (zkey == 0) continue;
            for (int x = 0; x < lat.site_count(); ++x) {
                const int y = torus_add_index(lat, x, zkey);
                const double geom = 1.0 - cos_phase_between(lat, k, lat.site(x), lat.site(y));
                const Complex coeff = (-2.0 / vol) * amp * geom;
                if (std::abs(coeff) <= entry_prune_threshold) continue;
                for (std::size_t j = 0; j < basis.dim(); ++j) {
                    const OccupationState& s = basis.state_at(j);
                    const int ny = s[static_cast<std::size_t>(y)];
                    if (ny == 0) continue;
                    OccupationState moved = s;
                    --moved[static_cast<std::size_t>(y)];
                    const int nx = ++moved[static_cast<std::size_t>(x)];
                    t.emplace_back(static_cast<Eigen::Index>(basis.index_of(moved)),
                                   static_cast<Eigen::Index>(j),
                                   coeff * std::sqrt(double(ny)) * std::sqrt(double(nx)));
                }
            }
        }
        cf.double_hopping = SparseComplexOperator::from_triplets(basis.dim(), t, SectorShift::preserves);
    }

    cf.double_hamiltonian = cf.double_hopping + model.symmetry_breaking * cf.double_field;
    return cf;
}

} // namespace bhl

#endif
