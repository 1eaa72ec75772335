#ifndef BHL_LATTICE_HPP
#define BHL_LATTICE_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "bhl/errors.hpp"

namespace bhl {

using Coords = std::vector<int>;

// Cubic lattice {0,...,N-1}^d with periodic (torus) arithmetic.  Sites are
// listed lexicographically; the ordering is a contract the operator builders
// depend on.
class LatticeSpec {
public:
    LatticeSpec(int dimension, int linear_size)
        : dim_(dimension), size_(linear_size) {
        if (dimension < 1 || dimension > 3)
            throw validation_error("lattice dimension must be 1, 2 or 3, got " +
                                   std::to_string(dimension));
        if (linear_size < 2)
            throw validation_error("lattice linear size must be >= 2, got " +
                                   std::to_string(linear_size));
        count_ = 1;
        for (int i = 0; i < dim_; ++i) count_ *= size_;
        sites_.reserve(static_cast<std::size_t>(count_));
        Coords c(dim_, 0);
        for (int i = 0; i < count_; ++i) {
            sites_.push_back(c);
            for (int a = dim_ - 1; a >= 0; --a) {
                if (++c[a] < size_) break;
                c[a] = 0;
            }
        }
    }

    int dimension() const { return dim_; }
    int linear_size() const { return size_; }
    int site_count() const { return count_; }
    const std::vector<Coords>& sites() const { return sites_; }
    const Coords& site(int index) const { return sites_.at(static_cast<std::size_t>(index)); }

    int index_of(const Coords& c) const {
        check_site(c);
        int idx = 0;
        for (int a = 0; a < dim_; ++a) idx = idx * size_ + c[a];
        return idx;
    }

    void check_site(const Coords& c) const {
        if (static_cast<int>(c.size()) != dim_)
            throw invalid_site_error("site has " + std::to_string(c.size()) +
                                     " coordinates, lattice dimension is " + std::to_string(dim_));
        for (int a = 0; a < dim_; ++a)
            if (c[a] < 0 || c[a] >= size_)
                throw invalid_site_error("site coordinate " + std::to_string(c[a]) +
                                         " outside {0,...," + std::to_string(size_ - 1) + "}");
    }

private:
    int dim_;
    int size_;
    int count_;
    std::vector<Coords> sites_;
};

inline Coords torus_add(const LatticeSpec& lat, const Coords& x, const Coords& y) {
    lat.check_site(x);
    lat.check_site(y);
    Coords r(x.size());
    for (std::size_t a = 0; a < x.size(); ++a)
        r[a] = (x[a] + y[a]) % lat.linear_size();
    return r;
}

inline Coords torus_sub(const LatticeSpec& lat, const Coords& x, const Coords& y) {
    lat.check_site(x);
    lat.check_site(y);
    const int n = lat.linear_size();
    Coords r(x.size());
    for (std::size_t a = 0; a < x.size(); ++a)
        r[a] = ((x[a] - y[a]) % n + n) % n;
    return r;
}

inline int torus_add_index(const LatticeSpec& lat, int x, int y) {
    return lat.index_of(torus_add(lat, lat.site(x), lat.site(y)));
}

inline int torus_sub_index(const LatticeSpec& lat, int x, int y) {
    return lat.index_of(torus_sub(lat, lat.site(x), lat.site(y)));
}

// Momentum k with components k_i = 2*pi*n_i/N.  The integer tuple is kept so
// phases can be evaluated from exact residues mod N.
struct Momentum {
    Coords numerators; // n_i in {0,...,N-1}
    int linear_size = 0;

    double component(int a) const {
        return 2.0 * std::numbers::pi * numerators.at(static_cast<std::size_t>(a)) / linear_size;
    }

    // |k|^2 with k_i in [0, 2*pi)
    double norm_sq() const {
        double s = 0.0;
        for (std::size_t a = 0; a < numerators.size(); ++a) {
            const double k = 2.0 * std::numbers::pi * numerators[a] / linear_size;
            s += k * k;
        }
        return s;
    }

    bool is_zero() const {
        for (int n : numerators)
            if (n != 0) return false;
        return true;
    }
};

// All N^d momenta, lexicographic in (n_1,...,n_d); the first entry is k = 0.
inline std::vector<Momentum> brillouin_momenta(const LatticeSpec& lat) {
    std::vector<Momentum> out;
    out.reserve(static_cast<std::size_t>(lat.site_count()));
    for (const Coords& c : lat.sites())
        out.push_back(Momentum{c, lat.linear_size()});
    return out;
}

// k.x as an exact residue mod N (so e^{ik.x} never accumulates phase error)
inline int phase_numerator(const LatticeSpec& lat, const Momentum& k, const Coords& x) {
    const int n = lat.linear_size();
    long long r = 0;
    for (std::size_t a = 0; a < x.size(); ++a)
        r += static_cast<long long>(k.numerators[a]) * x[a];
    return static_cast<int>(((r % n) + n) % n);
}

inline std::complex<double> phase_from_numerator(int r, int n) {
    if (r == 0) return {1.0, 0.0};
    return std::polar(1.0, 2.0 * std::numbers::pi * r / n);
}

// e^{ik.x}
inline std::complex<double> plane_wave(const LatticeSpec& lat, const Momentum& k, const Coords& x) {
    lat.check_site(x);
    return phase_from_numerator(phase_numerator(lat, k, x), lat.linear_size());
}

// cos(k.(x-y)); equals the torus version of the difference, so the residue
// arithmetic applies verbatim
inline double cos_phase_between(const LatticeSpec& lat, const Momentum& k,
                                const Coords& x, const Coords& y) {
    const int n = lat.linear_size();
    long long r = 0;
    for (std::size_t a = 0; a < x.size(); ++a)
        r += static_cast<long long>(k.numerators[a]) * (x[a] - y[a]);
    const int rm = static_cast<int>(((r % n) + n) % n);
    if (rm == 0) return 1.0;
    return std::cos(2.0 * std::numbers::pi * rm / n);
}

// Displacement mapped componentwise to the minimal image (-N/2, N/2].
inline Coords minimal_image(const LatticeSpec& lat, const Coords& z) {
    const int n = lat.linear_size();
    Coords r(z.size());
    for (std::size_t a = 0; a < z.size(); ++a) {
        int v = ((z[a] % n) + n) % n;
        if (2 * v > n) v -= n;
        r[a] = v;
    }
    return r;
}

inline double minimal_image_norm_sq(const LatticeSpec& lat, const Coords& z) {
    double s = 0.0;
    for (int v : minimal_image(lat, z)) s += static_cast<double>(v) * v;
    return s;
}

} // namespace bhl

#endif
