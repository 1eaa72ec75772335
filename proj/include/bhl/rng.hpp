#ifndef BHL_RNG_HPP
#define BHL_RNG_HPP

#include <Eigen/Dense>
#include <cstdint>

#include "bhl/fock_basis.hpp"
#include "bhl/sparse_operator.hpp"

namespace bhl {

// SplitMix64 (Steele, Lea, Flood 2014).  The fixed constants make random-
// vector checks reproducible across implementations of this tool, not just
// across runs.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // uniform in [-1, 1)
    double symmetric_unit() {
        const double u = static_cast<double>(next() >> 11) * 0x1.0p-53; // [0,1)
        return 2.0 * u - 1.0;
    }
};

// Random unit vector supported on sectors 0..max_sector of the basis, with
// complex components drawn uniformly from the square [-1,1)^2.
inline Eigen::VectorXcd random_state(const TruncatedBasis& basis, int max_sector, SplitMix64& rng) {
    const std::size_t support = basis.prefix_dim(max_sector);
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.dim()));
    for (std::size_t i = 0; i < support; ++i) {
        const double re = rng.symmetric_unit();
        const double im = rng.symmetric_unit();
        v[static_cast<Eigen::Index>(i)] = Complex(re, im);
    }
    const double norm = v.norm();
    if (norm > 0.0) v /= norm;
    return v;
}

} // namespace bhl

#endif
