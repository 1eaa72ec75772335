#ifndef BHL_FOCK_BASIS_HPP
#define BHL_FOCK_BASIS_HPP

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

#include "bhl/errors.hpp"

namespace bhl {

// Occupation vector (n_1,...,n_L), one particle count per site.
using OccupationState = std::vector<int>;

inline int occupation_total(const OccupationState& s) {
    return std::accumulate(s.begin(), s.end(), 0);
}

inline long long occupation_square_total(const OccupationState& s) {
    long long t = 0;
    for (int n : s) t += static_cast<long long>(n) * n;
    return t;
}

// C(n, k) with overflow guard; the guard value is far above any usable basis size.
inline std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * static_cast<std::uint64_t>(n - k + i);
        r /= static_cast<std::uint64_t>(i);
        if (r > (1ull << 62)) throw dimension_error("binomial overflow");
    }
    return r;
}

// Number of occupation states of L sites with total exactly m.
inline std::size_t sector_dimension(int sites, int m) {
    return static_cast<std::size_t>(binomial(m + sites - 1, sites - 1));
}

struct StateHash {
    std::size_t operator()(const OccupationState& s) const {
        std::uint64_t h = 1469598103934665603ull; // FNV-1a
        for (int n : s) {
            h ^= static_cast<std::uint64_t>(n);
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

// Ordered enumeration of all occupation states with total <= M.  States are
// grouped by total m ascending, lexicographic within a sector.  Sector-major
// order makes the basis for cutoff M a prefix of the basis for cutoff M+1,
// so indices carry over between convergence runs.
class TruncatedBasis {
public:
    static constexpr std::size_t default_dimension_cap = 20000;

    TruncatedBasis(int sites, int cutoff, std::size_t dimension_cap = default_dimension_cap)
        : sites_(sites), cutoff_(cutoff) {
        if (sites < 1) throw validation_error("basis needs at least one site");
        if (cutoff < 0) throw validation_error("basis cutoff must be >= 0");
        const std::uint64_t dim = binomial(cutoff + sites, sites);
        if (dim > dimension_cap)
            throw dimension_error("basis dimension " + std::to_string(dim) +
                                  " exceeds cap " + std::to_string(dimension_cap));
        states_.reserve(static_cast<std::size_t>(dim));
        sector_offsets_.reserve(static_cast<std::size_t>(cutoff) + 2);
        OccupationState work(static_cast<std::size_t>(sites), 0);
        for (int m = 0; m <= cutoff; ++m) {
            sector_offsets_.push_back(states_.size());
            emit_sector(work, 0, m);
        }
        sector_offsets_.push_back(states_.size());
        index_.reserve(states_.size() * 2);
        for (std::size_t i = 0; i < states_.size(); ++i)
            index_.emplace(states_[i], i);
        sector_of_.resize(states_.size());
        for (int m = 0; m <= cutoff; ++m)
            for (std::size_t i = sector_offsets_[m]; i < sector_offsets_[m + 1]; ++i)
                sector_of_[i] = m;
    }

    int sites() const { return sites_; }
    int cutoff() const { return cutoff_; }
    std::size_t dim() const { return states_.size(); }

    const OccupationState& state_at(std::size_t i) const { return states_.at(i); }

    std::size_t index_of(const OccupationState& s) const {
        if (static_cast<int>(s.size()) != sites_)
            throw mismatch_error("state has " + std::to_string(s.size()) +
                                 " sites, basis has " + std::to_string(sites_));
        const auto it = index_.find(s);
        if (it == index_.end()) {
            for (int n : s)
                if (n < 0) throw validation_error("negative occupation");
            throw out_of_truncation_error("state total " + std::to_string(occupation_total(s)) +
                                          " exceeds cutoff " + std::to_string(cutoff_));
        }
        return it->second;
    }

    int sector_of(std::size_t index) const { return sector_of_.at(index); }

    // [first, last) index range of sector m
    std::pair<std::size_t, std::size_t> sector_range(int m) const {
        if (m < 0 || m > cutoff_)
            throw domain_error("sector " + std::to_string(m) + " outside 0..cutoff");
        return {sector_offsets_[static_cast<std::size_t>(m)],
                sector_offsets_[static_cast<std::size_t>(m) + 1]};
    }

    // dim of D^(m) = number of states with total <= m
    std::size_t prefix_dim(int m) const {
        if (m < 0) return 0;
        m = std::min(m, cutoff_);
        return sector_offsets_[static_cast<std::size_t>(m) + 1];
    }

private:
    void emit_sector(OccupationState& work, int site, int remaining) {
        if (site == sites_ - 1) {
            work[static_cast<std::size_t>(site)] = remaining;
            states_.push_back(work);
            return;
        }
        for (int n = 0; n <= remaining; ++n) {
            work[static_cast<std::size_t>(site)] = n;
            emit_sector(work, site + 1, remaining - n);
        }
        work[static_cast<std::size_t>(site)] = 0;
    }

    int sites_;
    int cutoff_;
    std::vector<OccupationState> states_;
    std::vector<std::size_t> sector_offsets_;
    std::vector<int> sector_of_;
    std::unordered_map<OccupationState, std::size_t, StateHash> index_;
};

inline TruncatedBasis enumerate_basis(int sites, int cutoff,
                                      std::size_t dimension_cap = TruncatedBasis::default_dimension_cap) {
    return TruncatedBasis(sites, cutoff, dimension_cap);
}

} // namespace bhl

#endif
