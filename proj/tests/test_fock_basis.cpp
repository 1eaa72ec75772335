#include <gtest/gtest.h>

#include <set>
#include <vector>

#include "bhl/fock_basis.hpp"

using namespace bhl;

// Brute-force oracle: count occupation vectors of `sites` entries in
// {0..total}^sites with the requested total (or total <= cutoff).
namespace {

void enumerate_rec(int sites, int bound, std::vector<int>& work,
                   std::vector<std::vector<int>>& out) {
    if (static_cast<int>(work.size()) == sites) {
        out.push_back(work);
        return;
    }
    for (int n = 0; n <= bound; ++n) {
        work.push_back(n);
        enumerate_rec(sites, bound, work, out);
        work.pop_back();
    }
}

std::size_t oracle_count(int sites, int cutoff, bool exact_total) {
    std::vector<std::vector<int>> all;
    std::vector<int> work;
    enumerate_rec(sites, cutoff, work, all);
    std::size_t count = 0;
    for (const auto& s : all) {
        int total = 0;
        for (int n : s) total += n;
        if (exact_total ? total == cutoff : total <= cutoff) ++count;
    }
    return count;
}

} // namespace

TEST(FockBasis, EnumerationCountsMatchOracle) {
    EXPECT_EQ(enumerate_basis(2, 2).dim(), 6u);
    EXPECT_EQ(oracle_count(2, 2, false), 6u);
    EXPECT_EQ(enumerate_basis(1, 5).dim(), 6u);
    EXPECT_EQ(enumerate_basis(3, 0).dim(), 1u);
    EXPECT_EQ(enumerate_basis(3, 0).state_at(0), (OccupationState{0, 0, 0}));
    for (int sites = 1; sites <= 4; ++sites)
        for (int cutoff = 0; cutoff <= 5; ++cutoff)
            EXPECT_EQ(enumerate_basis(sites, cutoff).dim(), oracle_count(sites, cutoff, false))
                << "sites=" << sites << " cutoff=" << cutoff;
}

TEST(FockBasis, SectorDimensionMatchesOracle) {
    EXPECT_EQ(sector_dimension(3, 2), 6u);
    EXPECT_EQ(oracle_count(3, 2, true), 6u);
    for (int sites = 1; sites <= 4; ++sites) {
        EXPECT_EQ(sector_dimension(sites, 0), 1u);
        for (int m = 0; m <= 5; ++m) {
            EXPECT_EQ(sector_dimension(1, m), 1u);
            EXPECT_EQ(sector_dimension(sites, m), oracle_count(sites, m, true));
        }
    }
}

TEST(FockBasis, DimensionFormula) {
    for (int sites = 1; sites <= 6; ++sites)
        for (int cutoff = 0; cutoff <= 8; ++cutoff) {
            if (binomial(cutoff + sites, sites) > 20000) continue;
            EXPECT_EQ(enumerate_basis(sites, cutoff).dim(), binomial(cutoff + sites, sites));
        }
}

TEST(FockBasis, SectorRangesPartitionAscending) {
    TruncatedBasis basis(3, 4);
    std::size_t expect_begin = 0;
    for (int m = 0; m <= 4; ++m) {
        const auto [first, last] = basis.sector_range(m);
        EXPECT_EQ(first, expect_begin);
        EXPECT_EQ(last - first, sector_dimension(3, m));
        for (std::size_t i = first; i < last; ++i) {
            EXPECT_EQ(occupation_total(basis.state_at(i)), m);
            EXPECT_EQ(basis.sector_of(i), m);
        }
        expect_begin = last;
    }
    EXPECT_EQ(expect_begin, basis.dim());
}

TEST(FockBasis, IndexRoundTripAndErrors) {
    TruncatedBasis basis(3, 4);
    EXPECT_EQ(basis.index_of({0, 0, 0}), 0u);
    for (std::size_t i = 0; i < basis.dim(); ++i)
        EXPECT_EQ(basis.index_of(basis.state_at(i)), i);
    EXPECT_THROW(basis.index_of({5, 0, 0}), out_of_truncation_error);
    EXPECT_THROW(basis.index_of({2, 2, 1}), out_of_truncation_error);
    EXPECT_THROW(basis.index_of({0, 0}), mismatch_error);
}

TEST(FockBasis, PrefixStableAcrossCutoffs) {
    for (int sites : {2, 3, 4}) {
        TruncatedBasis small(sites, 3);
        TruncatedBasis big(sites, 5);
        ASSERT_LE(small.dim(), big.dim());
        for (std::size_t i = 0; i < small.dim(); ++i)
            EXPECT_EQ(small.state_at(i), big.state_at(i));
        for (std::size_t i = 0; i < small.dim(); ++i)
            EXPECT_EQ(big.index_of(small.state_at(i)), i);
        EXPECT_EQ(small.dim(), big.prefix_dim(3));
    }
}

TEST(FockBasis, WithinSectorLexicographic) {
    TruncatedBasis basis(2, 2);
    const auto [first, last] = basis.sector_range(2);
    ASSERT_EQ(last - first, 3u);
    EXPECT_EQ(basis.state_at(first), (OccupationState{0, 2}));
    EXPECT_EQ(basis.state_at(first + 1), (OccupationState{1, 1}));
    EXPECT_EQ(basis.state_at(first + 2), (OccupationState{2, 0}));
}

TEST(FockBasis, DimensionCap) {
    EXPECT_THROW(enumerate_basis(8, 13), dimension_error);        // C(21,8) > 20000
    EXPECT_NO_THROW(enumerate_basis(8, 13, 1u << 30));            // override
    EXPECT_THROW(enumerate_basis(2, 300, 100), dimension_error);  // explicit small cap
}
