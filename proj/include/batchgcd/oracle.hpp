#pragma once

#include "batchgcd/bigint.hpp"
#include "batchgcd/factor_report.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace batchgcd {

struct PairHit {
    std::size_t index_i = 0;
    std::size_t index_j = 0;
    Natural gcd;

    bool operator==(const PairHit&) const = default;
};

/// Every pair (i < j) with gcd > 1, sorted by (i, j).
struct PairwiseResult {
    std::vector<PairHit> hits;
};

/// Moduli counts above this are refused by callers unless forced.
inline constexpr std::size_t kOracleDefaultLimit = 5000;

/// All M(M-1)/2 GCDs by a plain double loop.
PairwiseResult pairwise_gcd_all(std::span<const Natural> moduli);

/// Per index, the prime factors shared with some other modulus: the GCDs
/// touching that index, with composites split by cross-divisibility. A
/// modulus whose only GCD is itself is marked unresolvable.
FactorMap expected_factor_map(const PairwiseResult& result, std::span<const Natural> moduli);

/// Pairs whose GCD equals both moduli.
std::vector<std::pair<std::size_t, std::size_t>> duplicate_pairs(const PairwiseResult& result,
                                                                 std::span<const Natural> moduli);

}  // namespace batchgcd
