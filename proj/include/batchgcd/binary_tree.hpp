#pragma once

#include "batchgcd/bigint.hpp"
#include "batchgcd/factor_report.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace batchgcd {

/// Product tree where every pairing also records the GCD of the two
/// children it joins.
///
/// products[k] is level k (products[0] = the moduli). gcds[k][j] is
/// gcd(products[k][2j], products[k][2j+1]); a carried odd tail has no GCD at
/// the level it skips. The final pairing's GCD is stored but the product of
/// its two children is never formed, so products.back() has two elements
/// (or the tree has a single level when M = 2). There are exactly M - 1
/// stored GCDs.
struct GcdTree {
    std::vector<std::vector<Natural>> products;
    std::vector<std::vector<Natural>> gcds;

    std::size_t gcd_count() const;
};

struct BinaryTreeOptions {
    /// Keep non-trivial leaf-level GCDs out of B. Such a GCD is already a
    /// prime or a whole modulus, so it is credited directly to the two
    /// moduli of its pair instead. Off by default.
    bool skip_leaf_divisors = false;
    unsigned threads = 1;
    GcdCounters* counters = nullptr;
};

/// Step 1. Throws std::invalid_argument for fewer than two moduli.
GcdTree build_gcd_tree(std::span<const Natural> moduli, unsigned threads = 1);

/// Step 2: B = product of the stored GCDs greater than one.
Natural aggregate_divisors(const GcdTree& tree, bool skip_leaf_divisors = false, unsigned threads = 1);

/// Step 3: d_i = gcd(N_i, B), classified per modulus. Unresolved entries
/// are left for resolve_unresolved.
FactorReport enumerate_factors(std::span<const Natural> moduli, const Natural& aggregate_b,
                               unsigned threads = 1);

/// All three steps plus resolution of full-modulus hits. Stops after step 2
/// when B = 1.
FactorReport run_binary_tree_batch_gcd(std::span<const Natural> moduli, const BinaryTreeOptions& options = {});

}  // namespace batchgcd
