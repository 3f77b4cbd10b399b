#pragma once

#include "batchgcd/bigint.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace batchgcd {

/// Binary product tree. levels[0] holds the leaves in input order; each
/// higher level holds pairwise products of the level below, and a trailing
/// odd element is carried up unchanged. The last level is the single root.
struct ProductTree {
    std::vector<std::vector<Natural>> levels;

    const Natural& root() const { return levels.back().front(); }
    std::size_t leaf_count() const { return levels.front().size(); }
};

/// Next level up: products of adjacent pairs, odd tail carried.
std::vector<Natural> pairwise_products(std::span<const Natural> level, unsigned threads = 1);

/// Throws std::invalid_argument on an empty input or a zero value.
ProductTree build_product_tree(std::span<const Natural> values, unsigned threads = 1);

/// Product of all values, formed with the same pairwise scheme. Empty -> 1.
Natural product_of(std::span<const Natural> values, unsigned threads = 1);

}  // namespace batchgcd
