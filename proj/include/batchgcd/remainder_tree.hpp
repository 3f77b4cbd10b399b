#pragma once

#include "batchgcd/bigint.hpp"
#include "batchgcd/factor_report.hpp"
#include "batchgcd/product_tree.hpp"

#include <span>
#include <vector>

namespace batchgcd {

/// Mirrors a ProductTree's shape. The root holds the full product P and each
/// node holds its parent's value reduced modulo the square of the node's
/// product, so leaf i holds P mod N_i^2.
struct RemainderTree {
    std::vector<std::vector<Natural>> levels;
};

RemainderTree build_remainder_tree(const ProductTree& products, unsigned threads = 1);

struct RemainderTreeOptions {
    unsigned threads = 1;
};

/// Product tree, remainder descent, then per leaf
/// f_i = gcd(N_i, (P mod N_i^2) / N_i). Full-modulus hits go through the
/// same resolution as the binary-tree algorithm. Throws
/// std::invalid_argument for fewer than two moduli.
FactorReport run_remainder_tree_batch_gcd(std::span<const Natural> moduli,
                                          const RemainderTreeOptions& options = {});

}  // namespace batchgcd
