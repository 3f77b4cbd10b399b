#include "batchgcd/product_tree.hpp"

#include "batchgcd/parallel.hpp"

#include <stdexcept>

namespace batchgcd {

std::vector<Natural> pairwise_products(std::span<const Natural> level, unsigned threads) {
    std::vector<Natural> next((level.size() + 1) / 2);
    parallel_for(next.size(), threads, [&](std::size_t j) {
        if (2 * j + 1 < level.size()) {
            mpz_mul(next[j].get_mpz_t(), level[2 * j].get_mpz_t(), level[2 * j + 1].get_mpz_t());
        } else {
            next[j] = level[2 * j];
        }
    });
    return next;
}

ProductTree build_product_tree(std::span<const Natural> values, unsigned threads) {
    if (values.empty()) {
        throw std::invalid_argument("product tree needs at least one value");
    }
    for (const auto& v : values) {
        if (v < 1) {
            throw std::invalid_argument("product tree values must be positive");
        }
    }
    ProductTree tree;
    tree.levels.emplace_back(values.begin(), values.end());
    while (tree.levels.back().size() > 1) {
        tree.levels.push_back(pairwise_products(tree.levels.back(), threads));
    }
    return tree;
}

Natural product_of(std::span<const Natural> values, unsigned threads) {
    if (values.empty()) {
        return 1;
    }
    if (values.size() == 1) {
        return values.front();
    }
    std::vector<Natural> level = pairwise_products(values, threads);
    while (level.size() > 1) {
        level = pairwise_products(level, threads);
    }
    return std::move(level.front());
}

}  // namespace batchgcd
