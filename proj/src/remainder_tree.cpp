#include "batchgcd/remainder_tree.hpp"

#include "batchgcd/parallel.hpp"

#include <stdexcept>

namespace batchgcd {

namespace {

std::vector<Natural> descend(const std::vector<Natural>& parent_remainders, const std::vector<Natural>& node_products,
                             unsigned threads) {
    std::vector<Natural> out(node_products.size());
    parallel_for(out.size(), threads, [&](std::size_t j) {
        Natural square;
        mpz_mul(square.get_mpz_t(), node_products[j].get_mpz_t(), node_products[j].get_mpz_t());
        mpz_mod(out[j].get_mpz_t(), parent_remainders[j / 2].get_mpz_t(), square.get_mpz_t());
    });
    return out;
}

}  // namespace

RemainderTree build_remainder_tree(const ProductTree& products, unsigned threads) {
    const auto& levels = products.levels;
    RemainderTree tree;
    tree.levels.resize(levels.size());
    tree.levels.back() = levels.back();
    for (std::size_t k = levels.size() - 1; k-- > 0;) {
        tree.levels[k] = descend(tree.levels[k + 1], levels[k], threads);
    }
    return tree;
}

FactorReport run_remainder_tree_batch_gcd(std::span<const Natural> moduli, const RemainderTreeOptions& options) {
    if (moduli.size() < 2) {
        throw std::invalid_argument("remainder-tree batch GCD needs at least two moduli");
    }
    ProductTree products = build_product_tree(moduli, options.threads);

    // Only the current level of remainders is kept on the way down.
    std::vector<Natural> remainders = products.levels.back();
    for (std::size_t k = products.levels.size() - 1; k-- > 0;) {
        remainders = descend(remainders, products.levels[k], options.threads);
        if (k > 0) {
            products.levels[k + 1].clear();
            products.levels[k + 1].shrink_to_fit();
        }
    }

    std::vector<Natural> divisors(moduli.size());
    parallel_for(moduli.size(), options.threads, [&](std::size_t i) {
        Natural quotient;
        mpz_divexact(quotient.get_mpz_t(), remainders[i].get_mpz_t(), moduli[i].get_mpz_t());
        mpz_gcd(divisors[i].get_mpz_t(), moduli[i].get_mpz_t(), quotient.get_mpz_t());
    });

    FactorReport report = classify_divisors(moduli, divisors);
    resolve_unresolved(report, moduli);
    return report;
}

}  // namespace batchgcd
