#include "batchgcd/binary_tree.hpp"

#include "batchgcd/parallel.hpp"
#include "batchgcd/product_tree.hpp"

#include <stdexcept>

namespace batchgcd {

namespace {

std::vector<Natural> enumeration_divisors(std::span<const Natural> moduli, const Natural& aggregate_b,
                                          unsigned threads) {
    std::vector<Natural> divisors(moduli.size());
    parallel_for(moduli.size(), threads, [&](std::size_t i) {
        mpz_gcd(divisors[i].get_mpz_t(), moduli[i].get_mpz_t(), aggregate_b.get_mpz_t());
    });
    return divisors;
}

}  // namespace

std::size_t GcdTree::gcd_count() const {
    std::size_t total = 0;
    for (const auto& level : gcds) {
        total += level.size();
    }
    return total;
}

GcdTree build_gcd_tree(std::span<const Natural> moduli, unsigned threads) {
    if (moduli.size() < 2) {
        throw std::invalid_argument("binary-tree batch GCD needs at least two moduli");
    }
    GcdTree tree;
    tree.products.emplace_back(moduli.begin(), moduli.end());
    for (;;) {
        const auto& level = tree.products.back();
        std::vector<Natural> level_gcds(level.size() / 2);
        parallel_for(level_gcds.size(), threads, [&](std::size_t j) {
            mpz_gcd(level_gcds[j].get_mpz_t(), level[2 * j].get_mpz_t(), level[2 * j + 1].get_mpz_t());
        });
        tree.gcds.push_back(std::move(level_gcds));
        if (level.size() == 2) {
            break;  // root pairing: its product is never needed
        }
        tree.products.push_back(pairwise_products(level, threads));
    }
    return tree;
}

Natural aggregate_divisors(const GcdTree& tree, bool skip_leaf_divisors, unsigned threads) {
    std::vector<Natural> nontrivial;
    for (std::size_t k = skip_leaf_divisors ? 1 : 0; k < tree.gcds.size(); ++k) {
        for (const auto& g : tree.gcds[k]) {
            if (g > 1) {
                nontrivial.push_back(g);
            }
        }
    }
    return product_of(nontrivial, threads);
}

FactorReport enumerate_factors(std::span<const Natural> moduli, const Natural& aggregate_b, unsigned threads) {
    if (aggregate_b < 1) {
        throw std::invalid_argument("aggregate divisor product must be positive");
    }
    FactorReport report = classify_divisors(moduli, enumeration_divisors(moduli, aggregate_b, threads));
    report.aggregate_b = aggregate_b;
    return report;
}

FactorReport run_binary_tree_batch_gcd(std::span<const Natural> moduli, const BinaryTreeOptions& options) {
    const GcdTree tree = build_gcd_tree(moduli, options.threads);
    if (options.counters != nullptr) {
        options.counters->tree_gcds += tree.gcd_count();
    }

    Natural aggregate_b = aggregate_divisors(tree, options.skip_leaf_divisors, options.threads);

    bool leaf_hits = false;
    if (options.skip_leaf_divisors) {
        for (const auto& g : tree.gcds.front()) {
            leaf_hits = leaf_hits || g > 1;
        }
    }

    if (aggregate_b == 1 && !leaf_hits) {
        FactorReport report;
        report.aggregate_b = std::move(aggregate_b);
        report.per_modulus.resize(moduli.size());
        return report;
    }

    std::vector<Natural> divisors = enumeration_divisors(moduli, aggregate_b, options.threads);
    if (options.counters != nullptr) {
        options.counters->enumeration_gcds += moduli.size();
    }

    if (leaf_hits) {
        // A leaf GCD divides both moduli of its pair; merge it into their
        // divisors as if it had been multiplied into B.
        const auto& leaf_gcds = tree.gcds.front();
        for (std::size_t j = 0; j < leaf_gcds.size(); ++j) {
            if (leaf_gcds[j] == 1) {
                continue;
            }
            for (const std::size_t i : {2 * j, 2 * j + 1}) {
                mpz_lcm(divisors[i].get_mpz_t(), divisors[i].get_mpz_t(), leaf_gcds[j].get_mpz_t());
            }
        }
    }

    FactorReport report = classify_divisors(moduli, divisors);
    report.aggregate_b = std::move(aggregate_b);
    resolve_unresolved(report, moduli, options.counters);
    return report;
}

}  // namespace batchgcd
