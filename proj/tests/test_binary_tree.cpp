#include "batchgcd/binary_tree.hpp"
#include "batchgcd/dataset.hpp"
#include "batchgcd/oracle.hpp"

#include "pool_sets.hpp"
#include "test_support.hpp"

#include <doctest.h>

using namespace batchgcd;
using batchgcd::testing::naturals;

namespace {

FactorMap oracle_map(const std::vector<Natural>& moduli) {
    return expected_factor_map(pairwise_gcd_all(moduli), moduli);
}

std::vector<Natural> stored_gcds(const GcdTree& tree) {
    std::vector<Natural> out;
    for (const auto& level : tree.gcds) {
        out.insert(out.end(), level.begin(), level.end());
    }
    return out;
}

}  // namespace

TEST_CASE("gcd tree over 15, 21, 77") {
    const auto tree = build_gcd_tree(naturals({15, 21, 77}));
    REQUIRE(tree.products.size() == 2);
    CHECK(tree.products[1] == naturals({315, 77}));
    CHECK(stored_gcds(tree) == naturals({3, 7}));
    CHECK(tree.gcd_count() == 2);
    CHECK(aggregate_divisors(tree) == 21);
}

TEST_CASE("gcd tree over 6, 10, 15") {
    const auto tree = build_gcd_tree(naturals({6, 10, 15}));
    CHECK(tree.products[1] == naturals({60, 15}));
    CHECK(stored_gcds(tree) == naturals({2, 15}));
    CHECK(aggregate_divisors(tree) == 30);
}

TEST_CASE("root product is never formed") {
    const auto moduli = naturals({3, 5, 7, 11, 13, 17, 19, 23});
    const auto tree = build_gcd_tree(moduli);
    REQUIRE(tree.products.size() == 3);
    CHECK(tree.products.back() == naturals({1155, 96577}));
    CHECK(tree.gcd_count() == 7);
    for (const auto& g : stored_gcds(tree)) {
        CHECK(g == 1);
    }
    CHECK(aggregate_divisors(tree) == 1);

    const auto pair = build_gcd_tree(naturals({35, 77}));
    CHECK(pair.products.size() == 1);
    CHECK(stored_gcds(pair) == naturals({7}));
}

TEST_CASE("each stored gcd divides both children") {
    const Dataset d = generate_dataset(37, 64, 12, 2);
    const auto tree = build_gcd_tree(d.moduli.moduli);
    CHECK(tree.gcd_count() == 36);
    for (std::size_t k = 0; k < tree.gcds.size(); ++k) {
        for (std::size_t j = 0; j < tree.gcds[k].size(); ++j) {
            const auto& g = tree.gcds[k][j];
            CHECK(mpz_divisible_p(tree.products[k][2 * j].get_mpz_t(), g.get_mpz_t()));
            CHECK(mpz_divisible_p(tree.products[k][2 * j + 1].get_mpz_t(), g.get_mpz_t()));
        }
    }
}

TEST_CASE("enumeration classifies each modulus") {
    const auto moduli = naturals({15, 21, 77});
    const auto report = enumerate_factors(moduli, Natural(21));
    CHECK(report.per_modulus[0].status == FactorStatus::factored);
    CHECK(report.per_modulus[0].factors == naturals({3}));
    CHECK(report.per_modulus[1].status == FactorStatus::unresolved);
    CHECK(report.per_modulus[2].factors == naturals({7}));
    CHECK(resolve_full_modulus(1, moduli, report) == naturals({3, 7}));

    const auto none = enumerate_factors(moduli, Natural(1));
    for (const auto& e : none.per_modulus) {
        CHECK(e.status == FactorStatus::coprime);
    }

    const auto all = enumerate_factors(naturals({6, 10, 15}), Natural(30));
    for (const auto& e : all.per_modulus) {
        CHECK(e.status == FactorStatus::unresolved);
    }
    CHECK(resolve_full_modulus(0, naturals({6, 10, 15}), all).empty());
    CHECK_THROWS_AS(enumerate_factors(moduli, Natural(0)), std::invalid_argument);
}

TEST_CASE("full runs on hand-sized sets") {
    const auto a = naturals({15, 21, 77});
    const auto report = run_binary_tree_batch_gcd(a);
    CHECK(*report.aggregate_b == 21);
    CHECK(report.per_modulus[0].factors == naturals({3}));
    CHECK(report.per_modulus[1].factors == naturals({3, 7}));
    CHECK(report.per_modulus[2].factors == naturals({7}));

    const auto b = naturals({6, 10, 15});
    const auto fallback = run_binary_tree_batch_gcd(b);
    CHECK(fallback.per_modulus[0].factors == naturals({2, 3}));
    CHECK(fallback.per_modulus[1].factors == naturals({2, 5}));
    CHECK(fallback.per_modulus[2].factors == naturals({3, 5}));
    CHECK(fallback.duplicates.empty());
    CHECK(factor_map(fallback, b) == oracle_map(b));
}

TEST_CASE("all-coprime set stops with B = 1") {
    GcdCounters counters;
    const Dataset d = generate_dataset(50, 64, 0, 4);
    const auto report = run_binary_tree_batch_gcd(d.moduli.moduli, {.counters = &counters});
    CHECK(*report.aggregate_b == 1);
    CHECK(report.factored_count() == 0);
    CHECK(counters.enumeration_gcds == 0);
    CHECK(counters.tree_gcds == 49);
}

TEST_CASE("256 moduli agree with the oracle and the truth") {
    const Dataset d = generate_dataset(256, 64, 8, 31);
    const auto& moduli = d.moduli.moduli;
    const auto map = factor_map(run_binary_tree_batch_gcd(moduli), moduli);
    CHECK(map == oracle_map(moduli));
    CHECK(map == factor_map(d.truth, moduli));
    CHECK(map.size() == 8);
}

TEST_CASE("duplicate moduli are reported as unfactorable") {
    const Dataset d = generate_adversarial_dataset(AdversarialKind::duplicate_modulus, 12);
    const auto& moduli = d.moduli.moduli;
    const auto report = run_binary_tree_batch_gcd(moduli);
    REQUIRE(report.duplicates.size() == 1);
    CHECK(report.duplicates[0] == std::pair<std::size_t, std::size_t>{1, 4});
    CHECK(report.per_modulus[1].status == FactorStatus::unresolved);
    CHECK(report.per_modulus[4].status == FactorStatus::unresolved);
    CHECK(report.factored_count() == 0);
    CHECK(factor_map(report, moduli) == oracle_map(moduli));
}

TEST_CASE("double-shared modulus is split into both primes") {
    const Dataset d = generate_adversarial_dataset(AdversarialKind::double_shared, 12);
    const auto& moduli = d.moduli.moduli;
    const auto raw = enumerate_factors(moduli, aggregate_divisors(build_gcd_tree(moduli)));
    CHECK(raw.per_modulus[3].status == FactorStatus::unresolved);

    const auto report = run_binary_tree_batch_gcd(moduli);
    const auto& p = d.truth.weak_pairs[0].shared_prime;
    const auto& q = d.truth.weak_pairs[1].shared_prime;
    std::vector<Natural> both{p, q};
    std::sort(both.begin(), both.end());
    CHECK(report.per_modulus[3].factors == both);
    CHECK(factor_map(report, moduli) == factor_map(d.truth, moduli));
}

TEST_CASE("completeness and soundness of B") {
    DeterministicRng rng(99);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t m = 2 + rng.below(120);
        const std::size_t weak = 2 * rng.below(m / 2 + 1);
        const Dataset d = generate_dataset(m, 64, weak, rng.next());
        const auto& moduli = d.moduli.moduli;
        const Natural b = aggregate_divisors(build_gcd_tree(moduli));

        Natural stripped = b;
        for (const auto& hit : pairwise_gcd_all(moduli).hits) {
            CHECK(mpz_divisible_p(b.get_mpz_t(), hit.gcd.get_mpz_t()));
            while (mpz_divisible_p(stripped.get_mpz_t(), hit.gcd.get_mpz_t())) {
                stripped /= hit.gcd;
            }
        }
        CHECK(stripped == 1);
        CHECK((b == 1) == (weak == 0));
    }
}

TEST_CASE("dense shared pools agree with the oracle") {
    DeterministicRng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const auto set = batchgcd::testing::random_pool_set(rng, 4 + rng.below(20), 2 + rng.below(30), 24);
        const auto expected = oracle_map(set.moduli);
        for (const bool skip : {false, true}) {
            const auto report = run_binary_tree_batch_gcd(set.moduli, {.skip_leaf_divisors = skip});
            const auto diff = diff_factor_maps(expected, factor_map(report, set.moduli), "oracle", "binary");
            CHECK_MESSAGE(diff.empty(), (diff.empty() ? "" : diff.front()));
            for (const auto& entry : report.per_modulus) {
                for (std::size_t i = 0; i < entry.factors.size(); ++i) {
                    CHECK(entry.factors[i] > 1);
                }
            }
        }
    }
}

TEST_CASE("gcd count is exactly 2M - 1") {
    for (const std::size_t m : {2, 3, 8, 9, 17, 100, 1000}) {
        const Dataset d = generate_dataset(m, 64, 2, m);
        GcdCounters counters;
        run_binary_tree_batch_gcd(d.moduli.moduli, {.counters = &counters});
        CHECK(counters.tree_gcds == m - 1);
        CHECK(counters.enumeration_gcds == m);
        CHECK(counters.audited() == 2 * m - 1);
    }
}

TEST_CASE("leaf-divisor flag leaves the result unchanged") {
    DeterministicRng rng(3);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t m = 2 + rng.below(64);
        const Dataset d = generate_dataset(m, 64, 2 * rng.below(m / 2 + 1), rng.next());
        const auto& moduli = d.moduli.moduli;
        CHECK(factor_map(run_binary_tree_batch_gcd(moduli, {.skip_leaf_divisors = true}), moduli) ==
              factor_map(run_binary_tree_batch_gcd(moduli), moduli));
    }
    for (const auto kind : {AdversarialKind::double_shared, AdversarialKind::duplicate_modulus}) {
        const auto d = generate_adversarial_dataset(kind, 5);
        const auto& moduli = d.moduli.moduli;
        const auto report = run_binary_tree_batch_gcd(moduli, {.skip_leaf_divisors = true});
        CHECK(factor_map(report, moduli) == factor_map(d.truth, moduli));
    }
    // A pair that meets only at a leaf keeps B at 1 with the flag on.
    const auto leaf_pair = naturals({15, 21, 143, 187});
    const auto report = run_binary_tree_batch_gcd(leaf_pair, {.skip_leaf_divisors = true});
    CHECK(factor_map(report, leaf_pair) == oracle_map(leaf_pair));
}

TEST_CASE("threaded run matches sequential run") {
    const Dataset d = generate_dataset(301, 128, 40, 13);
    const auto& moduli = d.moduli.moduli;
    CHECK(build_gcd_tree(moduli, 4).gcds == build_gcd_tree(moduli, 1).gcds);
    const auto serial = run_binary_tree_batch_gcd(moduli);
    const auto threaded = run_binary_tree_batch_gcd(moduli, {.threads = 4});
    CHECK(*serial.aggregate_b == *threaded.aggregate_b);
    CHECK(factor_map(serial, moduli) == factor_map(threaded, moduli));
}

TEST_CASE("needs at least two moduli") {
    CHECK_THROWS_AS(build_gcd_tree(naturals({15})), std::invalid_argument);
    CHECK_THROWS_AS(run_binary_tree_batch_gcd({}), std::invalid_argument);
}
