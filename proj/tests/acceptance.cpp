// Acceptance suite: one PASS/FAIL line per criterion. Exits nonzero when any
// selected criterion fails.

#include "batchgcd/bench.hpp"
#include "batchgcd/binary_tree.hpp"
#include "batchgcd/dataset.hpp"
#include "batchgcd/oracle.hpp"
#include "batchgcd/product_tree.hpp"
#include "batchgcd/remainder_tree.hpp"
#include "batchgcd/run_result.hpp"

#include "test_support.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

using namespace batchgcd;

namespace {

struct Verdict {
    bool pass = true;
    std::vector<std::string> notes;

    void require(bool condition, const std::string& failure) {
        if (!condition) {
            pass = false;
            notes.push_back(failure);
        }
    }
    void note(const std::string& text) { notes.push_back(text); }
};

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (const auto& p : parts) {
        out += (out.empty() ? "" : "; ") + p;
    }
    return out;
}

std::string fixed(double value, int digits) {
    std::ostringstream out;
    out.precision(digits);
    out << std::fixed << value;
    return out.str();
}

Verdict oracle_equivalence() {
    Verdict v;
    std::size_t datasets = 0;
    for (const std::size_t m : {16, 64, 256, 1024}) {
        for (const std::size_t bits : {64, 128}) {
            for (const std::size_t weak : {0, 2, 8, 32}) {
                if (weak > m) {
                    continue;
                }
                for (const std::uint64_t seed : {1, 2}) {
                    const Dataset d = generate_dataset(m, bits, weak, seed * 1000 + m + bits + weak);
                    const auto& moduli = d.moduli.moduli;
                    const FactorMap expected = expected_factor_map(pairwise_gcd_all(moduli), moduli);
                    const std::string label = "M=" + std::to_string(m) + " bits=" + std::to_string(bits) +
                                              " weak=" + std::to_string(weak) + " seed=" + std::to_string(seed);
                    v.require(factor_map(run_binary_tree_batch_gcd(moduli), moduli) == expected,
                              "binary tree differs at " + label);
                    v.require(factor_map(run_remainder_tree_batch_gcd(moduli), moduli) == expected,
                              "remainder tree differs at " + label);
                    ++datasets;
                }
            }
        }
    }
    v.require(datasets >= 50, "only " + std::to_string(datasets) + " datasets");
    v.note(std::to_string(datasets) + " datasets");
    return v;
}

Verdict planted_recovery() {
    Verdict v;
    for (const std::size_t weak : {2, 100, 1000}) {
        const Dataset d = generate_dataset(5000, 1024, weak, 20 + weak);
        const auto& moduli = d.moduli.moduli;
        std::map<std::size_t, Natural> planted;
        for (const auto& pair : d.truth.weak_pairs) {
            planted[pair.index_a] = pair.shared_prime;
            planted[pair.index_b] = pair.shared_prime;
        }
        for (const auto algorithm : {Algorithm::binary_tree, Algorithm::remainder_tree}) {
            const FactorReport report = run_algorithm(algorithm, moduli);
            const std::string label = std::string(to_string(algorithm)) + " weak=" + std::to_string(weak);
            std::size_t wrong = 0;
            for (std::size_t i = 0; i < moduli.size(); ++i) {
                const auto& entry = report.per_modulus[i];
                const auto it = planted.find(i);
                if (it == planted.end()) {
                    wrong += entry.status != FactorStatus::coprime;
                } else {
                    wrong += entry.status != FactorStatus::factored || entry.factors != std::vector{it->second};
                }
            }
            v.require(wrong == 0, label + ": " + std::to_string(wrong) + " moduli wrong");
            v.require(report.factored_count() == weak, label + ": factored count " +
                                                           std::to_string(report.factored_count()));
        }
    }
    v.note("M=5000 bits=1024 weak in {2,100,1000}, both tree algorithms");
    return v;
}

Verdict edge_cases() {
    Verdict v;
    {
        const Dataset d = generate_adversarial_dataset(AdversarialKind::double_shared, 11);
        const auto& moduli = d.moduli.moduli;
        const auto raw = enumerate_factors(moduli, aggregate_divisors(build_gcd_tree(moduli)));
        v.require(raw.per_modulus[3].status == FactorStatus::unresolved, "double_shared did not hit the full modulus");
        std::vector<Natural> both{d.truth.weak_pairs[0].shared_prime, d.truth.weak_pairs[1].shared_prime};
        std::sort(both.begin(), both.end());
        for (const auto algorithm : {Algorithm::binary_tree, Algorithm::remainder_tree}) {
            const auto report = run_algorithm(algorithm, moduli);
            v.require(report.per_modulus[3].factors == both,
                      std::string(to_string(algorithm)) + " did not split the double-shared modulus");
            v.require(factor_map(report, moduli) == factor_map(d.truth, moduli),
                      std::string(to_string(algorithm)) + " double_shared differs from truth");
        }
    }
    {
        const Dataset d = generate_adversarial_dataset(AdversarialKind::duplicate_modulus, 11);
        const auto& moduli = d.moduli.moduli;
        const std::vector<std::pair<std::size_t, std::size_t>> pair{{1, 4}};
        const auto check = [&](const RunResult& result) {
            bool ok = result.duplicates == pair && result.entries.size() == 2;
            for (const auto& e : result.entries) {
                ok = ok && (e.index == 1 || e.index == 4) && e.status == EntryStatus::unresolved_duplicate;
            }
            v.require(ok, result.algorithm + " did not report exactly the duplicate pair");
        };
        for (const auto algorithm : {Algorithm::binary_tree, Algorithm::remainder_tree}) {
            check(make_run_result(std::string(to_string(algorithm)), run_algorithm(algorithm, moduli), false, false));
        }
        const auto hits = pairwise_gcd_all(moduli);
        check(make_run_result("naive", moduli.size(), expected_factor_map(hits, moduli), duplicate_pairs(hits, moduli),
                              false));
    }
    v.note("double_shared split into both primes, duplicate pair (1, 4) reported by all algorithms");
    return v;
}

Verdict gcd_count_audit() {
    Verdict v;
    for (const std::size_t m : {8, 9, 1000}) {
        const Dataset d = generate_dataset(m, 64, 2, m);
        GcdCounters counters;
        run_binary_tree_batch_gcd(d.moduli.moduli, {.counters = &counters});
        v.require(counters.audited() == 2 * m - 1, "M=" + std::to_string(m) + ": " +
                                                       std::to_string(counters.audited()) + " GCDs");
        v.note("M=" + std::to_string(m) + ": " + std::to_string(counters.tree_gcds) + " + " +
               std::to_string(counters.enumeration_gcds));
        if (m == 9) {
            std::vector<std::size_t> sizes;
            for (const auto& level : build_gcd_tree(d.moduli.moduli).gcds) {
                sizes.push_back(level.size());
            }
            v.require(sizes == std::vector<std::size_t>{4, 2, 1, 1}, "M=9 level GCD counts are not 4,2,1,1");
        }
    }
    return v;
}

struct Sweep {
    TimingSeries binary;
    TimingSeries remainder;
};

const Sweep& performance_sweep(const std::string& csv_path) {
    static std::optional<Sweep> sweep;
    if (!sweep) {
        const SweepConfig config{
            .sizes = {5000, 10000, 20000, 40000}, .bit_size = 1024, .num_weak = 100, .seed = 2024, .timing = {}};
        auto [binary, remainder] = run_sweep(config, [](const std::string& line) { std::cerr << line << '\n'; });
        sweep = Sweep{std::move(binary), std::move(remainder)};
        if (!csv_path.empty()) {
            std::ofstream out(csv_path);
            const TimingSeries both[] = {sweep->binary, sweep->remainder};
            write_timing_csv(out, both);
        }
    }
    return *sweep;
}

Verdict performance_dominance(const std::string& csv_path) {
    Verdict v;
    const Sweep& sweep = performance_sweep(csv_path);
    const SpeedupSeries speedup = speedup_series(sweep.binary, sweep.remainder);
    for (std::size_t k = 0; k < speedup.ratios.size(); ++k) {
        const auto& [m, ratio] = speedup.ratios[k];
        v.require(sweep.binary.samples[k].cpu_seconds < sweep.remainder.samples[k].cpu_seconds,
                  "binary tree not faster at M=" + std::to_string(m));
        v.note("M=" + std::to_string(m) + " binary " + fixed(sweep.binary.samples[k].cpu_seconds, 3) +
               "s remainder " + fixed(sweep.remainder.samples[k].cpu_seconds, 3) + "s ratio " + fixed(ratio, 3));
    }
    v.require(speedup.mean_ratio >= 1.5, "mean ratio " + fixed(speedup.mean_ratio, 3) + " below 1.5");
    v.note("mean ratio " + fixed(speedup.mean_ratio, 3));
    return v;
}

Verdict scaling_direction(const std::string& csv_path) {
    Verdict v;
    const Sweep& sweep = performance_sweep(csv_path);
    const ScalingFit binary = fit_series(sweep.binary);
    const ScalingFit remainder = fit_series(sweep.remainder);
    v.require(binary.a < remainder.a, "a_binary is not below a_remainder");
    v.note("a_binary " + fixed(binary.a, 5) + " a_remainder " + fixed(remainder.a, 5));
    return v;
}

Verdict fit_correctness() {
    Verdict v;
    std::vector<std::pair<double, double>> samples;
    for (const double x : {1e3, 2e3, 5e3, 1e4, 2e4, 5e4, 1e5}) {
        samples.emplace_back(x, std::pow(x, 1.5) + 2.0 * x + 3.0);
    }
    const ScalingFit fit = fit_scaling(samples);
    const double err_a = std::abs(fit.a - 1.5) / 1.5;
    const double err_b = std::abs(fit.b - 2.0) / 2.0;
    const double err_c = std::abs(fit.c - 3.0) / 3.0;
    v.require(err_a <= 1e-6 && err_b <= 1e-6 && err_c <= 1e-6, "coefficients outside 1e-6");
    std::ostringstream errors;
    errors << "relative errors a " << err_a << " b " << err_b << " c " << err_c;
    v.note(errors.str());
    return v;
}

Verdict product_tree_property() {
    Verdict v;
    DeterministicRng rng(8);
    std::size_t mismatches = 0;
    std::size_t singletons = 0;
    std::size_t odd = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        const std::size_t length = trial % 10 == 0 ? 1 : 1 + rng.below(100);
        std::vector<Natural> values;
        for (std::size_t k = 0; k < length; ++k) {
            values.push_back(rng.bits(1 + rng.below(256)) + 1);
        }
        singletons += length == 1;
        odd += length % 2;
        mismatches += build_product_tree(values).root() != batchgcd::testing::left_fold_product(values);
    }
    v.require(mismatches == 0, std::to_string(mismatches) + " roots differ from the fold");
    v.note("10000 trees, " + std::to_string(odd) + " odd lengths, " + std::to_string(singletons) + " singletons");
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance checks for the batch GCD toolkit", "batchgcd_acceptance"};
    std::vector<int> selected{1, 2, 3, 4, 5, 6, 7, 8};
    std::string csv_path;
    app.add_option("--criteria", selected, "Comma-separated criterion numbers")
        ->delimiter(',')
        ->check(CLI::Range(1, 8));
    app.add_option("--timing-csv", csv_path, "Where to write the performance sweep timings");
    CLI11_PARSE(app, argc, argv);

    const std::map<int, std::pair<std::string, std::function<Verdict()>>> criteria{
        {1, {"oracle equivalence", oracle_equivalence}},
        {2, {"planted recovery", planted_recovery}},
        {3, {"edge cases", edge_cases}},
        {4, {"gcd count audit", gcd_count_audit}},
        {5, {"performance dominance", [&] { return performance_dominance(csv_path); }}},
        {6, {"scaling fit direction", [&] { return scaling_direction(csv_path); }}},
        {7, {"fit correctness", fit_correctness}},
        {8, {"product tree property", product_tree_property}},
    };

    bool all_pass = true;
    for (const int id : std::set<int>(selected.begin(), selected.end())) {
        const auto& [name, check] = criteria.at(id);
        const double start = process_cpu_seconds();
        Verdict verdict;
        try {
            verdict = check();
        } catch (const std::exception& e) {
            verdict.pass = false;
            verdict.note(std::string("exception: ") + e.what());
        }
        all_pass = all_pass && verdict.pass;
        std::cout << (verdict.pass ? "PASS" : "FAIL") << " criterion " << id << " (" << name << ", "
                  << fixed(process_cpu_seconds() - start, 1) << "s cpu): " << join(verdict.notes) << std::endl;
    }
    return all_pass ? 0 : 1;
}
