#pragma once

#include "batchgcd/bigint.hpp"
#include "batchgcd/dataset.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace batchgcd {

enum class FactorStatus {
    coprime,
    factored,
    /// gcd with the divisor product was the whole modulus and no split was
    /// found. Duplicated moduli end up here and are listed in `duplicates`.
    unresolved,
};

struct ModulusEntry {
    FactorStatus status = FactorStatus::coprime;
    std::vector<Natural> factors;  // ascending; nonempty iff factored
};

struct FactorReport {
    /// Product of the non-trivial GCDs collected by the binary-tree
    /// algorithm. The remainder-tree algorithm never forms it.
    std::optional<Natural> aggregate_b;
    /// Indexed by modulus position.
    std::vector<ModulusEntry> per_modulus;
    /// Pairs (i < j) of equal moduli whose primes appear nowhere else.
    std::vector<std::pair<std::size_t, std::size_t>> duplicates;

    std::size_t factored_count() const;
};

/// Instrumentation for GCD operation counts. tree_gcds and
/// enumeration_gcds are the binary-tree steps 1 and 3.
struct GcdCounters {
    std::uint64_t tree_gcds = 0;
    std::uint64_t enumeration_gcds = 0;
    std::uint64_t resolution_gcds = 0;

    std::uint64_t audited() const { return tree_gcds + enumeration_gcds; }
};

/// Turns d_i = (shared part of N_i) into entries: 1 -> coprime,
/// 1 < d_i < N_i -> factored {d_i}, d_i = N_i -> unresolved.
FactorReport classify_divisors(std::span<const Natural> moduli, std::span<const Natural> divisors);

/// Divisors of moduli[index] among factors already recovered from other
/// moduli, tested by divisibility. Empty when none divides.
std::vector<Natural> resolve_full_modulus(std::size_t index, std::span<const Natural> moduli,
                                          const FactorReport& report);

/// Splits every unresolved entry. First each is tested against the factors
/// recovered from other moduli; whatever remains is compared pairwise by
/// GCD among itself, which also detects duplicated moduli. Found divisors
/// are refined into pairwise-coprime factors of the modulus.
void resolve_unresolved(FactorReport& report, std::span<const Natural> moduli,
                        GcdCounters* counters = nullptr);

/// Refines `modulus` against `divisors` into pairwise-coprime parts whose
/// product is the modulus; sorted ascending.
std::vector<Natural> coprime_split(const Natural& modulus, std::span<const Natural> divisors);

/// Shared factors of one modulus, in the normalized form used for comparing
/// algorithms, the oracle and the planted ground truth.
struct SharedFactors {
    std::vector<Natural> factors;  // ascending, distinct
    bool unresolvable = false;     // factors == {N_i}: a GCD cannot split it

    bool operator==(const SharedFactors&) const = default;
};

/// Only indices with shared factors appear.
using FactorMap = std::map<std::size_t, SharedFactors>;

FactorMap factor_map(const FactorReport& report, std::span<const Natural> moduli);

/// Expected map for planted truth: each pair adds its prime to both
/// indices; a recorded value equal to both moduli marks a duplicate.
FactorMap factor_map(const PlantedGroundTruth& truth, std::span<const Natural> moduli);

/// One human-readable line per index where the maps differ.
std::vector<std::string> diff_factor_maps(const FactorMap& expected, const FactorMap& actual,
                                          const std::string& expected_label,
                                          const std::string& actual_label);

std::string describe(const SharedFactors& factors);

}  // namespace batchgcd
