#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace batchgcd {

/// Arbitrary-precision natural number. GMP supplies the subquadratic
/// multiplication, division and GCD every algorithm here relies on.
using Natural = mpz_class;

/// Lowercase hex without prefix.
std::string to_hex(const Natural& value);

/// Parses lowercase or uppercase hex digits. Throws std::invalid_argument on
/// an empty string or any non-hex character.
Natural from_hex(std::string_view hex);

std::size_t bit_length(const Natural& value);

/// Reproducible pseudo-random stream. The engine and every derived draw are
/// fully specified, so a seed yields the same values on every platform.
class DeterministicRng {
public:
    explicit DeterministicRng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, bound). bound must be nonzero.
    std::uint64_t below(std::uint64_t bound);

    /// Uniform in [0, 2^bits).
    Natural bits(std::size_t count);

    /// Uniform in [0, bound) for an arbitrary positive bound.
    Natural below(const Natural& bound);

private:
    std::mt19937_64 engine_;
};

/// Fisher-Yates with the stream's own bounded draws; std::shuffle is not
/// specified tightly enough to be reproducible across standard libraries.
template <class T>
void deterministic_shuffle(std::vector<T>& items, DeterministicRng& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.below(i));
        std::swap(items[i - 1], items[j]);
    }
}

}  // namespace batchgcd
