#pragma once

#include "batchgcd/bigint.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace batchgcd {

/// Random-base Miller-Rabin rounds; each round passes a composite with
/// probability at most 1/4, so 40 rounds bound the error by 2^-80 for any
/// input.
inline constexpr int kMillerRabinRounds = 40;

/// Rounds that keep the error below 2^-80 for a randomly chosen `bits`-bit
/// candidate (the Damgard-Landrock-Pomerance average-case bound, as
/// tabulated in HAC 4.4). Falls back to kMillerRabinRounds below 55 bits.
int miller_rabin_rounds_for_bits(std::size_t bits);

/// Smallest prime size the generators accept.
inline constexpr std::size_t kMinPrimeBits = 16;

/// Miller-Rabin with bases drawn from `rng`. Exact for n < 4.
bool is_probable_prime(const Natural& n, DeterministicRng& rng, int rounds = kMillerRabinRounds);

/// Stream of probable primes of exactly `bits` bits (top bit set).
///
/// Each prime is found by drawing a random odd start and stepping by two
/// with an incremental small-prime sieve; survivors go to Miller-Rabin with
/// miller_rabin_rounds_for_bits(bits) random bases. The
/// stream does not remember previous outputs, so it may repeat.
class PrimeStream {
public:
    PrimeStream(std::size_t bits, std::uint64_t seed);

    Natural next();

    std::size_t bits() const { return bits_; }

private:
    std::size_t bits_;
    DeterministicRng rng_;
};

/// `count` pairwise-distinct probable primes of exactly `bits` bits, in the
/// order drawn from the seeded stream. Throws std::invalid_argument for
/// bits < 16, and std::runtime_error if the prime space is too small to
/// supply `count` distinct values.
std::vector<Natural> generate_primes(std::size_t count, std::size_t bits, std::uint64_t seed);

}  // namespace batchgcd
