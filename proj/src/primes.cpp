#include "batchgcd/primes.hpp"

#include <set>
#include <stdexcept>
#include <string>

namespace batchgcd {

namespace {

constexpr unsigned kSieveLimit = 1U << 14;

// Odd primes below kSieveLimit.
const std::vector<unsigned>& sieve_primes() {
    static const std::vector<unsigned> primes = [] {
        std::vector<bool> composite(kSieveLimit);
        std::vector<unsigned> out;
        for (unsigned i = 3; i < kSieveLimit; i += 2) {
            if (composite[i]) {
                continue;
            }
            out.push_back(i);
            for (unsigned j = i * i; j < kSieveLimit; j += 2 * i) {
                composite[j] = true;
            }
        }
        return out;
    }();
    return primes;
}

// Consecutive identical draws tolerated before the prime space is declared
// exhausted.
constexpr std::size_t kMaxDuplicateRun = 10000;

}  // namespace

namespace {

struct MillerRabinState {
    explicit MillerRabinState(const Natural& n) : n_minus_1(n - 1) {
        shift = static_cast<unsigned long>(mpz_scan1(n_minus_1.get_mpz_t(), 0));
        mpz_fdiv_q_2exp(odd_part.get_mpz_t(), n_minus_1.get_mpz_t(), shift);
    }

    Natural n_minus_1;
    Natural odd_part;
    unsigned long shift = 0;
};

// One round for an odd n > 3; true when `base` witnesses compositeness.
bool is_witness(const Natural& n, const MillerRabinState& state, const Natural& base, Natural& x) {
    mpz_powm(x.get_mpz_t(), base.get_mpz_t(), state.odd_part.get_mpz_t(), n.get_mpz_t());
    if (x == 1 || x == state.n_minus_1) {
        return false;
    }
    for (unsigned long r = 1; r < state.shift; ++r) {
        mpz_powm_ui(x.get_mpz_t(), x.get_mpz_t(), 2, n.get_mpz_t());
        if (x == state.n_minus_1) {
            return false;
        }
        if (x == 1) {
            return true;
        }
    }
    return true;
}

bool random_rounds_pass(const Natural& n, const MillerRabinState& state, DeterministicRng& rng, int rounds) {
    const Natural base_span = n - 3;  // bases in [2, n - 2]
    Natural x;
    for (int round = 0; round < rounds; ++round) {
        const Natural base = base_span > 0 ? rng.below(base_span) + 2 : Natural(2);
        if (is_witness(n, state, base, x)) {
            return false;
        }
    }
    return true;
}

// Odd offsets examined per sieve window.
constexpr std::size_t kSieveWindow = 4096;

}  // namespace

int miller_rabin_rounds_for_bits(std::size_t bits) {
    if (bits >= 3747) return 3;
    if (bits >= 1345) return 4;
    if (bits >= 476) return 5;
    if (bits >= 400) return 6;
    if (bits >= 347) return 7;
    if (bits >= 308) return 8;
    if (bits >= 55) return 27;
    return kMillerRabinRounds;
}

bool is_probable_prime(const Natural& n, DeterministicRng& rng, int rounds) {
    if (n < 2) {
        return false;
    }
    if (n < 4) {
        return true;
    }
    if (mpz_even_p(n.get_mpz_t())) {
        return false;
    }
    return random_rounds_pass(n, MillerRabinState(n), rng, rounds);
}

PrimeStream::PrimeStream(std::size_t bits, std::uint64_t seed) : bits_(bits), rng_(seed) {
    if (bits < kMinPrimeBits) {
        throw std::invalid_argument("prime size must be at least " + std::to_string(kMinPrimeBits) +
                                    " bits, got " + std::to_string(bits));
    }
}

Natural PrimeStream::next() {
    const auto& small = sieve_primes();
    std::vector<unsigned> residues(small.size());
    std::vector<bool> composite(kSieveWindow);
    Natural upper;
    mpz_ui_pow_ui(upper.get_mpz_t(), 2, bits_);
    const Natural two(2);
    const int rounds = miller_rabin_rounds_for_bits(bits_);
    Natural x;

    for (;;) {
        Natural start = rng_.bits(bits_);
        mpz_setbit(start.get_mpz_t(), bits_ - 1);
        mpz_setbit(start.get_mpz_t(), 0);
        for (std::size_t k = 0; k < small.size(); ++k) {
            residues[k] = static_cast<unsigned>(mpz_fdiv_ui(start.get_mpz_t(), small[k]));
        }

        // Candidates are start + offset + 2t for t in one window. Once they
        // leave the bit range a fresh start is drawn.
        for (unsigned long offset = 0;; offset += 2 * kSieveWindow) {
            std::fill(composite.begin(), composite.end(), false);
            for (std::size_t k = 0; k < small.size(); ++k) {
                const unsigned long p = small[k];
                const unsigned long shifted = (residues[k] + offset % p) % p;
                // Solve shifted + 2t = 0 (mod p); 2^-1 = (p + 1) / 2.
                unsigned long t = ((p - shifted) % p) * ((p + 1) / 2) % p;
                for (; t < kSieveWindow; t += p) {
                    composite[t] = true;
                }
            }
            bool out_of_range = false;
            for (std::size_t t = 0; t < kSieveWindow; ++t) {
                if (composite[t]) {
                    continue;
                }
                Natural candidate = start + static_cast<unsigned long>(offset + 2 * t);
                if (candidate >= upper) {
                    out_of_range = true;
                    break;
                }
                const MillerRabinState state(candidate);
                // The fixed base only rejects; acceptance rests on the
                // random-base rounds.
                if (is_witness(candidate, state, two, x)) {
                    continue;
                }
                if (random_rounds_pass(candidate, state, rng_, rounds)) {
                    return candidate;
                }
            }
            if (out_of_range) {
                break;
            }
        }
    }
}

std::vector<Natural> generate_primes(std::size_t count, std::size_t bits, std::uint64_t seed) {
    PrimeStream stream(bits, seed);
    std::vector<Natural> out;
    out.reserve(count);
    std::set<Natural> seen;
    std::size_t duplicate_run = 0;
    while (out.size() < count) {
        Natural p = stream.next();
        if (!seen.insert(p).second) {
            if (++duplicate_run > kMaxDuplicateRun) {
                throw std::runtime_error("cannot draw " + std::to_string(count) + " distinct " +
                                         std::to_string(bits) + "-bit primes");
            }
            continue;
        }
        duplicate_run = 0;
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace batchgcd
