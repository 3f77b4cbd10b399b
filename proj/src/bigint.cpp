#include "batchgcd/bigint.hpp"

#include <stdexcept>
#include <vector>

namespace batchgcd {

std::string to_hex(const Natural& value) { return value.get_str(16); }

Natural from_hex(std::string_view hex) {
    if (hex.empty()) {
        throw std::invalid_argument("empty hex string");
    }
    for (const char c : hex) {
        const bool digit = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
        if (!digit) {
            throw std::invalid_argument("invalid hex character '" + std::string(1, c) + "'");
        }
    }
    Natural out;
    out.set_str(std::string(hex), 16);
    return out;
}

std::size_t bit_length(const Natural& value) {
    if (value == 0) {
        return 0;
    }
    return mpz_sizeinbase(value.get_mpz_t(), 2);
}

std::uint64_t DeterministicRng::below(std::uint64_t bound) {
    if (bound == 0) {
        throw std::invalid_argument("DeterministicRng::below: zero bound");
    }
    // Reject the tail that would bias the modulo.
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
    std::uint64_t draw = engine_();
    while (draw > limit) {
        draw = engine_();
    }
    return draw % bound;
}

Natural DeterministicRng::bits(std::size_t count) {
    Natural out;
    if (count == 0) {
        return out;
    }
    std::vector<std::uint64_t> words((count + 63) / 64);
    for (auto& w : words) {
        w = engine_();
    }
    mpz_import(out.get_mpz_t(), words.size(), -1, sizeof(std::uint64_t), 0, 0, words.data());
    mpz_fdiv_r_2exp(out.get_mpz_t(), out.get_mpz_t(), count);
    return out;
}

Natural DeterministicRng::below(const Natural& bound) {
    if (bound <= 0) {
        throw std::invalid_argument("DeterministicRng::below: non-positive bound");
    }
    const std::size_t width = bit_length(bound);
    Natural draw = bits(width);
    while (draw >= bound) {
        draw = bits(width);
    }
    return draw;
}

}  // namespace batchgcd
