#include "batchgcd/dataset.hpp"

#include "batchgcd/primes.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace batchgcd {

namespace {

// Positions are shuffled from a stream independent of the prime stream, so
// the primes drawn for a seed do not depend on the set layout.
constexpr std::uint64_t kLayoutStreamTweak = 0x9e3779b97f4a7c15ULL;

constexpr std::size_t kAdversarialPrimeBits = 32;

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

template <class Int>
bool parse_decimal(std::string_view text, Int& out) {
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, out);
    return ec == std::errc() && ptr == end;
}

}  // namespace

Dataset generate_dataset(std::size_t num_moduli, std::size_t bit_size, std::size_t num_weak,
                         std::uint64_t seed) {
    if (num_moduli == 0) {
        throw std::invalid_argument("num_moduli must be positive");
    }
    if (bit_size < kMinDatasetBits || bit_size % 2 != 0) {
        throw std::invalid_argument("bit_size must be even and at least " + std::to_string(kMinDatasetBits) +
                                    ", got " + std::to_string(bit_size));
    }
    if (num_weak % 2 != 0) {
        throw std::invalid_argument("num_weak must be even, got " + std::to_string(num_weak));
    }
    if (num_weak > num_moduli) {
        throw std::invalid_argument("num_weak (" + std::to_string(num_weak) + ") exceeds num_moduli (" +
                                    std::to_string(num_moduli) + ")");
    }

    const std::size_t num_pairs = num_weak / 2;
    const auto primes = generate_primes(2 * num_moduli - num_pairs, bit_size / 2, seed);
    auto next_prime = primes.begin();

    std::vector<std::size_t> layout(num_moduli);
    for (std::size_t i = 0; i < num_moduli; ++i) {
        layout[i] = i;
    }
    DeterministicRng layout_rng(seed ^ kLayoutStreamTweak);
    deterministic_shuffle(layout, layout_rng);

    Dataset out;
    out.moduli.bit_size = bit_size;
    out.moduli.seed = seed;
    out.moduli.moduli.resize(num_moduli);
    auto& moduli = out.moduli.moduli;

    for (std::size_t k = 0; k < num_pairs; ++k) {
        const std::size_t a = std::min(layout[2 * k], layout[2 * k + 1]);
        const std::size_t b = std::max(layout[2 * k], layout[2 * k + 1]);
        const Natural& shared = *next_prime++;
        moduli[a] = shared * *next_prime++;
        moduli[b] = shared * *next_prime++;
        out.truth.weak_pairs.push_back({a, b, shared});
    }
    for (std::size_t k = num_weak; k < num_moduli; ++k) {
        const Natural& p = *next_prime++;
        moduli[layout[k]] = p * *next_prime++;
    }

    std::sort(out.truth.weak_pairs.begin(), out.truth.weak_pairs.end(),
              [](const WeakPair& x, const WeakPair& y) { return x.index_a < y.index_a; });
    return out;
}

Dataset generate_adversarial_dataset(AdversarialKind kind, std::uint64_t seed) {
    const auto primes = generate_primes(10, kAdversarialPrimeBits, seed);
    Dataset out;
    out.moduli.bit_size = 2 * kAdversarialPrimeBits;
    out.moduli.seed = seed;
    auto& moduli = out.moduli.moduli;

    switch (kind) {
        case AdversarialKind::double_shared: {
            const Natural& p = primes[0];
            const Natural& q = primes[1];
            moduli = {primes[4] * primes[5], p * primes[2], primes[6] * primes[7],
                      p * q,                 primes[8] * primes[9], q * primes[3]};
            out.truth.weak_pairs = {{1, 3, p}, {3, 5, q}};
            break;
        }
        case AdversarialKind::duplicate_modulus: {
            const Natural duplicate = primes[0] * primes[1];
            moduli = {primes[2] * primes[3], duplicate, primes[4] * primes[5],
                      primes[6] * primes[7], duplicate, primes[8] * primes[9]};
            out.truth.weak_pairs = {{1, 4, duplicate}};
            break;
        }
    }
    return out;
}

AdversarialKind parse_adversarial_kind(const std::string& name) {
    if (name == "double_shared") {
        return AdversarialKind::double_shared;
    }
    if (name == "duplicate_modulus") {
        return AdversarialKind::duplicate_modulus;
    }
    throw std::invalid_argument("unknown adversarial dataset kind '" + name + "'");
}

std::filesystem::path truth_path_for(const std::filesystem::path& dataset_path) {
    auto out = dataset_path;
    out.replace_extension(".truth");
    return out;
}

void write_moduli(std::ostream& out, const ModulusSet& moduli, std::size_t num_weak) {
    out << "# bits=" << moduli.bit_size << '\n';
    out << "# seed=" << moduli.seed << '\n';
    out << "# weak=" << num_weak << '\n';
    for (const auto& n : moduli.moduli) {
        out << to_hex(n) << '\n';
    }
}

void write_truth(std::ostream& out, const PlantedGroundTruth& truth) {
    for (const auto& pair : truth.weak_pairs) {
        out << pair.index_a << ' ' << pair.index_b << ' ' << to_hex(pair.shared_prime) << '\n';
    }
}

ModulusSet parse_moduli(std::istream& in, const std::string& source) {
    ModulusSet out;
    bool have_bits = false;
    std::string raw;
    for (std::size_t line_no = 1; std::getline(in, raw); ++line_no) {
        const std::string line = trim(raw);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '#') {
            const std::string meta = trim(std::string_view(line).substr(1));
            const auto eq = meta.find('=');
            if (eq == std::string::npos) {
                continue;  // free-form comment
            }
            const std::string key = trim(std::string_view(meta).substr(0, eq));
            const std::string value = trim(std::string_view(meta).substr(eq + 1));
            if (key == "bits") {
                if (!parse_decimal(value, out.bit_size)) {
                    throw ParseError(source, line_no, "invalid bits value '" + value + "'");
                }
                have_bits = true;
            } else if (key == "seed") {
                if (!parse_decimal(value, out.seed)) {
                    throw ParseError(source, line_no, "invalid seed value '" + value + "'");
                }
            }
            continue;
        }
        try {
            out.moduli.push_back(from_hex(line));
        } catch (const std::invalid_argument& e) {
            throw ParseError(source, line_no, e.what());
        }
        if (out.moduli.back() == 0) {
            throw ParseError(source, line_no, "modulus must be positive");
        }
    }
    if (in.bad()) {
        throw std::runtime_error(source + ": read error");
    }
    if (!have_bits) {
        for (const auto& n : out.moduli) {
            out.bit_size = std::max(out.bit_size, bit_length(n));
        }
    }
    return out;
}

PlantedGroundTruth parse_truth(std::istream& in, const std::string& source) {
    PlantedGroundTruth out;
    std::string raw;
    for (std::size_t line_no = 1; std::getline(in, raw); ++line_no) {
        const std::string line = trim(raw);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        std::istringstream fields(line);
        std::string a, b, shared, extra;
        if (!(fields >> a >> b >> shared) || (fields >> extra)) {
            throw ParseError(source, line_no, "expected 'index_a index_b shared_prime_hex'");
        }
        WeakPair pair;
        if (!parse_decimal(a, pair.index_a) || !parse_decimal(b, pair.index_b)) {
            throw ParseError(source, line_no, "invalid index");
        }
        try {
            pair.shared_prime = from_hex(shared);
        } catch (const std::invalid_argument& e) {
            throw ParseError(source, line_no, e.what());
        }
        out.weak_pairs.push_back(std::move(pair));
    }
    if (in.bad()) {
        throw std::runtime_error(source + ": read error");
    }
    return out;
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& path) {
    std::set<std::size_t> weak_indices;
    for (const auto& pair : dataset.truth.weak_pairs) {
        weak_indices.insert(pair.index_a);
        weak_indices.insert(pair.index_b);
    }

    std::ofstream moduli_out(path);
    if (!moduli_out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    write_moduli(moduli_out, dataset.moduli, weak_indices.size());

    const auto truth_path = truth_path_for(path);
    std::ofstream truth_out(truth_path);
    if (!truth_out) {
        throw std::runtime_error("cannot open " + truth_path.string() + " for writing");
    }
    write_truth(truth_out, dataset.truth);

    moduli_out.close();
    truth_out.close();
    if (!moduli_out || !truth_out) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

LoadedDataset load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    LoadedDataset out;
    out.moduli = parse_moduli(in, path.string());

    const auto truth_path = truth_path_for(path);
    if (truth_path != path && std::filesystem::exists(truth_path)) {
        std::ifstream truth_in(truth_path);
        if (!truth_in) {
            throw std::runtime_error("cannot open " + truth_path.string());
        }
        out.truth = parse_truth(truth_in, truth_path.string());
        for (const auto& pair : out.truth->weak_pairs) {
            if (pair.index_a >= out.moduli.size() || pair.index_b >= out.moduli.size()) {
                throw std::runtime_error(truth_path.string() + ": index out of range for " +
                                         std::to_string(out.moduli.size()) + " moduli");
            }
        }
    }
    return out;
}

}  // namespace batchgcd
