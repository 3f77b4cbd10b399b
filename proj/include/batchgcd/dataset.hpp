#pragma once

#include "batchgcd/bigint.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace batchgcd {

/// Ordered list of moduli with the parameters they were generated from.
struct ModulusSet {
    std::vector<Natural> moduli;
    std::size_t bit_size = 0;
    std::uint64_t seed = 0;

    std::size_t size() const { return moduli.size(); }
    bool operator==(const ModulusSet&) const = default;
};

/// Two moduli planted to share `shared_prime`. In a duplicate-modulus set the
/// recorded value is the whole modulus, since that is all a GCD can reveal.
struct WeakPair {
    std::size_t index_a = 0;
    std::size_t index_b = 0;
    Natural shared_prime;

    bool operator==(const WeakPair&) const = default;
};

struct PlantedGroundTruth {
    std::vector<WeakPair> weak_pairs;

    std::size_t total_shared_factors() const { return weak_pairs.size(); }
    bool operator==(const PlantedGroundTruth&) const = default;
};

struct Dataset {
    ModulusSet moduli;
    PlantedGroundTruth truth;

    bool operator==(const Dataset&) const = default;
};

enum class AdversarialKind { double_shared, duplicate_modulus };

inline constexpr std::size_t kMinDatasetBits = 32;

/// Semiprime moduli of `bit_size` bits. `num_weak` of them form pairs that
/// share one prime; pairs sit at shuffled positions and every other prime in
/// the set is distinct.
Dataset generate_dataset(std::size_t num_moduli, std::size_t bit_size, std::size_t num_weak,
                         std::uint64_t seed);

/// Small 64-bit sets for the edge cases of shared-factor resolution:
///   double_shared     - one modulus p*q with p shared with one modulus and q
///                       shared with another;
///   duplicate_modulus - two identical moduli whose primes occur nowhere else.
Dataset generate_adversarial_dataset(AdversarialKind kind, std::uint64_t seed);

AdversarialKind parse_adversarial_kind(const std::string& name);

/// Raised for malformed dataset or ground-truth files. `line()` is 1-based.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& what)
        : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// `<stem>.truth` next to the dataset file.
std::filesystem::path truth_path_for(const std::filesystem::path& dataset_path);

/// Writes the dataset file and its `.truth` companion.
void save_dataset(const Dataset& dataset, const std::filesystem::path& path);

/// Reads a dataset file; the `.truth` companion is read when present.
/// Throws ParseError on malformed content, std::runtime_error on I/O failure.
struct LoadedDataset {
    ModulusSet moduli;
    std::optional<PlantedGroundTruth> truth;
};
LoadedDataset load_dataset(const std::filesystem::path& path);

ModulusSet parse_moduli(std::istream& in, const std::string& source);
PlantedGroundTruth parse_truth(std::istream& in, const std::string& source);
void write_moduli(std::ostream& out, const ModulusSet& moduli, std::size_t num_weak);
void write_truth(std::ostream& out, const PlantedGroundTruth& truth);

}  // namespace batchgcd
