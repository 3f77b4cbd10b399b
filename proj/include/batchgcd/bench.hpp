#pragma once

#include "batchgcd/dataset.hpp"
#include "batchgcd/factor_report.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace batchgcd {

enum class Algorithm { binary_tree, remainder_tree };

std::string_view to_string(Algorithm algorithm);
Algorithm parse_algorithm(std::string_view name);

FactorReport run_algorithm(Algorithm algorithm, std::span<const Natural> moduli, unsigned threads = 1);

/// CPU time consumed by this process so far, in seconds.
double process_cpu_seconds();

/// A run whose recovered factors disagreed with the planted ground truth.
class VerificationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct TimingOptions {
    unsigned threads = 1;
    /// Runs per measurement; the median is reported.
    unsigned repeats = 1;
};

/// CPU process time of one full algorithm run, resolution included. Dataset
/// generation and verification are outside the timed region. Every run is
/// checked against the ground truth; a mismatch throws VerificationError
/// and no time is reported.
double time_algorithm(Algorithm algorithm, const Dataset& dataset, const TimingOptions& options = {});

struct TimingSample {
    std::size_t m = 0;
    double cpu_seconds = 0.0;
};

/// Samples ascending by M, M distinct.
struct TimingSeries {
    Algorithm algorithm = Algorithm::binary_tree;
    std::size_t bit_size = 0;
    std::size_t num_weak = 0;
    std::uint64_t seed = 0;
    std::vector<TimingSample> samples;
};

struct SweepConfig {
    std::vector<std::size_t> sizes;
    std::size_t bit_size = 1024;
    std::size_t num_weak = 100;
    std::uint64_t seed = 0;
    TimingOptions timing;
};

/// Times both algorithms on one dataset per size, generated from the same
/// seed for both. `progress` (optional) receives one line per measurement.
std::pair<TimingSeries, TimingSeries> run_sweep(const SweepConfig& config,
                                                const std::function<void(const std::string&)>& progress = {});

/// Model y = x^a + b*x + c.
struct ScalingFit {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double residual_sum_squares = 0.0;

    double operator()(double x) const;
};

struct FitOptions {
    double a_min = 0.5;
    double a_max = 2.5;
    /// Width at which the search over a stops.
    double a_tolerance = 1e-15;
    /// When set, receives the best residual after each refinement step.
    std::vector<double>* residual_trace = nullptr;
};

/// Least squares for x^a + b*x + c. For fixed a, (b, c) is an exact linear
/// least-squares solve; a is located by a grid scan followed by golden
/// section search on the profiled residual. Needs >= 4 samples with x > 0.
ScalingFit fit_scaling(std::span<const std::pair<double, double>> samples, const FitOptions& options = {});

inline constexpr std::size_t kDefaultFitMinM = 5000;

/// Fits a timing series using only samples with M >= min_m.
ScalingFit fit_series(const TimingSeries& series, std::size_t min_m = kDefaultFitMinM,
                      const FitOptions& options = {});

struct SpeedupSeries {
    std::vector<std::pair<std::size_t, double>> ratios;  // (M, remainder / binary)
    double mean_ratio = 0.0;
};

/// Throws std::invalid_argument unless both series share M grid, bits,
/// weak count and seed.
SpeedupSeries speedup_series(const TimingSeries& binary, const TimingSeries& remainder);

// CSV formats:
//   timing:  algorithm,bits,weak,M,cpu_seconds,seed
//   fit:     algorithm,bits,weak,a,b,c,rss
//   speedup: M,ratio
void write_timing_csv(std::ostream& out, std::span<const TimingSeries> series);
std::vector<TimingSeries> read_timing_csv(std::istream& in, const std::string& source);
void write_fit_csv(std::ostream& out, std::span<const std::pair<TimingSeries, ScalingFit>> fits);
void write_speedup_csv(std::ostream& out, const SpeedupSeries& speedup);

}  // namespace batchgcd
