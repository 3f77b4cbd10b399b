#include "batchgcd/bench.hpp"

#include "batchgcd/binary_tree.hpp"
#include "batchgcd/remainder_tree.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

namespace batchgcd {

namespace {

struct Profile {
    long double b = 0;
    long double c = 0;
    long double rss = 0;
};

// For fixed a, (b, c) is the linear least-squares fit of y - x^a on x,
// solved in centered form.
Profile profile_at(std::span<const std::pair<double, double>> samples, long double a) {
    const auto n = static_cast<long double>(samples.size());
    long double x_mean = 0;
    long double r_mean = 0;
    std::vector<long double> residual(samples.size());
    for (std::size_t k = 0; k < samples.size(); ++k) {
        const long double x = samples[k].first;
        residual[k] = static_cast<long double>(samples[k].second) - std::pow(x, a);
        x_mean += x;
        r_mean += residual[k];
    }
    x_mean /= n;
    r_mean /= n;

    long double sxx = 0;
    long double sxr = 0;
    for (std::size_t k = 0; k < samples.size(); ++k) {
        const long double dx = samples[k].first - x_mean;
        sxx += dx * dx;
        sxr += dx * (residual[k] - r_mean);
    }
    Profile out;
    out.b = sxr / sxx;
    out.c = r_mean - out.b * x_mean;
    for (std::size_t k = 0; k < samples.size(); ++k) {
        const long double e = residual[k] - out.b * samples[k].first - out.c;
        out.rss += e * e;
    }
    return out;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) {
        out.push_back(field);
    }
    return out;
}

template <class Number>
Number parse_field(const std::string& text, const std::string& source, std::size_t line_no) {
    Number value{};
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) {
        throw ParseError(source, line_no, "invalid number '" + text + "'");
    }
    return value;
}

}  // namespace

std::string_view to_string(Algorithm algorithm) {
    switch (algorithm) {
        case Algorithm::binary_tree:
            return "binary_tree";
        case Algorithm::remainder_tree:
            return "remainder_tree";
    }
    return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
    if (name == "binary_tree" || name == "binary-tree") {
        return Algorithm::binary_tree;
    }
    if (name == "remainder_tree" || name == "remainder-tree") {
        return Algorithm::remainder_tree;
    }
    throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

FactorReport run_algorithm(Algorithm algorithm, std::span<const Natural> moduli, unsigned threads) {
    switch (algorithm) {
        case Algorithm::binary_tree:
            return run_binary_tree_batch_gcd(moduli, {.threads = threads});
        case Algorithm::remainder_tree:
            return run_remainder_tree_batch_gcd(moduli, {.threads = threads});
    }
    throw std::invalid_argument("unknown algorithm");
}

double process_cpu_seconds() {
    timespec ts{};
    clock_gettime(CLOCK_PROCESS_CPUTIME_ID, &ts);
    return static_cast<double>(ts.tv_sec) + static_cast<double>(ts.tv_nsec) * 1e-9;
}

double time_algorithm(Algorithm algorithm, const Dataset& dataset, const TimingOptions& options) {
    const auto& moduli = dataset.moduli.moduli;
    const FactorMap expected = factor_map(dataset.truth, moduli);
    std::vector<double> times;
    for (unsigned run = 0; run < std::max(1U, options.repeats); ++run) {
        const double start = process_cpu_seconds();
        const FactorReport report = run_algorithm(algorithm, moduli, options.threads);
        const double elapsed = process_cpu_seconds() - start;

        const auto diff = diff_factor_maps(expected, factor_map(report, moduli), "truth", std::string(to_string(algorithm)));
        if (!diff.empty()) {
            std::string message = std::string(to_string(algorithm)) + " disagrees with ground truth at M=" +
                                  std::to_string(moduli.size()) + " (" + std::to_string(diff.size()) + " indices)";
            message += "; first: " + diff.front();
            throw VerificationError(message);
        }
        times.push_back(elapsed);
    }
    std::sort(times.begin(), times.end());
    const std::size_t mid = times.size() / 2;
    return times.size() % 2 == 1 ? times[mid] : 0.5 * (times[mid - 1] + times[mid]);
}

std::pair<TimingSeries, TimingSeries> run_sweep(const SweepConfig& config,
                                                const std::function<void(const std::string&)>& progress) {
    std::vector<std::size_t> sizes = config.sizes;
    std::sort(sizes.begin(), sizes.end());
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());

    TimingSeries binary{Algorithm::binary_tree, config.bit_size, config.num_weak, config.seed, {}};
    TimingSeries remainder{Algorithm::remainder_tree, config.bit_size, config.num_weak, config.seed, {}};
    for (const std::size_t m : sizes) {
        const Dataset dataset = generate_dataset(m, config.bit_size, config.num_weak, config.seed);
        for (TimingSeries* series : {&binary, &remainder}) {
            const double seconds = time_algorithm(series->algorithm, dataset, config.timing);
            series->samples.push_back({m, seconds});
            if (progress) {
                std::ostringstream line;
                line << to_string(series->algorithm) << " M=" << m << " cpu_seconds=" << std::setprecision(6)
                     << seconds;
                progress(line.str());
            }
        }
    }
    return {std::move(binary), std::move(remainder)};
}

double ScalingFit::operator()(double x) const { return std::pow(x, a) + b * x + c; }

ScalingFit fit_scaling(std::span<const std::pair<double, double>> samples, const FitOptions& options) {
    if (samples.size() < 4) {
        throw std::invalid_argument("scaling fit needs at least 4 samples, got " + std::to_string(samples.size()));
    }
    std::vector<double> xs;
    for (const auto& [x, y] : samples) {
        if (!(x > 0) || !std::isfinite(x) || !std::isfinite(y)) {
            throw std::invalid_argument("scaling fit needs finite samples with x > 0");
        }
        xs.push_back(x);
    }
    std::sort(xs.begin(), xs.end());
    if (std::unique(xs.begin(), xs.end()) - xs.begin() < 3) {
        throw std::invalid_argument("scaling fit needs at least 3 distinct x values");
    }
    if (!(options.a_min > 0) || !(options.a_max > options.a_min)) {
        throw std::invalid_argument("invalid exponent search interval");
    }

    long double best_a = options.a_min;
    Profile best = profile_at(samples, best_a);
    auto consider = [&](long double a, const Profile& p) {
        if (p.rss < best.rss) {
            best = p;
            best_a = a;
        }
    };

    // Coarse scan to pick the basin, then golden section inside it.
    constexpr int kGridIntervals = 400;
    const long double lo = options.a_min;
    const long double hi = options.a_max;
    const long double step = (hi - lo) / kGridIntervals;
    int best_k = 0;
    for (int k = 1; k <= kGridIntervals; ++k) {
        const long double a = lo + step * k;
        const Profile p = profile_at(samples, a);
        if (p.rss < best.rss) {
            best_k = k;
        }
        consider(a, p);
    }
    if (options.residual_trace != nullptr) {
        options.residual_trace->push_back(static_cast<double>(best.rss));
    }

    const long double inv_phi = (std::sqrt(5.0L) - 1) / 2;
    long double left = lo + step * std::max(0, best_k - 1);
    long double right = lo + step * std::min(kGridIntervals, best_k + 1);
    long double inner_left = right - inv_phi * (right - left);
    long double inner_right = left + inv_phi * (right - left);
    Profile p_left = profile_at(samples, inner_left);
    Profile p_right = profile_at(samples, inner_right);
    consider(inner_left, p_left);
    consider(inner_right, p_right);

    for (int iter = 0; iter < 400 && right - left > options.a_tolerance; ++iter) {
        if (p_left.rss <= p_right.rss) {
            right = inner_right;
            inner_right = inner_left;
            p_right = p_left;
            inner_left = right - inv_phi * (right - left);
            p_left = profile_at(samples, inner_left);
            consider(inner_left, p_left);
        } else {
            left = inner_left;
            inner_left = inner_right;
            p_left = p_right;
            inner_right = left + inv_phi * (right - left);
            p_right = profile_at(samples, inner_right);
            consider(inner_right, p_right);
        }
        if (options.residual_trace != nullptr) {
            options.residual_trace->push_back(static_cast<double>(best.rss));
        }
        if (!(inner_left < inner_right)) {
            break;  // interval at working precision
        }
    }

    return ScalingFit{static_cast<double>(best_a), static_cast<double>(best.b), static_cast<double>(best.c),
                      static_cast<double>(best.rss)};
}

ScalingFit fit_series(const TimingSeries& series, std::size_t min_m, const FitOptions& options) {
    std::vector<std::pair<double, double>> samples;
    for (const auto& s : series.samples) {
        if (s.m >= min_m) {
            samples.emplace_back(static_cast<double>(s.m), s.cpu_seconds);
        }
    }
    return fit_scaling(samples, options);
}

SpeedupSeries speedup_series(const TimingSeries& binary, const TimingSeries& remainder) {
    if (binary.bit_size != remainder.bit_size || binary.num_weak != remainder.num_weak ||
        binary.seed != remainder.seed) {
        throw std::invalid_argument("speedup needs series with the same bits, weak count and seed");
    }
    if (binary.samples.size() != remainder.samples.size()) {
        throw std::invalid_argument("speedup needs identical M grids");
    }
    SpeedupSeries out;
    for (std::size_t k = 0; k < binary.samples.size(); ++k) {
        const auto& fast = binary.samples[k];
        const auto& slow = remainder.samples[k];
        if (fast.m != slow.m) {
            throw std::invalid_argument("speedup needs identical M grids");
        }
        if (!(fast.cpu_seconds > 0) || !(slow.cpu_seconds > 0)) {
            throw std::invalid_argument("speedup needs positive timings");
        }
        out.ratios.emplace_back(fast.m, slow.cpu_seconds / fast.cpu_seconds);
        out.mean_ratio += out.ratios.back().second;
    }
    if (!out.ratios.empty()) {
        out.mean_ratio /= static_cast<double>(out.ratios.size());
    }
    return out;
}

void write_timing_csv(std::ostream& out, std::span<const TimingSeries> series) {
    out << "algorithm,bits,weak,M,cpu_seconds,seed\n";
    for (const auto& s : series) {
        for (const auto& sample : s.samples) {
            out << to_string(s.algorithm) << ',' << s.bit_size << ',' << s.num_weak << ',' << sample.m << ','
                << std::setprecision(9) << sample.cpu_seconds << ',' << s.seed << '\n';
        }
    }
}

std::vector<TimingSeries> read_timing_csv(std::istream& in, const std::string& source) {
    std::string line;
    if (!std::getline(in, line) || line != "algorithm,bits,weak,M,cpu_seconds,seed") {
        throw ParseError(source, 1, "expected header 'algorithm,bits,weak,M,cpu_seconds,seed'");
    }
    using Key = std::tuple<int, std::size_t, std::size_t, std::uint64_t>;
    std::map<Key, TimingSeries> grouped;
    for (std::size_t line_no = 2; std::getline(in, line); ++line_no) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const auto fields = split_csv(line);
        if (fields.size() != 6) {
            throw ParseError(source, line_no, "expected 6 fields");
        }
        Algorithm algorithm{};
        try {
            algorithm = parse_algorithm(fields[0]);
        } catch (const std::invalid_argument& e) {
            throw ParseError(source, line_no, e.what());
        }
        const auto bits = parse_field<std::size_t>(fields[1], source, line_no);
        const auto weak = parse_field<std::size_t>(fields[2], source, line_no);
        const auto m = parse_field<std::size_t>(fields[3], source, line_no);
        const auto seconds = parse_field<double>(fields[4], source, line_no);
        const auto seed = parse_field<std::uint64_t>(fields[5], source, line_no);
        if (!(seconds >= 0)) {
            throw ParseError(source, line_no, "cpu_seconds must be nonnegative");
        }
        auto& series = grouped[Key{static_cast<int>(algorithm), bits, weak, seed}];
        series.algorithm = algorithm;
        series.bit_size = bits;
        series.num_weak = weak;
        series.seed = seed;
        series.samples.push_back({m, seconds});
    }

    std::vector<TimingSeries> out;
    for (auto& [key, series] : grouped) {
        std::sort(series.samples.begin(), series.samples.end(),
                  [](const TimingSample& x, const TimingSample& y) { return x.m < y.m; });
        for (std::size_t k = 1; k < series.samples.size(); ++k) {
            if (series.samples[k].m == series.samples[k - 1].m) {
                throw ParseError(source, 0, "duplicate M=" + std::to_string(series.samples[k].m) + " for " +
                                                std::string(to_string(series.algorithm)));
            }
        }
        out.push_back(std::move(series));
    }
    return out;
}

void write_fit_csv(std::ostream& out, std::span<const std::pair<TimingSeries, ScalingFit>> fits) {
    out << "algorithm,bits,weak,a,b,c,rss\n";
    for (const auto& [series, fit] : fits) {
        out << to_string(series.algorithm) << ',' << series.bit_size << ',' << series.num_weak << ','
            << std::setprecision(12) << fit.a << ',' << fit.b << ',' << fit.c << ',' << fit.residual_sum_squares
            << '\n';
    }
}

void write_speedup_csv(std::ostream& out, const SpeedupSeries& speedup) {
    out << "M,ratio\n";
    for (const auto& [m, ratio] : speedup.ratios) {
        out << m << ',' << std::setprecision(9) << ratio << '\n';
    }
}

}  // namespace batchgcd
