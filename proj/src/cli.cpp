#include "batchgcd/cli.hpp"

#include "batchgcd/bench.hpp"
#include "batchgcd/binary_tree.hpp"
#include "batchgcd/dataset.hpp"
#include "batchgcd/oracle.hpp"
#include "batchgcd/remainder_tree.hpp"
#include "batchgcd/run_result.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace batchgcd::cli {

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class MismatchError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GenerateArgs {
    std::size_t count = 0;
    std::size_t bits = 1024;
    std::size_t weak = 0;
    std::uint64_t seed = 0;
    std::string out;
    std::string adversarial;
};

struct RunArgs {
    std::string algo;
    std::string in;
    std::string out = "-";
    bool full = false;
    bool force = false;
    bool emit_b = false;
    bool skip_leaf_divisors = false;
};

struct VerifyArgs {
    std::string in;
    bool skip_naive = false;
    bool force = false;
};

struct BenchArgs {
    std::vector<std::size_t> sizes;
    std::size_t bits = 1024;
    std::size_t weak = 100;
    std::uint64_t seed = 0;
    unsigned repeats = 1;
    std::string out;
    std::string speedup_out;
};

struct FitArgs {
    std::string in;
    std::size_t min_m = kDefaultFitMinM;
    std::string out;
    std::string speedup_out;
};

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    return out;
}

void write_text(const std::string& path, const std::string& text, std::ostream& stdout_stream) {
    if (path == "-") {
        stdout_stream << text;
        return;
    }
    auto out = open_output(path);
    out << text;
    if (!out.flush()) {
        throw std::runtime_error("write failed for " + path);
    }
}

void check_oracle_size(std::size_t m, bool force, const std::string& hint) {
    if (m > kOracleDefaultLimit && !force) {
        throw UsageError("naive all-pairs GCD over " + std::to_string(m) + " moduli needs " +
                         std::to_string(m * (m - 1) / 2) + " GCDs; refusing above " +
                         std::to_string(kOracleDefaultLimit) + " moduli without --force" + hint);
    }
}

int cmd_generate(const GenerateArgs& args, std::ostream& out) {
    Dataset dataset;
    if (!args.adversarial.empty()) {
        AdversarialKind kind{};
        try {
            kind = parse_adversarial_kind(args.adversarial);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        dataset = generate_adversarial_dataset(kind, args.seed);
    } else {
        if (args.count == 0) {
            throw UsageError("--count is required and must be positive");
        }
        try {
            dataset = generate_dataset(args.count, args.bits, args.weak, args.seed);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    save_dataset(dataset, args.out);
    out << "wrote " << dataset.moduli.size() << " moduli to " << args.out << " and "
        << dataset.truth.total_shared_factors() << " shared factors to " << truth_path_for(args.out).string()
        << '\n';
    return kExitOk;
}

int cmd_run(const RunArgs& args, unsigned threads, std::ostream& out) {
    const LoadedDataset loaded = load_dataset(args.in);
    const auto& moduli = loaded.moduli.moduli;
    if (moduli.size() < 2) {
        throw UsageError("batch GCD needs at least two moduli, " + args.in + " has " +
                         std::to_string(moduli.size()));
    }

    RunResult result;
    if (args.algo == "binary-tree") {
        const FactorReport report = run_binary_tree_batch_gcd(
            moduli, {.skip_leaf_divisors = args.skip_leaf_divisors, .threads = threads, .counters = nullptr});
        result = make_run_result(args.algo, report, args.full, args.emit_b);
    } else if (args.algo == "remainder-tree") {
        const FactorReport report = run_remainder_tree_batch_gcd(moduli, {.threads = threads});
        result = make_run_result(args.algo, report, args.full, false);
    } else {
        check_oracle_size(moduli.size(), args.force, "");
        const PairwiseResult pairs = pairwise_gcd_all(moduli);
        result = make_run_result(args.algo, moduli.size(), expected_factor_map(pairs, moduli),
                                 duplicate_pairs(pairs, moduli), args.full);
    }
    write_text(args.out, to_json(result).dump(2) + "\n", out);
    return kExitOk;
}

int cmd_verify(const VerifyArgs& args, unsigned threads, std::ostream& out) {
    const LoadedDataset loaded = load_dataset(args.in);
    const auto& moduli = loaded.moduli.moduli;
    if (moduli.size() < 2) {
        throw UsageError("verification needs at least two moduli");
    }
    if (!args.skip_naive) {
        check_oracle_size(moduli.size(), args.force, " (or use --skip-naive)");
    }

    std::vector<std::pair<std::string, FactorMap>> maps;
    maps.emplace_back("binary-tree",
                      factor_map(run_binary_tree_batch_gcd(moduli, {.threads = threads}), moduli));
    maps.emplace_back("remainder-tree",
                      factor_map(run_remainder_tree_batch_gcd(moduli, {.threads = threads}), moduli));
    if (!args.skip_naive) {
        maps.emplace_back("naive", expected_factor_map(pairwise_gcd_all(moduli), moduli));
    }

    std::vector<std::string> diffs;
    for (std::size_t k = 1; k < maps.size(); ++k) {
        for (auto& line : diff_factor_maps(maps[0].second, maps[k].second, maps[0].first, maps[k].first)) {
            diffs.push_back(std::move(line));
        }
    }
    if (loaded.truth) {
        for (const auto& [label, map] : maps) {
            for (auto& line : diff_factor_maps(factor_map(*loaded.truth, moduli), map, "truth", label)) {
                diffs.push_back(std::move(line));
            }
        }
    }

    for (const auto& [label, map] : maps) {
        out << label << ": " << map.size() << " moduli with shared factors\n";
    }
    if (loaded.truth) {
        out << "truth: " << loaded.truth->total_shared_factors() << " planted shared factors\n";
    }
    if (!diffs.empty()) {
        for (const auto& line : diffs) {
            out << "MISMATCH " << line << '\n';
        }
        throw MismatchError(std::to_string(diffs.size()) + " mismatching entries");
    }
    out << "OK: all factor sets agree\n";
    return kExitOk;
}

int cmd_bench(const BenchArgs& args, unsigned threads, std::ostream& out) {
    if (args.sizes.empty()) {
        throw UsageError("--sizes needs at least one value");
    }
    SweepConfig config;
    config.sizes = args.sizes;
    config.bit_size = args.bits;
    config.num_weak = args.weak;
    config.seed = args.seed;
    config.timing = {.threads = threads, .repeats = args.repeats};
    for (const auto m : args.sizes) {
        if (args.weak > m) {
            throw UsageError("--weak exceeds size " + std::to_string(m));
        }
    }
    if (args.weak % 2 != 0 || args.bits < kMinDatasetBits || args.bits % 2 != 0) {
        throw UsageError("--weak must be even and --bits even and >= " + std::to_string(kMinDatasetBits));
    }

    const auto [binary, remainder] = run_sweep(config, [&](const std::string& line) { out << line << '\n'; });
    if (threads > 1) {
        out << "note: timings taken with --threads " << threads << "\n";
    }

    std::ostringstream timing;
    const TimingSeries both[] = {binary, remainder};
    write_timing_csv(timing, both);
    write_text(args.out, timing.str(), out);

    const SpeedupSeries speedup = speedup_series(binary, remainder);
    if (!args.speedup_out.empty()) {
        std::ostringstream text;
        write_speedup_csv(text, speedup);
        write_text(args.speedup_out, text.str(), out);
    }
    out << "mean speedup (remainder / binary): " << speedup.mean_ratio << '\n';
    return kExitOk;
}

int cmd_fit(const FitArgs& args, std::ostream& out) {
    std::ifstream in(args.in);
    if (!in) {
        throw std::runtime_error("cannot open " + args.in);
    }
    const auto series = read_timing_csv(in, args.in);

    std::vector<std::pair<TimingSeries, ScalingFit>> fits;
    for (const auto& s : series) {
        try {
            fits.emplace_back(s, fit_series(s, args.min_m));
        } catch (const std::invalid_argument& e) {
            throw UsageError(std::string(to_string(s.algorithm)) + ": " + e.what());
        }
    }
    std::ostringstream text;
    write_fit_csv(text, fits);
    write_text(args.out, text.str(), out);

    if (!args.speedup_out.empty()) {
        const TimingSeries* binary = nullptr;
        const TimingSeries* remainder = nullptr;
        for (const auto& s : series) {
            (s.algorithm == Algorithm::binary_tree ? binary : remainder) = &s;
        }
        if (binary == nullptr || remainder == nullptr || series.size() != 2) {
            throw UsageError("speedup needs exactly one binary_tree and one remainder_tree series");
        }
        std::ostringstream speedup;
        write_speedup_csv(speedup, speedup_series(*binary, *remainder));
        write_text(args.speedup_out, speedup.str(), out);
    }
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Batch GCD toolkit: find RSA moduli that share prime factors", "batchgcd"};
    app.require_subcommand(1);
    unsigned threads = 1;
    app.add_option("--threads", threads, "Worker threads for tree levels and enumeration")
        ->check(CLI::Range(1U, 1024U));

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "Write a synthetic modulus set and its .truth file");
    generate->add_option("--count", gen.count, "Number of moduli");
    generate->add_option("--bits", gen.bits, "Bits per modulus")->capture_default_str();
    generate->add_option("--weak", gen.weak, "Number of weak moduli (even)")->capture_default_str();
    generate->add_option("--seed", gen.seed, "Generator seed")->capture_default_str();
    generate->add_option("--out", gen.out, "Dataset path")->required();
    generate->add_option("--adversarial", gen.adversarial, "double_shared | duplicate_modulus");

    RunArgs run;
    auto* run_cmd = app.add_subcommand("run", "Run one algorithm and write a JSON result");
    run_cmd->add_option("--algo", run.algo, "Algorithm")
        ->required()
        ->check(CLI::IsMember({"binary-tree", "remainder-tree", "naive"}));
    run_cmd->add_option("--in", run.in, "Dataset path")->required();
    run_cmd->add_option("--out", run.out, "Result path, '-' for stdout")->capture_default_str();
    run_cmd->add_flag("--full", run.full, "Include coprime entries");
    run_cmd->add_flag("--force", run.force, "Allow the naive algorithm on large sets");
    run_cmd->add_flag("--emit-b", run.emit_b, "Include the aggregate divisor product B");
    run_cmd->add_flag("--skip-leaf-divisors", run.skip_leaf_divisors,
                      "Keep leaf-level GCDs out of B (binary-tree only)");

    VerifyArgs verify;
    auto* verify_cmd = app.add_subcommand("verify", "Cross-check all algorithms and the ground truth");
    verify_cmd->add_option("--in", verify.in, "Dataset path")->required();
    verify_cmd->add_flag("--skip-naive", verify.skip_naive, "Do not run the all-pairs oracle");
    verify_cmd->add_flag("--force", verify.force, "Run the oracle even on large sets");

    BenchArgs bench;
    auto* bench_cmd = app.add_subcommand("bench", "Time both tree algorithms over a size sweep");
    bench_cmd->add_option("--sizes", bench.sizes, "Comma-separated modulus counts")->required()->delimiter(',');
    bench_cmd->add_option("--bits", bench.bits, "Bits per modulus")->capture_default_str();
    bench_cmd->add_option("--weak", bench.weak, "Weak moduli per dataset")->capture_default_str();
    bench_cmd->add_option("--seed", bench.seed, "Dataset seed")->capture_default_str();
    bench_cmd->add_option("--repeats", bench.repeats, "Runs per measurement (median)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    bench_cmd->add_option("--out", bench.out, "Timing CSV path, '-' for stdout")->required();
    bench_cmd->add_option("--speedup-out", bench.speedup_out, "Speedup CSV path");

    FitArgs fit;
    auto* fit_cmd = app.add_subcommand("fit", "Fit x^a + b*x + c to a timing CSV");
    fit_cmd->add_option("--in", fit.in, "Timing CSV path")->required();
    fit_cmd->add_option("--min-m", fit.min_m, "Ignore samples below this M")->capture_default_str();
    fit_cmd->add_option("--out", fit.out, "Fit CSV path, '-' for stdout")->required();
    fit_cmd->add_option("--speedup-out", fit.speedup_out, "Speedup CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*generate) {
            return cmd_generate(gen, out);
        }
        if (*run_cmd) {
            return cmd_run(run, threads, out);
        }
        if (*verify_cmd) {
            return cmd_verify(verify, threads, out);
        }
        if (*bench_cmd) {
            return cmd_bench(bench, threads, out);
        }
        return cmd_fit(fit, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const MismatchError& e) {
        err << "verification failed: " << e.what() << '\n';
        return kExitMismatch;
    } catch (const VerificationError& e) {
        err << "verification failed: " << e.what() << '\n';
        return kExitMismatch;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    }
}

}  // namespace batchgcd::cli
