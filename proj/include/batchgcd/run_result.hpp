#pragma once

#include "batchgcd/bigint.hpp"
#include "batchgcd/factor_report.hpp"

#include <json.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace batchgcd {

enum class EntryStatus { coprime, factored, unresolved_duplicate, unresolved };

struct RunEntry {
    std::size_t index = 0;
    EntryStatus status = EntryStatus::coprime;
    std::vector<Natural> factors;

    bool operator==(const RunEntry&) const = default;
};

/// Serializable outcome of one algorithm run:
///   {"algorithm": str, "count": int,
///    "entries": [{"index": int, "status": str, "factors": [hex...]}],
///    "duplicates": [[i, j]...]}
/// plus an optional "B" (hex) when requested.
struct RunResult {
    std::string algorithm;
    std::size_t count = 0;
    std::vector<RunEntry> entries;
    std::vector<std::pair<std::size_t, std::size_t>> duplicates;
    std::optional<Natural> aggregate_b;

    bool operator==(const RunResult&) const = default;
};

/// Coprime entries are dropped unless `full`.
RunResult make_run_result(const std::string& algorithm, const FactorReport& report, bool full, bool emit_b);

/// Same form for the brute-force oracle's map.
RunResult make_run_result(const std::string& algorithm, std::size_t count, const FactorMap& factors,
                          const std::vector<std::pair<std::size_t, std::size_t>>& duplicates, bool full);

std::string to_string(EntryStatus status);
EntryStatus parse_entry_status(const std::string& name);

nlohmann::json to_json(const RunResult& result);

/// Throws std::invalid_argument on schema violations.
RunResult run_result_from_json(const nlohmann::json& doc);

}  // namespace batchgcd
