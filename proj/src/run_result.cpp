#include "batchgcd/run_result.hpp"

#include <algorithm>
#include <stdexcept>

namespace batchgcd {

std::string to_string(EntryStatus status) {
    switch (status) {
        case EntryStatus::coprime:
            return "coprime";
        case EntryStatus::factored:
            return "factored";
        case EntryStatus::unresolved_duplicate:
            return "unresolved_duplicate";
        case EntryStatus::unresolved:
            return "unresolved";
    }
    return "unknown";
}

EntryStatus parse_entry_status(const std::string& name) {
    for (const auto status : {EntryStatus::coprime, EntryStatus::factored, EntryStatus::unresolved_duplicate,
                              EntryStatus::unresolved}) {
        if (to_string(status) == name) {
            return status;
        }
    }
    throw std::invalid_argument("unknown entry status '" + name + "'");
}

RunResult make_run_result(const std::string& algorithm, const FactorReport& report, bool full, bool emit_b) {
    RunResult out;
    out.algorithm = algorithm;
    out.count = report.per_modulus.size();
    out.duplicates = report.duplicates;
    if (emit_b) {
        out.aggregate_b = report.aggregate_b;
    }

    std::vector<bool> duplicated(report.per_modulus.size(), false);
    for (const auto& [i, j] : report.duplicates) {
        duplicated[i] = true;
        duplicated[j] = true;
    }
    for (std::size_t i = 0; i < report.per_modulus.size(); ++i) {
        const auto& entry = report.per_modulus[i];
        RunEntry run_entry{i, EntryStatus::coprime, entry.factors};
        switch (entry.status) {
            case FactorStatus::coprime:
                if (!full) {
                    continue;
                }
                break;
            case FactorStatus::factored:
                run_entry.status = EntryStatus::factored;
                break;
            case FactorStatus::unresolved:
                run_entry.status = duplicated[i] ? EntryStatus::unresolved_duplicate : EntryStatus::unresolved;
                break;
        }
        out.entries.push_back(std::move(run_entry));
    }
    return out;
}

RunResult make_run_result(const std::string& algorithm, std::size_t count, const FactorMap& factors,
                          const std::vector<std::pair<std::size_t, std::size_t>>& duplicates, bool full) {
    RunResult out;
    out.algorithm = algorithm;
    out.count = count;
    out.duplicates = duplicates;
    for (std::size_t i = 0; i < count; ++i) {
        const auto it = factors.find(i);
        if (it == factors.end()) {
            if (full) {
                out.entries.push_back({i, EntryStatus::coprime, {}});
            }
            continue;
        }
        if (it->second.unresolvable) {
            out.entries.push_back({i, EntryStatus::unresolved_duplicate, {}});
        } else {
            out.entries.push_back({i, EntryStatus::factored, it->second.factors});
        }
    }
    return out;
}

nlohmann::json to_json(const RunResult& result) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& entry : result.entries) {
        nlohmann::json factors = nlohmann::json::array();
        for (const auto& f : entry.factors) {
            factors.push_back(to_hex(f));
        }
        entries.push_back({{"index", entry.index}, {"status", to_string(entry.status)}, {"factors", factors}});
    }
    nlohmann::json duplicates = nlohmann::json::array();
    for (const auto& [i, j] : result.duplicates) {
        duplicates.push_back({i, j});
    }
    nlohmann::json doc = {
        {"algorithm", result.algorithm},
        {"count", result.count},
        {"entries", entries},
        {"duplicates", duplicates},
    };
    if (result.aggregate_b) {
        doc["B"] = to_hex(*result.aggregate_b);
    }
    return doc;
}

RunResult run_result_from_json(const nlohmann::json& doc) {
    try {
        RunResult out;
        out.algorithm = doc.at("algorithm").get<std::string>();
        out.count = doc.at("count").get<std::size_t>();
        for (const auto& entry : doc.at("entries")) {
            RunEntry parsed;
            parsed.index = entry.at("index").get<std::size_t>();
            parsed.status = parse_entry_status(entry.at("status").get<std::string>());
            for (const auto& f : entry.at("factors")) {
                parsed.factors.push_back(from_hex(f.get<std::string>()));
            }
            if (parsed.index >= out.count) {
                throw std::invalid_argument("entry index " + std::to_string(parsed.index) + " out of range");
            }
            out.entries.push_back(std::move(parsed));
        }
        for (const auto& pair : doc.at("duplicates")) {
            if (!pair.is_array() || pair.size() != 2) {
                throw std::invalid_argument("duplicates must be [i, j] pairs");
            }
            out.duplicates.emplace_back(pair[0].get<std::size_t>(), pair[1].get<std::size_t>());
        }
        if (doc.contains("B")) {
            out.aggregate_b = from_hex(doc.at("B").get<std::string>());
        }
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed run result: ") + e.what());
    }
}

}  // namespace batchgcd
