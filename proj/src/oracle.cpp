#include "batchgcd/oracle.hpp"

#include <algorithm>
#include <map>

namespace batchgcd {

PairwiseResult pairwise_gcd_all(std::span<const Natural> moduli) {
    PairwiseResult result;
    for (std::size_t i = 0; i < moduli.size(); ++i) {
        for (std::size_t j = i + 1; j < moduli.size(); ++j) {
            Natural g = gcd(moduli[i], moduli[j]);
            if (g > 1) {
                result.hits.push_back({i, j, std::move(g)});
            }
        }
    }
    return result;
}

FactorMap expected_factor_map(const PairwiseResult& result, std::span<const Natural> moduli) {
    std::map<std::size_t, std::vector<Natural>> values;
    for (const auto& hit : result.hits) {
        values[hit.index_i].push_back(hit.gcd);
        values[hit.index_j].push_back(hit.gcd);
    }

    FactorMap out;
    for (auto& [index, set] : values) {
        bool changed = true;
        while (changed) {
            changed = false;
            std::sort(set.begin(), set.end());
            set.erase(std::unique(set.begin(), set.end()), set.end());
            for (auto& x : set) {
                for (const auto& y : set) {
                    if (x != y && x % y == 0) {
                        x /= y;
                        changed = true;
                        break;
                    }
                }
                if (changed) {
                    break;
                }
            }
        }
        const bool unresolvable = set.size() == 1 && set.front() == moduli[index];
        out[index] = SharedFactors{set, unresolvable};
    }
    return out;
}

std::vector<std::pair<std::size_t, std::size_t>> duplicate_pairs(const PairwiseResult& result,
                                                                 std::span<const Natural> moduli) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (const auto& hit : result.hits) {
        if (hit.gcd == moduli[hit.index_i] && hit.gcd == moduli[hit.index_j]) {
            out.emplace_back(hit.index_i, hit.index_j);
        }
    }
    return out;
}

}  // namespace batchgcd
