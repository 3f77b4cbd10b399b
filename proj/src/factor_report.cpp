#include "batchgcd/factor_report.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace batchgcd {

namespace {

void sort_unique(std::vector<Natural>& values) {
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
}

std::vector<Natural> recovered_factors(const FactorReport& report, std::size_t excluded_index) {
    std::vector<Natural> out;
    for (std::size_t i = 0; i < report.per_modulus.size(); ++i) {
        if (i == excluded_index || report.per_modulus[i].status != FactorStatus::factored) {
            continue;
        }
        out.insert(out.end(), report.per_modulus[i].factors.begin(), report.per_modulus[i].factors.end());
    }
    sort_unique(out);
    return out;
}

std::vector<Natural> dividing_factors(const Natural& modulus, std::span<const Natural> candidates) {
    std::vector<Natural> out;
    for (const auto& f : candidates) {
        if (f > 1 && f < modulus && mpz_divisible_p(modulus.get_mpz_t(), f.get_mpz_t())) {
            out.push_back(f);
        }
    }
    return out;
}

}  // namespace

std::size_t FactorReport::factored_count() const {
    return static_cast<std::size_t>(std::count_if(per_modulus.begin(), per_modulus.end(), [](const auto& e) {
        return e.status == FactorStatus::factored;
    }));
}

FactorReport classify_divisors(std::span<const Natural> moduli, std::span<const Natural> divisors) {
    FactorReport report;
    report.per_modulus.resize(moduli.size());
    for (std::size_t i = 0; i < moduli.size(); ++i) {
        auto& entry = report.per_modulus[i];
        const Natural& d = divisors[i];
        if (d == 1) {
            entry.status = FactorStatus::coprime;
        } else if (d == moduli[i]) {
            entry.status = FactorStatus::unresolved;
        } else {
            entry.status = FactorStatus::factored;
            entry.factors = {d};
        }
    }
    return report;
}

std::vector<Natural> resolve_full_modulus(std::size_t index, std::span<const Natural> moduli,
                                          const FactorReport& report) {
    return dividing_factors(moduli[index], recovered_factors(report, index));
}

std::vector<Natural> coprime_split(const Natural& modulus, std::span<const Natural> divisors) {
    std::vector<Natural> parts{modulus};
    Natural g;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& d : divisors) {
            for (std::size_t k = 0; k < parts.size(); ++k) {
                mpz_gcd(g.get_mpz_t(), parts[k].get_mpz_t(), d.get_mpz_t());
                if (g > 1 && g < parts[k]) {
                    Natural rest;
                    mpz_divexact(rest.get_mpz_t(), parts[k].get_mpz_t(), g.get_mpz_t());
                    parts[k] = g;
                    parts.push_back(std::move(rest));
                    changed = true;
                }
            }
        }
        // Parts split from different divisors may still share factors.
        for (std::size_t a = 0; a < parts.size() && !changed; ++a) {
            for (std::size_t b = a + 1; b < parts.size() && !changed; ++b) {
                mpz_gcd(g.get_mpz_t(), parts[a].get_mpz_t(), parts[b].get_mpz_t());
                if (g > 1 && parts[a] != parts[b]) {
                    const Natural left = parts[a];
                    const Natural right = parts[b];
                    parts.erase(parts.begin() + static_cast<std::ptrdiff_t>(b));
                    parts.erase(parts.begin() + static_cast<std::ptrdiff_t>(a));
                    for (const Natural& piece : {g, Natural(left / g), Natural(right / g)}) {
                        if (piece > 1) {
                            parts.push_back(piece);
                        }
                    }
                    changed = true;
                }
            }
        }
    }
    sort_unique(parts);
    return parts;
}

void resolve_unresolved(FactorReport& report, std::span<const Natural> moduli, GcdCounters* counters) {
    const auto pending = [&] {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < report.per_modulus.size(); ++i) {
            if (report.per_modulus[i].status == FactorStatus::unresolved) {
                out.push_back(i);
            }
        }
        return out;
    };
    const auto settle = [&](std::map<std::size_t, std::vector<Natural>>& found) {
        for (auto& [index, divisors] : found) {
            auto& entry = report.per_modulus[index];
            entry.status = FactorStatus::factored;
            entry.factors = coprime_split(moduli[index], divisors);
        }
        return !found.empty();
    };

    // A modulus whose primes are all shared with other unresolved moduli only
    // becomes divisible by a recovered factor once those are split, so
    // alternate divisibility passes with a pairwise pass until nothing moves.
    std::set<std::pair<std::size_t, std::size_t>> duplicates;
    for (;;) {
        std::vector<std::size_t> unresolved = pending();
        if (unresolved.empty()) {
            break;
        }
        // Every factored entry is a different modulus from every unresolved one.
        const std::vector<Natural> recovered = recovered_factors(report, moduli.size());
        std::map<std::size_t, std::vector<Natural>> found;
        for (const std::size_t u : unresolved) {
            auto divisors = dividing_factors(moduli[u], recovered);
            if (!divisors.empty()) {
                found[u] = std::move(divisors);
            }
        }
        if (settle(found)) {
            continue;
        }

        Natural g;
        for (std::size_t x = 0; x < unresolved.size(); ++x) {
            for (std::size_t y = x + 1; y < unresolved.size(); ++y) {
                const std::size_t u = unresolved[x];
                const std::size_t v = unresolved[y];
                if (duplicates.contains({u, v})) {
                    continue;
                }
                mpz_gcd(g.get_mpz_t(), moduli[u].get_mpz_t(), moduli[v].get_mpz_t());
                if (counters != nullptr) {
                    ++counters->resolution_gcds;
                }
                if (g == 1) {
                    continue;
                }
                if (g == moduli[u] && g == moduli[v]) {
                    duplicates.emplace(u, v);
                    continue;
                }
                if (g < moduli[u]) {
                    found[u].push_back(g);
                }
                if (g < moduli[v]) {
                    found[v].push_back(g);
                }
            }
        }
        if (!settle(found)) {
            break;
        }
    }

    for (const auto& [u, v] : duplicates) {
        if (report.per_modulus[u].status == FactorStatus::unresolved) {
            report.duplicates.emplace_back(u, v);
        }
    }
    std::sort(report.duplicates.begin(), report.duplicates.end());
}

FactorMap factor_map(const FactorReport& report, std::span<const Natural> moduli) {
    FactorMap out;
    for (std::size_t i = 0; i < report.per_modulus.size(); ++i) {
        const auto& entry = report.per_modulus[i];
        switch (entry.status) {
            case FactorStatus::coprime:
                break;
            case FactorStatus::factored: {
                SharedFactors shared{entry.factors, false};
                sort_unique(shared.factors);
                out[i] = std::move(shared);
                break;
            }
            case FactorStatus::unresolved:
                out[i] = SharedFactors{{moduli[i]}, true};
                break;
        }
    }
    return out;
}

FactorMap factor_map(const PlantedGroundTruth& truth, std::span<const Natural> moduli) {
    FactorMap out;
    for (const auto& pair : truth.weak_pairs) {
        const bool duplicate =
            pair.shared_prime == moduli[pair.index_a] && pair.shared_prime == moduli[pair.index_b];
        for (const std::size_t index : {pair.index_a, pair.index_b}) {
            auto& shared = out[index];
            shared.factors.push_back(pair.shared_prime);
            shared.unresolvable = shared.unresolvable || duplicate;
        }
    }
    for (auto& [index, shared] : out) {
        sort_unique(shared.factors);
    }
    return out;
}

std::string describe(const SharedFactors& factors) {
    std::ostringstream out;
    out << '{';
    for (std::size_t k = 0; k < factors.factors.size(); ++k) {
        out << (k == 0 ? "" : ", ") << to_hex(factors.factors[k]);
    }
    out << '}';
    if (factors.unresolvable) {
        out << " unresolvable";
    }
    return out.str();
}

std::vector<std::string> diff_factor_maps(const FactorMap& expected, const FactorMap& actual,
                                          const std::string& expected_label,
                                          const std::string& actual_label) {
    std::set<std::size_t> indices;
    for (const auto& [index, shared] : expected) {
        indices.insert(index);
    }
    for (const auto& [index, shared] : actual) {
        indices.insert(index);
    }

    const SharedFactors none;
    std::vector<std::string> out;
    for (const std::size_t index : indices) {
        const auto e = expected.find(index);
        const auto a = actual.find(index);
        const SharedFactors& want = e == expected.end() ? none : e->second;
        const SharedFactors& got = a == actual.end() ? none : a->second;
        if (want == got) {
            continue;
        }
        out.push_back("index " + std::to_string(index) + ": " + expected_label + " " + describe(want) + ", " +
                      actual_label + " " + describe(got));
    }
    return out;
}

}  // namespace batchgcd
