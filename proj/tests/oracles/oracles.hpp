#pragma once

// Slow, definitional re-implementations used to check the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace oracle {

using Words = std::vector<std::string>;
using Segments = std::vector<Words>;

struct Hit {
    std::size_t segment, offset;
};

inline bool find_phrase(const Segments& side, const Words& phrase, Hit& hit) {
    for (std::size_t s = 0; s < side.size(); ++s) {
        const auto& seg = side[s];
        for (std::size_t o = 0; o + phrase.size() <= seg.size(); ++o) {
            if (std::equal(phrase.begin(), phrase.end(), seg.begin() + static_cast<long>(o))) {
                hit = {s, o};
                return true;
            }
        }
    }
    return false;
}

inline void remove_phrase(Segments& side, Hit hit, std::size_t len) {
    Words& seg = side[hit.segment];
    Words before(seg.begin(), seg.begin() + static_cast<long>(hit.offset));
    Words after(seg.begin() + static_cast<long>(hit.offset + len), seg.end());
    side.erase(side.begin() + static_cast<long>(hit.segment));
    if (!after.empty()) side.push_back(after);
    if (!before.empty()) side.insert(side.begin() + static_cast<long>(hit.segment), before);
}

/// Enumerates every phrase of `a`, keeps those also in `b`, takes the
/// longest (then smallest) one, removes its first occurrence on each side
/// and repeats. Scores length squared.
inline std::uint64_t overlap(Segments a, Segments b) {
    std::uint64_t score = 0;
    for (;;) {
        Words best;
        for (const auto& seg : a) {
            for (std::size_t i = 0; i < seg.size(); ++i) {
                for (std::size_t j = i + 1; j <= seg.size(); ++j) {
                    Words phrase(seg.begin() + static_cast<long>(i), seg.begin() + static_cast<long>(j));
                    Hit ignored;
                    if (!find_phrase(b, phrase, ignored)) break;
                    if (phrase.size() > best.size() || (phrase.size() == best.size() && phrase < best)) best = phrase;
                }
            }
        }
        if (best.empty()) return score;
        score += best.size() * best.size();
        Hit ha, hb;
        find_phrase(a, best, ha);
        find_phrase(b, best, hb);
        remove_phrase(a, ha, best.size());
        remove_phrase(b, hb, best.size());
    }
}

/// Precision at every relevant rank, summed over the number of relevant documents.
inline double average_precision(const std::vector<std::string>& ranked, const std::set<std::string>& relevant) {
    if (relevant.empty()) return 0.0;
    double sum = 0.0;
    for (std::size_t k = 1; k <= ranked.size(); ++k) {
        if (!relevant.count(ranked[k - 1])) continue;
        std::size_t hits = 0;
        for (std::size_t i = 0; i < k; ++i) hits += relevant.count(ranked[i]);
        sum += static_cast<double>(hits) / static_cast<double>(k);
    }
    return sum / static_cast<double>(relevant.size());
}

/// Paired t statistic from the textbook formula: mean difference over its standard error.
inline double paired_t(const std::vector<double>& a, const std::vector<double>& b) {
    const double n = static_cast<double>(a.size());
    double mean = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) mean += a[i] - b[i];
    mean /= n;
    double ss = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) ss += (a[i] - b[i] - mean) * (a[i] - b[i] - mean);
    return mean / std::sqrt(ss / (n - 1.0) / n);
}

/// Transitive closure of a parent relation by repeated relaxation.
inline std::map<std::string, std::set<std::string>> ancestors(const std::map<std::string, std::vector<std::string>>& parents) {
    std::map<std::string, std::set<std::string>> reach;
    for (const auto& [id, ps] : parents) reach[id].insert(ps.begin(), ps.end());
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto& [id, set] : reach) {
            std::set<std::string> extra;
            for (const auto& p : set) {
                for (const auto& q : reach[p]) {
                    if (!set.count(q)) extra.insert(q);
                }
            }
            if (!extra.empty()) {
                set.insert(extra.begin(), extra.end());
                changed = true;
            }
        }
    }
    return reach;
}

}  // namespace oracle
