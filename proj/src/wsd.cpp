#include "lexiqx/wsd.hpp"

#include <algorithm>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

#include "lexiqx/error.hpp"

namespace lexiqx {

void RelatednessConfig::validate() const {
    if (window_size < 1 || window_size % 2 == 0) {
        throw ConfigError("window size must be a positive odd number, got " + std::to_string(window_size));
    }
    if (extension.empty()) throw ConfigError("gloss extension set must not be empty");
}

namespace {

using WordId = std::uint32_t;
using Segment = std::vector<WordId>;

struct Occurrence {
    std::size_t segment = 0;
    std::size_t offset = 0;
};

// Orders phrases word by word using `word_less`, then by length.
template <typename WordLess>
bool phrase_less(std::span<const WordId> a, std::span<const WordId> b, const WordLess& word_less) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), word_less);
}

std::optional<Occurrence> first_occurrence(const std::vector<Segment>& side, std::span<const WordId> phrase) {
    for (std::size_t s = 0; s < side.size(); ++s) {
        const auto& seg = side[s];
        if (seg.size() < phrase.size()) continue;
        auto it = std::search(seg.begin(), seg.end(), phrase.begin(), phrase.end());
        if (it != seg.end()) return Occurrence{s, static_cast<std::size_t>(it - seg.begin())};
    }
    return std::nullopt;
}

void cut(std::vector<Segment>& side, Occurrence at, std::size_t length) {
    Segment& seg = side[at.segment];
    Segment tail(seg.begin() + static_cast<std::ptrdiff_t>(at.offset + length), seg.end());
    seg.resize(at.offset);
    if (!tail.empty()) side.push_back(std::move(tail));
    if (seg.empty()) side.erase(side.begin() + static_cast<std::ptrdiff_t>(at.segment));
}

template <typename WordLess>
std::uint64_t overlap_core(std::vector<Segment> a, std::vector<Segment> b, const WordLess& word_less) {
    std::uint64_t score = 0;
    std::vector<std::uint32_t> prev, cur;
    for (;;) {
        std::size_t best_len = 0;
        std::span<const WordId> best;
        for (const auto& sa : a) {
            for (const auto& sb : b) {
                prev.assign(sb.size() + 1, 0);
                cur.assign(sb.size() + 1, 0);
                for (std::size_t i = 1; i <= sa.size(); ++i) {
                    for (std::size_t j = 1; j <= sb.size(); ++j) {
                        if (sa[i - 1] != sb[j - 1]) {
                            cur[j] = 0;
                            continue;
                        }
                        std::uint32_t len = prev[j - 1] + 1;
                        cur[j] = len;
                        if (len < best_len) continue;
                        std::span<const WordId> phrase(sa.data() + (i - len), len);
                        if (len > best_len || phrase_less(phrase, best, word_less)) {
                            best_len = len;
                            best = phrase;
                        }
                    }
                    std::swap(prev, cur);
                }
            }
        }
        if (best_len == 0) return score;
        score += static_cast<std::uint64_t>(best_len) * best_len;
        Segment phrase(best.begin(), best.end());
        auto in_a = first_occurrence(a, phrase);
        auto in_b = first_occurrence(b, phrase);
        cut(a, *in_a, phrase.size());
        cut(b, *in_b, phrase.size());
    }
}

bool share_any(const std::vector<WordId>& sorted_a, const std::vector<WordId>& sorted_b) {
    auto i = sorted_a.begin();
    auto j = sorted_b.begin();
    while (i != sorted_a.end() && j != sorted_b.end()) {
        if (*i == *j) return true;
        if (*i < *j) {
            ++i;
        } else {
            ++j;
        }
    }
    return false;
}

std::vector<std::string> split_definitions(std::string_view gloss) {
    std::vector<std::string> out;
    for (auto part : split(gloss, ';')) {
        if (!trim(part).empty()) out.emplace_back(part);
    }
    return out;
}

}  // namespace

std::vector<std::string> content_words(std::string_view text, const StopList& stop) {
    std::vector<std::string> out;
    for (auto& w : word_tokens(text)) {
        if (!stop.contains(w)) out.push_back(std::move(w));
    }
    return out;
}

std::uint64_t phrase_overlap_score(std::vector<std::vector<std::string>> a, std::vector<std::vector<std::string>> b) {
    // Ids follow string order, so comparing ids compares words.
    std::vector<std::string> words;
    for (const auto* side : {&a, &b}) {
        for (const auto& seg : *side) words.insert(words.end(), seg.begin(), seg.end());
    }
    std::sort(words.begin(), words.end());
    words.erase(std::unique(words.begin(), words.end()), words.end());
    auto to_ids = [&words](const std::vector<std::vector<std::string>>& side) {
        std::vector<Segment> out;
        for (const auto& seg : side) {
            if (seg.empty()) continue;
            Segment ids;
            for (const auto& w : seg) {
                ids.push_back(static_cast<WordId>(std::lower_bound(words.begin(), words.end(), w) - words.begin()));
            }
            out.push_back(std::move(ids));
        }
        return out;
    };
    return overlap_core(to_ids(a), to_ids(b), std::less<WordId>{});
}

// --- AdaptedLesk ------------------------------------------------------------------

struct AdaptedLesk::Cache {
    struct Gloss {
        std::vector<Segment> segments;
        std::vector<WordId> vocabulary;  // sorted, unique
    };

    std::shared_mutex mutex;
    std::unordered_map<std::string, WordId> ids;
    std::vector<std::string> words;
    std::unordered_map<SynsetIndex, std::shared_ptr<const Gloss>> glosses;
    std::unordered_map<std::uint64_t, std::uint64_t> scores;
};

AdaptedLesk::AdaptedLesk(const LexicalGraph& graph, RelatednessConfig config, const StopList& stop)
    : graph_(graph), config_(std::move(config)), stop_(stop), cache_(std::make_unique<Cache>()) {
    config_.validate();
}

AdaptedLesk::~AdaptedLesk() = default;

std::vector<std::vector<std::string>> AdaptedLesk::extended_gloss(SynsetIndex s) const {
    std::vector<std::vector<std::string>> out;
    auto add = [&](std::string_view text) {
        auto words = content_words(text, stop_);
        if (!words.empty()) out.push_back(std::move(words));
    };
    const Synset& synset = graph_.at(s);
    if (config_.extension.count(GlossSource::gloss)) {
        for (const auto& d : split_definitions(synset.gloss)) add(d);
    }
    if (config_.extension.count(GlossSource::examples)) {
        for (const auto& e : synset.examples) add(e);
    }
    if (config_.extension.count(GlossSource::hypernyms)) {
        for (SynsetIndex h : graph_.hypernyms(s)) {
            for (const auto& d : split_definitions(graph_.at(h).gloss)) add(d);
        }
    }
    if (config_.extension.count(GlossSource::hyponyms)) {
        for (SynsetIndex h : graph_.hyponyms(s)) {
            for (const auto& d : split_definitions(graph_.at(h).gloss)) add(d);
        }
    }
    return out;
}

double AdaptedLesk::operator()(SynsetIndex a, SynsetIndex b) const {
    auto& c = *cache_;
    const std::uint64_t key = (static_cast<std::uint64_t>(std::min(a, b)) << 32) | std::max(a, b);
    {
        std::shared_lock lock(c.mutex);
        if (auto it = c.scores.find(key); it != c.scores.end()) return static_cast<double>(it->second);
    }

    auto gloss_of = [&](SynsetIndex s) -> std::shared_ptr<const Cache::Gloss> {
        {
            std::shared_lock lock(c.mutex);
            if (auto it = c.glosses.find(s); it != c.glosses.end()) return it->second;
        }
        auto text = extended_gloss(s);
        std::unique_lock lock(c.mutex);
        if (auto it = c.glosses.find(s); it != c.glosses.end()) return it->second;
        auto g = std::make_shared<Cache::Gloss>();
        for (const auto& seg : text) {
            Segment ids;
            for (const auto& w : seg) {
                auto [it, inserted] = c.ids.emplace(w, static_cast<WordId>(c.words.size()));
                if (inserted) c.words.push_back(w);
                ids.push_back(it->second);
            }
            g->vocabulary.insert(g->vocabulary.end(), ids.begin(), ids.end());
            g->segments.push_back(std::move(ids));
        }
        std::sort(g->vocabulary.begin(), g->vocabulary.end());
        g->vocabulary.erase(std::unique(g->vocabulary.begin(), g->vocabulary.end()), g->vocabulary.end());
        c.glosses.emplace(s, g);
        return g;
    };

    auto ga = gloss_of(a);
    auto gb = gloss_of(b);
    std::uint64_t score = 0;
    if (share_any(ga->vocabulary, gb->vocabulary)) {
        // Snapshot the words the two glosses use so tie-breaks compare text.
        std::unordered_map<WordId, std::string> text;
        {
            std::shared_lock lock(c.mutex);
            for (const auto* g : {ga.get(), gb.get()}) {
                for (WordId id : g->vocabulary) text.emplace(id, c.words[id]);
            }
        }
        auto word_less = [&text](WordId x, WordId y) { return x != y && text.at(x) < text.at(y); };
        score = overlap_core(ga->segments, gb->segments, word_less);
    }
    std::unique_lock lock(c.mutex);
    c.scores.emplace(key, score);
    return static_cast<double>(score);
}

double adapted_lesk(const LexicalGraph& graph, SynsetIndex a, SynsetIndex b, const RelatednessConfig& config) {
    auto lesk = AdaptedLesk(graph, config);
    return lesk(a, b);
}

// --- all-words disambiguation ---------------------------------------------------------

std::string_view to_string(SenseStatus status) noexcept {
    switch (status) {
        case SenseStatus::disambiguated: return "disambiguated";
        case SenseStatus::first_sense_fallback: return "first_sense_fallback";
        case SenseStatus::ND: return "#ND";
        case SenseStatus::NR: return "#NR";
        case SenseStatus::O: return "#o";
        case SenseStatus::IT: return "#IT";
        case SenseStatus::MW: return "#MW";
    }
    return "?";
}

std::optional<SenseStatus> parse_sense_status(std::string_view name) noexcept {
    for (auto s : {SenseStatus::disambiguated, SenseStatus::first_sense_fallback, SenseStatus::ND, SenseStatus::NR,
                   SenseStatus::O, SenseStatus::IT, SenseStatus::MW}) {
        if (to_string(s) == name) return s;
    }
    return std::nullopt;
}

namespace {

struct Target {
    std::size_t concept_pos;
    std::vector<SynsetIndex> senses;
};

}  // namespace

std::vector<SenseAnnotation> disambiguate_all_words(const RoleTaggedQuery& query, const AdaptedLesk& lesk) {
    const LexicalGraph& g = lesk.graph();
    const RelatednessConfig& cfg = lesk.config();
    std::vector<SenseAnnotation> out;
    std::vector<Target> window;  // open-class tokens in query order

    for (std::size_t i = 0; i < query.concepts.size(); ++i) {
        const Concept& c = query.concepts[i];
        SenseAnnotation a;
        a.token_index = c.index;
        a.surface = c.surface;
        a.lemma = underscore_form(c.surface);
        const WordClass wc = reduce_pos_tag(c.pos_tag);
        if (trim(c.surface).empty()) {
            a.status = SenseStatus::MW;
        } else if (wc == WordClass::invalid) {
            a.status = SenseStatus::IT;
        } else if (wc == WordClass::closed) {
            a.status = SenseStatus::O;
        } else {
            auto tagged = *to_part_of_speech(wc);
            std::vector<PartOfSpeech> order = {tagged};
            for (auto p : all_parts_of_speech) {
                if (p != tagged) order.push_back(p);
            }
            Target t{i, {}};
            for (auto p : order) {
                auto forms = g.base_forms(c.surface, p);
                if (forms.empty()) continue;
                a.lemma = forms.front();
                a.pos = p;
                auto senses = g.senses(forms.front(), p);
                t.senses.assign(senses.begin(), senses.end());
                break;
            }
            a.status = t.senses.empty() ? SenseStatus::ND : SenseStatus::disambiguated;
            window.push_back(std::move(t));
        }
        out.push_back(std::move(a));
    }

    const std::ptrdiff_t half = cfg.window_size / 2;
    for (std::size_t w = 0; w < window.size(); ++w) {
        const Target& target = window[w];
        if (target.senses.empty()) continue;
        SenseAnnotation& a = out[target.concept_pos];

        std::size_t best = 0;
        double best_score = -1.0;
        for (std::size_t k = 0; k < target.senses.size(); ++k) {
            double total = 0.0;
            for (std::ptrdiff_t off = -half; off <= half; ++off) {
                std::ptrdiff_t pos = static_cast<std::ptrdiff_t>(w) + off;
                if (off == 0 || pos < 0 || pos >= static_cast<std::ptrdiff_t>(window.size())) continue;
                double strongest = 0.0;
                for (SynsetIndex other : window[static_cast<std::size_t>(pos)].senses) {
                    strongest = std::max(strongest, lesk(target.senses[k], other));
                }
                total += strongest;
            }
            // Strict comparison keeps the more frequent sense on ties.
            if (total > best_score) {
                best_score = total;
                best = k;
            }
        }

        a.score = best_score;
        if (target.senses.size() == 1 || best_score > 0.0) {
            a.status = SenseStatus::disambiguated;
            a.synset_id = g.at(target.senses[best]).id;
        } else if (cfg.first_sense_fallback) {
            a.status = SenseStatus::first_sense_fallback;
            a.synset_id = g.at(target.senses.front()).id;
        } else {
            a.status = SenseStatus::NR;
        }
    }
    return out;
}

std::vector<SenseAnnotation> disambiguate_all_words(const RoleTaggedQuery& query, const LexicalGraph& graph,
                                                    const RelatednessConfig& config) {
    AdaptedLesk lesk(graph, config);
    return disambiguate_all_words(query, lesk);
}

}  // namespace lexiqx
