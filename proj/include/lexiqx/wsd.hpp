#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lexiqx/lexicon.hpp"
#include "lexiqx/segmenter.hpp"
#include "lexiqx/text.hpp"

namespace lexiqx {

/// Which glosses make up a synset's extended gloss.
enum class GlossSource { gloss, examples, hypernyms, hyponyms };

struct RelatednessConfig {
    /// Odd; counts the target plus the open-class words on either side.
    int window_size = 3;
    std::set<GlossSource> extension = {GlossSource::gloss, GlossSource::examples, GlossSource::hypernyms,
                                       GlossSource::hyponyms};
    /// When no context sense relates to any candidate, assume the first
    /// sense (status first_sense_fallback) instead of leaving the word
    /// unresolved (status NR).
    bool first_sense_fallback = true;

    /// Throws ConfigError for an even or non-positive window or an empty
    /// extension set.
    void validate() const;
};

/// Maximal-overlap score between two texts split into segments of words.
/// Repeatedly removes the longest phrase common to both sides (ties: the
/// lexicographically smallest phrase, then its first occurrence on each
/// side) and adds its length squared. Phrases never cross a segment
/// boundary. Symmetric in its arguments.
std::uint64_t phrase_overlap_score(std::vector<std::vector<std::string>> a,
                                   std::vector<std::vector<std::string>> b);

/// Content words of `text` in order: lowercased, punctuation-split, with
/// function words dropped.
std::vector<std::string> content_words(std::string_view text, const StopList& stop = StopList::english());

/// Adapted Lesk relatedness over extended glosses. Memoizes per-synset
/// glosses and per-pair scores; safe to share between threads.
class AdaptedLesk {
  public:
    explicit AdaptedLesk(const LexicalGraph& graph, RelatednessConfig config = {},
                         const StopList& stop = StopList::english());
    ~AdaptedLesk();
    AdaptedLesk(const AdaptedLesk&) = delete;
    AdaptedLesk& operator=(const AdaptedLesk&) = delete;

    double operator()(SynsetIndex a, SynsetIndex b) const;

    /// Segments (content words only) of the extended gloss of `s`.
    std::vector<std::vector<std::string>> extended_gloss(SynsetIndex s) const;

    const LexicalGraph& graph() const noexcept { return graph_; }
    const RelatednessConfig& config() const noexcept { return config_; }

  private:
    struct Cache;

    const LexicalGraph& graph_;
    RelatednessConfig config_;
    const StopList& stop_;
    std::unique_ptr<Cache> cache_;
};

/// Uncached single comparison.
double adapted_lesk(const LexicalGraph& graph, SynsetIndex a, SynsetIndex b, const RelatednessConfig& config = {});

enum class SenseStatus { disambiguated, first_sense_fallback, ND, NR, O, IT, MW };

std::string_view to_string(SenseStatus status) noexcept;
std::optional<SenseStatus> parse_sense_status(std::string_view name) noexcept;

struct SenseAnnotation {
    int token_index = 0;
    std::string surface;
    /// Base form found in the graph (lowercased surface when none was found).
    std::string lemma;
    std::optional<PartOfSpeech> pos;
    /// Present exactly when status is disambiguated or first_sense_fallback.
    std::optional<std::string> synset_id;
    SenseStatus status = SenseStatus::ND;
    /// Relatedness mass of the chosen sense over the context window.
    double score = 0.0;

    bool has_sense() const noexcept { return synset_id.has_value(); }
};

/// All-words disambiguation of every concept of the query. Only open-class
/// tokens occupy window positions.
std::vector<SenseAnnotation> disambiguate_all_words(const RoleTaggedQuery& query, const AdaptedLesk& lesk);
std::vector<SenseAnnotation> disambiguate_all_words(const RoleTaggedQuery& query, const LexicalGraph& graph,
                                                    const RelatednessConfig& config = {});

}  // namespace lexiqx
