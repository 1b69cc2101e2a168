#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "lexiqx/lexicon.hpp"
#include "lexiqx/segmenter.hpp"
#include "lexiqx/wsd.hpp"

namespace lexiqx {

enum class ExpansionPool { synonym, hypernym, hyponym, coordinate };

inline constexpr ExpansionPool all_pools[] = {ExpansionPool::synonym, ExpansionPool::hypernym,
                                              ExpansionPool::hyponym, ExpansionPool::coordinate};

/// "syn", "hyper", "hypo", "coord"
std::string_view to_string(ExpansionPool pool) noexcept;
/// Accepts the short names above and the long enum names.
std::optional<ExpansionPool> parse_pool(std::string_view name) noexcept;

/// A CoI or DC concept with the synset chosen for it.
struct BaseTerm {
    std::string term;
    std::string lemma;
    RoleType role = RoleType::CoI;
    int token_index = 0;
    SynsetIndex synset = 0;
};

std::vector<BaseTerm> select_base_terms(const RoleTaggedQuery& query, const std::vector<SenseAnnotation>& senses,
                                        const LexicalGraph& graph);

struct ExpansionCandidate {
    /// Lowercase, underscore-joined when multiword.
    std::string term;
    std::string stem;
    ExpansionPool source_relation = ExpansionPool::synonym;
    std::set<std::string> source_base_terms;
    /// Synsets the term was reached through, sorted.
    std::vector<SynsetIndex> source_synsets;
    double avg_relatedness = 0.0;
};

struct PoolConfig {
    /// Hypernym/hyponym traversal depth; unset means the full closure.
    std::optional<int> max_depth;
};

/// Synsets contributing terms for one base synset. Synonym: the synset
/// itself. Hypernym/hyponym: the closure upward/downward, excluding the
/// start. Coordinate: the siblings under each direct hypernym.
std::vector<SynsetIndex> pool_synsets(const LexicalGraph& graph, SynsetIndex base, ExpansionPool pool,
                                      const PoolConfig& config = {});

/// Every lemma of every contributing synset, with original query terms
/// (case- or stem-identical) removed and one entry per stem.
std::vector<ExpansionCandidate> build_pool(const std::vector<BaseTerm>& bases, const LexicalGraph& graph,
                                           ExpansionPool pool, const RoleTaggedQuery& original,
                                           const PoolConfig& config = {});

/// Scores each candidate by its mean relatedness to the base senses (best
/// source synset kept) and sorts descending, ties by term.
std::vector<ExpansionCandidate> rank_pool(std::vector<ExpansionCandidate> pool, const std::vector<BaseTerm>& bases,
                                          const AdaptedLesk& lesk);

struct ExpansionTerm {
    std::string term;
    double score = 0.0;

    friend bool operator==(const ExpansionTerm&, const ExpansionTerm&) = default;
};

struct ExpandedQuery {
    std::string qid;
    ExpansionPool pool = ExpansionPool::synonym;
    std::vector<Concept> original;
    /// Every term carries role EC.
    std::vector<ExpansionTerm> expansion;
};

/// First min(k, size) candidates. Throws ConfigError for k < 1.
ExpandedQuery take_top_k(const RoleTaggedQuery& query, ExpansionPool pool,
                         const std::vector<ExpansionCandidate>& ranked, int k = 5);

struct ExpansionConfig {
    ExpansionPool pool = ExpansionPool::synonym;
    int top_k = 5;
    PoolConfig traversal;
};

ExpandedQuery expand_query(const RoleTaggedQuery& query, const std::vector<SenseAnnotation>& senses,
                           const AdaptedLesk& lesk, const ExpansionConfig& config);

/// {qid, pool, original: [{term, role}], expansion: [{term, role: "EC", score}]}
nlohmann::ordered_json to_json(const ExpandedQuery& q);
ExpandedQuery expanded_query_from_json(const nlohmann::json& j);

}  // namespace lexiqx
