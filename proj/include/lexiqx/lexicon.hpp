#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lexiqx {

enum class PartOfSpeech : std::uint8_t { noun, verb, adjective, adverb };

inline constexpr PartOfSpeech all_parts_of_speech[] = {
    PartOfSpeech::noun, PartOfSpeech::verb, PartOfSpeech::adjective, PartOfSpeech::adverb};

/// 'n', 'v', 'a', 'r'
char pos_code(PartOfSpeech pos) noexcept;
std::optional<PartOfSpeech> pos_from_code(char code) noexcept;
std::string_view pos_name(PartOfSpeech pos) noexcept;

struct Synset {
    /// Part-of-speech code followed by the 8-digit data-file offset, e.g. "n02958343".
    std::string id;
    PartOfSpeech pos = PartOfSpeech::noun;
    /// Lowercase; multiword lemmas are underscore-joined.
    std::vector<std::string> lemmas;
    std::string gloss;
    std::vector<std::string> examples;
    /// lemma -> position of this synset in that lemma's sense list (1 = most frequent).
    std::map<std::string, int> first_sense_rank;

    friend bool operator==(const Synset&, const Synset&) = default;
};

/// Dense handle into a LexicalGraph; valid only for the graph that issued it.
using SynsetIndex = std::uint32_t;

/// Immutable lexical-semantic graph: synsets, a (lemma, pos) sense index and
/// mutually inverse hypernym/hyponym edges. Instance hypernymy is folded
/// into hypernymy. Coordinate terms are derived, not stored.
class LexicalGraph {
  public:
    class Builder;

    std::size_t size() const noexcept { return synsets_.size(); }

    const Synset& at(SynsetIndex i) const { return synsets_.at(i); }
    std::optional<SynsetIndex> find(std::string_view id) const;
    /// Throws LookupError for an unknown id.
    SynsetIndex index_of(std::string_view id) const;
    const Synset& synset(std::string_view id) const { return at(index_of(id)); }

    /// Synsets for an exact (lowercase, underscore-joined) lemma in sense order.
    std::span<const SynsetIndex> senses(std::string_view lemma, PartOfSpeech pos) const;

    std::span<const SynsetIndex> hypernyms(SynsetIndex i) const { return hypernyms_.at(i); }
    std::span<const SynsetIndex> hyponyms(SynsetIndex i) const { return hyponyms_.at(i); }

    /// Synsets sharing at least one direct hypernym with `i`, excluding `i`,
    /// sorted by id.
    std::vector<SynsetIndex> coordinate_terms(SynsetIndex i) const;
    std::vector<std::string> coordinate_terms(std::string_view id) const;

    /// Every (lemma, pos) key of the sense index with its ordered senses.
    std::vector<std::pair<std::pair<std::string, PartOfSpeech>, std::vector<SynsetIndex>>>
    lemma_entries() const;

    /// Candidate base forms of `word` found in the graph for `pos`: the word
    /// itself, then WordNet's suffix-detachment rules. Exception lists are
    /// not consulted.
    std::vector<std::string> base_forms(std::string_view word, PartOfSpeech pos) const;

    friend bool operator==(const LexicalGraph& a, const LexicalGraph& b);

  private:
    static std::string lemma_key(std::string_view lemma, PartOfSpeech pos);

    std::vector<Synset> synsets_;
    std::unordered_map<std::string, SynsetIndex> by_id_;
    std::unordered_map<std::string, std::vector<SynsetIndex>> lemma_index_;
    std::vector<std::vector<SynsetIndex>> hypernyms_;
    std::vector<std::vector<SynsetIndex>> hyponyms_;
};

/// Accumulates synsets and edges by id, then validates into a graph.
class LexicalGraph::Builder {
  public:
    void add_synset(Synset synset);
    /// Records child --hypernym--> parent; the inverse hyponym edge is implied.
    void add_hypernym(std::string child, std::string parent);
    /// Appends `id` to the sense list of (lemma, pos). Order of calls is sense order.
    void add_sense(std::string lemma, PartOfSpeech pos, std::string id);

    /// Throws LoadError on dangling edges, hypernym cycles or an empty lemma/gloss.
    LexicalGraph build() &&;

  private:
    std::vector<Synset> synsets_;
    std::vector<std::pair<std::string, std::string>> hypernym_edges_;
    std::vector<std::pair<std::pair<std::string, PartOfSpeech>, std::string>> senses_;
};

/// Loads Princeton WordNet 3.0 database files (index.* and data.*) from a
/// dictionary directory.
LexicalGraph load_wordnet(const std::filesystem::path& dict_dir);

/// Compact JSON-lines interchange: one synset per line with
/// id, pos, lemmas, gloss, examples, hypernyms and ranks.
LexicalGraph load_graph_jsonl(const std::filesystem::path& path);
LexicalGraph read_graph_jsonl(std::istream& in, const std::string& name = "<stream>");
void write_graph_jsonl(const LexicalGraph& graph, std::ostream& out);

/// Loads either format: a directory is read as a WordNet dictionary, a file
/// as graph JSON-lines.
LexicalGraph load_lexical_graph(const std::filesystem::path& path);

enum class PhraseType { phrasal_verb, idiom, collocation, proper_name };

struct NcpLexicon {
    /// lowercase, space-separated, at least two tokens
    std::map<std::string, PhraseType> phrases;
    /// all-uppercase acronym -> full form
    std::map<std::string, std::string> acronyms;
    std::set<std::string> proper_names;

    std::size_t longest_phrase() const;
    void add_phrase(std::string phrase, PhraseType type);
    void add_acronym(std::string acronym, std::string full_form);
};

NcpLexicon load_ncp_lexicon(const std::filesystem::path& path);
NcpLexicon read_ncp_lexicon(std::istream& in, const std::string& name = "<stream>");

/// Source of term frequencies for the untagged-concept rules. Lookups are
/// case-insensitive and treat underscores and spaces alike.
class FrequencyProvider {
  public:
    virtual ~FrequencyProvider() = default;
    /// 0 for unseen terms.
    virtual std::uint64_t frequency(std::string_view term) const = 0;
};

/// Static term -> count table.
class TableFrequencyProvider final : public FrequencyProvider {
  public:
    TableFrequencyProvider() = default;

    void set(std::string_view term, std::uint64_t count);
    std::uint64_t frequency(std::string_view term) const override;
    bool contains(std::string_view term) const;
    std::size_t size() const noexcept { return counts_.size(); }

  private:
    std::unordered_map<std::string, std::uint64_t> counts_;
};

/// Reads `term<TAB>count` lines.
TableFrequencyProvider load_frequencies(const std::filesystem::path& path);
TableFrequencyProvider read_frequencies(std::istream& in, const std::string& name = "<stream>");

}  // namespace lexiqx
