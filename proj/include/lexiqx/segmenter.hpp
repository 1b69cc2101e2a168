#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lexiqx/lexicon.hpp"

namespace lexiqx {

enum class RoleType { CoI, DC, RC, SC, EC, Untagged };

std::string_view to_string(RoleType role) noexcept;
std::optional<RoleType> parse_role(std::string_view name) noexcept;

/// CoI > DC > RC > SC; EC and Untagged rank below everything.
int significance(RoleType role) noexcept;

/// Penn Treebank tags reduced to the classes the pipeline cares about.
enum class WordClass { noun, verb, adjective, adverb, closed, invalid };

WordClass reduce_pos_tag(std::string_view penn_tag) noexcept;
std::optional<PartOfSpeech> to_part_of_speech(WordClass wc) noexcept;
inline bool is_open_class(WordClass wc) noexcept { return to_part_of_speech(wc).has_value(); }

struct Token {
    std::string surface;
    std::string pos_tag;
    int index = 0;  // 1-based
};

struct TypedDependency {
    std::string relation;
    int head_index = 0;  // 0 is the root
    int dep_index = 0;

    friend bool operator==(const TypedDependency&, const TypedDependency&) = default;
};

struct ParsedQuery {
    std::string qid;
    std::string raw_text;
    std::vector<Token> tokens;
    std::vector<TypedDependency> deps;

    /// Throws ConfigError when indices are not contiguous from 1, an edge
    /// endpoint is unknown, a relation is empty or an edge is a self-loop.
    void validate() const;
};

/// Reads the dependency TSV: token lines `qid #tok index surface pos` and
/// dependency lines `qid relation head_surface head_index dep_surface dep_index`.
/// Queries come back in order of first appearance.
std::vector<ParsedQuery> read_parses(std::istream& in, const std::string& name = "<stream>");
std::vector<ParsedQuery> load_parses(const std::filesystem::path& path);

enum class RelationClass { normal, preposition, conjunction };

std::string_view to_string(RelationClass cls) noexcept;

struct RoleMapping {
    RoleType head = RoleType::Untagged;
    RoleType dependent = RoleType::Untagged;
    RelationClass relation_class = RelationClass::normal;
    /// Printed row name, e.g. "Adjectival modifier".
    std::string label;
    /// "arguments", "modifiers" or "auxiliaries".
    std::string group;

    friend bool operator==(const RoleMapping&, const RoleMapping&) = default;
};

/// Relation name -> (head role, dependent role) with a priority class, plus
/// the role given to the connector word absorbed by collapsed relations
/// such as prep_of or conj_and.
class RoleMappingTable {
  public:
    /// The 40 rows of the argument, modifier and auxiliary tables.
    static RoleMappingTable standard();
    static RoleMappingTable from_json(std::istream& in, const std::string& name = "<stream>");
    static RoleMappingTable load(const std::filesystem::path& path);
    void write_json(std::ostream& out) const;

    void set(std::string relation, RoleMapping mapping);
    void set_connector_role(RelationClass cls, RoleType role);

    /// Collapsed names map onto their base row: prep_of -> prep,
    /// prepc_by -> prep, conj_and -> conj; "dep" maps to "undef".
    static std::string normalize(std::string_view relation);

    /// Looks up the normalized relation; nullopt for undef and unknown names.
    std::optional<RoleMapping> lookup(std::string_view relation) const;
    std::optional<RoleType> connector_role(RelationClass cls) const;

    const std::map<std::string, RoleMapping>& rows() const noexcept { return rows_; }

    friend bool operator==(const RoleMappingTable&, const RoleMappingTable&) = default;

  private:
    std::map<std::string, RoleMapping> rows_;
    std::map<RelationClass, RoleType> connector_roles_;
};

enum class ProposalSource { head, dependent, connector, fallback };

std::string_view to_string(ProposalSource source) noexcept;

/// One role suggested for a concept by one dependency (or by a rule).
struct RoleProposal {
    std::string relation;
    ProposalSource source = ProposalSource::head;
    RoleType role = RoleType::Untagged;
    RelationClass relation_class = RelationClass::normal;

    friend bool operator==(const RoleProposal&, const RoleProposal&) = default;
};

struct Concept {
    std::string surface;
    std::string stem;
    std::string pos_tag;
    int index = 0;
    RoleType role = RoleType::Untagged;
    bool ncp = false;
    std::vector<RoleProposal> provenance;

    friend bool operator==(const Concept&, const Concept&) = default;
};

struct RoleTaggedQuery {
    std::string qid;
    std::vector<Concept> concepts;
    std::vector<TypedDependency> deps;

    /// Concept for a 1-based token index, or nullptr.
    const Concept* find(int index) const;
    Concept* find(int index);

    friend bool operator==(const RoleTaggedQuery&, const RoleTaggedQuery&) = default;
};

/// Underscore-joins lexicon phrases (longest match first), capitalizes
/// proper names, expands acronyms, rewrites "/" as " or " and joins
/// double-quoted spans. Hyphens and brackets pass through.
std::string detect_and_format(std::string_view raw_query, const NcpLexicon& lexicon);

/// Applies the table to every dependency, then resolve_untagged and
/// resolve_ambiguous. Every output concept carries one of CoI/DC/RC/SC.
RoleTaggedQuery map_roles(const ParsedQuery& query, const RoleMappingTable& table,
                          const FrequencyProvider& frequencies);

/// Table-driven proposals only; concepts without a tagged proposal keep
/// role Untagged. Relations missing from the table are treated as undef.
RoleTaggedQuery propose_roles(const ParsedQuery& query, const RoleMappingTable& table);

/// Inheritance dependence, then frequency dependence over undef pairs:
/// a concept with a tagged proposal keeps it; otherwise the more frequent
/// side of an undef pair is CoI and the other DC, equal frequencies giving
/// CoI. Concepts outside every dependency become CoI (content words) or
/// SC (closed class).
RoleTaggedQuery resolve_untagged(RoleTaggedQuery partial, const FrequencyProvider& frequencies);

/// Picks one role per concept: the most significant proposal wins; among
/// equally significant proposals normal relations beat prepositions, which
/// beat conjunctions.
RoleTaggedQuery resolve_ambiguous(RoleTaggedQuery partial);

}  // namespace lexiqx
