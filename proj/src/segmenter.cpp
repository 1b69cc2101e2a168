#include "lexiqx/segmenter.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include "json.hpp"
#include <ostream>
#include <unordered_map>

#include "lexiqx/error.hpp"
#include "lexiqx/log.hpp"
#include "lexiqx/porter.hpp"
#include "lexiqx/text.hpp"

namespace lexiqx {

std::string_view to_string(RoleType role) noexcept {
    switch (role) {
        case RoleType::CoI: return "CoI";
        case RoleType::DC: return "DC";
        case RoleType::RC: return "RC";
        case RoleType::SC: return "SC";
        case RoleType::EC: return "EC";
        case RoleType::Untagged: return "U";
    }
    return "?";
}

std::optional<RoleType> parse_role(std::string_view name) noexcept {
    for (RoleType r : {RoleType::CoI, RoleType::DC, RoleType::RC, RoleType::SC, RoleType::EC, RoleType::Untagged}) {
        if (name == to_string(r)) return r;
    }
    if (name == "Untagged") return RoleType::Untagged;
    return std::nullopt;
}

int significance(RoleType role) noexcept {
    switch (role) {
        case RoleType::CoI: return 4;
        case RoleType::DC: return 3;
        case RoleType::RC: return 2;
        case RoleType::SC: return 1;
        default: return 0;
    }
}

std::string_view to_string(RelationClass cls) noexcept {
    switch (cls) {
        case RelationClass::normal: return "normal";
        case RelationClass::preposition: return "preposition";
        case RelationClass::conjunction: return "conjunction";
    }
    return "?";
}

std::string_view to_string(ProposalSource source) noexcept {
    switch (source) {
        case ProposalSource::head: return "head";
        case ProposalSource::dependent: return "dependent";
        case ProposalSource::connector: return "connector";
        case ProposalSource::fallback: return "fallback";
    }
    return "?";
}

WordClass reduce_pos_tag(std::string_view tag) noexcept {
    if (tag.starts_with("NN") || tag == "FW") return WordClass::noun;
    if (tag.starts_with("VB")) return WordClass::verb;
    if (tag.starts_with("JJ")) return WordClass::adjective;
    if (tag == "RB" || tag == "RBR" || tag == "RBS") return WordClass::adverb;
    static constexpr std::string_view closed[] = {
        "CC",  "CD", "DT",    "EX",    "IN", "LS", "MD", "PDT", "POS", "PRP", "PRP$", "RP",
        "SYM", "TO", "UH",    "WDT",   "WP", "WP$", "WRB", ",", ".", ":", "``", "''",
        "-LRB-", "-RRB-", "#", "$", "HYPH", "NFP"};
    if (std::find(std::begin(closed), std::end(closed), tag) != std::end(closed)) return WordClass::closed;
    return WordClass::invalid;
}

std::optional<PartOfSpeech> to_part_of_speech(WordClass wc) noexcept {
    switch (wc) {
        case WordClass::noun: return PartOfSpeech::noun;
        case WordClass::verb: return PartOfSpeech::verb;
        case WordClass::adjective: return PartOfSpeech::adjective;
        case WordClass::adverb: return PartOfSpeech::adverb;
        default: return std::nullopt;
    }
}

// --- parse input --------------------------------------------------------------

void ParsedQuery::validate() const {
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (tokens[i].index != static_cast<int>(i + 1)) {
            throw ConfigError("query " + qid + ": token indices are not contiguous from 1");
        }
    }
    const int n = static_cast<int>(tokens.size());
    for (const auto& d : deps) {
        if (d.relation.empty()) throw ConfigError("query " + qid + ": empty relation name");
        if (d.head_index == d.dep_index) {
            throw ConfigError("query " + qid + ": relation " + d.relation + " links a token to itself");
        }
        for (int idx : {d.head_index, d.dep_index}) {
            if (idx < 0 || idx > n) {
                throw ConfigError("query " + qid + ": relation " + d.relation + " refers to missing token " +
                                  std::to_string(idx));
            }
        }
    }
}

namespace {

bool parse_index(std::string_view s, int& out) {
    s = trim(s);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

std::vector<ParsedQuery> read_parses(std::istream& in, const std::string& name) {
    std::vector<ParsedQuery> queries;
    std::unordered_map<std::string, std::size_t> slot;
    std::vector<std::size_t> first_line;
    std::vector<std::vector<std::pair<std::string, int>>> endpoint_surfaces;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty() || line.front() == '#') continue;
        auto f = split(line, '\t');
        if (f.size() < 2) throw ParseError(name, line_no, "expected tab-separated fields");
        std::string qid(trim(f[0]));
        auto [it, inserted] = slot.emplace(qid, queries.size());
        if (inserted) {
            queries.push_back(ParsedQuery{qid, {}, {}, {}});
            first_line.push_back(line_no);
            endpoint_surfaces.emplace_back();
        }
        auto& q = queries[it->second];
        if (f[1] == "#tok") {
            Token t;
            if (f.size() != 5 || !parse_index(f[2], t.index)) {
                throw ParseError(name, line_no, "token line must be qid #tok index surface pos");
            }
            t.surface = std::string(trim(f[3]));
            t.pos_tag = std::string(trim(f[4]));
            if (t.surface.empty()) throw ParseError(name, line_no, "empty token surface");
            q.tokens.push_back(std::move(t));
        } else {
            TypedDependency d;
            if (f.size() != 6 || !parse_index(f[3], d.head_index) || !parse_index(f[5], d.dep_index)) {
                throw ParseError(name, line_no,
                                 "dependency line must be qid relation head head_index dep dep_index");
            }
            d.relation = std::string(trim(f[1]));
            endpoint_surfaces[it->second].push_back({std::string(trim(f[2])), d.head_index});
            endpoint_surfaces[it->second].push_back({std::string(trim(f[4])), d.dep_index});
            q.deps.push_back(std::move(d));
        }
    }
    for (std::size_t i = 0; i < queries.size(); ++i) {
        auto& q = queries[i];
        std::stable_sort(q.tokens.begin(), q.tokens.end(),
                         [](const Token& a, const Token& b) { return a.index < b.index; });
        try {
            q.validate();
        } catch (const ConfigError& e) {
            throw ParseError(name, first_line[i], e.what());
        }
        for (const auto& [surface, idx] : endpoint_surfaces[i]) {
            if (idx > 0 && to_lower(surface) != to_lower(q.tokens[static_cast<std::size_t>(idx - 1)].surface)) {
                log_warning(name + ": query " + q.qid + ": dependency names '" + surface + "' for token " +
                            std::to_string(idx) + " ('" + q.tokens[static_cast<std::size_t>(idx - 1)].surface + "')");
            }
        }
        for (std::size_t t = 0; t < q.tokens.size(); ++t) {
            if (t) q.raw_text.push_back(' ');
            q.raw_text += q.tokens[t].surface;
        }
    }
    return queries;
}

std::vector<ParsedQuery> load_parses(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw LoadError("cannot open parse file " + path.string());
    return read_parses(in, path.string());
}

// --- role mapping table --------------------------------------------------------

RoleMappingTable RoleMappingTable::standard() {
    using R = RoleType;
    using C = RelationClass;
    struct Row {
        const char* relation;
        const char* label;
        R head;
        R dependent;
        C cls;
    };
    static const Row arguments[] = {
        {"cc", "Coordination", R::CoI, R::RC, C::conjunction},
        {"acomp", "Adjectival complement", R::DC, R::CoI, C::normal},
        {"ccomp", "Clausal complement", R::DC, R::CoI, C::normal},
        {"xcomp", "Open clausal complement", R::DC, R::CoI, C::normal},
        {"complm", "Complementizer", R::CoI, R::RC, C::normal},
        {"dobj", "Direct object", R::DC, R::CoI, C::normal},
        {"iobj", "Indirect object", R::DC, R::CoI, C::normal},
        {"pobj", "Object of a preposition", R::RC, R::CoI, C::preposition},
        {"mark", "Marker", R::CoI, R::RC, C::normal},
        {"rel", "Relative", R::CoI, R::RC, C::normal},
        {"nsubj", "Nominal subject", R::DC, R::CoI, C::normal},
        {"nsubjpass", "Passive nominal subject", R::DC, R::CoI, C::normal},
        {"csubj", "Clausal subject", R::DC, R::CoI, C::normal},
        {"csubjpass", "Clausal passive subject", R::DC, R::CoI, C::normal},
        {"expl", "Expletive", R::RC, R::RC, C::normal},
        {"pcomp", "Prepositional complement", R::RC, R::RC, C::preposition},
        {"preconj", "Preconjunct", R::CoI, R::RC, C::conjunction},
    };
    static const Row modifiers[] = {
        {"nn", "Noun compound modifier", R::CoI, R::DC, C::normal},
        {"amod", "Adjectival modifier", R::CoI, R::DC, C::normal},
        {"prep", "Prepositional modifier", R::DC, R::CoI, C::preposition},
        {"abbrev", "Abbreviation modifier", R::CoI, R::CoI, C::normal},
        {"appos", "Appositional modifier", R::CoI, R::CoI, C::normal},
        {"advcl", "Adverbial clause modifier", R::DC, R::CoI, C::normal},
        {"purpcl", "Purpose clause modifier", R::DC, R::CoI, C::normal},
        {"num", "Numeric modifier", R::CoI, R::DC, C::normal},
        {"number", "Element of compound number", R::CoI, R::DC, C::normal},
        {"poss", "Possession modifier", R::CoI, R::CoI, C::normal},
        {"prt", "Phrasal verb particle", R::DC, R::CoI, C::normal},
        {"parataxis", "Parataxis", R::CoI, R::RC, C::normal},
        {"punct", "Punctuation", R::CoI, R::SC, C::normal},
        {"ref", "Referent", R::CoI, R::RC, C::normal},
        {"xsubj", "Controlling subject", R::DC, R::CoI, C::normal},
    };
    static const Row auxiliaries[] = {
        {"aux", "Auxiliary", R::CoI, R::RC, C::normal},
        {"auxpass", "Passive auxiliary", R::CoI, R::SC, C::normal},
        {"cop", "Copula", R::CoI, R::RC, C::normal},
        {"agent", "Agent", R::RC, R::CoI, C::normal},
        {"attr", "Attributive", R::RC, R::RC, C::normal},
        {"conj", "Conjunction", R::CoI, R::CoI, C::conjunction},
        {"det", "Determiner", R::CoI, R::SC, C::normal},
        {"predet", "Predeterminer", R::CoI, R::RC, C::normal},
    };

    RoleMappingTable table;
    auto add = [&table](const auto& rows, const char* group) {
        for (const Row& r : rows) table.set(r.relation, RoleMapping{r.head, r.dependent, r.cls, r.label, group});
    };
    add(arguments, "arguments");
    add(modifiers, "modifiers");
    add(auxiliaries, "auxiliaries");
    table.set_connector_role(C::preposition, R::RC);
    table.set_connector_role(C::conjunction, R::RC);
    return table;
}

void RoleMappingTable::set(std::string relation, RoleMapping mapping) {
    rows_[to_lower(relation)] = std::move(mapping);
}

void RoleMappingTable::set_connector_role(RelationClass cls, RoleType role) { connector_roles_[cls] = role; }

std::string RoleMappingTable::normalize(std::string_view relation) {
    std::string r = to_lower(trim(relation));
    if (r.starts_with("prep_") || r.starts_with("prepc_")) return "prep";
    if (r.starts_with("conj_")) return "conj";
    if (r == "dep") return "undef";
    return r;
}

std::optional<RoleMapping> RoleMappingTable::lookup(std::string_view relation) const {
    auto it = rows_.find(normalize(relation));
    if (it == rows_.end()) return std::nullopt;
    return it->second;
}

std::optional<RoleType> RoleMappingTable::connector_role(RelationClass cls) const {
    auto it = connector_roles_.find(cls);
    if (it == connector_roles_.end()) return std::nullopt;
    return it->second;
}

namespace {

RelationClass parse_class(const std::string& s, const std::string& name) {
    for (RelationClass c : {RelationClass::normal, RelationClass::preposition, RelationClass::conjunction}) {
        if (s == to_string(c)) return c;
    }
    throw ParseError(name, 0, "unknown relation class '" + s + "'");
}

RoleType parse_table_role(const std::string& s, const std::string& name) {
    auto r = parse_role(s);
    if (!r || *r == RoleType::EC || *r == RoleType::Untagged) {
        throw ParseError(name, 0, "invalid role '" + s + "' in role table");
    }
    return *r;
}

}  // namespace

RoleMappingTable RoleMappingTable::from_json(std::istream& in, const std::string& name) {
    RoleMappingTable table;
    try {
        auto j = nlohmann::json::parse(in);
        for (const auto& row : j.at("relations")) {
            RoleMapping m;
            m.head = parse_table_role(row.at("head").get<std::string>(), name);
            m.dependent = parse_table_role(row.at("dependent").get<std::string>(), name);
            m.relation_class = parse_class(row.value("class", "normal"), name);
            m.label = row.value("label", "");
            m.group = row.value("group", "");
            table.set(row.at("relation").get<std::string>(), std::move(m));
        }
        if (j.contains("connector_roles")) {
            for (const auto& [cls, role] : j["connector_roles"].items()) {
                table.set_connector_role(parse_class(cls, name), parse_table_role(role.get<std::string>(), name));
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(name, 0, e.what());
    }
    return table;
}

RoleMappingTable RoleMappingTable::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw LoadError("cannot open role table " + path.string());
    return from_json(in, path.string());
}

void RoleMappingTable::write_json(std::ostream& out) const {
    nlohmann::ordered_json j;
    j["format"] = "lexiqx-role-table";
    j["version"] = 1;
    auto connectors = nlohmann::ordered_json::object();
    for (const auto& [cls, role] : connector_roles_) connectors[std::string(to_string(cls))] = to_string(role);
    j["connector_roles"] = connectors;
    auto rows = nlohmann::ordered_json::array();
    for (const char* group : {"arguments", "modifiers", "auxiliaries", ""}) {
        for (const auto& [relation, m] : rows_) {
            if (m.group != group) continue;
            nlohmann::ordered_json row;
            row["relation"] = relation;
            row["label"] = m.label;
            row["group"] = m.group;
            row["head"] = to_string(m.head);
            row["dependent"] = to_string(m.dependent);
            row["class"] = to_string(m.relation_class);
            rows.push_back(std::move(row));
        }
    }
    j["relations"] = rows;
    out << j.dump(2) << '\n';
}

// --- formatting -------------------------------------------------------------------

namespace {

bool is_edge_punct(unsigned char c) {
    return c == '(' || c == ')' || c == '[' || c == ']' || c == ',' || c == '.' || c == ';' || c == ':' ||
           c == '?' || c == '!';
}

// Splits "(NASA)," into "(", "NASA", "),".
struct Cored {
    std::string_view lead, core, tail;
};

Cored core_of(std::string_view token) {
    std::size_t b = 0, e = token.size();
    while (b < e && is_edge_punct(static_cast<unsigned char>(token[b]))) ++b;
    while (e > b && is_edge_punct(static_cast<unsigned char>(token[e - 1]))) --e;
    return {token.substr(0, b), token.substr(b, e - b), token.substr(e)};
}

std::string join_underscore(std::string_view text) {
    std::string out;
    for (auto w : split_whitespace(text)) {
        if (!out.empty()) out.push_back('_');
        out.append(w);
    }
    return out;
}

std::string capitalize_words(std::string_view joined) {
    std::string out(joined);
    bool start = true;
    for (char& c : out) {
        if (c == '_') {
            start = true;
        } else if (start) {
            c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
            start = false;
        }
    }
    return out;
}

}  // namespace

std::string detect_and_format(std::string_view raw_query, const NcpLexicon& lexicon) {
    // Quoted spans become one underscore-joined unit; quotes are dropped.
    std::string unquoted;
    {
        std::string_view rest = raw_query;
        for (;;) {
            auto open = rest.find('"');
            if (open == std::string_view::npos) {
                unquoted.append(rest);
                break;
            }
            auto close = rest.find('"', open + 1);
            unquoted.append(rest.substr(0, open));
            if (close == std::string_view::npos) {
                unquoted.append(rest.substr(open + 1));
                break;
            }
            unquoted += join_underscore(rest.substr(open + 1, close - open - 1));
            rest = rest.substr(close + 1);
        }
    }

    std::string slashed;
    for (char c : unquoted) {
        if (c == '/') {
            slashed += " or ";
        } else {
            slashed.push_back(c);
        }
    }

    std::vector<std::string> tokens;
    for (auto t : split_whitespace(slashed)) {
        auto [lead, core, tail] = core_of(t);
        auto acronym = lexicon.acronyms.find(std::string(core));
        if (acronym != lexicon.acronyms.end()) {
            tokens.push_back(std::string(lead) + join_underscore(acronym->second) + std::string(tail));
        } else {
            tokens.emplace_back(t);
        }
    }

    const std::size_t longest = lexicon.longest_phrase();
    std::vector<std::string> out;
    for (std::size_t i = 0; i < tokens.size();) {
        bool matched = false;
        for (std::size_t len = std::min(longest, tokens.size() - i); len >= 2 && !matched; --len) {
            // Punctuation may sit before the first or after the last word only.
            auto first = core_of(tokens[i]);
            auto last = core_of(tokens[i + len - 1]);
            std::string key;
            bool clean = true;
            for (std::size_t k = 0; k < len; ++k) {
                auto c = core_of(tokens[i + k]);
                if ((k > 0 && !c.lead.empty()) || (k + 1 < len && !c.tail.empty()) ||
                    c.core.find('_') != std::string_view::npos) {
                    clean = false;
                    break;
                }
                if (k) key.push_back(' ');
                key += to_lower(c.core);
            }
            if (!clean) continue;
            auto hit = lexicon.phrases.find(key);
            if (hit == lexicon.phrases.end()) continue;
            std::string joined;
            for (std::size_t k = 0; k < len; ++k) {
                if (k) joined.push_back('_');
                joined.append(core_of(tokens[i + k]).core);
            }
            if (lexicon.proper_names.count(key)) joined = capitalize_words(to_lower(joined));
            out.push_back(std::string(first.lead) + joined + std::string(last.tail));
            i += len;
            matched = true;
        }
        if (!matched) out.push_back(tokens[i++]);
    }

    std::string result;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (i) result.push_back(' ');
        result += out[i];
    }
    return result;
}

// --- role assignment ----------------------------------------------------------------

const Concept* RoleTaggedQuery::find(int index) const {
    for (const auto& c : concepts) {
        if (c.index == index) return &c;
    }
    return nullptr;
}

Concept* RoleTaggedQuery::find(int index) {
    return const_cast<Concept*>(std::as_const(*this).find(index));
}

namespace {

// Token indices of the words a collapsed relation absorbed, e.g. "of" in
// prep_of(control, trading). Prefers a match lying between the endpoints.
std::vector<int> connector_tokens(const ParsedQuery& q, const TypedDependency& d) {
    std::string r = to_lower(d.relation);
    std::string_view suffix;
    for (std::string_view prefix : {"prep_", "prepc_", "conj_"}) {
        if (r.starts_with(prefix)) suffix = std::string_view(r).substr(prefix.size());
    }
    if (suffix.empty()) return {};
    auto words = split(suffix, '_');
    const int n = static_cast<int>(q.tokens.size());
    const int len = static_cast<int>(words.size());
    int lo = std::min(d.head_index, d.dep_index);
    int hi = std::max(d.head_index, d.dep_index);
    std::optional<int> best;
    int best_distance = 0;
    for (int start = 1; start + len - 1 <= n; ++start) {
        bool match = true;
        for (int k = 0; k < len && match; ++k) {
            int idx = start + k;
            match = idx != d.head_index && idx != d.dep_index &&
                    to_lower(q.tokens[static_cast<std::size_t>(idx - 1)].surface) == words[static_cast<std::size_t>(k)];
        }
        if (!match) continue;
        int distance = (start > lo && start + len - 1 < hi) ? 0 : std::min(std::abs(start - lo), std::abs(start - hi));
        if (!best || distance < best_distance) {
            best = start;
            best_distance = distance;
        }
    }
    std::vector<int> out;
    if (best) {
        for (int k = 0; k < len; ++k) out.push_back(*best + k);
    }
    return out;
}

bool has_tagged_proposal(const Concept& c) {
    return std::any_of(c.provenance.begin(), c.provenance.end(),
                       [](const RoleProposal& p) { return p.role != RoleType::Untagged; });
}

int class_priority(RelationClass cls) {
    switch (cls) {
        case RelationClass::normal: return 2;
        case RelationClass::preposition: return 1;
        case RelationClass::conjunction: return 0;
    }
    return 0;
}

}  // namespace

RoleTaggedQuery propose_roles(const ParsedQuery& query, const RoleMappingTable& table) {
    RoleTaggedQuery out;
    out.qid = query.qid;
    out.deps = query.deps;
    for (const auto& t : query.tokens) {
        Concept c;
        c.surface = t.surface;
        c.stem = term_stem(t.surface);
        c.pos_tag = t.pos_tag;
        c.index = t.index;
        c.ncp = t.surface.find('_') != std::string::npos;
        out.concepts.push_back(std::move(c));
    }

    for (const auto& d : query.deps) {
        if (RoleMappingTable::normalize(d.relation) == "root") continue;
        auto mapping = table.lookup(d.relation);
        if (!mapping) {
            if (RoleMappingTable::normalize(d.relation) != "undef") {
                log_warning("query " + query.qid + ": relation '" + d.relation +
                            "' is not in the role table; treating it as undef");
            }
            for (auto [idx, source] : {std::pair{d.head_index, ProposalSource::head},
                                       std::pair{d.dep_index, ProposalSource::dependent}}) {
                if (auto* c = out.find(idx)) {
                    c->provenance.push_back({d.relation, source, RoleType::Untagged, RelationClass::normal});
                }
            }
            continue;
        }
        if (auto* head = out.find(d.head_index)) {
            head->provenance.push_back({d.relation, ProposalSource::head, mapping->head, mapping->relation_class});
        }
        if (auto* dep = out.find(d.dep_index)) {
            dep->provenance.push_back(
                {d.relation, ProposalSource::dependent, mapping->dependent, mapping->relation_class});
        }
        if (auto role = table.connector_role(mapping->relation_class)) {
            for (int idx : connector_tokens(query, d)) {
                out.find(idx)->provenance.push_back(
                    {d.relation, ProposalSource::connector, *role, mapping->relation_class});
            }
        }
    }

    for (auto& c : out.concepts) {
        auto first = std::find_if(c.provenance.begin(), c.provenance.end(),
                                  [](const RoleProposal& p) { return p.role != RoleType::Untagged; });
        c.role = first == c.provenance.end() ? RoleType::Untagged : first->role;
    }
    return out;
}

RoleTaggedQuery resolve_untagged(RoleTaggedQuery partial, const FrequencyProvider& frequencies) {
    // Decide every untagged concept against the state before this pass, so
    // the result does not depend on concept order.
    std::vector<bool> tagged(partial.concepts.size());
    for (std::size_t i = 0; i < partial.concepts.size(); ++i) tagged[i] = has_tagged_proposal(partial.concepts[i]);

    std::vector<std::vector<RoleProposal>> resolved(partial.concepts.size());
    for (const auto& d : partial.deps) {
        auto normalized = RoleMappingTable::normalize(d.relation);
        if (normalized == "root") continue;
        // Untagged placeholders mark the relations the table did not cover.
        bool undef = false;
        for (const auto& c : partial.concepts) {
            if (c.index != d.head_index && c.index != d.dep_index) continue;
            for (const auto& p : c.provenance) {
                undef = undef || (p.relation == d.relation && p.role == RoleType::Untagged);
            }
        }
        if (!undef) continue;
        const Concept* head = partial.find(d.head_index);
        const Concept* dep = partial.find(d.dep_index);
        if (!head || !dep) continue;
        auto fh = frequencies.frequency(head->surface);
        auto fd = frequencies.frequency(dep->surface);
        auto decide = [](std::uint64_t self, std::uint64_t other) {
            return self < other ? RoleType::DC : RoleType::CoI;
        };
        auto pos_of = [&](const Concept* c) { return static_cast<std::size_t>(c - partial.concepts.data()); };
        if (!tagged[pos_of(head)]) {
            resolved[pos_of(head)].push_back({d.relation, ProposalSource::head, decide(fh, fd), RelationClass::normal});
        }
        if (!tagged[pos_of(dep)]) {
            resolved[pos_of(dep)].push_back(
                {d.relation, ProposalSource::dependent, decide(fd, fh), RelationClass::normal});
        }
    }

    for (std::size_t i = 0; i < partial.concepts.size(); ++i) {
        auto& c = partial.concepts[i];
        std::erase_if(c.provenance, [](const RoleProposal& p) { return p.role == RoleType::Untagged; });
        if (tagged[i]) continue;
        if (!resolved[i].empty()) {
            c.provenance.insert(c.provenance.end(), resolved[i].begin(), resolved[i].end());
        } else {
            RoleType role = reduce_pos_tag(c.pos_tag) == WordClass::closed ? RoleType::SC : RoleType::CoI;
            c.provenance.push_back({"undef", ProposalSource::fallback, role, RelationClass::normal});
        }
        c.role = c.provenance.front().role;
    }
    return partial;
}

RoleTaggedQuery resolve_ambiguous(RoleTaggedQuery partial) {
    for (auto& c : partial.concepts) {
        const RoleProposal* best = nullptr;
        for (const auto& p : c.provenance) {
            if (p.role == RoleType::Untagged) continue;
            if (!best) {
                best = &p;
                continue;
            }
            auto key = [](const RoleProposal& r) {
                return std::pair{significance(r.role), class_priority(r.relation_class)};
            };
            if (key(p) > key(*best)) best = &p;
        }
        c.role = best ? best->role : RoleType::Untagged;
    }
    return partial;
}

RoleTaggedQuery map_roles(const ParsedQuery& query, const RoleMappingTable& table,
                          const FrequencyProvider& frequencies) {
    return resolve_ambiguous(resolve_untagged(propose_roles(query, table), frequencies));
}

}  // namespace lexiqx
