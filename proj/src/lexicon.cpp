#include "lexiqx/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>
#include <tuple>
#include <fstream>
#include "json.hpp"
#include <ostream>

#include "lexiqx/error.hpp"
#include "lexiqx/log.hpp"
#include "lexiqx/text.hpp"

namespace lexiqx {

char pos_code(PartOfSpeech pos) noexcept {
    switch (pos) {
        case PartOfSpeech::noun: return 'n';
        case PartOfSpeech::verb: return 'v';
        case PartOfSpeech::adjective: return 'a';
        case PartOfSpeech::adverb: return 'r';
    }
    return '?';
}

std::optional<PartOfSpeech> pos_from_code(char code) noexcept {
    switch (code) {
        case 'n': return PartOfSpeech::noun;
        case 'v': return PartOfSpeech::verb;
        case 'a':
        case 's': return PartOfSpeech::adjective;
        case 'r': return PartOfSpeech::adverb;
        default: return std::nullopt;
    }
}

std::string_view pos_name(PartOfSpeech pos) noexcept {
    switch (pos) {
        case PartOfSpeech::noun: return "noun";
        case PartOfSpeech::verb: return "verb";
        case PartOfSpeech::adjective: return "adj";
        case PartOfSpeech::adverb: return "adv";
    }
    return "?";
}

// --- LexicalGraph -----------------------------------------------------------

std::string LexicalGraph::lemma_key(std::string_view lemma, PartOfSpeech pos) {
    std::string key;
    key.reserve(lemma.size() + 2);
    key.push_back(pos_code(pos));
    key.push_back(':');
    key.append(lemma);
    return key;
}

std::optional<SynsetIndex> LexicalGraph::find(std::string_view id) const {
    auto it = by_id_.find(std::string(id));
    if (it == by_id_.end()) return std::nullopt;
    return it->second;
}

SynsetIndex LexicalGraph::index_of(std::string_view id) const {
    if (auto i = find(id)) return *i;
    throw LookupError("unknown synset id '" + std::string(id) + "'");
}

std::span<const SynsetIndex> LexicalGraph::senses(std::string_view lemma, PartOfSpeech pos) const {
    auto it = lemma_index_.find(lemma_key(lemma, pos));
    if (it == lemma_index_.end()) return {};
    return it->second;
}

std::vector<SynsetIndex> LexicalGraph::coordinate_terms(SynsetIndex i) const {
    std::vector<SynsetIndex> out;
    for (SynsetIndex parent : hypernyms(i)) {
        for (SynsetIndex sibling : hyponyms(parent)) {
            if (sibling != i) out.push_back(sibling);
        }
    }
    // Indices follow id order, so sorting by index sorts by id.
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<std::string> LexicalGraph::coordinate_terms(std::string_view id) const {
    std::vector<std::string> out;
    for (SynsetIndex s : coordinate_terms(index_of(id))) out.push_back(at(s).id);
    return out;
}

std::vector<std::pair<std::pair<std::string, PartOfSpeech>, std::vector<SynsetIndex>>>
LexicalGraph::lemma_entries() const {
    std::vector<std::pair<std::pair<std::string, PartOfSpeech>, std::vector<SynsetIndex>>> out;
    out.reserve(lemma_index_.size());
    for (const auto& [key, ids] : lemma_index_) {
        out.push_back({{key.substr(2), *pos_from_code(key[0])}, ids});
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> LexicalGraph::base_forms(std::string_view word, PartOfSpeech pos) const {
    struct Detach {
        std::string_view suffix;
        std::string_view ending;
    };
    static constexpr Detach noun_rules[] = {{"s", ""},     {"ses", "s"},   {"xes", "x"},
                                            {"zes", "z"},  {"ches", "ch"}, {"shes", "sh"},
                                            {"men", "man"}, {"ies", "y"}};
    static constexpr Detach verb_rules[] = {{"s", ""},   {"ies", "y"}, {"es", "e"},  {"es", ""},
                                            {"ed", "e"}, {"ed", ""},   {"ing", "e"}, {"ing", ""}};
    static constexpr Detach adj_rules[] = {{"er", ""}, {"est", ""}, {"er", "e"}, {"est", "e"}};

    std::span<const Detach> rules;
    switch (pos) {
        case PartOfSpeech::noun: rules = noun_rules; break;
        case PartOfSpeech::verb: rules = verb_rules; break;
        case PartOfSpeech::adjective: rules = adj_rules; break;
        case PartOfSpeech::adverb: break;
    }

    std::string lemma = underscore_form(word);
    std::vector<std::string> out;
    auto consider = [&](std::string candidate) {
        if (candidate.empty() || senses(candidate, pos).empty()) return;
        if (std::find(out.begin(), out.end(), candidate) == out.end()) out.push_back(std::move(candidate));
    };
    consider(lemma);
    for (const auto& rule : rules) {
        if (lemma.size() > rule.suffix.size() && std::string_view(lemma).ends_with(rule.suffix)) {
            consider(lemma.substr(0, lemma.size() - rule.suffix.size()) + std::string(rule.ending));
        }
    }
    return out;
}

bool operator==(const LexicalGraph& a, const LexicalGraph& b) {
    return a.synsets_ == b.synsets_ && a.hypernyms_ == b.hypernyms_ && a.hyponyms_ == b.hyponyms_ &&
           a.lemma_index_ == b.lemma_index_;
}

// --- Builder ------------------------------------------------------------------

void LexicalGraph::Builder::add_synset(Synset synset) { synsets_.push_back(std::move(synset)); }

void LexicalGraph::Builder::add_hypernym(std::string child, std::string parent) {
    hypernym_edges_.emplace_back(std::move(child), std::move(parent));
}

void LexicalGraph::Builder::add_sense(std::string lemma, PartOfSpeech pos, std::string id) {
    senses_.push_back({{std::move(lemma), pos}, std::move(id)});
}

namespace {

void check_acyclic(const LexicalGraph& g, const std::vector<std::vector<SynsetIndex>>& up) {
    enum : std::uint8_t { unvisited, active, done };
    std::vector<std::uint8_t> state(up.size(), unvisited);
    std::vector<std::pair<SynsetIndex, std::size_t>> stack;
    for (SynsetIndex root = 0; root < up.size(); ++root) {
        if (state[root] != unvisited) continue;
        stack.push_back({root, 0});
        state[root] = active;
        while (!stack.empty()) {
            auto& [node, next] = stack.back();
            if (next < up[node].size()) {
                SynsetIndex parent = up[node][next++];
                if (state[parent] == active) {
                    throw LoadError("hypernym cycle through synset " + g.at(parent).id);
                }
                if (state[parent] == unvisited) {
                    state[parent] = active;
                    stack.push_back({parent, 0});
                }
            } else {
                state[node] = done;
                stack.pop_back();
            }
        }
    }
}

}  // namespace

LexicalGraph LexicalGraph::Builder::build() && {
    LexicalGraph g;
    std::sort(synsets_.begin(), synsets_.end(),
              [](const Synset& a, const Synset& b) { return a.id < b.id; });
    g.synsets_ = std::move(synsets_);
    for (SynsetIndex i = 0; i < g.synsets_.size(); ++i) {
        auto& s = g.synsets_[i];
        if (s.lemmas.empty()) throw LoadError("synset " + s.id + " has no lemmas");
        if (s.gloss.empty()) throw LoadError("synset " + s.id + " has an empty gloss");
        s.first_sense_rank.clear();
        if (!g.by_id_.emplace(s.id, i).second) throw LoadError("duplicate synset id " + s.id);
    }

    auto resolve = [&g](const std::string& id, const char* what) {
        auto it = g.by_id_.find(id);
        if (it == g.by_id_.end()) throw LoadError(std::string(what) + " refers to missing synset " + id);
        return it->second;
    };

    g.hypernyms_.assign(g.synsets_.size(), {});
    g.hyponyms_.assign(g.synsets_.size(), {});
    for (const auto& [child, parent] : hypernym_edges_) {
        SynsetIndex c = resolve(child, "hypernym edge");
        SynsetIndex p = resolve(parent, "hypernym edge");
        if (c == p) throw LoadError("hypernym cycle through synset " + child);
        g.hypernyms_[c].push_back(p);
        g.hyponyms_[p].push_back(c);
    }
    for (auto* edges : {&g.hypernyms_, &g.hyponyms_}) {
        for (auto& list : *edges) {
            std::sort(list.begin(), list.end());
            list.erase(std::unique(list.begin(), list.end()), list.end());
        }
    }
    check_acyclic(g, g.hypernyms_);

    for (auto& [key, id] : senses_) {
        SynsetIndex s = resolve(id, "sense entry");
        auto& list = g.lemma_index_[lemma_key(key.first, key.second)];
        if (std::find(list.begin(), list.end(), s) == list.end()) list.push_back(s);
    }
    for (const auto& [key, list] : g.lemma_index_) {
        std::string lemma = key.substr(2);
        for (std::size_t rank = 0; rank < list.size(); ++rank) {
            g.synsets_[list[rank]].first_sense_rank[lemma] = static_cast<int>(rank + 1);
        }
    }
    return g;
}

// --- WordNet database files ---------------------------------------------------

namespace {

std::string normalize_lemma(std::string_view raw) {
    // Adjective position markers: "(a)", "(p)", "(ip)".
    if (auto paren = raw.find('('); paren != std::string_view::npos && raw.ends_with(")")) {
        raw = raw.substr(0, paren);
    }
    return to_lower(raw);
}

void split_gloss(std::string_view text, Synset& synset) {
    std::vector<std::string> definitions;
    std::string segment;
    bool in_quote = false;
    auto flush = [&] {
        auto t = trim(segment);
        if (!t.empty()) {
            if (t.front() == '"') {
                auto close = t.find('"', 1);
                auto example = close == std::string_view::npos ? t.substr(1) : t.substr(1, close - 1);
                if (!trim(example).empty()) synset.examples.emplace_back(trim(example));
            } else {
                definitions.emplace_back(t);
            }
        }
        segment.clear();
    };
    for (char c : text) {
        if (c == '"') in_quote = !in_quote;
        if (c == ';' && !in_quote) {
            flush();
            continue;
        }
        segment.push_back(c);
    }
    flush();
    for (std::size_t i = 0; i < definitions.size(); ++i) {
        if (i) synset.gloss += "; ";
        synset.gloss += definitions[i];
    }
    if (synset.gloss.empty() && !synset.examples.empty()) synset.gloss = synset.examples.front();
}

template <typename Int>
bool parse_int(std::string_view s, Int& out, int base = 10) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out, base);
    return ec == std::errc() && ptr == s.data() + s.size();
}

void read_data_file(const std::filesystem::path& file, LexicalGraph::Builder& builder) {
    std::ifstream in(file);
    if (!in) throw LoadError("cannot open WordNet data file " + file.string());
    const std::string name = file.string();
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.front() == ' ') continue;
        auto bar = line.find('|');
        std::string_view head(line);
        std::string_view gloss;
        if (bar != std::string::npos) {
            head = std::string_view(line).substr(0, bar);
            gloss = std::string_view(line).substr(bar + 1);
        }
        auto fields = split_whitespace(head);
        auto fail = [&](const std::string& why) -> void { throw ParseError(name, line_no, why); };
        if (fields.size() < 4) fail("truncated synset record");
        auto pos = fields[2].size() == 1 ? pos_from_code(fields[2][0]) : std::nullopt;
        if (!pos) fail("bad synset type '" + std::string(fields[2]) + "'");
        unsigned word_count = 0;
        if (!parse_int(fields[3], word_count, 16)) fail("bad word count");

        Synset synset;
        synset.pos = *pos;
        synset.id = std::string(1, pos_code(*pos)) + std::string(fields[0]);
        std::size_t at = 4;
        if (fields.size() < at + 2 * word_count + 1) fail("truncated word list");
        for (unsigned w = 0; w < word_count; ++w, at += 2) {
            synset.lemmas.push_back(normalize_lemma(fields[at]));
        }
        unsigned pointer_count = 0;
        if (!parse_int(fields[at++], pointer_count)) fail("bad pointer count");
        if (fields.size() < at + 4 * pointer_count) fail("truncated pointer list");
        for (unsigned p = 0; p < pointer_count; ++p, at += 4) {
            std::string_view symbol = fields[at];
            auto target_pos = fields[at + 2].size() == 1 ? pos_from_code(fields[at + 2][0]) : std::nullopt;
            if (!target_pos) fail("bad pointer part of speech");
            std::string target = std::string(1, pos_code(*target_pos)) + std::string(fields[at + 1]);
            // Hyponym pointers are the inverse of these and are not read.
            if (symbol == "@" || symbol == "@i") builder.add_hypernym(synset.id, std::move(target));
        }
        split_gloss(gloss, synset);
        builder.add_synset(std::move(synset));
    }
}

void read_index_file(const std::filesystem::path& file, PartOfSpeech pos, LexicalGraph::Builder& builder) {
    std::ifstream in(file);
    if (!in) throw LoadError("cannot open WordNet index file " + file.string());
    const std::string name = file.string();
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.front() == ' ') continue;
        auto fields = split_whitespace(line);
        unsigned synset_count = 0;
        if (fields.size() < 6 || !parse_int(fields[2], synset_count) || fields.size() < 4 + synset_count) {
            throw ParseError(name, line_no, "malformed index entry");
        }
        std::string lemma = to_lower(fields[0]);
        for (std::size_t i = fields.size() - synset_count; i < fields.size(); ++i) {
            builder.add_sense(lemma, pos, std::string(1, pos_code(pos)) + std::string(fields[i]));
        }
    }
}

}  // namespace

LexicalGraph load_wordnet(const std::filesystem::path& dict_dir) {
    static constexpr std::pair<PartOfSpeech, const char*> files[] = {
        {PartOfSpeech::noun, "noun"},
        {PartOfSpeech::verb, "verb"},
        {PartOfSpeech::adjective, "adj"},
        {PartOfSpeech::adverb, "adv"}};
    for (const auto& [pos, suffix] : files) {
        for (const char* kind : {"index.", "data."}) {
            auto path = dict_dir / (std::string(kind) + suffix);
            if (!std::filesystem::is_regular_file(path)) {
                throw LoadError("missing WordNet file " + path.string());
            }
        }
    }
    LexicalGraph::Builder builder;
    for (const auto& [pos, suffix] : files) {
        read_data_file(dict_dir / (std::string("data.") + suffix), builder);
    }
    for (const auto& [pos, suffix] : files) {
        read_index_file(dict_dir / (std::string("index.") + suffix), pos, builder);
    }
    return std::move(builder).build();
}

// --- JSON-lines interchange -----------------------------------------------------

LexicalGraph read_graph_jsonl(std::istream& in, const std::string& name) {
    LexicalGraph::Builder builder;
    struct PendingSense {
        int rank;
        std::size_t order;
        std::string id;
    };
    std::map<std::pair<std::string, PartOfSpeech>, std::vector<PendingSense>> senses;
    std::string line;
    std::size_t line_no = 0;
    std::size_t order = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        try {
            auto j = nlohmann::json::parse(line);
            Synset s;
            s.id = j.at("id").get<std::string>();
            auto pos_str = j.at("pos").get<std::string>();
            auto pos = pos_str.size() == 1 ? pos_from_code(pos_str[0]) : std::nullopt;
            if (!pos) throw ParseError(name, line_no, "bad pos '" + pos_str + "'");
            s.pos = *pos;
            for (const auto& l : j.at("lemmas")) s.lemmas.push_back(underscore_form(l.get<std::string>()));
            s.gloss = j.at("gloss").get<std::string>();
            if (j.contains("examples")) s.examples = j["examples"].get<std::vector<std::string>>();
            if (j.contains("hypernyms")) {
                for (const auto& h : j["hypernyms"]) builder.add_hypernym(s.id, h.get<std::string>());
            }
            std::map<std::string, int> ranks;
            if (j.contains("ranks")) ranks = j["ranks"].get<std::map<std::string, int>>();
            for (const auto& lemma : s.lemmas) {
                auto r = ranks.find(lemma);
                int rank = r == ranks.end() ? std::numeric_limits<int>::max() : r->second;
                if (rank < 1) throw ParseError(name, line_no, "sense rank must be >= 1");
                senses[{lemma, s.pos}].push_back({rank, order, s.id});
            }
            ++order;
            builder.add_synset(std::move(s));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(name, line_no, e.what());
        }
    }
    for (auto& [key, list] : senses) {
        std::sort(list.begin(), list.end(), [](const PendingSense& a, const PendingSense& b) {
            return std::tie(a.rank, a.order) < std::tie(b.rank, b.order);
        });
        for (std::size_t i = 1; i < list.size(); ++i) {
            if (list[i].rank == list[i - 1].rank && list[i].rank != std::numeric_limits<int>::max()) {
                throw LoadError(name + ": duplicate sense rank for lemma '" + key.first + "'");
            }
        }
        for (auto& p : list) builder.add_sense(key.first, key.second, p.id);
    }
    return std::move(builder).build();
}

LexicalGraph load_graph_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw LoadError("cannot open graph file " + path.string());
    return read_graph_jsonl(in, path.string());
}

void write_graph_jsonl(const LexicalGraph& graph, std::ostream& out) {
    for (SynsetIndex i = 0; i < graph.size(); ++i) {
        const auto& s = graph.at(i);
        nlohmann::ordered_json j;
        j["id"] = s.id;
        j["pos"] = std::string(1, pos_code(s.pos));
        j["lemmas"] = s.lemmas;
        j["gloss"] = s.gloss;
        j["examples"] = s.examples;
        auto hypernyms = nlohmann::json::array();
        for (SynsetIndex h : graph.hypernyms(i)) hypernyms.push_back(graph.at(h).id);
        j["hypernyms"] = hypernyms;
        j["ranks"] = s.first_sense_rank;
        out << j.dump() << '\n';
    }
}

LexicalGraph load_lexical_graph(const std::filesystem::path& path) {
    if (std::filesystem::is_directory(path)) return load_wordnet(path);
    return load_graph_jsonl(path);
}

// --- NCP lexicon --------------------------------------------------------------------

std::size_t NcpLexicon::longest_phrase() const {
    std::size_t longest = 0;
    for (const auto& [phrase, type] : phrases) {
        longest = std::max(longest, split_whitespace(phrase).size());
    }
    return longest;
}

void NcpLexicon::add_phrase(std::string phrase, PhraseType type) {
    phrase = phrase_key(phrase);
    if (split_whitespace(phrase).size() < 2) {
        throw ConfigError("NCP phrase '" + phrase + "' needs at least two tokens");
    }
    if (type == PhraseType::proper_name) {
        proper_names.insert(phrase);
    } else {
        proper_names.erase(phrase);
    }
    phrases[std::move(phrase)] = type;
}

void NcpLexicon::add_acronym(std::string acronym, std::string full_form) {
    bool has_letter = false;
    for (unsigned char c : acronym) {
        if (std::islower(c)) throw ConfigError("acronym '" + acronym + "' is not all-uppercase");
        has_letter = has_letter || std::isupper(c);
    }
    if (!has_letter) throw ConfigError("acronym '" + acronym + "' has no letters");
    acronyms[std::move(acronym)] = std::move(full_form);
}

NcpLexicon read_ncp_lexicon(std::istream& in, const std::string& name) {
    NcpLexicon lex;
    std::string line;
    std::size_t record = 0;
    while (std::getline(in, line)) {
        ++record;
        if (trim(line).empty()) continue;
        try {
            auto j = nlohmann::json::parse(line);
            if (j.contains("phrase")) {
                static const std::map<std::string, PhraseType> types = {
                    {"phrasal_verb", PhraseType::phrasal_verb},
                    {"idiom", PhraseType::idiom},
                    {"collocation", PhraseType::collocation},
                    {"proper_name", PhraseType::proper_name}};
                std::string type_name = j.value("type", "collocation");
                auto t = types.find(type_name);
                if (t == types.end()) throw ParseError(name, record, "unknown phrase type '" + type_name + "'");
                auto phrase = j.at("phrase").get<std::string>();
                if (lex.phrases.count(phrase_key(phrase))) {
                    log_warning(name + ":" + std::to_string(record) + ": duplicate phrase '" + phrase +
                                "', keeping the last entry");
                }
                lex.add_phrase(phrase, t->second);
            } else if (j.contains("acronym")) {
                auto acronym = j.at("acronym").get<std::string>();
                if (lex.acronyms.count(acronym)) {
                    log_warning(name + ":" + std::to_string(record) + ": duplicate acronym '" + acronym +
                                "', keeping the last entry");
                }
                lex.add_acronym(acronym, j.at("full").get<std::string>());
            } else {
                throw ParseError(name, record, "record has neither 'phrase' nor 'acronym'");
            }
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(name, record, e.what());
        } catch (const ConfigError& e) {
            throw ParseError(name, record, e.what());
        }
    }
    return lex;
}

NcpLexicon load_ncp_lexicon(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw LoadError("cannot open NCP lexicon " + path.string());
    return read_ncp_lexicon(in, path.string());
}

// --- Frequencies ----------------------------------------------------------------------

void TableFrequencyProvider::set(std::string_view term, std::uint64_t count) {
    counts_[phrase_key(term)] = count;
}

bool TableFrequencyProvider::contains(std::string_view term) const {
    return counts_.count(phrase_key(term)) != 0;
}

std::uint64_t TableFrequencyProvider::frequency(std::string_view term) const {
    auto it = counts_.find(phrase_key(term));
    return it == counts_.end() ? 0 : it->second;
}

TableFrequencyProvider read_frequencies(std::istream& in, const std::string& name) {
    TableFrequencyProvider table;
    std::string line;
    std::size_t record = 0;
    while (std::getline(in, line)) {
        ++record;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty() || line.front() == '#') continue;
        auto fields = split(line, '\t');
        std::uint64_t count = 0;
        if (fields.size() != 2 || trim(fields[0]).empty() || !parse_int(trim(fields[1]), count)) {
            throw ParseError(name, record, "expected term<TAB>count");
        }
        if (table.contains(fields[0])) {
            log_warning(name + ":" + std::to_string(record) + ": duplicate term '" +
                        std::string(fields[0]) + "', keeping the last entry");
        }
        table.set(trim(fields[0]), count);
    }
    return table;
}

TableFrequencyProvider load_frequencies(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw LoadError("cannot open frequency table " + path.string());
    return read_frequencies(in, path.string());
}

}  // namespace lexiqx
