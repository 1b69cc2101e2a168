#include "lexiqx/expander.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "lexiqx/error.hpp"
#include "lexiqx/porter.hpp"
#include "lexiqx/text.hpp"

namespace lexiqx {

std::string_view to_string(ExpansionPool pool) noexcept {
    switch (pool) {
        case ExpansionPool::synonym: return "syn";
        case ExpansionPool::hypernym: return "hyper";
        case ExpansionPool::hyponym: return "hypo";
        case ExpansionPool::coordinate: return "coord";
    }
    return "?";
}

std::optional<ExpansionPool> parse_pool(std::string_view name) noexcept {
    static const std::pair<std::string_view, ExpansionPool> names[] = {
        {"syn", ExpansionPool::synonym},         {"synonym", ExpansionPool::synonym},
        {"hyper", ExpansionPool::hypernym},      {"hypernym", ExpansionPool::hypernym},
        {"hypo", ExpansionPool::hyponym},        {"hyponym", ExpansionPool::hyponym},
        {"coord", ExpansionPool::coordinate},    {"coordinate", ExpansionPool::coordinate},
    };
    for (const auto& [n, p] : names) {
        if (n == name) return p;
    }
    return std::nullopt;
}

std::vector<BaseTerm> select_base_terms(const RoleTaggedQuery& query, const std::vector<SenseAnnotation>& senses,
                                        const LexicalGraph& graph) {
    std::vector<BaseTerm> out;
    for (const Concept& c : query.concepts) {
        if (c.role != RoleType::CoI && c.role != RoleType::DC) continue;
        auto it = std::find_if(senses.begin(), senses.end(),
                               [&](const SenseAnnotation& a) { return a.token_index == c.index; });
        if (it == senses.end() || !it->has_sense()) continue;
        out.push_back({c.surface, it->lemma, c.role, c.index, graph.index_of(*it->synset_id)});
    }
    return out;
}

namespace {

std::vector<SynsetIndex> closure(const LexicalGraph& g, SynsetIndex start, bool upward, std::optional<int> max_depth) {
    std::vector<char> seen(g.size(), 0);
    std::vector<SynsetIndex> out;
    std::deque<std::pair<SynsetIndex, int>> queue{{start, 0}};
    seen[start] = 1;
    while (!queue.empty()) {
        auto [s, depth] = queue.front();
        queue.pop_front();
        if (max_depth && depth >= *max_depth) continue;
        for (SynsetIndex next : upward ? g.hypernyms(s) : g.hyponyms(s)) {
            if (seen[next]) continue;
            seen[next] = 1;
            out.push_back(next);
            queue.emplace_back(next, depth + 1);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

std::vector<SynsetIndex> pool_synsets(const LexicalGraph& graph, SynsetIndex base, ExpansionPool pool,
                                      const PoolConfig& config) {
    if (config.max_depth && *config.max_depth < 1) throw ConfigError("traversal depth must be at least 1");
    switch (pool) {
        case ExpansionPool::synonym: return {base};
        case ExpansionPool::hypernym: return closure(graph, base, true, config.max_depth);
        case ExpansionPool::hyponym: return closure(graph, base, false, config.max_depth);
        case ExpansionPool::coordinate: return graph.coordinate_terms(base);
    }
    return {};
}

std::vector<ExpansionCandidate> build_pool(const std::vector<BaseTerm>& bases, const LexicalGraph& graph,
                                           ExpansionPool pool, const RoleTaggedQuery& original,
                                           const PoolConfig& config) {
    std::unordered_set<std::string> forms, stems;
    auto forbid = [&](std::string_view term) {
        auto form = underscore_form(term);
        if (form.empty()) return;
        stems.insert(term_stem(form));
        forms.insert(std::move(form));
    };
    for (const Concept& c : original.concepts) forbid(c.surface);
    for (const BaseTerm& b : bases) forbid(b.lemma);

    std::map<std::string, ExpansionCandidate> by_stem;
    for (const BaseTerm& b : bases) {
        for (SynsetIndex s : pool_synsets(graph, b.synset, pool, config)) {
            for (const auto& lemma : graph.at(s).lemmas) {
                auto term = to_lower(lemma);
                auto stem = term_stem(term);
                if (forms.count(term) || stems.count(stem)) continue;
                auto [it, inserted] = by_stem.try_emplace(stem);
                ExpansionCandidate& c = it->second;
                if (inserted || term < c.term) c.term = term;
                c.stem = stem;
                c.source_relation = pool;
                c.source_base_terms.insert(b.term);
                c.source_synsets.push_back(s);
            }
        }
    }

    std::vector<ExpansionCandidate> out;
    out.reserve(by_stem.size());
    for (auto& [stem, c] : by_stem) {
        std::sort(c.source_synsets.begin(), c.source_synsets.end());
        c.source_synsets.erase(std::unique(c.source_synsets.begin(), c.source_synsets.end()), c.source_synsets.end());
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<ExpansionCandidate> rank_pool(std::vector<ExpansionCandidate> pool, const std::vector<BaseTerm>& bases,
                                          const AdaptedLesk& lesk) {
    for (auto& c : pool) {
        double best = 0.0;
        for (SynsetIndex s : c.source_synsets) {
            if (bases.empty()) break;
            double sum = 0.0;
            for (const BaseTerm& b : bases) sum += lesk(s, b.synset);
            best = std::max(best, sum / static_cast<double>(bases.size()));
        }
        c.avg_relatedness = best;
    }
    std::sort(pool.begin(), pool.end(), [](const ExpansionCandidate& a, const ExpansionCandidate& b) {
        if (a.avg_relatedness != b.avg_relatedness) return a.avg_relatedness > b.avg_relatedness;
        return a.term < b.term;
    });
    return pool;
}

ExpandedQuery take_top_k(const RoleTaggedQuery& query, ExpansionPool pool,
                         const std::vector<ExpansionCandidate>& ranked, int k) {
    if (k < 1) throw ConfigError("top_k must be at least 1, got " + std::to_string(k));
    ExpandedQuery out;
    out.qid = query.qid;
    out.pool = pool;
    out.original = query.concepts;
    const auto n = std::min(ranked.size(), static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < n; ++i) out.expansion.push_back({ranked[i].term, ranked[i].avg_relatedness});
    return out;
}

ExpandedQuery expand_query(const RoleTaggedQuery& query, const std::vector<SenseAnnotation>& senses,
                           const AdaptedLesk& lesk, const ExpansionConfig& config) {
    if (config.top_k < 1) throw ConfigError("top_k must be at least 1, got " + std::to_string(config.top_k));
    auto bases = select_base_terms(query, senses, lesk.graph());
    auto pool = build_pool(bases, lesk.graph(), config.pool, query, config.traversal);
    return take_top_k(query, config.pool, rank_pool(std::move(pool), bases, lesk), config.top_k);
}

nlohmann::ordered_json to_json(const ExpandedQuery& q) {
    nlohmann::ordered_json j;
    j["qid"] = q.qid;
    j["pool"] = std::string(to_string(q.pool));
    auto& original = j["original"] = nlohmann::ordered_json::array();
    for (const Concept& c : q.original) {
        original.push_back({{"term", c.surface}, {"role", std::string(to_string(c.role))}, {"index", c.index}});
    }
    auto& expansion = j["expansion"] = nlohmann::ordered_json::array();
    for (const auto& t : q.expansion) expansion.push_back({{"term", t.term}, {"role", "EC"}, {"score", t.score}});
    return j;
}

ExpandedQuery expanded_query_from_json(const nlohmann::json& j) {
    ExpandedQuery q;
    q.qid = j.at("qid").get<std::string>();
    auto pool_name = j.at("pool").get<std::string>();
    auto pool = parse_pool(pool_name);
    if (!pool) throw ConfigError("unknown pool '" + pool_name + "'");
    q.pool = *pool;
    int next_index = 1;
    for (const auto& o : j.at("original")) {
        Concept c;
        c.surface = o.at("term").get<std::string>();
        c.stem = term_stem(c.surface);
        auto role_name = o.at("role").get<std::string>();
        auto role = parse_role(role_name);
        if (!role) throw ConfigError("unknown role '" + role_name + "'");
        c.role = *role;
        c.index = o.value("index", next_index);
        next_index = c.index + 1;
        c.ncp = c.surface.find('_') != std::string::npos;
        q.original.push_back(std::move(c));
    }
    for (const auto& e : j.at("expansion")) {
        q.expansion.push_back({e.at("term").get<std::string>(), e.value("score", 0.0)});
    }
    return q;
}

}  // namespace lexiqx
