#include "lexiqx/pipeline.hpp"

#include <fstream>
#include <set>
#include <thread>

#include "lexiqx/error.hpp"
#include "lexiqx/log.hpp"
#include "lexiqx/porter.hpp"

namespace lexiqx {

namespace fs = std::filesystem;

namespace {

template <typename T>
std::optional<T> from_name(std::string_view name, std::initializer_list<T> values) {
    for (T v : values) {
        if (to_string(v) == name) return v;
    }
    return std::nullopt;
}

template <typename T>
T require(std::optional<T> value, std::string_view what, const std::string& name) {
    if (!value) throw ConfigError("unknown " + std::string(what) + " '" + name + "'");
    return *value;
}

/// Applies `fn` to every index in [0, n) on up to `workers` threads.
template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn fn) {
    const auto threads = std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), n);
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (std::size_t w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += threads) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace

// --- serialization ------------------------------------------------------------------

nlohmann::ordered_json to_json(const RoleTaggedQuery& q) {
    nlohmann::ordered_json j;
    j["qid"] = q.qid;
    auto& concepts = j["concepts"] = nlohmann::ordered_json::array();
    for (const Concept& c : q.concepts) {
        nlohmann::ordered_json cj;
        cj["index"] = c.index;
        cj["surface"] = c.surface;
        cj["stem"] = c.stem;
        cj["pos"] = c.pos_tag;
        cj["role"] = std::string(to_string(c.role));
        cj["ncp"] = c.ncp;
        auto& prov = cj["provenance"] = nlohmann::ordered_json::array();
        for (const auto& p : c.provenance) {
            prov.push_back({{"relation", p.relation},
                            {"source", std::string(to_string(p.source))},
                            {"role", std::string(to_string(p.role))},
                            {"class", std::string(to_string(p.relation_class))}});
        }
        concepts.push_back(std::move(cj));
    }
    auto& deps = j["deps"] = nlohmann::ordered_json::array();
    for (const auto& d : q.deps) deps.push_back({{"relation", d.relation}, {"head", d.head_index}, {"dep", d.dep_index}});
    return j;
}

RoleTaggedQuery role_tagged_query_from_json(const nlohmann::json& j) {
    RoleTaggedQuery q;
    q.qid = j.at("qid").get<std::string>();
    for (const auto& cj : j.at("concepts")) {
        Concept c;
        c.index = cj.at("index").get<int>();
        c.surface = cj.at("surface").get<std::string>();
        c.stem = cj.value("stem", term_stem(c.surface));
        c.pos_tag = cj.value("pos", std::string());
        auto role = cj.at("role").get<std::string>();
        c.role = require(parse_role(role), "role", role);
        c.ncp = cj.value("ncp", false);
        for (const auto& pj : cj.value("provenance", nlohmann::json::array())) {
            RoleProposal p;
            p.relation = pj.at("relation").get<std::string>();
            auto source = pj.at("source").get<std::string>();
            p.source = require(from_name(source, {ProposalSource::head, ProposalSource::dependent,
                                                  ProposalSource::connector, ProposalSource::fallback}),
                               "proposal source", source);
            auto prole = pj.at("role").get<std::string>();
            p.role = require(parse_role(prole), "role", prole);
            auto cls = pj.at("class").get<std::string>();
            p.relation_class = require(
                from_name(cls, {RelationClass::normal, RelationClass::preposition, RelationClass::conjunction}),
                "relation class", cls);
            c.provenance.push_back(std::move(p));
        }
        q.concepts.push_back(std::move(c));
    }
    for (const auto& dj : j.value("deps", nlohmann::json::array())) {
        q.deps.push_back({dj.at("relation").get<std::string>(), dj.at("head").get<int>(), dj.at("dep").get<int>()});
    }
    return q;
}

nlohmann::ordered_json to_json(const QuerySenses& s) {
    nlohmann::ordered_json j;
    j["qid"] = s.qid;
    auto& arr = j["senses"] = nlohmann::ordered_json::array();
    for (const auto& a : s.senses) {
        nlohmann::ordered_json aj;
        aj["index"] = a.token_index;
        aj["surface"] = a.surface;
        aj["lemma"] = a.lemma;
        aj["pos"] = a.pos ? nlohmann::ordered_json(std::string(1, pos_code(*a.pos))) : nlohmann::ordered_json();
        aj["synset"] = a.synset_id ? nlohmann::ordered_json(*a.synset_id) : nlohmann::ordered_json();
        aj["status"] = std::string(to_string(a.status));
        aj["score"] = a.score;
        arr.push_back(std::move(aj));
    }
    return j;
}

QuerySenses query_senses_from_json(const nlohmann::json& j) {
    QuerySenses s;
    s.qid = j.at("qid").get<std::string>();
    for (const auto& aj : j.at("senses")) {
        SenseAnnotation a;
        a.token_index = aj.at("index").get<int>();
        a.surface = aj.at("surface").get<std::string>();
        a.lemma = aj.value("lemma", std::string());
        if (aj.contains("pos") && aj.at("pos").is_string()) {
            auto code = aj.at("pos").get<std::string>();
            auto pos = code.size() == 1 ? pos_from_code(code[0]) : std::nullopt;
            a.pos = require(pos, "part of speech", code);
        }
        if (aj.contains("synset") && aj.at("synset").is_string()) a.synset_id = aj.at("synset").get<std::string>();
        auto status = aj.at("status").get<std::string>();
        a.status = require(parse_sense_status(status), "sense status", status);
        a.score = aj.value("score", 0.0);
        s.senses.push_back(std::move(a));
    }
    return s;
}

std::vector<nlohmann::json> read_jsonl(std::istream& in, const std::string& name) {
    std::vector<nlohmann::json> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        try {
            out.push_back(nlohmann::json::parse(line));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(name, lineno, e.what());
        }
    }
    return out;
}

std::vector<nlohmann::json> load_jsonl(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw LoadError("cannot open " + path.string());
    return read_jsonl(in, path.string());
}

namespace artifacts {
std::string expansions(ExpansionPool pool) { return "expansions." + std::string(to_string(pool)) + ".jsonl"; }
std::string weights(ExpansionPool pool) { return "weights." + std::string(to_string(pool)) + ".json"; }
std::string run(ExpansionPool pool) { return "run." + std::string(to_string(pool)) + ".trec"; }
}  // namespace artifacts

// --- stages -------------------------------------------------------------------------

std::vector<RoleTaggedQuery> segment_queries(const std::vector<ParsedQuery>& parses, const RoleMappingTable& table,
                                             const FrequencyProvider& frequencies, int workers) {
    std::vector<RoleTaggedQuery> out(parses.size());
    parallel_for(parses.size(), workers, [&](std::size_t i) { out[i] = map_roles(parses[i], table, frequencies); });
    return out;
}

std::vector<QuerySenses> disambiguate_queries(const std::vector<RoleTaggedQuery>& queries, const AdaptedLesk& lesk,
                                              int workers) {
    std::vector<QuerySenses> out(queries.size());
    parallel_for(queries.size(), workers, [&](std::size_t i) {
        out[i] = {queries[i].qid, disambiguate_all_words(queries[i], lesk)};
    });
    return out;
}

std::vector<ExpandedQuery> expand_queries(const std::vector<RoleTaggedQuery>& queries,
                                          const std::vector<QuerySenses>& senses, const AdaptedLesk& lesk,
                                          const ExpansionConfig& config, int workers) {
    std::map<std::string, const QuerySenses*> by_qid;
    for (const auto& s : senses) by_qid[s.qid] = &s;
    std::vector<ExpandedQuery> out(queries.size());
    parallel_for(queries.size(), workers, [&](std::size_t i) {
        auto it = by_qid.find(queries[i].qid);
        static const std::vector<SenseAnnotation> none;
        out[i] = expand_query(queries[i], it == by_qid.end() ? none : it->second->senses, lesk, config);
    });
    for (const auto& q : queries) {
        if (!by_qid.count(q.qid)) log_warning("query " + q.qid + " has no sense annotations; left unexpanded");
    }
    return out;
}

Run baseline_run(const std::vector<ExpandedQuery>& queries, const Index& index, const LmParams& params) {
    Analyzer analyzer;
    Run all;
    for (const auto& q : queries) {
        std::vector<std::string> stems;
        for (const auto& t : unexpanded_query(q, analyzer).terms) stems.push_back(t.stem);
        auto r = score_lm(index, q.qid, stems, params);
        all.insert(all.end(), r.begin(), r.end());
    }
    return all;
}

Run weighted_run(const std::vector<ExpandedQuery>& queries, const Index& index, const RoleWeights& weights,
                 const LmParams& params) {
    Analyzer analyzer;
    Run all;
    for (const auto& q : queries) {
        auto r = score_weighted_lm(index, weight_query(q, weights, analyzer), params);
        all.insert(all.end(), r.begin(), r.end());
    }
    return all;
}

nlohmann::ordered_json to_json(const PipelineReport& r, ExpansionPool pool) {
    nlohmann::ordered_json j;
    j["pool"] = std::string(to_string(pool));
    auto& queries = j["queries"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < r.roles.size(); ++i) {
        const auto& q = r.roles[i];
        nlohmann::ordered_json qj;
        qj["qid"] = q.qid;
        auto& roles = qj["roles"] = nlohmann::ordered_json::array();
        for (const auto& c : q.concepts) roles.push_back({{"term", c.surface}, {"role", std::string(to_string(c.role))}});
        auto& senses = qj["senses"] = nlohmann::ordered_json::array();
        for (const auto& s : r.senses) {
            if (s.qid != q.qid) continue;
            for (const auto& a : s.senses) {
                senses.push_back({{"term", a.surface},
                                  {"synset", a.synset_id ? nlohmann::ordered_json(*a.synset_id) : nlohmann::ordered_json()},
                                  {"status", std::string(to_string(a.status))}});
            }
        }
        auto& exp = qj["expansion"] = nlohmann::ordered_json::array();
        for (const auto& e : r.expansions) {
            if (e.qid != q.qid) continue;
            for (const auto& t : e.expansion) exp.push_back(t.term);
        }
        auto ap = [&](const EvalResult& e) -> nlohmann::ordered_json {
            auto it = e.ap.find(q.qid);
            return it == e.ap.end() ? nlohmann::ordered_json() : nlohmann::ordered_json(it->second);
        };
        qj["ap_lm"] = ap(r.baseline);
        qj["ap_expanded"] = ap(r.expanded);
        queries.push_back(std::move(qj));
    }
    j["map_lm"] = r.baseline.map;
    j["map_expanded"] = r.expanded.map;
    j["weights"] = weights_json(r.weights, r.expanded.map, 0);
    j["weights"].erase("seed");
    j["ga_iterations"] = r.ga.iterations;
    j["ga_best_fitness"] = r.ga.best.fitness;
    if (r.t_test) {
        j["t_test"] = {{"t", r.t_test->t},
                       {"p", r.t_test->p},
                       {"significant", r.t_test->significant},
                       {"n", r.t_test->n}};
    } else {
        j["t_test"] = nullptr;
    }
    return j;
}

PipelineReport run_pipeline(const PipelineConfig& config) {
    config.relatedness.validate();
    config.ga.validate();
    config.lm.validate();
    if (config.expansion.top_k < 1) throw ConfigError("top_k must be at least 1");
    fs::create_directories(config.out);

    auto table = config.role_table ? RoleMappingTable::load(*config.role_table) : RoleMappingTable::standard();
    auto parses = load_parses(config.parses);
    const auto graph = load_lexical_graph(config.wordnet);
    const auto index = build_index(config.corpus);
    index.save(config.out / artifacts::index);
    const auto qrels = load_qrels(config.qrels);

    if (config.topics) {
        auto topics = load_topics(*config.topics);
        std::set<std::string> known;
        for (const auto& t : topics) known.insert(t.qid);
        for (const auto& p : parses) {
            if (!known.count(p.qid)) log_warning("parsed query " + p.qid + " has no topic");
        }
    }

    PipelineReport report;
    if (config.frequencies) {
        report.roles = segment_queries(parses, table, load_frequencies(*config.frequencies), config.workers);
    } else {
        report.roles = segment_queries(parses, table, IndexFrequencyProvider(index), config.workers);
    }

    AdaptedLesk lesk(graph, config.relatedness);
    report.senses = disambiguate_queries(report.roles, lesk, config.workers);
    report.expansions = expand_queries(report.roles, report.senses, lesk, config.expansion, config.workers);

    {
        std::ofstream out(config.out / artifacts::roles);
        write_jsonl(report.roles, out);
    }
    {
        std::ofstream out(config.out / artifacts::senses);
        write_jsonl(report.senses, out);
    }
    {
        std::ofstream out(config.out / artifacts::expansions(config.expansion.pool));
        write_jsonl(report.expansions, out);
    }

    auto base = baseline_run(report.expansions, index, config.lm);
    report.baseline = evaluate(base, qrels);

    GaConfig ga = config.ga;
    ga.workers = std::max(ga.workers, config.workers);
    report.ga = run_ga(ga, report.expansions, index, qrels, config.lm);
    report.weights = report.ga.best.weights();
    auto expanded = weighted_run(report.expansions, index, report.weights, config.lm);
    report.expanded = evaluate(expanded, qrels);

    std::vector<double> a, b;
    for (const auto& [qid, ap] : report.expanded.ap) {
        a.push_back(ap);
        b.push_back(report.baseline.ap.at(qid));
    }
    if (a.size() >= 2) report.t_test = paired_t_test(a, b);

    {
        std::ofstream out(config.out / artifacts::baseline_run);
        write_run(base, out, "lm");
    }
    {
        std::ofstream out(config.out / artifacts::run(config.expansion.pool));
        write_run(expanded, out, "lexiqx-" + std::string(to_string(config.expansion.pool)));
    }
    {
        std::ofstream out(config.out / artifacts::weights(config.expansion.pool));
        out << weights_json(report.weights, report.expanded.map, ga.rng_seed).dump(2) << '\n';
    }
    {
        std::ofstream out(config.out / artifacts::report);
        out << to_json(report, config.expansion.pool).dump(2) << '\n';
    }
    return report;
}

}  // namespace lexiqx
