#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "lexiqx/error.hpp"
#include "lexiqx/expander.hpp"
#include "lexiqx/lexicon.hpp"
#include "lexiqx/log.hpp"
#include "lexiqx/optimizer.hpp"
#include "lexiqx/pipeline.hpp"
#include "lexiqx/retrieval.hpp"
#include "lexiqx/segmenter.hpp"
#include "lexiqx/wsd.hpp"

namespace fs = std::filesystem;
using namespace lexiqx;

namespace {

constexpr int exit_input_error = 1;
constexpr int exit_internal_error = 2;

/// Flags shared by the subcommands. Empty paths are filled from LEXIQX_DATA.
struct Options {
    std::string wordnet, ncp, freq, parses, topics, corpus, qrels, roles, out = "lexiqx-out";
    std::string pool = "syn";
    int topk = 5;
    int depth = 0;
    int window = 3;
    double mu = 2000.0;
    int top_n = 1000;
    std::uint64_t seed = 1;
    int workers = 1;
    int population = 0;
    int iterations = 0;
    std::string ga_config;
    std::string weights;
    std::string run;
    std::string compare;
    bool baseline = false;
    std::string lemmas;
};

struct UsageError : Error {
    using Error::Error;
};

/// Looks in $LEXIQX_DATA, then its parent, so shared assets can sit one level up.
fs::path data_default(std::string_view name) {
    const char* root = std::getenv("LEXIQX_DATA");
    if (!root || !*root) return {};
    const fs::path base = fs::absolute(root);
    for (const auto& dir : {base, base.parent_path()}) {
        if (fs::exists(dir / name)) return dir / name;
    }
    return {};
}

fs::path resolve(const std::string& flag, std::initializer_list<std::string_view> defaults, std::string_view what) {
    if (!flag.empty()) {
        if (!fs::exists(flag)) throw LoadError(std::string(what) + " not found: " + flag);
        return flag;
    }
    for (auto name : defaults) {
        if (auto p = data_default(name); !p.empty()) return p;
    }
    return {};
}

fs::path required(const std::string& flag, std::initializer_list<std::string_view> defaults, std::string_view what,
                  std::string_view option) {
    auto p = resolve(flag, defaults, what);
    if (p.empty()) throw UsageError("missing " + std::string(option) + " (or LEXIQX_DATA with a " + std::string(what) + ")");
    return p;
}

std::optional<fs::path> optional_path(const std::string& flag, std::initializer_list<std::string_view> defaults,
                                      std::string_view what) {
    auto p = resolve(flag, defaults, what);
    if (p.empty()) return std::nullopt;
    return p;
}

fs::path wordnet_path(const Options& o) { return required(o.wordnet, {"wordnet", "wordnet.jsonl"}, "WordNet", "--wordnet"); }

ExpansionPool pool_of(const Options& o) {
    auto p = parse_pool(o.pool);
    if (!p) throw UsageError("--pool must be one of syn, hyper, hypo, coord");
    return *p;
}

RelatednessConfig relatedness(const Options& o) {
    RelatednessConfig cfg;
    cfg.window_size = o.window;
    cfg.validate();
    return cfg;
}

LmParams lm_params(const Options& o) {
    LmParams p{o.mu, o.top_n};
    p.validate();
    return p;
}

GaConfig ga_config(const Options& o) {
    GaConfig cfg;
    if (auto path = optional_path(o.ga_config, {}, "GA config")) cfg = load_ga_config(*path);
    cfg.rng_seed = o.seed;
    if (o.population > 0) cfg.population_size = o.population;
    if (o.iterations > 0) cfg.max_iterations = o.iterations;
    cfg.workers = std::max(cfg.workers, o.workers);
    cfg.validate();
    return cfg;
}

std::optional<fs::path> role_table_path(const Options& o) {
    return optional_path(o.roles, {"role_mapping.json"}, "role table");
}

RoleMappingTable role_table(const Options& o) {
    auto p = role_table_path(o);
    return p ? RoleMappingTable::load(*p) : RoleMappingTable::standard();
}

fs::path work_file(const Options& o, const std::string& name) { return fs::path(o.out) / name; }

template <typename T, typename Parse>
std::vector<T> read_artifact(const fs::path& path, Parse parse) {
    if (!fs::exists(path)) throw LoadError("missing " + path.string() + "; run the previous stage first");
    std::vector<T> out;
    std::size_t record = 0;
    for (const auto& j : load_jsonl(path)) {
        ++record;
        try {
            out.push_back(parse(j));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(path.string(), record, e.what());
        } catch (const ConfigError& e) {
            throw ParseError(path.string(), record, e.what());
        }
    }
    return out;
}

template <typename T>
void write_artifact(const fs::path& path, const std::vector<T>& items) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path);
    write_jsonl(items, out);
    if (!out) throw LoadError("cannot write " + path.string());
    std::cerr << "wrote " << path.string() << '\n';
}

void write_text(const fs::path& path, const std::string& text) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path);
    out << text;
    if (!out) throw LoadError("cannot write " + path.string());
    std::cerr << "wrote " << path.string() << '\n';
}

// --- commands -----------------------------------------------------------------------

void cmd_segment(const Options& o) {
    auto parses = load_parses(required(o.parses, {"parses.tsv"}, "parse file", "--parses"));
    auto table = role_table(o);
    std::vector<RoleTaggedQuery> tagged;
    if (auto freq = optional_path(o.freq, {"frequencies.tsv"}, "frequency table")) {
        tagged = segment_queries(parses, table, load_frequencies(*freq), o.workers);
    } else {
        auto corpus = required(o.corpus, {"corpus"}, "corpus", "--freq or --corpus");
        auto index = build_index(corpus);
        tagged = segment_queries(parses, table, IndexFrequencyProvider(index), o.workers);
    }
    write_artifact(work_file(o, artifacts::roles), tagged);

    auto topics = optional_path(o.topics, {"topics.txt"}, "topics");
    auto ncp = optional_path(o.ncp, {"ncp_lexicon.jsonl"}, "NCP lexicon");
    if (topics) {
        auto lexicon = ncp ? load_ncp_lexicon(*ncp) : NcpLexicon{};
        std::ostringstream out;
        for (const auto& t : load_topics(*topics)) out << t.qid << '\t' << detect_and_format(t.title, lexicon) << '\n';
        write_text(work_file(o, "formatted.tsv"), out.str());
    }
}

void cmd_disambiguate(const Options& o) {
    auto queries = read_artifact<RoleTaggedQuery>(work_file(o, artifacts::roles), role_tagged_query_from_json);
    auto graph = load_lexical_graph(wordnet_path(o));
    AdaptedLesk lesk(graph, relatedness(o));
    write_artifact(work_file(o, artifacts::senses), disambiguate_queries(queries, lesk, o.workers));
}

void cmd_expand(const Options& o) {
    auto queries = read_artifact<RoleTaggedQuery>(work_file(o, artifacts::roles), role_tagged_query_from_json);
    auto senses = read_artifact<QuerySenses>(work_file(o, artifacts::senses), query_senses_from_json);
    auto graph = load_lexical_graph(wordnet_path(o));
    AdaptedLesk lesk(graph, relatedness(o));
    ExpansionConfig cfg;
    cfg.pool = pool_of(o);
    cfg.top_k = o.topk;
    if (o.depth > 0) cfg.traversal.max_depth = o.depth;
    write_artifact(work_file(o, artifacts::expansions(cfg.pool)), expand_queries(queries, senses, lesk, cfg, o.workers));
}

Index open_index(const Options& o) {
    auto dir = work_file(o, artifacts::index);
    if (!fs::exists(dir)) throw LoadError("missing " + dir.string() + "; run the index command first");
    return Index::load(dir);
}

std::vector<ExpandedQuery> expansions(const Options& o) {
    return read_artifact<ExpandedQuery>(work_file(o, artifacts::expansions(pool_of(o))),
                                        [](const nlohmann::json& j) { return expanded_query_from_json(j); });
}

void cmd_index(const Options& o) {
    auto index = build_index(required(o.corpus, {"corpus"}, "corpus", "--corpus"));
    index.save(work_file(o, artifacts::index));
    std::cerr << "indexed " << index.doc_count() << " documents, " << index.vocabulary_size() << " terms into "
              << work_file(o, artifacts::index).string() << '\n';
}

void cmd_optimize(const Options& o) {
    auto index = open_index(o);
    auto qrels = load_qrels(required(o.qrels, {"qrels.txt"}, "qrels", "--qrels"));
    auto cfg = ga_config(o);
    auto result = run_ga(cfg, expansions(o), index, qrels, lm_params(o));
    write_text(work_file(o, artifacts::weights(pool_of(o))),
               weights_json(result.best.weights(), result.best_map, cfg.rng_seed).dump(2) + "\n");
}

void cmd_search(const Options& o) {
    auto index = open_index(o);
    auto queries = expansions(o);
    std::ostringstream out;
    if (o.baseline) {
        write_run(baseline_run(queries, index, lm_params(o)), out, "lm");
        write_text(work_file(o, artifacts::baseline_run), out.str());
        return;
    }
    auto weights_file = o.weights.empty() ? work_file(o, artifacts::weights(pool_of(o))) : fs::path(o.weights);
    RoleWeights weights;
    if (fs::exists(weights_file)) {
        std::ifstream in(weights_file);
        try {
            weights = weights_from_json(nlohmann::json::parse(in));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(weights_file.string(), 1, e.what());
        }
    } else if (!o.weights.empty()) {
        throw LoadError("weights file not found: " + o.weights);
    } else {
        log_warning("no weights file; using uniform weights");
    }
    write_run(weighted_run(queries, index, weights, lm_params(o)), out, "lexiqx-" + o.pool);
    write_text(work_file(o, artifacts::run(pool_of(o))), out.str());
}

Run load_run(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw LoadError("cannot open run " + path.string());
    return read_run(in, path.string());
}

void cmd_eval(const Options& o) {
    auto qrels = load_qrels(required(o.qrels, {"qrels.txt"}, "qrels", "--qrels"));
    auto run_path = o.run.empty() ? work_file(o, artifacts::run(pool_of(o))) : fs::path(o.run);
    auto result = evaluate(load_run(run_path), qrels);
    nlohmann::ordered_json j;
    j["run"] = run_path.string();
    j["map"] = result.map;
    j["ap"] = result.ap;
    if (!o.compare.empty()) {
        auto other = evaluate(load_run(o.compare), qrels);
        std::vector<double> a, b;
        for (const auto& [qid, ap] : result.ap) {
            a.push_back(ap);
            b.push_back(other.ap.count(qid) ? other.ap.at(qid) : 0.0);
        }
        j["compare"] = {{"run", o.compare}, {"map", other.map}};
        if (a.size() >= 2) {
            auto t = paired_t_test(a, b);
            j["t_test"] = {{"t", t.t}, {"p", t.p}, {"significant", t.significant}, {"n", t.n}};
        }
    }
    std::cout << j.dump(2) << '\n';
}

void cmd_pipeline(const Options& o) {
    PipelineConfig cfg;
    cfg.wordnet = wordnet_path(o);
    cfg.ncp = optional_path(o.ncp, {"ncp_lexicon.jsonl"}, "NCP lexicon");
    cfg.frequencies = optional_path(o.freq, {"frequencies.tsv"}, "frequency table");
    cfg.role_table = role_table_path(o);
    cfg.parses = required(o.parses, {"parses.tsv"}, "parse file", "--parses");
    cfg.topics = optional_path(o.topics, {"topics.txt"}, "topics");
    cfg.corpus = required(o.corpus, {"corpus"}, "corpus", "--corpus");
    cfg.qrels = required(o.qrels, {"qrels.txt"}, "qrels", "--qrels");
    cfg.out = o.out;
    cfg.expansion.pool = pool_of(o);
    cfg.expansion.top_k = o.topk;
    if (o.depth > 0) cfg.expansion.traversal.max_depth = o.depth;
    cfg.relatedness = relatedness(o);
    cfg.ga = ga_config(o);
    cfg.lm = lm_params(o);
    cfg.workers = o.workers;
    auto report = run_pipeline(cfg);
    std::cout << to_json(report, cfg.expansion.pool).dump(2) << '\n';
}

void cmd_graph_subset(const Options& o) {
    auto graph = load_lexical_graph(wordnet_path(o));
    std::set<SynsetIndex> keep;
    for (auto lemma : split(o.lemmas, ',')) {
        auto key = underscore_form(trim(lemma));
        for (auto pos : all_parts_of_speech) {
            for (SynsetIndex s : graph.senses(key, pos)) {
                keep.insert(s);
                std::vector<SynsetIndex> stack{s};
                while (!stack.empty()) {
                    auto cur = stack.back();
                    stack.pop_back();
                    for (SynsetIndex h : graph.hypernyms(cur)) {
                        if (keep.insert(h).second) stack.push_back(h);
                    }
                }
                for (SynsetIndex h : graph.hyponyms(s)) keep.insert(h);
            }
        }
    }
    LexicalGraph::Builder b;
    for (SynsetIndex s : keep) b.add_synset(graph.at(s));
    for (SynsetIndex s : keep) {
        for (SynsetIndex h : graph.hypernyms(s)) {
            if (keep.count(h)) b.add_hypernym(graph.at(s).id, graph.at(h).id);
        }
    }
    for (const auto& [key, senses] : graph.lemma_entries()) {
        for (SynsetIndex s : senses) {
            if (keep.count(s)) b.add_sense(key.first, key.second, graph.at(s).id);
        }
    }
    auto subset = std::move(b).build();
    std::ostringstream out;
    write_graph_jsonl(subset, out);
    write_text(work_file(o, "wordnet.jsonl"), out.str());
}

void cmd_role_table(const Options& o) {
    std::ostringstream out;
    role_table(o).write_json(out);
    write_text(work_file(o, "role_mapping.json"), out.str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Role-typed query expansion and retrieval evaluation"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--out", o.out, "Working directory for artifacts")->capture_default_str();
        cmd->add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    };
    auto add_wordnet = [&](CLI::App* cmd) {
        cmd->add_option("--wordnet", o.wordnet, "WordNet dict directory or graph JSONL file");
        cmd->add_option("--window", o.window, "WSD window size (odd)")->capture_default_str();
    };
    auto add_pool = [&](CLI::App* cmd) {
        cmd->add_option("--pool", o.pool, "Expansion pool")
            ->check(CLI::IsMember({"syn", "hyper", "hypo", "coord"}))
            ->capture_default_str();
    };
    auto add_lm = [&](CLI::App* cmd) {
        cmd->add_option("--mu", o.mu, "Dirichlet prior")->capture_default_str();
        cmd->add_option("--top-n", o.top_n, "Documents per query")->capture_default_str();
    };
    auto add_ga = [&](CLI::App* cmd) {
        cmd->add_option("--seed", o.seed, "GA random seed")->capture_default_str();
        cmd->add_option("--ga-config", o.ga_config, "GA config (JSON or key=value)");
        cmd->add_option("--population", o.population, "Override population size");
        cmd->add_option("--iterations", o.iterations, "Override iteration count");
    };
    auto add_segment_inputs = [&](CLI::App* cmd) {
        cmd->add_option("--parses", o.parses, "Dependency parse TSV");
        cmd->add_option("--freq", o.freq, "Term frequency TSV");
        cmd->add_option("--ncp", o.ncp, "NCP lexicon JSONL");
        cmd->add_option("--topics", o.topics, "TREC topics file");
        cmd->add_option("--roles", o.roles, "Role mapping table JSON");
    };
    auto add_expand = [&](CLI::App* cmd) {
        cmd->add_option("--topk", o.topk, "Expansion terms per query")->capture_default_str();
        cmd->add_option("--depth", o.depth, "Hypernym/hyponym depth cap (0 = unlimited)");
    };

    std::map<CLI::App*, void (*)(const Options&)> handlers;

    auto* segment = app.add_subcommand("segment", "Map parsed queries to role-typed concepts");
    add_common(segment);
    add_segment_inputs(segment);
    segment->add_option("--corpus", o.corpus, "Corpus for document-frequency fallback");
    handlers[segment] = cmd_segment;

    auto* disambiguate = app.add_subcommand("disambiguate", "All-words sense disambiguation");
    add_common(disambiguate);
    add_wordnet(disambiguate);
    handlers[disambiguate] = cmd_disambiguate;

    auto* expand = app.add_subcommand("expand", "Build, rank and cut one expansion pool");
    add_common(expand);
    add_wordnet(expand);
    add_pool(expand);
    add_expand(expand);
    handlers[expand] = cmd_expand;

    auto* index = app.add_subcommand("index", "Index a TREC corpus");
    add_common(index);
    index->add_option("--corpus", o.corpus, "Corpus directory or file");
    handlers[index] = cmd_index;

    auto* optimize = app.add_subcommand("optimize", "Genetic search for role weights");
    add_common(optimize);
    add_pool(optimize);
    add_lm(optimize);
    add_ga(optimize);
    optimize->add_option("--qrels", o.qrels, "Relevance judgments");
    handlers[optimize] = cmd_optimize;

    auto* search = app.add_subcommand("search", "Score expanded queries into a TREC run");
    add_common(search);
    add_pool(search);
    add_lm(search);
    search->add_option("--weights", o.weights, "Role weights JSON");
    search->add_flag("--baseline", o.baseline, "Unexpanded uniform-weight run");
    handlers[search] = cmd_search;

    auto* eval = app.add_subcommand("eval", "MAP of a run, optionally with a paired t-test");
    add_common(eval);
    add_pool(eval);
    eval->add_option("--qrels", o.qrels, "Relevance judgments");
    eval->add_option("--run", o.run, "TREC run file");
    eval->add_option("--compare", o.compare, "Second run for the paired t-test");
    handlers[eval] = cmd_eval;

    auto* pipeline = app.add_subcommand("pipeline", "Run every stage and report");
    add_common(pipeline);
    add_wordnet(pipeline);
    add_pool(pipeline);
    add_expand(pipeline);
    add_lm(pipeline);
    add_ga(pipeline);
    add_segment_inputs(pipeline);
    pipeline->add_option("--corpus", o.corpus, "Corpus directory or file");
    pipeline->add_option("--qrels", o.qrels, "Relevance judgments");
    handlers[pipeline] = cmd_pipeline;

    auto* subset = app.add_subcommand("graph-subset", "Write the sense neighborhood of some lemmas as graph JSONL");
    add_common(subset);
    add_wordnet(subset);
    subset->add_option("--lemmas", o.lemmas, "Comma-separated lemmas")->required();
    handlers[subset] = cmd_graph_subset;

    auto* table = app.add_subcommand("role-table", "Write the role mapping table as JSON");
    add_common(table);
    table->add_option("--roles", o.roles, "Table to re-export instead of the built-in one");
    handlers[table] = cmd_role_table;

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_input_error;
    }

    try {
        for (auto& [cmd, handler] : handlers) {
            if (cmd->parsed()) handler(o);
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return exit_input_error;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_input_error;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return exit_internal_error;
    }
    return 0;
}
