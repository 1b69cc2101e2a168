#include "lexiqx/optimizer.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <thread>

#include "lexiqx/error.hpp"
#include "lexiqx/log.hpp"

namespace lexiqx {

double RoleWeights::of(RoleType role) const noexcept {
    switch (role) {
        case RoleType::CoI: return CoI;
        case RoleType::DC: return DC;
        case RoleType::RC: return RC;
        case RoleType::EC: return EC;
        case RoleType::SC:
        case RoleType::Untagged: return 0.0;
    }
    return 0.0;
}

WeightedQuery weight_query(const ExpandedQuery& query, const RoleWeights& weights, const Analyzer& analyzer) {
    WeightedQuery q;
    q.qid = query.qid;
    for (const Concept& c : query.original) {
        for (auto& stem : analyzer.terms(c.surface)) q.terms.push_back({std::move(stem), weights.of(c.role)});
    }
    for (const auto& e : query.expansion) {
        for (auto& stem : analyzer.terms(e.term)) q.terms.push_back({std::move(stem), weights.EC});
    }
    return q;
}

WeightedQuery unexpanded_query(const ExpandedQuery& query, const Analyzer& analyzer) {
    WeightedQuery q;
    q.qid = query.qid;
    for (const Concept& c : query.original) {
        for (auto& stem : analyzer.terms(c.surface)) q.terms.push_back({std::move(stem), 1.0});
    }
    return q;
}

// --- configuration ------------------------------------------------------------------

void GaConfig::validate() const {
    if (population_size < 2) throw ConfigError("population_size must be at least 2");
    if (max_iterations < 1) throw ConfigError("max_iterations must be positive");
    if (mutation_parameter < 0 || mutation_parameter > 1000) throw ConfigError("mutation_parameter must be in [0,1000]");
    if (crossover_parameter < 0 || crossover_parameter > 1000) {
        throw ConfigError("crossover_parameter must be in [0,1000]");
    }
    if (!(boost_factor > 0.0)) throw ConfigError("boost_factor must be positive");
    if (!(boost_threshold >= 0.0)) throw ConfigError("boost_threshold must be non-negative");
    if (stagnation_limit < 0) throw ConfigError("stagnation_limit must be non-negative");
    if (workers < 1) throw ConfigError("workers must be positive");
}

double GaConfig::fitness_from_map(double map) const noexcept {
    return map > boost_threshold ? map * boost_factor : map;
}

double GaConfig::map_from_fitness(double fitness) const noexcept {
    return fitness > boost_threshold * boost_factor ? fitness / boost_factor : fitness;
}

namespace {

void set_field(GaConfig& cfg, const std::string& key, const std::string& value) {
    try {
        if (key == "population_size") cfg.population_size = std::stoi(value);
        else if (key == "max_iterations") cfg.max_iterations = std::stoi(value);
        else if (key == "mutation_parameter") cfg.mutation_parameter = std::stoi(value);
        else if (key == "crossover_parameter") cfg.crossover_parameter = std::stoi(value);
        else if (key == "rng_seed") cfg.rng_seed = std::stoull(value);
        else if (key == "boost_threshold") cfg.boost_threshold = std::stod(value);
        else if (key == "boost_factor") cfg.boost_factor = std::stod(value);
        else if (key == "stagnation_limit") cfg.stagnation_limit = std::stoi(value);
        else if (key == "workers") cfg.workers = std::stoi(value);
        else throw ConfigError("unknown GA setting '" + key + "'");
    } catch (const std::logic_error&) {
        throw ConfigError("bad value '" + value + "' for " + key);
    }
}

}  // namespace

GaConfig ga_config_from_json(const nlohmann::json& j) {
    GaConfig cfg;
    for (const auto& [key, value] : j.items()) {
        set_field(cfg, key, value.is_string() ? value.get<std::string>() : value.dump());
    }
    cfg.validate();
    return cfg;
}

GaConfig read_ga_config(std::istream& in, const std::string& name) {
    GaConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto text = trim(std::string_view(line).substr(0, line.find('#')));
        if (text.empty()) continue;
        auto eq = text.find('=');
        if (eq == std::string_view::npos) throw ParseError(name, lineno, "expected key=value");
        try {
            set_field(cfg, std::string(trim(text.substr(0, eq))), std::string(trim(text.substr(eq + 1))));
        } catch (const ConfigError& e) {
            throw ParseError(name, lineno, e.what());
        }
    }
    cfg.validate();
    return cfg;
}

GaConfig load_ga_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw LoadError("cannot open " + path.string());
    char first = 0;
    in >> std::ws;
    first = static_cast<char>(in.peek());
    if (first == '{') {
        try {
            return ga_config_from_json(nlohmann::json::parse(in));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(path.string(), 1, e.what());
        }
    }
    return read_ga_config(in, path.string());
}

nlohmann::ordered_json to_json(const GaConfig& cfg) {
    return {{"population_size", cfg.population_size},
            {"max_iterations", cfg.max_iterations},
            {"mutation_parameter", cfg.mutation_parameter},
            {"crossover_parameter", cfg.crossover_parameter},
            {"rng_seed", cfg.rng_seed},
            {"boost_threshold", cfg.boost_threshold},
            {"boost_factor", cfg.boost_factor},
            {"stagnation_limit", cfg.stagnation_limit},
            {"workers", cfg.workers}};
}

// --- fitness ------------------------------------------------------------------------

RetrievalObjective::RetrievalObjective(std::vector<ExpandedQuery> queries, const Index& index, Qrels qrels,
                                       LmParams params, const Analyzer& analyzer)
    : queries_(std::move(queries)), index_(index), qrels_(std::move(qrels)), params_(params), analyzer_(analyzer) {
    if (queries_.empty()) throw ConfigError("no training queries");
    params_.validate();
}

Run RetrievalObjective::run(const RoleWeights& weights) const {
    Run all;
    for (const auto& q : queries_) {
        auto r = score_weighted_lm(index_, weight_query(q, weights, analyzer_), params_);
        all.insert(all.end(), r.begin(), r.end());
    }
    return all;
}

double RetrievalObjective::operator()(const RoleWeights& weights) const {
    return mean_average_precision(run(weights), qrels_);
}

double evaluate_fitness(const Chromosome& c, const MapFunction& map_of, const GaConfig& cfg) {
    return cfg.fitness_from_map(map_of(c.weights()));
}

double evaluate_fitness(const Chromosome& c, const std::vector<ExpandedQuery>& queries, const Index& index,
                        const Qrels& qrels, const GaConfig& cfg, const LmParams& params) {
    return evaluate_fitness(c, RetrievalObjective(queries, index, qrels, params), cfg);
}

// --- evolution ----------------------------------------------------------------------

namespace {

class Random {
  public:
    explicit Random(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    std::size_t below(std::size_t n) {
        return std::min(static_cast<std::size_t>(uniform() * static_cast<double>(n)), n - 1);
    }

  private:
    std::mt19937_64 engine_;
};

void clip(Chromosome& c) {
    for (double& g : c.genes) g = std::clamp(g, 0.0, 1.0);
}

void evaluate_all(std::vector<Chromosome>& pop, std::size_t from, const MapFunction& map_of, const GaConfig& cfg) {
    const std::size_t n = pop.size() - from;
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(cfg.workers), n);
    if (workers <= 1) {
        for (std::size_t i = from; i < pop.size(); ++i) pop[i].fitness = evaluate_fitness(pop[i], map_of, cfg);
        return;
    }
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
            try {
                for (std::size_t i = from + w; i < pop.size(); i += workers) {
                    pop[i].fitness = evaluate_fitness(pop[i], map_of, cfg);
                }
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

std::size_t best_of(const std::vector<Chromosome>& pop) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < pop.size(); ++i) {
        if (pop[i].fitness > pop[best].fitness) best = i;
    }
    return best;
}

class RouletteWheel {
  public:
    explicit RouletteWheel(const std::vector<Chromosome>& pop) {
        cumulative_.reserve(pop.size());
        double total = 0.0;
        for (const auto& c : pop) cumulative_.push_back(total += c.fitness);
        if (total <= 0.0) log_info("all fitness values are zero; selecting parents uniformly");
    }

    std::size_t spin(Random& rng) const {
        const double total = cumulative_.back();
        if (total <= 0.0) return rng.below(cumulative_.size());
        const double target = rng.uniform() * total;
        auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
        return std::min(static_cast<std::size_t>(it - cumulative_.begin()), cumulative_.size() - 1);
    }

  private:
    std::vector<double> cumulative_;
};

}  // namespace

GaResult run_ga(const GaConfig& cfg, const MapFunction& map_of, std::vector<Chromosome> initial) {
    cfg.validate();
    Random rng(cfg.rng_seed);
    const auto n = static_cast<std::size_t>(cfg.population_size);
    const double mutation_rate = cfg.mutation_parameter / 1000.0;
    const double crossover_rate = cfg.crossover_parameter / 1000.0;

    std::vector<Chromosome> pop = std::move(initial);
    if (!pop.empty() && pop.size() != n) throw ConfigError("initial population size differs from population_size");
    if (pop.empty()) {
        pop.resize(n);
        for (auto& c : pop) {
            for (double& g : c.genes) g = rng.uniform();
        }
    }
    for (auto& c : pop) clip(c);
    evaluate_all(pop, 0, map_of, cfg);

    GaResult result;
    result.best = pop[best_of(pop)];
    int stagnant = 0;

    for (int iteration = 0; iteration < cfg.max_iterations; ++iteration) {
        RouletteWheel wheel(pop);
        std::vector<Chromosome> next;
        next.reserve(n);
        next.push_back(result.best);
        while (next.size() < n) {
            Chromosome a = pop[wheel.spin(rng)];
            Chromosome b = pop[wheel.spin(rng)];
            if (rng.uniform() < crossover_rate) {
                const std::size_t point = 1 + rng.below(a.genes.size() - 1);
                for (std::size_t g = point; g < a.genes.size(); ++g) std::swap(a.genes[g], b.genes[g]);
            }
            for (auto* child : {&a, &b}) {
                for (double& g : child->genes) {
                    if (rng.uniform() < mutation_rate) g = rng.uniform();
                }
                clip(*child);
            }
            next.push_back(a);
            if (next.size() < n) next.push_back(b);
        }
        evaluate_all(next, 1, map_of, cfg);
        pop = std::move(next);

        const auto& champion = pop[best_of(pop)];
        if (champion.fitness > result.best.fitness) {
            result.best = champion;
            stagnant = 0;
        } else {
            ++stagnant;
        }
        result.history.push_back(result.best.fitness);
        result.iterations = iteration + 1;
        if (cfg.stagnation_limit > 0 && stagnant >= cfg.stagnation_limit) break;
    }
    result.best_map = map_of(result.best.weights());
    return result;
}

GaResult run_ga(const GaConfig& cfg, const std::vector<ExpandedQuery>& queries, const Index& index,
                const Qrels& qrels, const LmParams& params) {
    RetrievalObjective objective(queries, index, qrels, params);
    return run_ga(cfg, [&objective](const RoleWeights& w) { return objective(w); });
}

nlohmann::ordered_json weights_json(const RoleWeights& w, double map, std::uint64_t seed) {
    return {{"CoI", w.CoI}, {"DC", w.DC}, {"RC", w.RC}, {"SC", 0.0}, {"EC", w.EC}, {"map", map}, {"seed", seed}};
}

RoleWeights weights_from_json(const nlohmann::json& j) {
    RoleWeights w{j.at("CoI").get<double>(), j.at("DC").get<double>(), j.at("RC").get<double>(),
                  j.at("EC").get<double>()};
    if (j.contains("SC") && j.at("SC").get<double>() != 0.0) log_warning("ignoring non-zero SC weight");
    for (double g : w.genes()) {
        if (!(g >= 0.0 && g <= 1.0)) throw ConfigError("role weight outside [0,1]");
    }
    return w;
}

}  // namespace lexiqx
