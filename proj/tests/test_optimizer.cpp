#include "doctest.h"

#include <sstream>

#include "lexiqx/error.hpp"
#include "lexiqx/optimizer.hpp"
#include "support.hpp"

using namespace lexiqx;

namespace {

ExpandedQuery car_theft() {
    auto q = testing::make_query("1", {"car/NN", "theft/NN"}, {{"nn", 2, 1}});
    auto tagged = map_roles(q, RoleMappingTable::standard(), TableFrequencyProvider());
    ExpandedQuery e;
    e.qid = "1";
    e.original = tagged.concepts;
    e.expansion = {{"auto", 0.5}};
    return e;
}

Index small_index() {
    return Index::build({{"R", "theft report filed"}, {"N", "car car car dealer"}, {"X", "auto show"}});
}

Qrels small_qrels() { return {{"1", {{"R", 1}, {"N", 0}, {"X", 0}}}}; }

/// A smooth objective with its peak at CoI = 1, DC = 0.
double bowl(const RoleWeights& w) { return 1.0 - 0.25 * ((1 - w.CoI) * (1 - w.CoI) + w.DC * w.DC); }

}  // namespace

TEST_CASE("role weights") {
    RoleWeights w{0.9, 0.5, 0.2, 0.1};
    CHECK(w.of(RoleType::CoI) == 0.9);
    CHECK(w.of(RoleType::EC) == 0.1);
    CHECK(w.of(RoleType::SC) == 0.0);
    CHECK(RoleWeights::from_genes(w.genes()) == w);
    CHECK(weights_from_json(weights_json(w, 0.5, 3)) == w);
}

TEST_CASE("weighted query building") {
    auto e = car_theft();
    auto wq = weight_query(e, {1.0, 0.25, 0.0, 0.5});
    REQUIRE(wq.terms.size() == 3);
    CHECK(wq.terms[0].stem == "car");
    CHECK(wq.terms[0].weight == 0.25);
    CHECK(wq.terms[1].stem == "theft");
    CHECK(wq.terms[1].weight == 1.0);
    CHECK(wq.terms[2].stem == "auto");
    CHECK(wq.terms[2].weight == 0.5);
    auto plain = unexpanded_query(e);
    CHECK(plain.terms.size() == 2);
}

TEST_CASE("fitness examples") {
    auto idx = small_index();
    auto qrels = small_qrels();
    GaConfig cfg;
    std::vector<ExpandedQuery> qs = {car_theft()};
    Chromosome coi{{1.0, 0.0, 0.0, 0.0}, 0.0};
    CHECK(evaluate_fitness(coi, qs, idx, qrels, cfg) == cfg.fitness_from_map(1.0));
    Chromosome zero{{0.0, 0.0, 0.0, 0.0}, 0.0};
    CHECK(evaluate_fitness(zero, qs, idx, qrels, cfg) == 0.0);
    Chromosome twin = coi;
    CHECK(evaluate_fitness(twin, qs, idx, qrels, cfg) == evaluate_fitness(coi, qs, idx, qrels, cfg));
    CHECK(cfg.fitness_from_map(0.4) == 0.4);
    CHECK(cfg.fitness_from_map(0.8) == doctest::Approx(1.2));
    CHECK(cfg.map_from_fitness(cfg.fitness_from_map(0.8)) == doctest::Approx(0.8));
}

TEST_CASE("GA determinism and monotone history") {
    GaConfig cfg;
    cfg.population_size = 20;
    cfg.max_iterations = 30;
    cfg.rng_seed = 99;
    auto a = run_ga(cfg, bowl);
    auto b = run_ga(cfg, bowl);
    CHECK(a.best.genes == b.best.genes);
    CHECK(a.history == b.history);
    CHECK(a.history.size() == 30);
    for (std::size_t i = 1; i < a.history.size(); ++i) CHECK(a.history[i] >= a.history[i - 1]);
    CHECK(a.best_map == bowl(a.best.weights()));
    for (double g : a.best.genes) {
        CHECK(g >= 0.0);
        CHECK(g <= 1.0);
    }

    cfg.workers = 4;
    auto c = run_ga(cfg, bowl);
    CHECK(c.history == a.history);
}

TEST_CASE("GA on an identical population stays put") {
    GaConfig cfg;
    cfg.population_size = 10;
    cfg.max_iterations = 15;
    cfg.mutation_parameter = 0;
    std::vector<Chromosome> same(10, Chromosome{{0.3, 0.6, 0.2, 0.9}, 0.0});
    auto r = run_ga(cfg, bowl, same);
    CHECK(r.best.genes == same[0].genes);
    for (double h : r.history) CHECK(h == r.history.front());
}

TEST_CASE("GA with zero fitness everywhere still runs") {
    GaConfig cfg;
    cfg.population_size = 6;
    cfg.max_iterations = 3;
    auto r = run_ga(cfg, [](const RoleWeights&) { return 0.0; });
    CHECK(r.best_map == 0.0);
    CHECK(r.iterations == 3);
}

TEST_CASE("GA stagnation limit") {
    GaConfig cfg;
    cfg.population_size = 6;
    cfg.max_iterations = 50;
    cfg.stagnation_limit = 4;
    auto r = run_ga(cfg, [](const RoleWeights&) { return 0.3; });
    CHECK(r.iterations == 4);
}

TEST_CASE("GA config parsing and validation") {
    std::istringstream in("# tuned\npopulation_size = 50\nmax_iterations=10\nrng_seed=7\n");
    auto cfg = read_ga_config(in);
    CHECK(cfg.population_size == 50);
    CHECK(cfg.max_iterations == 10);
    CHECK(cfg.rng_seed == 7);
    CHECK(ga_config_from_json(to_json(cfg)).population_size == 50);
    std::istringstream bad("population_size = lots\n");
    CHECK_THROWS_AS(read_ga_config(bad), Error);
    GaConfig tiny;
    tiny.population_size = 1;
    CHECK_THROWS_AS(tiny.validate(), ConfigError);
}

TEST_CASE("GA over retrieval finds the CoI-only optimum") {
    GaConfig cfg;
    cfg.population_size = 30;
    cfg.max_iterations = 40;
    auto r = run_ga(cfg, {car_theft()}, small_index(), small_qrels());
    CHECK(r.best_map == 1.0);
}
