#include "doctest.h"

#include <sstream>

#include "lexiqx/error.hpp"
#include "lexiqx/pipeline.hpp"
#include "support.hpp"

using namespace lexiqx;

TEST_CASE("role-tagged query JSON round trip") {
    auto q = testing::make_query("7", {"coping/VBG", "with/IN", "overcrowded/JJ", "prisons/NNS"},
                                 {{"prep_with", 1, 4}, {"amod", 4, 3}});
    auto tagged = map_roles(q, RoleMappingTable::standard(), TableFrequencyProvider());
    CHECK(role_tagged_query_from_json(nlohmann::json::parse(to_json(tagged).dump())) == tagged);
}

TEST_CASE("sense JSON round trip") {
    auto q = map_roles(testing::make_query("7", {"java/NN", "language/NN"}, {{"nn", 2, 1}}),
                       RoleMappingTable::standard(), TableFrequencyProvider());
    QuerySenses s{"7", disambiguate_all_words(q, testing::fixture_graph())};
    auto back = query_senses_from_json(nlohmann::json::parse(to_json(s).dump()));
    REQUIRE(back.senses.size() == s.senses.size());
    for (std::size_t i = 0; i < s.senses.size(); ++i) {
        CHECK(back.senses[i].synset_id == s.senses[i].synset_id);
        CHECK(back.senses[i].status == s.senses[i].status);
        CHECK(back.senses[i].score == s.senses[i].score);
    }
}

TEST_CASE("jsonl reading names the bad line") {
    std::istringstream in("{\"a\":1}\n\n{oops\n");
    try {
        read_jsonl(in, "x.jsonl");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
}

TEST_CASE("pipeline on the mini corpus") {
    auto dir = testing::minicorpus_dir();
    PipelineConfig cfg;
    cfg.wordnet = dir / "wordnet.jsonl";
    cfg.frequencies = dir / "frequencies.tsv";
    cfg.parses = dir / "parses.tsv";
    cfg.topics = dir / "topics.txt";
    cfg.corpus = dir / "corpus";
    cfg.qrels = dir / "qrels.txt";
    cfg.out = testing::temp_dir("pipeline");
    cfg.ga.population_size = 30;
    cfg.ga.max_iterations = 30;
    cfg.workers = 2;
    auto report = run_pipeline(cfg);
    CHECK(report.roles.size() == 5);
    CHECK(report.expanded.map >= report.baseline.map);
    for (const char* f : {artifacts::roles, artifacts::senses, artifacts::baseline_run, artifacts::report}) {
        CHECK(std::filesystem::exists(cfg.out / f));
    }
    CHECK(std::filesystem::exists(cfg.out / artifacts::expansions(ExpansionPool::synonym)));
    CHECK(std::filesystem::exists(cfg.out / artifacts::run(ExpansionPool::synonym)));
    CHECK(std::filesystem::is_directory(cfg.out / artifacts::index));
    auto json = to_json(report, ExpansionPool::synonym);
    CHECK(json.contains("t_test"));
}
