#include "doctest.h"

#include <random>

#include "lexiqx/error.hpp"
#include "lexiqx/wsd.hpp"
#include "oracles/oracles.hpp"
#include "support.hpp"

using namespace lexiqx;

namespace {

RoleTaggedQuery tag(const ParsedQuery& q) {
    return map_roles(q, RoleMappingTable::standard(), TableFrequencyProvider());
}

}  // namespace

TEST_CASE("phrase overlap examples") {
    CHECK(phrase_overlap_score({{"motor", "vehicle"}}, {{"motor", "vehicle"}}) == 4);
    CHECK(phrase_overlap_score({{"red", "vehicle"}}, {{"blue", "vehicle"}}) == 1);
    CHECK(phrase_overlap_score({{"red"}}, {{"blue"}}) == 0);
    CHECK(phrase_overlap_score({{"a", "b"}, {"c"}}, {{"b", "c"}}) == 2);
    CHECK(phrase_overlap_score({}, {{"x"}}) == 0);
}

TEST_CASE("phrase overlap agrees with the brute-force oracle on random inputs") {
    std::mt19937 rng(42);
    const std::vector<std::string> vocab = {"a", "b", "c", "d", "e"};
    std::uniform_int_distribution<int> word(0, 4), len(0, 6), segs(1, 3);
    for (int trial = 0; trial < 500; ++trial) {
        auto make = [&] {
            oracle::Segments s(static_cast<std::size_t>(segs(rng)));
            for (auto& seg : s) {
                int n = len(rng);
                for (int i = 0; i < n; ++i) seg.push_back(vocab[static_cast<std::size_t>(word(rng))]);
            }
            return s;
        };
        auto a = make();
        auto b = make();
        CHECK(phrase_overlap_score(a, b) == oracle::overlap(a, b));
        CHECK(phrase_overlap_score(a, b) == phrase_overlap_score(b, a));
    }
}

TEST_CASE("content words drop function words") {
    CHECK(content_words("a motor vehicle with four wheels") ==
          std::vector<std::string>{"motor", "vehicle", "four", "wheels"});
}

TEST_CASE("adapted lesk symmetry and self-maximality on the fixture") {
    const auto& g = testing::fixture_graph();
    AdaptedLesk lesk(g);
    for (SynsetIndex a = 0; a < g.size(); ++a) {
        for (SynsetIndex b = 0; b < g.size(); ++b) {
            double ab = lesk(a, b);
            CHECK(ab == lesk(b, a));
            CHECK(ab <= lesk(a, a));
            CHECK(ab == static_cast<double>(oracle::overlap(lesk.extended_gloss(a), lesk.extended_gloss(b))));
        }
    }
    CHECK(adapted_lesk(g, 3, 5) == lesk(3, 5));
}

TEST_CASE("relatedness config validation") {
    RelatednessConfig c;
    c.window_size = 4;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.window_size = 3;
    c.extension.clear();
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("java in a programming context on the fixture") {
    const auto& g = testing::fixture_graph();
    auto q = testing::make_query("q", {"java/NN", "programming/NN", "language/NN"}, {{"nn", 3, 1}, {"nn", 3, 2}});
    RelatednessConfig wide;
    wide.window_size = 5;
    auto senses = disambiguate_all_words(tag(q), g, wide);
    REQUIRE(senses.size() == 3);
    CHECK(senses[0].synset_id == "n00000022");
    CHECK(senses[0].status == SenseStatus::disambiguated);
    CHECK(senses[0].score > 0);
}

TEST_CASE("sense statuses") {
    const auto& g = testing::fixture_graph();
    SUBCASE("single sense") {
        auto senses = disambiguate_all_words(tag(testing::make_query("q", {"prisons/NNS"}, {})), g);
        CHECK(senses[0].synset_id == "n00000035");
        CHECK(senses[0].lemma == "prison");
    }
    SUBCASE("not in the graph") {
        auto senses = disambiguate_all_words(tag(testing::make_query("q", {"US-USSR/NNP"}, {})), g);
        CHECK(senses[0].status == SenseStatus::ND);
        CHECK_FALSE(senses[0].has_sense());
    }
    SUBCASE("closed class") {
        auto q = testing::make_query("q", {"the/DT", "prison/NN"}, {{"det", 2, 1}});
        auto senses = disambiguate_all_words(tag(q), g);
        CHECK(senses[0].status == SenseStatus::O);
        CHECK_FALSE(senses[0].has_sense());
    }
    SUBCASE("no evidence falls back to the first sense") {
        auto senses = disambiguate_all_words(tag(testing::make_query("q", {"java/NN"}, {})), g);
        CHECK(senses[0].status == SenseStatus::first_sense_fallback);
        CHECK(senses[0].synset_id == "n00000022");
        RelatednessConfig strict;
        strict.first_sense_fallback = false;
        auto unresolved = disambiguate_all_words(tag(testing::make_query("q", {"java/NN"}, {})), g, strict);
        CHECK(unresolved[0].status == SenseStatus::NR);
    }
    for (auto s : {SenseStatus::disambiguated, SenseStatus::first_sense_fallback, SenseStatus::ND, SenseStatus::NR,
                   SenseStatus::O, SenseStatus::IT, SenseStatus::MW}) {
        CHECK(parse_sense_status(to_string(s)) == s);
    }
}
