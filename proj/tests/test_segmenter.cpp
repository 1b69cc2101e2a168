#include "doctest.h"

#include <fstream>
#include <sstream>

#include "lexiqx/error.hpp"
#include "lexiqx/segmenter.hpp"
#include "support.hpp"

using namespace lexiqx;
using R = RoleType;

namespace {

TableFrequencyProvider no_frequencies() { return {}; }

NcpLexicon fixture_lexicon() {
    NcpLexicon lex;
    lex.add_phrase("united states", PhraseType::proper_name);
    lex.add_phrase("insider trading", PhraseType::collocation);
    lex.add_acronym("NASA", "National Aeronautics and Space Administration");
    return lex;
}

}  // namespace

TEST_CASE("detect_and_format") {
    auto lex = fixture_lexicon();
    CHECK(detect_and_format("united states control of insider trading", lex) ==
          "United_States control of insider_trading");
    CHECK(detect_and_format("mild yeast infection", lex) == "mild yeast infection");
    CHECK(detect_and_format("NASA budget", lex) == "National_Aeronautics_and_Space_Administration budget");
    CHECK(detect_and_format("cats/dogs", lex) == "cats or dogs");
}

TEST_CASE("figure example: mild yeast infection") {
    auto q = testing::make_query("q", {"mild/JJ", "yeast/NN", "infection/NN"}, {{"amod", 3, 1}, {"nn", 3, 2}});
    auto tagged = map_roles(q, RoleMappingTable::standard(), no_frequencies());
    CHECK(testing::roles_of(tagged) == std::vector<R>{R::DC, R::DC, R::CoI});
}

TEST_CASE("coping with overcrowded prisons") {
    auto q = testing::make_query("q", {"coping/VBG", "with/IN", "overcrowded/JJ", "prisons/NNS"},
                                 {{"prep_with", 1, 4}, {"amod", 4, 3}});
    auto tagged = map_roles(q, RoleMappingTable::standard(), no_frequencies());
    CHECK(testing::roles_of(tagged) == std::vector<R>{R::DC, R::RC, R::DC, R::CoI});
    CHECK(tagged.find(2)->provenance.front().source == ProposalSource::connector);
}

TEST_CASE("single token without dependencies is CoI") {
    auto q = testing::make_query("q", {"prisons/NNS"}, {});
    auto tagged = map_roles(q, RoleMappingTable::standard(), no_frequencies());
    CHECK(testing::roles_of(tagged) == std::vector<R>{R::CoI});
}

TEST_CASE("untagged rules") {
    const auto table = RoleMappingTable::standard();
    SUBCASE("equal frequencies give two CoIs") {
        TableFrequencyProvider f;
        f.set("alpha", 7);
        f.set("beta", 7);
        auto q = testing::make_query("q", {"alpha/NN", "beta/NN"}, {{"dep", 1, 2}});
        CHECK(testing::roles_of(map_roles(q, table, f)) == std::vector<R>{R::CoI, R::CoI});
    }
    SUBCASE("zero frequencies count as equal") {
        auto q = testing::make_query("q", {"alpha/NN", "beta/NN"}, {{"undef", 1, 2}});
        CHECK(testing::roles_of(map_roles(q, table, no_frequencies())) == std::vector<R>{R::CoI, R::CoI});
    }
    SUBCASE("more frequent side is CoI") {
        TableFrequencyProvider f;
        f.set("alpha", 3);
        f.set("beta", 9);
        auto q = testing::make_query("q", {"alpha/NN", "beta/NN"}, {{"dep", 1, 2}});
        CHECK(testing::roles_of(map_roles(q, table, f)) == std::vector<R>{R::DC, R::CoI});
    }
    SUBCASE("inheritance shields a tagged concept") {
        TableFrequencyProvider f;
        f.set("alpha", 9);
        f.set("beta", 3);
        auto q = testing::make_query("q", {"alpha/NN", "beta/NN", "red/JJ"}, {{"dep", 1, 2}, {"amod", 2, 3}});
        CHECK(testing::roles_of(map_roles(q, table, f)) == std::vector<R>{R::CoI, R::CoI, R::DC});
    }
    SUBCASE("unknown relations go through the undef path") {
        TableFrequencyProvider f;
        f.set("alpha", 1);
        f.set("beta", 2);
        auto q = testing::make_query("q", {"alpha/NN", "beta/NN"}, {{"frobnicate", 1, 2}});
        CHECK(testing::roles_of(map_roles(q, table, f)) == std::vector<R>{R::DC, R::CoI});
    }
}

TEST_CASE("united states control of insider trading") {
    TableFrequencyProvider f;
    f.set("control", 9000000);
    f.set("united states", 5000000);
    auto q = testing::make_query("q", {"United_States/NNP", "control/NN", "of/IN", "insider/NN", "trading/NN"},
                                 {{"nn", 5, 4}, {"undef", 1, 2}, {"prep_of", 2, 5}});
    auto tagged = map_roles(q, RoleMappingTable::standard(), f);
    CHECK(testing::roles_of(tagged) == std::vector<R>{R::DC, R::DC, R::RC, R::DC, R::CoI});
}

TEST_CASE("ambiguity resolution") {
    const auto table = RoleMappingTable::standard();
    SUBCASE("CoI beats DC") {
        auto q = testing::make_query("q", {"Iranian/JJ", "support/NN", "for/IN", "Lebanese/JJ", "hostage_takers/NNS"},
                                     {{"amod", 2, 1}, {"amod", 5, 4}, {"prep_for", 2, 5}});
        auto tagged = map_roles(q, table, no_frequencies());
        CHECK(tagged.find(2)->role == R::CoI);
        CHECK(tagged.find(2)->provenance.size() == 2);
    }
    SUBCASE("same role twice") {
        RoleTaggedQuery p;
        p.concepts.push_back({"x", "x", "NN", 1, R::Untagged, false,
                              {{"amod", ProposalSource::dependent, R::DC, RelationClass::normal},
                               {"nn", ProposalSource::dependent, R::DC, RelationClass::normal}}});
        CHECK(resolve_ambiguous(p).concepts[0].role == R::DC);
    }
    SUBCASE("preposition RC against conjunction CoI") {
        RoleTaggedQuery p;
        p.concepts.push_back({"x", "x", "NN", 1, R::Untagged, false,
                              {{"prep_of", ProposalSource::head, R::RC, RelationClass::preposition},
                               {"conj_and", ProposalSource::head, R::CoI, RelationClass::conjunction}}});
        CHECK(resolve_ambiguous(p).concepts[0].role == R::CoI);
    }
}

TEST_CASE("map_roles is deterministic and total") {
    TableFrequencyProvider f;
    f.set("control", 9000000);
    auto q = testing::make_query("q", {"the/DT", "control/NN", "of/IN", "trading/NN"},
                                 {{"det", 2, 1}, {"prep_of", 2, 4}});
    const auto table = RoleMappingTable::standard();
    auto a = map_roles(q, table, f);
    auto b = map_roles(q, table, f);
    CHECK(a == b);
    for (const auto& c : a.concepts) CHECK(c.role != R::Untagged);
    CHECK(a.find(1)->role == R::SC);
}

TEST_CASE("relation normalization") {
    CHECK(RoleMappingTable::normalize("prep_of") == "prep");
    CHECK(RoleMappingTable::normalize("prepc_by") == "prep");
    CHECK(RoleMappingTable::normalize("conj_and") == "conj");
    CHECK(RoleMappingTable::normalize("dep") == "undef");
    CHECK_FALSE(RoleMappingTable::standard().lookup("undef").has_value());
    CHECK(RoleMappingTable::standard().rows().size() == 40);
}

TEST_CASE("shipped role table equals the built-in table") {
    auto shipped = RoleMappingTable::load(testing::source_dir() / "data" / "role_mapping.json");
    CHECK(shipped == RoleMappingTable::standard());
    std::stringstream buffer;
    shipped.write_json(buffer);
    CHECK(RoleMappingTable::from_json(buffer) == shipped);
}

TEST_CASE("parse file reading") {
    std::istringstream in(
        "q1\t#tok\t1\tmild\tJJ\n"
        "q1\t#tok\t2\tinfection\tNN\n"
        "q1\tamod\tinfection\t2\tmild\t1\n"
        "q2\t#tok\t1\tprisons\tNNS\n");
    auto qs = read_parses(in);
    REQUIRE(qs.size() == 2);
    CHECK(qs[0].qid == "q1");
    CHECK(qs[0].deps.size() == 1);
    CHECK(qs[1].tokens.size() == 1);

    std::istringstream bad("q1\t#tok\t1\tmild\tJJ\nq1\tamod\tx\t2\tmild\t1\n");
    CHECK_THROWS_AS(read_parses(bad), Error);

    ParsedQuery loop;
    loop.tokens = {{"a", "NN", 1}};
    loop.deps = {{"nn", 1, 1}};
    CHECK_THROWS_AS(loop.validate(), ConfigError);
}

TEST_CASE("penn tag reduction") {
    CHECK(reduce_pos_tag("NNS") == WordClass::noun);
    CHECK(reduce_pos_tag("VBG") == WordClass::verb);
    CHECK(reduce_pos_tag("JJR") == WordClass::adjective);
    CHECK(reduce_pos_tag("RB") == WordClass::adverb);
    CHECK(reduce_pos_tag("IN") == WordClass::closed);
    CHECK(significance(R::CoI) > significance(R::DC));
    CHECK(significance(R::DC) > significance(R::RC));
    CHECK(significance(R::RC) > significance(R::SC));
    CHECK(parse_role("CoI") == R::CoI);
}
