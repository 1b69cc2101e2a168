#include "doctest.h"

#include <fstream>

#include "lexiqx/porter.hpp"
#include "lexiqx/text.hpp"
#include "support.hpp"

using namespace lexiqx;

TEST_CASE("porter stemmer matches the reference vocabulary") {
    std::ifstream in(testing::data_dir() / "porter_vocab.tsv");
    REQUIRE(in);
    std::string line;
    std::size_t checked = 0, wrong = 0;
    while (std::getline(in, line)) {
        auto tab = line.find('\t');
        if (tab == std::string::npos) continue;
        auto word = line.substr(0, tab);
        auto expected = line.substr(tab + 1);
        auto got = porter_stem(word);
        if (got != expected) {
            ++wrong;
            MESSAGE(word << " -> " << got << " expected " << expected);
        }
        ++checked;
    }
    CHECK(checked > 6000);
    CHECK(wrong == 0);
}

TEST_CASE("porter stemmer examples") {
    CHECK(porter_stem("caresses") == "caress");
    CHECK(porter_stem("sky") == "sky");
    CHECK(porter_stem("") == "");
    CHECK(porter_stem("ponies") == "poni");
    CHECK(porter_stem("as") == "as");
}

TEST_CASE("term_stem stems each underscore part") {
    CHECK(term_stem("insider_trading") == "insid_trade");
    CHECK(term_stem("Prisons") == "prison");
    CHECK(term_stem("united_states") == porter_stem("unit") + "_" + porter_stem("states"));
}

TEST_CASE("word tokens and phrase keys") {
    CHECK(word_tokens("A motor-vehicle; (usually) FOUR wheels") ==
          std::vector<std::string>{"a", "motor", "vehicle", "usually", "four", "wheels"});
    CHECK(word_tokens("insider_trading") == std::vector<std::string>{"insider", "trading"});
    CHECK(phrase_key("United_States") == "united states");
    CHECK(phrase_key("  united   states ") == "united states");
    CHECK(underscore_form("Insider Trading") == "insider_trading");
    CHECK(split("a\t\tb", '\t').size() == 3);
    CHECK(split_whitespace("  a  b ").size() == 2);
    CHECK(trim("  x ") == "x");
}

TEST_CASE("stop list") {
    const auto& stop = StopList::english();
    CHECK(stop.contains("the"));
    CHECK(stop.contains("with"));
    CHECK_FALSE(stop.contains("car"));
    StopList custom({"foo"});
    custom.add("Bar");
    CHECK(custom.contains("bar"));
    CHECK(custom.size() == 2);
}
