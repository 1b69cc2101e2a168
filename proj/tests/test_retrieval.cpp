#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>

#include "lexiqx/error.hpp"
#include "lexiqx/log.hpp"
#include "lexiqx/retrieval.hpp"
#include "oracles/oracles.hpp"
#include "support.hpp"

using namespace lexiqx;

namespace {

std::string trec(const std::vector<Document>& docs) {
    std::string out;
    for (const auto& d : docs) out += "<DOC>\n<DOCNO> " + d.docno + " </DOCNO>\n<TEXT>\n" + d.text + "\n</TEXT>\n</DOC>\n";
    return out;
}

Index two_docs() { return Index::build({{"A", "car repair"}, {"B", "yeast infection"}}); }

Run ranked(const std::string& qid, const std::vector<std::string>& docnos) {
    Run run;
    int rank = 0;
    for (const auto& d : docnos) {
        ++rank;
        run.push_back({qid, d, rank, -static_cast<double>(rank)});
    }
    return run;
}

}  // namespace

TEST_CASE("analyzer") {
    CHECK(Analyzer().terms("The cars were repaired!") == std::vector<std::string>{"car", "repair"});
}

TEST_CASE("TREC parsing and corpus loading") {
    std::istringstream in(trec({{"A", "car repair"}, {"B", "yeast infection"}}));
    auto docs = read_trec_documents(in);
    REQUIRE(docs.size() == 2);
    CHECK(docs[0].docno == "A");
    CHECK(docs[1].text.find("yeast infection") != std::string::npos);

    auto empty = testing::temp_dir("empty-corpus");
    CHECK_THROWS_WITH_AS(load_trec_corpus(empty), doctest::Contains("no documents"), LoadError);

    auto dup = testing::temp_dir("dup-corpus");
    std::ofstream(dup / "a.trec") << trec({{"X-1", "one"}});
    std::ofstream(dup / "b.trec") << trec({{"X-1", "two"}});
    CHECK_THROWS_WITH(load_trec_corpus(dup), doctest::Contains("X-1"));
}

TEST_CASE("index statistics") {
    auto idx = two_docs();
    auto car = idx.postings("car");
    REQUIRE(car.size() == 1);
    CHECK(idx.docno(car[0].doc) == "A");
    CHECK(car[0].tf == 1);
    CHECK(idx.total_tokens() == 4);
    CHECK(idx.collection_frequency("car") == 1);
    CHECK(idx.postings("zebra").empty());
    CHECK(idx.vocabulary_size() == 4);
    CHECK(idx.find_doc("B").has_value());
    CHECK_FALSE(idx.find_doc("C").has_value());
}

TEST_CASE("index persistence round trip") {
    auto idx = build_index(testing::minicorpus_dir() / "corpus");
    CHECK(idx.doc_count() == 20);
    auto dir = testing::temp_dir("index");
    idx.save(dir);
    CHECK(Index::load(dir) == idx);
    CHECK_THROWS_AS(Index::load(dir / "missing"), LoadError);
}

TEST_CASE("index frequency provider") {
    auto idx = Index::build({{"A", "insider trading rules"}, {"B", "insider news"}, {"C", "trading floor"}});
    IndexFrequencyProvider f(idx);
    CHECK(f.frequency("insider") == 2);
    CHECK(f.frequency("Insider_Trading") == 1);
    CHECK(f.frequency("zebra") == 0);
}

TEST_CASE("hand-computed LM score") {
    auto idx = Index::build({{"A", "car repair"}, {"B", "yeast infection"}});
    LmParams p;
    p.mu = 2;
    auto run = score_lm(idx, "q", {"car"}, p);
    REQUIRE(run.size() == 1);
    CHECK(run[0].docno == "A");
    CHECK(run[0].score == doctest::Approx(std::log(0.375)).epsilon(1e-12));
    auto weighted = score_weighted_lm(idx, {"q", {{"car", 0.4}}}, p);
    CHECK(weighted[0].score == doctest::Approx(0.4 * std::log(0.375)).epsilon(1e-12));
}

TEST_CASE("weighted scoring contracts") {
    auto idx = two_docs();
    CHECK(score_weighted_lm(idx, {"q", {{"car", 0.0}, {"yeast", 0.0}}}).empty());
    CHECK(score_weighted_lm(idx, {"q", {{"zebra", 1.0}}}).empty());
    CHECK_THROWS_AS(score_weighted_lm(idx, {"q", {{"car", 1.5}}}), ConfigError);
    auto both = score_weighted_lm(idx, {"q", {{"car", 0.7}, {"yeast", 0.1}}});
    REQUIRE(both.size() == 2);
    CHECK(both[0].rank == 1);
    LmParams p;
    p.top_n = 1;
    CHECK(score_weighted_lm(idx, {"q", {{"car", 0.7}, {"yeast", 0.1}}}, p).size() == 1);
    p.mu = 0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("average precision") {
    std::map<std::string, int> judged = {{"d1", 1}, {"d2", 0}, {"d3", 1}};
    CHECK(average_precision(ranked("q", {"d1", "d2", "d3"}), judged) == doctest::Approx(0.8333333333).epsilon(1e-9));
    CHECK(average_precision(ranked("q", {"d1", "d3", "d2"}), judged) == 1.0);
    CHECK(average_precision(ranked("q", {"d2"}), judged) == 0.0);
    CHECK(average_precision(ranked("q", {"d1", "d1", "d3"}), judged) == 1.0);
}

TEST_CASE("AP and MAP against the brute-force oracle") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        Qrels qrels;
        Run run;
        std::vector<double> aps;
        for (int q = 0; q < 4; ++q) {
            std::string qid = "q" + std::to_string(q);
            std::vector<std::string> docs;
            for (int d = 0; d < 12; ++d) docs.push_back("d" + std::to_string(d));
            std::shuffle(docs.begin(), docs.end(), rng);
            std::set<std::string> relevant;
            for (const auto& d : docs) {
                bool rel = rng() % 3 == 0;
                qrels[qid][d] = rel ? 1 : 0;
                if (rel) relevant.insert(d);
            }
            docs.resize(rng() % 12);
            auto part = ranked(qid, docs);
            run.insert(run.end(), part.begin(), part.end());
            if (!relevant.empty()) aps.push_back(oracle::average_precision(docs, relevant));
            CHECK(average_precision(part, qrels[qid]) ==
                  doctest::Approx(oracle::average_precision(docs, relevant)).epsilon(1e-9));
        }
        double expected = 0.0;
        for (double a : aps) expected += a;
        expected = aps.empty() ? 0.0 : expected / static_cast<double>(aps.size());
        CHECK(mean_average_precision(run, qrels) == doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("evaluation pool") {
    Qrels qrels = {{"1", {{"a", 1}}}, {"2", {{"b", 1}}}, {"3", {{"c", 0}}}};
    auto run = ranked("1", {"a"});
    auto extra = ranked("9", {"z"});
    run.insert(run.end(), extra.begin(), extra.end());
    auto r = evaluate(run, qrels);
    CHECK(r.map == 0.5);
    CHECK(r.ap.at("2") == 0.0);
    CHECK_FALSE(r.ap.count("3"));
    CHECK_FALSE(r.ap.count("9"));
}

TEST_CASE("run, qrels and topics IO") {
    Run run = {{"1", "a", 1, -1.25}, {"1", "b", 2, -3.0 / 7.0}};
    std::stringstream buf;
    write_run(run, buf);
    CHECK(read_run(buf) == run);

    std::istringstream q("101 0 MC-001 1\n101 0 MC-003 0\n");
    auto qrels = read_qrels(q);
    CHECK(qrels.at("101").at("MC-001") == 1);
    std::istringstream bad("101 0 MC-001\n");
    CHECK_THROWS_AS(read_qrels(bad), ParseError);

    std::istringstream t("<top>\n<num> Number: 101\n<title> Topic: car theft\n</top>\n");
    auto topics = read_topics(t);
    REQUIRE(topics.size() == 1);
    CHECK(topics[0].qid == "101");
    CHECK(topics[0].title == "car theft");
}

TEST_CASE("paired t-test matches scipy") {
    auto cases = testing::ttest_cases();
    REQUIRE(cases.size() == 60);
    for (const auto& c : cases) {
        auto r = paired_t_test(c.a, c.b);
        CHECK(std::abs(r.t - c.t) <= 1e-9);
        CHECK(std::abs(r.p - c.p) <= 1e-9);
        CHECK(r.significant == (c.p < 0.05));
        CHECK(std::abs(r.t - oracle::paired_t(c.a, c.b)) <= 1e-9);
    }
}

TEST_CASE("paired t-test degenerate cases") {
    std::vector<double> a = {0.1, 0.2, 0.3};
    auto same = paired_t_test(a, a);
    CHECK(same.t == 0.0);
    CHECK(same.p == 1.0);
    CHECK_FALSE(same.significant);

    std::vector<double> x(10, 0.5), y(10, 0.4);
    int logged = 0;
    auto old = set_log_sink([&](LogLevel, std::string_view) { ++logged; });
    auto shifted = paired_t_test(x, y);
    set_log_sink(old);
    CHECK(std::isinf(shifted.t));
    CHECK(shifted.significant);
    CHECK(logged == 1);

    CHECK_THROWS_AS(paired_t_test({1.0}, {2.0}), ConfigError);
    CHECK_THROWS_AS(paired_t_test({1.0, 2.0}, {2.0}), ConfigError);
}
