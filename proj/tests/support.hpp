#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <unistd.h>

#include "json.hpp"

#include "lexiqx/lexicon.hpp"
#include "lexiqx/segmenter.hpp"

namespace testing {

inline std::filesystem::path source_dir() { return LEXIQX_SOURCE_DIR; }
inline std::filesystem::path data_dir() { return source_dir() / "tests" / "data"; }
inline std::filesystem::path minicorpus_dir() { return source_dir() / "data" / "minicorpus"; }
inline std::filesystem::path fixture_graph_path() { return data_dir() / "fixture_graph.jsonl"; }

/// Full WordNet dict directory, or empty when it is not installed.
inline std::filesystem::path full_wordnet_dir() {
    std::filesystem::path p = LEXIQX_WORDNET_DIR;
    return std::filesystem::is_regular_file(p / "data.noun") ? p : std::filesystem::path();
}

inline const lexiqx::LexicalGraph& fixture_graph() {
    static const lexiqx::LexicalGraph g = lexiqx::load_graph_jsonl(fixture_graph_path());
    return g;
}

/// Raw hypernym lists straight from the fixture file, bypassing the graph.
inline std::map<std::string, std::vector<std::string>> fixture_hypernym_lists() {
    std::map<std::string, std::vector<std::string>> out;
    std::ifstream in(fixture_graph_path());
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto j = nlohmann::json::parse(line);
        out[j["id"].get<std::string>()] = j["hypernyms"].get<std::vector<std::string>>();
    }
    return out;
}

/// Builds a query from "surface/TAG" words and "rel(head_index,dep_index)" edges.
inline lexiqx::ParsedQuery make_query(const std::string& qid, const std::vector<std::string>& tagged_words,
                                      const std::vector<std::tuple<std::string, int, int>>& deps) {
    lexiqx::ParsedQuery q;
    q.qid = qid;
    int index = 0;
    for (const auto& w : tagged_words) {
        auto slash = w.rfind('/');
        q.tokens.push_back({w.substr(0, slash), w.substr(slash + 1), ++index});
    }
    for (const auto& [rel, h, d] : deps) q.deps.push_back({rel, h, d});
    for (std::size_t i = 0; i < q.tokens.size(); ++i) q.raw_text += (i ? " " : "") + q.tokens[i].surface;
    q.validate();
    return q;
}

inline std::vector<lexiqx::RoleType> roles_of(const lexiqx::RoleTaggedQuery& q) {
    std::vector<lexiqx::RoleType> out;
    for (const auto& c : q.concepts) out.push_back(c.role);
    return out;
}

/// A paired sample with reference statistics computed by scipy.
struct TTestCase {
    std::vector<double> a, b;
    double t = 0.0, p = 0.0;
};

inline std::vector<TTestCase> ttest_cases() {
    auto numbers = [](const std::string& csv) {
        std::vector<double> out;
        std::stringstream in(csv);
        std::string item;
        while (std::getline(in, item, ',')) out.push_back(std::stod(item));
        return out;
    };
    std::vector<TTestCase> out;
    std::ifstream in(data_dir() / "ttest_cases.tsv");
    std::string line;
    while (std::getline(in, line)) {
        std::stringstream fields(line);
        std::string lists, t, p;
        std::getline(fields, lists, '\t');
        std::getline(fields, t, '\t');
        std::getline(fields, p, '\t');
        auto semi = lists.find(';');
        out.push_back({numbers(lists.substr(0, semi)), numbers(lists.substr(semi + 1)), std::stod(t), std::stod(p)});
    }
    return out;
}

inline std::filesystem::path temp_dir(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("lexiqx-test-" + name + "-" + std::to_string(::getpid()));
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

}  // namespace testing
