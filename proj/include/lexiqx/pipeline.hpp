#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "lexiqx/expander.hpp"
#include "lexiqx/optimizer.hpp"
#include "lexiqx/retrieval.hpp"
#include "lexiqx/segmenter.hpp"
#include "lexiqx/wsd.hpp"

namespace lexiqx {

nlohmann::ordered_json to_json(const RoleTaggedQuery& q);
RoleTaggedQuery role_tagged_query_from_json(const nlohmann::json& j);

struct QuerySenses {
    std::string qid;
    std::vector<SenseAnnotation> senses;
};

nlohmann::ordered_json to_json(const QuerySenses& s);
QuerySenses query_senses_from_json(const nlohmann::json& j);

/// One JSON value per non-empty line; ParseError names the line.
std::vector<nlohmann::json> read_jsonl(std::istream& in, const std::string& name = "<stream>");
std::vector<nlohmann::json> load_jsonl(const std::filesystem::path& path);

template <typename T>
void write_jsonl(const std::vector<T>& items, std::ostream& out) {
    for (const auto& item : items) out << to_json(item).dump() << '\n';
}

/// File names inside a working directory.
namespace artifacts {
inline const char* const roles = "roles.jsonl";
inline const char* const senses = "senses.jsonl";
inline const char* const index = "index";
inline const char* const baseline_run = "run.lm.trec";
inline const char* const report = "report.json";
std::string expansions(ExpansionPool pool);
std::string weights(ExpansionPool pool);
std::string run(ExpansionPool pool);
}  // namespace artifacts

std::vector<RoleTaggedQuery> segment_queries(const std::vector<ParsedQuery>& parses, const RoleMappingTable& table,
                                             const FrequencyProvider& frequencies, int workers = 1);

std::vector<QuerySenses> disambiguate_queries(const std::vector<RoleTaggedQuery>& queries, const AdaptedLesk& lesk,
                                              int workers = 1);

/// Queries and senses are matched by qid; a query without senses expands to itself.
std::vector<ExpandedQuery> expand_queries(const std::vector<RoleTaggedQuery>& queries,
                                          const std::vector<QuerySenses>& senses, const AdaptedLesk& lesk,
                                          const ExpansionConfig& config, int workers = 1);

/// Unexpanded uniform-weight run over the original concepts.
Run baseline_run(const std::vector<ExpandedQuery>& queries, const Index& index, const LmParams& params = {});
Run weighted_run(const std::vector<ExpandedQuery>& queries, const Index& index, const RoleWeights& weights,
                 const LmParams& params = {});

struct PipelineConfig {
    std::filesystem::path wordnet;
    std::optional<std::filesystem::path> ncp;
    /// Unset: document frequency from the index.
    std::optional<std::filesystem::path> frequencies;
    std::optional<std::filesystem::path> role_table;
    std::filesystem::path parses;
    std::optional<std::filesystem::path> topics;
    std::filesystem::path corpus;
    std::filesystem::path qrels;
    std::filesystem::path out;
    ExpansionConfig expansion;
    RelatednessConfig relatedness;
    GaConfig ga;
    LmParams lm;
    int workers = 1;
};

struct PipelineReport {
    std::vector<RoleTaggedQuery> roles;
    std::vector<QuerySenses> senses;
    std::vector<ExpandedQuery> expansions;
    EvalResult baseline;
    EvalResult expanded;
    RoleWeights weights;
    GaResult ga;
    std::optional<TTestResult> t_test;
};

nlohmann::ordered_json to_json(const PipelineReport& r, ExpansionPool pool);

/// Runs every stage and writes each stage's artifact into config.out.
PipelineReport run_pipeline(const PipelineConfig& config);

}  // namespace lexiqx
