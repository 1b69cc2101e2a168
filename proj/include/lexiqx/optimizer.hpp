#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "lexiqx/expander.hpp"
#include "lexiqx/retrieval.hpp"

namespace lexiqx {

/// One weight per role type. SC is always 0.
struct RoleWeights {
    double CoI = 1.0;
    double DC = 1.0;
    double RC = 1.0;
    double EC = 1.0;

    double of(RoleType role) const noexcept;

    /// Gene order: CoI, DC, RC, EC.
    std::array<double, 4> genes() const noexcept { return {CoI, DC, RC, EC}; }
    static RoleWeights from_genes(const std::array<double, 4>& g) noexcept { return {g[0], g[1], g[2], g[3]}; }

    friend bool operator==(const RoleWeights&, const RoleWeights&) = default;
};

/// Weight of every concept by its role plus every expansion term by EC,
/// analyzed into stems. Stop-word-only concepts contribute nothing.
WeightedQuery weight_query(const ExpandedQuery& query, const RoleWeights& weights,
                           const Analyzer& analyzer = Analyzer());

/// Original concepts only, every stem with weight 1.
WeightedQuery unexpanded_query(const ExpandedQuery& query, const Analyzer& analyzer = Analyzer());

struct GaConfig {
    int population_size = 200;
    int max_iterations = 100;
    /// Per-mille probability of resetting each gene.
    int mutation_parameter = 10;
    /// Per-mille probability of crossing a selected pair.
    int crossover_parameter = 1000;
    std::uint64_t rng_seed = 1;
    double boost_threshold = 0.5;
    double boost_factor = 1.5;
    /// Stop after this many iterations without improvement; 0 disables.
    int stagnation_limit = 0;
    /// Threads for fitness evaluation; results do not depend on it.
    int workers = 1;

    /// Throws ConfigError on a population below 2 or a non-positive parameter.
    void validate() const;
    double fitness_from_map(double map) const noexcept;
    double map_from_fitness(double fitness) const noexcept;
};

GaConfig ga_config_from_json(const nlohmann::json& j);
/// `key=value` lines; '#' starts a comment.
GaConfig read_ga_config(std::istream& in, const std::string& name = "<stream>");
/// JSON when the file starts with '{', key=value otherwise.
GaConfig load_ga_config(const std::filesystem::path& path);
nlohmann::ordered_json to_json(const GaConfig& cfg);

struct Chromosome {
    std::array<double, 4> genes{};
    double fitness = 0.0;

    RoleWeights weights() const noexcept { return RoleWeights::from_genes(genes); }
};

/// MAP of a weight vector; must be pure.
using MapFunction = std::function<double(const RoleWeights&)>;

/// MAP over the training queries with their judgments.
class RetrievalObjective {
  public:
    RetrievalObjective(std::vector<ExpandedQuery> queries, const Index& index, Qrels qrels, LmParams params = {},
                       const Analyzer& analyzer = Analyzer());

    double operator()(const RoleWeights& weights) const;
    Run run(const RoleWeights& weights) const;

  private:
    std::vector<ExpandedQuery> queries_;
    const Index& index_;
    Qrels qrels_;
    LmParams params_;
    Analyzer analyzer_;
};

double evaluate_fitness(const Chromosome& c, const MapFunction& map_of, const GaConfig& cfg);
double evaluate_fitness(const Chromosome& c, const std::vector<ExpandedQuery>& queries, const Index& index,
                        const Qrels& qrels, const GaConfig& cfg, const LmParams& params = {});

struct GaResult {
    Chromosome best;
    double best_map = 0.0;
    /// Best fitness so far after each iteration.
    std::vector<double> history;
    int iterations = 0;
};

/// Starts from `initial` when given (genes are clipped), else from a
/// uniform random population.
GaResult run_ga(const GaConfig& cfg, const MapFunction& map_of, std::vector<Chromosome> initial = {});
GaResult run_ga(const GaConfig& cfg, const std::vector<ExpandedQuery>& queries, const Index& index,
                const Qrels& qrels, const LmParams& params = {});

/// {"CoI", "DC", "RC", "SC", "EC", "map", "seed"}
nlohmann::ordered_json weights_json(const RoleWeights& w, double map, std::uint64_t seed);
RoleWeights weights_from_json(const nlohmann::json& j);

}  // namespace lexiqx
