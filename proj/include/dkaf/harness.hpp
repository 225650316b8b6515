#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dkaf/datasets.hpp"
#include "dkaf/dictionary.hpp"
#include "dkaf/filters.hpp"
#include "dkaf/network.hpp"

namespace dkaf {

struct NetworkConfig {
    TopologyKind topology = TopologyKind::RandomGeometric;
    double radius = 0.6;
    CombinationRule rule_a = CombinationRule::Uniform;
    CombinationRule rule_c = CombinationRule::Uniform;
};

struct KernelConfig {
    std::optional<double> sigma;      ///< fixed bandwidth; Silverman's rule when absent
    std::size_t pilot_samples = 500;  ///< pilot draw size for Silverman's rule
};

struct ExperimentConfig {
    std::string name = "experiment";
    std::uint64_t seed = 1;
    StreamSpec stream;  ///< stream.seed is ignored; per-run seeds derive from `seed`
    FilterHyperparams hyper;
    KernelConfig kernel;
    std::vector<Algorithm> algorithms;
    NetworkConfig network;
    std::size_t monte_carlo_runs = 200;
    std::size_t first_run = 0;  ///< index of the first run; selects the seed block
    double floor_window = 0.1;
    std::vector<std::size_t> sweep_sizes;
};

/// Throws ConfigError naming the offending key.
void validate(const ExperimentConfig& config);

/// Seed of Monte-Carlo run `run` (counted from config.first_run).
std::uint64_t run_seed(const ExperimentConfig& config, std::size_t run);

/// Kernel bandwidth: the configured sigma, or Silverman's rule on a pilot draw.
double resolve_sigma(const ExperimentConfig& config);

/// Per-algorithm Monte-Carlo averages. Single-node algorithms (klms, qklms)
/// run as an isolated node fed with node 0's stream.
struct AlgorithmTrace {
    Algorithm algorithm = Algorithm::QDKLMS;
    std::size_t node_count = 1;
    std::vector<double> mse_per_round;        ///< network-average e^2, MC-averaged
    std::vector<double> dict_size_per_round;  ///< network-average size, MC-averaged
    std::vector<double> final_dict_sizes;     ///< per node, MC-averaged
    double mse_floor = 0.0;
    double avg_final_dict_size = 0.0;
    std::size_t max_dict_size = 0;            ///< over every run, node and round
    std::vector<Dictionary> first_run_dictionaries;  ///< final state of the first run
};

struct MetricsTrace {
    std::size_t rounds = 0;
    double sigma = 0.0;
    std::vector<std::uint64_t> run_seeds;
    std::vector<AlgorithmTrace> algorithms;
    std::optional<Topology> first_run_topology;
    std::optional<CombinationMatrices> first_run_matrices;

    const AlgorithmTrace& get(Algorithm algorithm) const;
};

enum class Execution { Parallel, Serial };

/// Runs every algorithm over config.monte_carlo_runs independent runs. All
/// algorithms in a run see the same stream and topology. The reduction over
/// runs is in run order regardless of `execution`, so both modes agree bit for bit.
MetricsTrace run_experiment(const ExperimentConfig& config, Execution execution = Execution::Parallel);

/// Mean of the last ceil(window * n) values (at least one).
double mse_floor(const std::vector<double>& mse_per_round, double window);

/// First 1-based round at which the trailing moving average of `curve` over
/// `smoothing` rounds is <= level; nullopt if never.
std::optional<std::size_t> first_round_reaching(const std::vector<double>& curve, double level,
                                                std::size_t smoothing);

struct SweepPoint {
    Algorithm algorithm = Algorithm::QDKLMS;
    std::size_t node_count = 1;
    double mse_floor = 0.0;
    double avg_final_dict_size = 0.0;
};

/// run_experiment once per network size; rows ordered by size, then algorithm.
std::vector<SweepPoint> sweep_network_size(const ExperimentConfig& config,
                                           const std::vector<std::size_t>& sizes,
                                           Execution execution = Execution::Parallel);

struct BudgetCalibration {
    std::size_t budget = 1;
    double qdklms_avg_final_dict_size = 0.0;
};

/// Budget matching the steady-state QDKLMS dictionary: floor of its mean final size.
BudgetCalibration calibrate_budget(const ExperimentConfig& config,
                                   Execution execution = Execution::Parallel);

}  // namespace dkaf
