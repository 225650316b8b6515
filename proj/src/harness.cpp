#include "dkaf/harness.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>

#include "dkaf/errors.hpp"
#include "dkaf/rng.hpp"

namespace dkaf {

namespace {

struct AlgorithmRun {
    std::vector<double> mse;
    std::vector<double> size;
    std::vector<double> final_sizes;
    std::size_t max_size = 0;
    std::vector<Dictionary> dictionaries;
};

struct RunOutcome {
    std::vector<AlgorithmRun> per_algorithm;
    std::optional<Topology> topology;
    std::optional<CombinationMatrices> matrices;
};

AlgorithmRun simulate(Algorithm algorithm, const FilterHyperparams& hyper,
                      const CombinationMatrices& network, const StreamData& data,
                      std::size_t rounds, bool keep_dictionaries) {
    const bool single = is_single_node(algorithm);
    const std::size_t n = single ? 1 : data.node_count();
    const CombinationMatrices matrices = single ? CombinationMatrices::single_node() : network;

    std::vector<Vector> obs(n);
    std::vector<double> desired(n);
    for (std::size_t q = 0; q < n; ++q) {
        obs[q] = data.at(q, 0).input;
        desired[q] = data.at(q, 0).desired;
    }
    NetworkFilter filter(algorithm, hyper, matrices, obs, desired);

    AlgorithmRun out;
    out.mse.resize(rounds);
    out.size.resize(rounds);
    for (std::size_t r = 0; r < rounds; ++r) {
        for (std::size_t q = 0; q < n; ++q) {
            const Sample& s = data.at(q, r + 1);
            obs[q] = s.input;
            desired[q] = s.desired;
        }
        const RoundResult res = filter.round(obs, desired);
        double se = 0.0;
        double sz = 0.0;
        for (std::size_t q = 0; q < n; ++q) {
            se += res.errors[q] * res.errors[q];
            const std::size_t size = filter.node(q).dictionary.size();
            sz += static_cast<double>(size);
            out.max_size = std::max(out.max_size, size);
        }
        out.mse[r] = se / static_cast<double>(n);
        out.size[r] = sz / static_cast<double>(n);
    }
    out.final_sizes.resize(n);
    for (std::size_t q = 0; q < n; ++q) {
        out.final_sizes[q] = static_cast<double>(filter.node(q).dictionary.size());
        if (keep_dictionaries) out.dictionaries.push_back(filter.node(q).dictionary);
    }
    return out;
}

RunOutcome simulate_run(const ExperimentConfig& config, const FilterHyperparams& hyper,
                        std::size_t run) {
    const std::uint64_t seed = run_seed(config, run);
    StreamSpec spec = config.stream;
    spec.seed = seed;
    spec.rounds = config.stream.rounds + 1;  // sample 0 seeds the dictionaries
    const StreamData data = generate_stream(spec);

    const NetworkConfig& net = config.network;
    Topology topo = build_topology(net.topology, spec.node_count, seed, net.radius);
    CombinationMatrices matrices = CombinationMatrices::from_rules(topo, net.rule_a, net.rule_c);

    RunOutcome out;
    const bool first = run == 0;
    for (Algorithm a : config.algorithms) {
        out.per_algorithm.push_back(
            simulate(a, hyper, matrices, data, config.stream.rounds, first));
    }
    if (first) {
        out.topology = std::move(topo);
        out.matrices = std::move(matrices);
    }
    return out;
}

}  // namespace

void validate(const ExperimentConfig& config) {
    validate(config.stream);
    FilterHyperparams h = config.hyper;
    if (config.kernel.sigma) {
        h.kernel.sigma = *config.kernel.sigma;
    }
    validate(h);
    if (config.algorithms.empty()) {
        throw ConfigError("algorithms", "at least one algorithm is required");
    }
    if (config.monte_carlo_runs < 1) {
        throw ConfigError("monte_carlo_runs", "must be at least 1");
    }
    if (!(config.floor_window > 0.0 && config.floor_window <= 1.0)) {
        throw ConfigError("floor_window", "must lie in (0, 1]");
    }
    if (!config.kernel.sigma && config.kernel.pilot_samples < 2) {
        throw ConfigError("kernel.pilot_samples", "Silverman's rule needs at least 2 samples");
    }
    if (config.network.topology == TopologyKind::RandomGeometric && !(config.network.radius > 0.0)) {
        throw ConfigError("network.radius", "must be positive");
    }
    for (std::size_t s : config.sweep_sizes) {
        if (s < 1) throw ConfigError("sweep.sizes", "every size must be at least 1");
    }
}

std::uint64_t run_seed(const ExperimentConfig& config, std::size_t run) {
    return mix_seed(config.seed, config.first_run + run);
}

double resolve_sigma(const ExperimentConfig& config) {
    if (config.kernel.sigma) {
        return *config.kernel.sigma;
    }
    StreamSpec pilot = config.stream;
    pilot.node_count = 1;
    pilot.rounds = config.kernel.pilot_samples;
    pilot.seed = mix_seed(config.seed, kPilotStream);
    const StreamData data = generate_stream(pilot);
    std::vector<Vector> inputs;
    inputs.reserve(data.rounds());
    for (std::size_t n = 0; n < data.rounds(); ++n) inputs.push_back(data.at(0, n).input);
    return silverman_bandwidth(inputs).sigma;
}

const AlgorithmTrace& MetricsTrace::get(Algorithm algorithm) const {
    for (const auto& t : algorithms) {
        if (t.algorithm == algorithm) return t;
    }
    throw StateError("metrics trace has no entry for " + std::string(to_string(algorithm)));
}

double mse_floor(const std::vector<double>& mse_per_round, double window) {
    if (mse_per_round.empty()) {
        throw StateError("mse_floor: empty trace");
    }
    const auto n = mse_per_round.size();
    std::size_t count = static_cast<std::size_t>(std::ceil(window * static_cast<double>(n)));
    count = std::clamp<std::size_t>(count, 1, n);
    double s = 0.0;
    for (std::size_t i = n - count; i < n; ++i) s += mse_per_round[i];
    return s / static_cast<double>(count);
}

std::optional<std::size_t> first_round_reaching(const std::vector<double>& curve, double level,
                                                std::size_t smoothing) {
    smoothing = std::max<std::size_t>(smoothing, 1);
    double window = 0.0;
    for (std::size_t i = 0; i < curve.size(); ++i) {
        window += curve[i];
        if (i >= smoothing) window -= curve[i - smoothing];
        const std::size_t count = std::min(i + 1, smoothing);
        if (i + 1 >= smoothing && window / static_cast<double>(count) <= level) {
            return i + 1;
        }
    }
    return std::nullopt;
}

MetricsTrace run_experiment(const ExperimentConfig& config, Execution execution) {
    validate(config);
    FilterHyperparams hyper = config.hyper;
    hyper.kernel.sigma = resolve_sigma(config);

    const std::size_t runs = config.monte_carlo_runs;
    const std::size_t rounds = config.stream.rounds;
    std::vector<RunOutcome> outcomes(runs);
    std::vector<std::exception_ptr> failures(runs);

    if (execution == Execution::Parallel) {
        const auto count = static_cast<long long>(runs);
#pragma omp parallel for schedule(dynamic, 1)
        for (long long r = 0; r < count; ++r) {
            try {
                outcomes[static_cast<std::size_t>(r)] =
                    simulate_run(config, hyper, static_cast<std::size_t>(r));
            } catch (...) {
                failures[static_cast<std::size_t>(r)] = std::current_exception();
            }
        }
        for (const auto& f : failures) {
            if (f) std::rethrow_exception(f);
        }
    } else {
        for (std::size_t r = 0; r < runs; ++r) outcomes[r] = simulate_run(config, hyper, r);
    }

    MetricsTrace trace;
    trace.rounds = rounds;
    trace.sigma = hyper.kernel.sigma;
    for (std::size_t r = 0; r < runs; ++r) trace.run_seeds.push_back(run_seed(config, r));
    trace.first_run_topology = std::move(outcomes.front().topology);
    trace.first_run_matrices = std::move(outcomes.front().matrices);

    const double inv_runs = 1.0 / static_cast<double>(runs);
    for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
        AlgorithmTrace t;
        t.algorithm = config.algorithms[a];
        t.node_count = outcomes.front().per_algorithm[a].final_sizes.size();
        t.mse_per_round.assign(rounds, 0.0);
        t.dict_size_per_round.assign(rounds, 0.0);
        t.final_dict_sizes.assign(t.node_count, 0.0);
        // Fixed run order keeps the floating-point sums reproducible.
        for (std::size_t r = 0; r < runs; ++r) {
            const AlgorithmRun& run = outcomes[r].per_algorithm[a];
            for (std::size_t i = 0; i < rounds; ++i) {
                t.mse_per_round[i] += run.mse[i];
                t.dict_size_per_round[i] += run.size[i];
            }
            for (std::size_t q = 0; q < t.node_count; ++q) t.final_dict_sizes[q] += run.final_sizes[q];
            t.max_dict_size = std::max(t.max_dict_size, run.max_size);
        }
        for (double& v : t.mse_per_round) v *= inv_runs;
        for (double& v : t.dict_size_per_round) v *= inv_runs;
        double total = 0.0;
        for (double& v : t.final_dict_sizes) {
            v *= inv_runs;
            total += v;
        }
        t.avg_final_dict_size = total / static_cast<double>(t.node_count);
        t.mse_floor = mse_floor(t.mse_per_round, config.floor_window);
        t.first_run_dictionaries = std::move(outcomes.front().per_algorithm[a].dictionaries);
        trace.algorithms.push_back(std::move(t));
    }
    return trace;
}

std::vector<SweepPoint> sweep_network_size(const ExperimentConfig& config,
                                           const std::vector<std::size_t>& sizes,
                                           Execution execution) {
    if (sizes.empty()) {
        throw ConfigError("sweep.sizes", "at least one network size is required");
    }
    std::vector<SweepPoint> rows;
    for (std::size_t size : sizes) {
        if (size < 1) throw ConfigError("sweep.sizes", "every size must be at least 1");
        ExperimentConfig c = config;
        c.stream.node_count = size;
        const MetricsTrace trace = run_experiment(c, execution);
        for (const auto& t : trace.algorithms) {
            rows.push_back({t.algorithm, size, t.mse_floor, t.avg_final_dict_size});
        }
    }
    return rows;
}

BudgetCalibration calibrate_budget(const ExperimentConfig& config, Execution execution) {
    ExperimentConfig c = config;
    c.algorithms = {Algorithm::QDKLMS};
    const MetricsTrace trace = run_experiment(c, execution);
    const double size = trace.get(Algorithm::QDKLMS).avg_final_dict_size;
    return {std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(size))), size};
}

}  // namespace dkaf
