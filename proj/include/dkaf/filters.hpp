#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dkaf/dictionary.hpp"
#include "dkaf/kernel.hpp"
#include "dkaf/network.hpp"

namespace dkaf {

enum class Algorithm { KLMS, QKLMS, DKLMS, QDKLMS, FBQDKLMS };

Algorithm parse_algorithm(std::string_view name);
std::string_view to_string(Algorithm algorithm);

/// KLMS and QKLMS are single-node filters.
constexpr bool is_single_node(Algorithm a) noexcept {
    return a == Algorithm::KLMS || a == Algorithm::QKLMS;
}
/// KLMS and DKLMS add every observation; the rest quantize against epsilon.
constexpr bool quantizes(Algorithm a) noexcept {
    return a == Algorithm::QKLMS || a == Algorithm::QDKLMS || a == Algorithm::FBQDKLMS;
}

struct FilterHyperparams {
    double eta = 0.1;
    double epsilon = 0.0;
    double zeta = 1.0;
    std::optional<std::size_t> budget;
    KernelParams kernel;
};

/// Throws ConfigError naming the offending field.
void validate(const FilterHyperparams& hyper);

struct NodeState {
    Dictionary dictionary;
    double last_error = 0.0;
    double last_diffused_error = 0.0;
    double last_output = 0.0;
};

/// Dictionary mutation recorded for replay tests. Significance and age
/// snapshots are taken after the event.
struct DictionaryEvent {
    enum class Kind { Add, Merge, Prune };
    Kind kind = Kind::Add;
    std::size_t node = 0;
    std::size_t index = 0;  ///< merge target or pruned entry
    Vector center;          ///< added center
    double error = 0.0;     ///< diffused error driving an add or merge
    std::vector<double> significance;
    std::vector<double> age_accum;
};

struct RoundResult {
    Vector outputs;
    Vector errors;
    Vector diffused_errors;
};

/// State of every node in the network plus the shared combination matrices.
///
/// Each node's dictionary starts as {(x0, eta * d0)}: with an empty hypothesis
/// the first prediction is zero, so the first innovation is the desired value.
class NetworkFilter {
public:
    NetworkFilter(Algorithm algorithm, FilterHyperparams hyper, CombinationMatrices matrices,
                  std::span<const Vector> initial_inputs, std::span<const double> initial_desired);

    /// One synchronous round over all nodes. All outputs and errors are
    /// computed on the previous round's dictionaries before any node updates.
    RoundResult round(std::span<const Vector> observations, std::span<const double> desired);

    Algorithm algorithm() const noexcept { return algorithm_; }
    const FilterHyperparams& hyper() const noexcept { return hyper_; }
    const CombinationMatrices& matrices() const noexcept { return matrices_; }
    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t input_dim() const noexcept { return dim_; }
    const NodeState& node(std::size_t q) const { return nodes_.at(q); }
    const std::vector<NodeState>& nodes() const noexcept { return nodes_; }

    /// Append every dictionary mutation to `sink` (nullptr to stop).
    void record_events(std::vector<DictionaryEvent>* sink) noexcept { events_ = sink; }

private:
    void update_node(std::size_t q, std::span<const double> x, double diffused_error);
    void record(DictionaryEvent::Kind kind, std::size_t q, std::size_t index,
                std::span<const double> center, double error);

    Algorithm algorithm_;
    FilterHyperparams hyper_;
    CombinationMatrices matrices_;
    std::size_t dim_ = 0;
    std::vector<NodeState> nodes_;
    std::vector<Vector> fused_;
    std::vector<DictionaryEvent>* events_ = nullptr;
};

RoundResult network_round(NetworkFilter& state, std::span<const Vector> observations,
                          std::span<const double> desired);

struct StepResult {
    double output = 0.0;
    double error = 0.0;
};

/// Single-node KLMS: predict, then add the observation unconditionally.
StepResult klms_step(NetworkFilter& state, std::span<const double> x, double desired);

/// Single-node quantised KLMS; the one-node case of QDKLMS.
StepResult qklms_step(NetworkFilter& state, std::span<const double> x, double desired);

/// Diffusion KLMS with an unbounded dictionary.
RoundResult dklms_step(NetworkFilter& state, std::span<const Vector> observations,
                       std::span<const double> desired);

}  // namespace dkaf
