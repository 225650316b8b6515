#include "dkaf/filters.hpp"

#include <cmath>
#include <string>

#include "dkaf/errors.hpp"

namespace dkaf {

Algorithm parse_algorithm(std::string_view name) {
    if (name == "klms") return Algorithm::KLMS;
    if (name == "qklms") return Algorithm::QKLMS;
    if (name == "dklms") return Algorithm::DKLMS;
    if (name == "qdklms") return Algorithm::QDKLMS;
    if (name == "fbqdklms") return Algorithm::FBQDKLMS;
    throw ConfigError("algorithms", "unknown algorithm '" + std::string(name) + "'");
}

std::string_view to_string(Algorithm algorithm) {
    switch (algorithm) {
        case Algorithm::KLMS: return "klms";
        case Algorithm::QKLMS: return "qklms";
        case Algorithm::DKLMS: return "dklms";
        case Algorithm::QDKLMS: return "qdklms";
        case Algorithm::FBQDKLMS: return "fbqdklms";
    }
    return "?";
}

void validate(const FilterHyperparams& hyper) {
    if (!(hyper.eta >= 0.0) || !std::isfinite(hyper.eta)) {
        throw ConfigError("hyper.eta", "must be a finite nonnegative number");
    }
    if (!(hyper.epsilon >= 0.0)) {
        throw ConfigError("hyper.epsilon", "must be nonnegative");
    }
    if (!(hyper.zeta > 0.0 && hyper.zeta <= 1.0)) {
        throw ConfigError("hyper.zeta", "must lie in (0, 1]");
    }
    if (hyper.budget && *hyper.budget < 1) {
        throw ConfigError("hyper.budget", "must be at least 1");
    }
    validate(hyper.kernel);
}

NetworkFilter::NetworkFilter(Algorithm algorithm, FilterHyperparams hyper,
                             CombinationMatrices matrices, std::span<const Vector> initial_inputs,
                             std::span<const double> initial_desired)
    : algorithm_(algorithm), hyper_(hyper), matrices_(std::move(matrices)) {
    validate(hyper_);
    const std::size_t n = matrices_.node_count();
    if (matrices_.A.cols() != n || matrices_.C.rows() != n || matrices_.C.cols() != n) {
        throw ShapeError("NetworkFilter: combination matrices must be square and equally sized");
    }
    if (is_single_node(algorithm_) && n != 1) {
        throw ConfigError("algorithms", std::string(to_string(algorithm_)) +
                                            " requires a single-node network, got " +
                                            std::to_string(n) + " nodes");
    }
    if (initial_inputs.size() != n || initial_desired.size() != n) {
        throw ShapeError("NetworkFilter: need one initial sample per node");
    }
    dim_ = initial_inputs.front().size();

    const auto budget = algorithm_ == Algorithm::FBQDKLMS ? hyper_.budget : std::nullopt;
    nodes_.reserve(n);
    for (std::size_t q = 0; q < n; ++q) {
        NodeState s{Dictionary(dim_, budget)};
        add_entry(s.dictionary, initial_inputs[q], hyper_.eta, initial_desired[q]);
        nodes_.push_back(std::move(s));
    }
    fused_.assign(n, Vector(dim_, 0.0));
}

RoundResult NetworkFilter::round(std::span<const Vector> observations,
                                 std::span<const double> desired) {
    const std::size_t n = nodes_.size();
    if (observations.size() != n || desired.size() != n) {
        throw ShapeError("round: need one observation and one desired value per node, got " +
                         std::to_string(observations.size()) + " and " +
                         std::to_string(desired.size()) + " for " + std::to_string(n) + " nodes");
    }
    RoundResult out{Vector(n), Vector(n), Vector(n)};

    // Phase 1: every node evaluates on last round's dictionary.
    for (std::size_t q = 0; q < n; ++q) {
        fused_[q] = fuse_observations(matrices_.C, q, observations);
        const double y = predict(nodes_[q].dictionary, fused_[q], hyper_.kernel);
        out.outputs[q] = y;
        out.errors[q] = desired[q] - y;
        nodes_[q].last_output = y;
        nodes_[q].last_error = desired[q] - y;
    }

    // Phase 2: diffuse the errors, then update against the raw observation.
    for (std::size_t q = 0; q < n; ++q) {
        const double ed = diffuse_error_at(matrices_.A, q, out.errors);
        out.diffused_errors[q] = ed;
        nodes_[q].last_diffused_error = ed;
        update_node(q, observations[q], ed);
    }
    return out;
}

void NetworkFilter::update_node(std::size_t q, std::span<const double> x, double diffused_error) {
    Dictionary& dict = nodes_[q].dictionary;
    const bool track = algorithm_ == Algorithm::FBQDKLMS;

    if (quantizes(algorithm_)) {
        const Nearest nearest = nearest_entry(dict, x);
        if (nearest.distance <= hyper_.epsilon) {
            if (track) {
                significance_on_merge(dict, nearest.index, hyper_.eta, diffused_error, hyper_.zeta,
                                      hyper_.kernel);
            }
            merge_update(dict, nearest.index, hyper_.eta, diffused_error);
            if (track) record(DictionaryEvent::Kind::Merge, q, nearest.index, {}, diffused_error);
            return;  // merging never grows the dictionary, so no prune check
        }
    }

    if (track) {
        significance_on_add(dict, std::fabs(diffused_error), hyper_.zeta, x, hyper_.kernel);
    }
    add_entry(dict, x, hyper_.eta, diffused_error);
    if (!track) {
        return;
    }
    record(DictionaryEvent::Kind::Add, q, dict.size() - 1, x, diffused_error);

    if (dict.over_budget()) {
        // Snapshot the victim index before removal for the event log.
        std::size_t victim = 0;
        for (std::size_t j = 1; j < dict.size(); ++j) {
            if (dict.significance(j) < dict.significance(victim)) victim = j;
        }
        if (prune_min_significance(dict, hyper_.zeta, hyper_.kernel)) {
            record(DictionaryEvent::Kind::Prune, q, victim, {}, 0.0);
        }
    }
}

void NetworkFilter::record(DictionaryEvent::Kind kind, std::size_t q, std::size_t index,
                           std::span<const double> center, double error) {
    if (events_ == nullptr) {
        return;
    }
    const Dictionary& dict = nodes_[q].dictionary;
    events_->push_back(DictionaryEvent{
        kind, q, index, Vector(center.begin(), center.end()), error,
        std::vector<double>(dict.significances().begin(), dict.significances().end()),
        std::vector<double>(dict.age_accums().begin(), dict.age_accums().end())});
}

RoundResult network_round(NetworkFilter& state, std::span<const Vector> observations,
                          std::span<const double> desired) {
    return state.round(observations, desired);
}

namespace {

StepResult single_step(NetworkFilter& state, Algorithm expected, std::span<const double> x,
                       double desired) {
    if (state.algorithm() != expected) {
        throw StateError(std::string(to_string(expected)) + "_step called on a " +
                         std::string(to_string(state.algorithm())) + " filter");
    }
    const Vector obs[1] = {Vector(x.begin(), x.end())};
    const double d[1] = {desired};
    const RoundResult r = state.round(obs, d);
    return {r.outputs[0], r.errors[0]};
}

}  // namespace

StepResult klms_step(NetworkFilter& state, std::span<const double> x, double desired) {
    return single_step(state, Algorithm::KLMS, x, desired);
}

StepResult qklms_step(NetworkFilter& state, std::span<const double> x, double desired) {
    return single_step(state, Algorithm::QKLMS, x, desired);
}

RoundResult dklms_step(NetworkFilter& state, std::span<const Vector> observations,
                       std::span<const double> desired) {
    if (state.algorithm() != Algorithm::DKLMS) {
        throw StateError("dklms_step called on a " + std::string(to_string(state.algorithm())) +
                         " filter");
    }
    return state.round(observations, desired);
}

}  // namespace dkaf
