// Scripted golden-trace and significance-replay checks shared by the unit
// and acceptance suites.
#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "dkaf/datasets.hpp"
#include "dkaf/filters.hpp"
#include "dkaf/network.hpp"
#include "oracle/reference_filter.hpp"

namespace golden {

struct Deviation {
    double max_abs = 0.0;
    std::size_t compared = 0;
    bool structure_ok = true;  ///< sizes and centers agree exactly
    std::size_t final_max_size = 0;

    void add(double a, double b) {
        max_abs = std::max(max_abs, std::fabs(a - b));
        ++compared;
    }
};

// 3 nodes, 2-D inputs on a quarter grid, labels in {-1, 1/2, 1}.
inline const std::vector<std::vector<dkaf::Vector>>& scripted_inputs() {
    static const std::vector<std::vector<dkaf::Vector>> x = {
        {{0.0, 0.0}, {0.5, 0.25}, {-0.5, 0.75}},     // initial samples
        {{0.25, 0.0}, {1.0, 1.0}, {-0.5, 0.5}},
        {{0.5, 0.5}, {-1.0, 0.25}, {0.0, 0.25}},
        {{0.25, 0.25}, {1.0, 0.75}, {-1.25, 0.0}},
        {{2.0, -1.0}, {0.5, 0.5}, {0.0, 0.0}},
        {{1.0, 1.25}, {-0.75, -0.75}, {0.5, 0.0}},
    };
    return x;
}

inline const std::vector<std::vector<double>>& scripted_desired() {
    static const std::vector<std::vector<double>> d = {
        {1.0, -1.0, 0.5}, {1.0, 1.0, -1.0}, {-1.0, 0.5, 1.0},
        {0.5, -1.0, -1.0}, {1.0, 1.0, 0.5}, {-1.0, 0.5, 1.0},
    };
    return d;
}

/// Runs the library and the straight-line oracle side by side on the scripted
/// 3-node complete-graph stream for 5 rounds.
inline Deviation scripted_trace_deviation(dkaf::Algorithm algorithm,
                                          std::optional<std::size_t> budget = std::nullopt) {
    const std::size_t n = 3;
    const double third = 1.0 / 3.0;
    dkaf::Matrix a(n, n, third);
    dkaf::Matrix c(n, n, third);

    dkaf::FilterHyperparams h;
    h.eta = 0.5;
    h.epsilon = 0.3;
    h.zeta = 0.75;
    h.budget = budget;
    h.kernel.sigma = 1.0;

    oracle::Params op;
    op.eta = h.eta;
    op.eps = h.epsilon;
    op.zeta = h.zeta;
    op.sigma = h.kernel.sigma;
    if (algorithm == dkaf::Algorithm::FBQDKLMS) op.budget = budget.value_or(1000000);

    const auto& x = scripted_inputs();
    const auto& d = scripted_desired();
    dkaf::NetworkFilter filter(algorithm, h, dkaf::CombinationMatrices{a, c}, x[0], d[0]);
    std::vector<oracle::Node> ref;
    for (std::size_t q = 0; q < n; ++q) ref.push_back(oracle::init_node(x[0][q], d[0][q], op));
    const std::vector<std::vector<double>> am(n, std::vector<double>(n, third));

    Deviation dev;
    for (std::size_t r = 1; r < x.size(); ++r) {
        const auto res = filter.round(x[r], d[r]);
        const auto oref = oracle::round(ref, am, am, x[r], d[r], op);
        for (std::size_t q = 0; q < n; ++q) {
            dev.add(res.outputs[q], oref.y[q]);
            dev.add(res.errors[q], oref.e[q]);
            dev.add(res.diffused_errors[q], oref.e_diff[q]);
            const auto& dict = filter.node(q).dictionary;
            const auto& od = ref[q].dict;
            if (r + 1 == x.size()) dev.final_max_size = std::max(dev.final_max_size, od.size());
            if (dict.size() != od.size()) {
                dev.structure_ok = false;
                continue;
            }
            for (std::size_t j = 0; j < od.size(); ++j) {
                const auto cj = dict.center(j);
                if (!std::equal(cj.begin(), cj.end(), od[j].x.begin())) dev.structure_ok = false;
                dev.add(dict.weight(j), od[j].w);
                if (algorithm == dkaf::Algorithm::FBQDKLMS) {
                    dev.add(dict.significance(j), od[j].E);
                    dev.add(dict.age_accum(j), od[j].lambda);
                }
            }
        }
    }
    return dev;
}

struct Replay {
    std::size_t events = 0;
    std::size_t adds = 0;
    std::size_t merges = 0;
    std::size_t prunes = 0;
    double max_abs = 0.0;
    bool structure_ok = true;  ///< pruned indices and sizes agree
};

/// Records at least `min_events` dictionary mutations from a budgeted
/// 4-node ring on a crescent stream, then replays them through the oracle's
/// significance recursions and compares the snapshot after every event.
inline Replay significance_replay(std::size_t min_events, std::uint64_t seed = 7) {
    dkaf::StreamSpec spec;
    spec.task = dkaf::Task::Crescent;
    spec.node_count = 4;
    spec.rounds = 200;
    spec.seed = seed;
    spec.noise_std = 0.3;
    const auto data = dkaf::generate_stream(spec);

    dkaf::FilterHyperparams h;
    h.eta = 0.2;
    h.epsilon = 0.3;
    h.zeta = 0.9;
    h.budget = 6;
    h.kernel.sigma = 0.5;

    const auto topo = dkaf::build_topology(dkaf::TopologyKind::Ring, spec.node_count, seed);
    const auto mats = dkaf::CombinationMatrices::from_rules(topo, dkaf::CombinationRule::Metropolis,
                                                            dkaf::CombinationRule::Uniform);
    auto column = [&](std::size_t r) {
        std::vector<dkaf::Vector> x;
        std::vector<double> d;
        for (std::size_t q = 0; q < spec.node_count; ++q) {
            x.push_back(data.at(q, r).input);
            d.push_back(data.at(q, r).desired);
        }
        return std::pair{x, d};
    };
    auto [x0, d0] = column(0);
    dkaf::NetworkFilter filter(dkaf::Algorithm::FBQDKLMS, h, mats, x0, d0);

    oracle::Params op;
    op.eta = h.eta;
    op.eps = h.epsilon;
    op.zeta = h.zeta;
    op.sigma = h.kernel.sigma;
    op.budget = h.budget;
    std::vector<oracle::Node> ref(spec.node_count);
    for (std::size_t q = 0; q < spec.node_count; ++q) {
        const auto& dict = filter.node(q).dictionary;
        for (std::size_t j = 0; j < dict.size(); ++j) {
            const auto c = dict.center(j);
            ref[q].dict.push_back({std::vector<double>(c.begin(), c.end()), dict.weight(j),
                                   dict.significance(j), dict.age_accum(j)});
        }
    }

    std::vector<dkaf::DictionaryEvent> events;
    filter.record_events(&events);
    for (std::size_t r = 1; r < spec.rounds && events.size() < min_events; ++r) {
        auto [x, d] = column(r);
        filter.round(x, d);
    }
    filter.record_events(nullptr);

    Replay out;
    for (const auto& ev : events) {
        auto& D = ref.at(ev.node).dict;
        switch (ev.kind) {
            case dkaf::DictionaryEvent::Kind::Add:
                oracle::sig_add(D, ev.center, std::fabs(ev.error), op);
                D.push_back({ev.center, op.eta * ev.error, std::fabs(ev.error), 1.0});
                ++out.adds;
                break;
            case dkaf::DictionaryEvent::Kind::Merge:
                oracle::sig_merge(D, ev.index, ev.error, op);
                D[ev.index].w += op.eta * ev.error;
                ++out.merges;
                break;
            case dkaf::DictionaryEvent::Kind::Prune: {
                std::size_t lowest = 0;
                for (std::size_t j = 1; j < D.size(); ++j) {
                    if (D[j].E < D[lowest].E) lowest = j;
                }
                if (lowest != ev.index) out.structure_ok = false;
                oracle::prune(D, op);
                ++out.prunes;
                break;
            }
        }
        ++out.events;
        if (ev.significance.size() != D.size() || ev.age_accum.size() != D.size()) {
            out.structure_ok = false;
            continue;
        }
        for (std::size_t j = 0; j < D.size(); ++j) {
            out.max_abs = std::max(out.max_abs, std::fabs(ev.significance[j] - D[j].E));
            out.max_abs = std::max(out.max_abs, std::fabs(ev.age_accum[j] - D[j].lambda));
        }
    }
    return out;
}

}  // namespace golden
