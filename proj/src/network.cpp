#include "dkaf/network.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

#include "dkaf/errors.hpp"
#include "dkaf/rng.hpp"

namespace dkaf {

namespace {

constexpr int kMaxPlacementRetries = 1000;

}  // namespace

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            t(j, i) = (*this)(i, j);
        }
    }
    return t;
}

TopologyKind parse_topology_kind(std::string_view name) {
    if (name == "ring") return TopologyKind::Ring;
    if (name == "random-geometric") return TopologyKind::RandomGeometric;
    if (name == "complete") return TopologyKind::Complete;
    throw ConfigError("network.topology", "unknown topology '" + std::string(name) + "'");
}

CombinationRule parse_combination_rule(std::string_view name) {
    if (name == "uniform") return CombinationRule::Uniform;
    if (name == "metropolis") return CombinationRule::Metropolis;
    throw ConfigError("network.rule", "unknown combination rule '" + std::string(name) + "'");
}

std::string_view to_string(TopologyKind kind) {
    switch (kind) {
        case TopologyKind::Ring: return "ring";
        case TopologyKind::RandomGeometric: return "random-geometric";
        case TopologyKind::Complete: return "complete";
    }
    return "?";
}

std::string_view to_string(CombinationRule rule) {
    return rule == CombinationRule::Uniform ? "uniform" : "metropolis";
}

Topology::Topology(std::size_t node_count) : n_(node_count), adj_(node_count * node_count, 0) {
    if (node_count == 0) {
        throw ConstructionError("topology: node_count must be at least 1");
    }
    for (std::size_t q = 0; q < n_; ++q) {
        adj_[q * n_ + q] = 1;
    }
}

void Topology::connect(std::size_t q, std::size_t l) {
    if (q >= n_ || l >= n_) {
        throw StateError("topology: node index out of range");
    }
    adj_[q * n_ + l] = 1;
    adj_[l * n_ + q] = 1;
}

std::vector<std::size_t> Topology::neighbors(std::size_t q) const {
    std::vector<std::size_t> out;
    for (std::size_t l = 0; l < n_; ++l) {
        if (adjacent(q, l)) out.push_back(l);
    }
    return out;
}

std::size_t Topology::degree(std::size_t q) const {
    std::size_t d = 0;
    for (std::size_t l = 0; l < n_; ++l) {
        d += adjacent(q, l) ? 1 : 0;
    }
    return d;
}

bool Topology::connected() const {
    std::vector<bool> seen(n_, false);
    std::queue<std::size_t> frontier;
    frontier.push(0);
    seen[0] = true;
    std::size_t reached = 1;
    while (!frontier.empty()) {
        const std::size_t q = frontier.front();
        frontier.pop();
        for (std::size_t l = 0; l < n_; ++l) {
            if (!seen[l] && adjacent(q, l)) {
                seen[l] = true;
                ++reached;
                frontier.push(l);
            }
        }
    }
    return reached == n_;
}

Topology build_topology(TopologyKind kind, std::size_t node_count, std::uint64_t seed,
                        std::optional<double> radius) {
    Topology topo(node_count);
    switch (kind) {
        case TopologyKind::Complete:
            for (std::size_t q = 0; q < node_count; ++q) {
                for (std::size_t l = q + 1; l < node_count; ++l) topo.connect(q, l);
            }
            return topo;
        case TopologyKind::Ring:
            for (std::size_t q = 0; q + 1 < node_count; ++q) topo.connect(q, q + 1);
            if (node_count > 2) topo.connect(node_count - 1, 0);
            return topo;
        case TopologyKind::RandomGeometric:
            break;
    }

    if (!radius || !(*radius > 0.0)) {
        throw ConfigError("network.radius", "random-geometric topology needs a positive radius");
    }
    Rng rng(mix_seed(seed, kTopologyStream));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double r2 = *radius * *radius;
    for (int attempt = 0; attempt < kMaxPlacementRetries; ++attempt) {
        Topology g(node_count);
        std::vector<Point2> pos(node_count);
        for (auto& p : pos) {
            p.x = unit(rng);
            p.y = unit(rng);
        }
        for (std::size_t q = 0; q < node_count; ++q) {
            for (std::size_t l = q + 1; l < node_count; ++l) {
                const double dx = pos[q].x - pos[l].x;
                const double dy = pos[q].y - pos[l].y;
                if (dx * dx + dy * dy <= r2) g.connect(q, l);
            }
        }
        if (g.connected()) {
            g.set_positions(std::move(pos));
            return g;
        }
    }
    throw ConstructionError("random-geometric topology with " + std::to_string(node_count) +
                            " nodes and radius " + std::to_string(*radius) +
                            " stayed disconnected after " +
                            std::to_string(kMaxPlacementRetries) + " placements");
}

Matrix build_combination_matrix(const Topology& topo, CombinationRule rule) {
    const std::size_t n = topo.node_count();
    Matrix m(n, n);
    for (std::size_t q = 0; q < n; ++q) {
        if (rule == CombinationRule::Uniform) {
            const double w = 1.0 / static_cast<double>(topo.degree(q));
            for (std::size_t l : topo.neighbors(q)) m(q, l) = w;
            continue;
        }
        double off = 0.0;
        for (std::size_t l : topo.neighbors(q)) {
            if (l == q) continue;
            m(q, l) = 1.0 / static_cast<double>(std::max(topo.degree(q), topo.degree(l)));
            off += m(q, l);
        }
        m(q, q) = 1.0 - off;
    }
    return m;
}

CombinationMatrices CombinationMatrices::single_node() {
    return {Matrix::identity(1), Matrix::identity(1)};
}

CombinationMatrices CombinationMatrices::from_rules(const Topology& topo, CombinationRule rule_a,
                                                    CombinationRule rule_c) {
    return {build_combination_matrix(topo, rule_a),
            build_combination_matrix(topo, rule_c).transposed()};
}

Vector fuse_observations(const Matrix& C, std::size_t node, std::span<const Vector> observations) {
    if (observations.size() != C.rows() || node >= C.cols()) {
        throw ShapeError("fuse_observations: need one observation per node");
    }
    const std::size_t dim = observations.front().size();
    Vector out(dim, 0.0);
    for (std::size_t l = 0; l < observations.size(); ++l) {
        if (observations[l].size() != dim) {
            throw ShapeError("fuse_observations: observation dimensions differ");
        }
        const double w = C(l, node);
        if (w == 0.0) continue;
        for (std::size_t i = 0; i < dim; ++i) out[i] += w * observations[l][i];
    }
    return out;
}

Vector fuse_observations(const Matrix& C, std::size_t node, std::span<const Vector> observations,
                         const std::vector<bool>& present) {
    if (present.size() != C.rows()) {
        throw ShapeError("fuse_observations: presence mask has wrong length");
    }
    Matrix masked(C.rows(), C.cols());
    double total = 0.0;
    for (std::size_t l = 0; l < C.rows(); ++l) {
        if (present[l]) {
            masked(l, node) = C(l, node);
            total += C(l, node);
        }
    }
    if (!(total > 0.0)) {
        throw StateError("fuse_observations: no reporting neighbor for node " + std::to_string(node));
    }
    for (std::size_t l = 0; l < C.rows(); ++l) masked(l, node) /= total;
    return fuse_observations(masked, node, observations);
}

double diffuse_error_at(const Matrix& A, std::size_t node, std::span<const double> errors) {
    if (errors.size() != A.cols() || node >= A.rows()) {
        throw ShapeError("diffuse_errors: need one error per node");
    }
    double s = 0.0;
    const auto row = A.row(node);
    for (std::size_t l = 0; l < errors.size(); ++l) s += row[l] * errors[l];
    return s;
}

Vector diffuse_errors(const Matrix& A, std::span<const double> errors) {
    Vector out(A.rows());
    for (std::size_t q = 0; q < A.rows(); ++q) out[q] = diffuse_error_at(A, q, errors);
    return out;
}

}  // namespace dkaf
