#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dkaf/kernel.hpp"

namespace dkaf {

/// Dense row-major matrix; networks here have at most a few dozen nodes.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    std::span<const double> row(std::size_t i) const {
        return std::span<const double>(data_).subspan(i * cols_, cols_);
    }

    Matrix transposed() const;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

enum class TopologyKind { Ring, RandomGeometric, Complete };
enum class CombinationRule { Uniform, Metropolis };

TopologyKind parse_topology_kind(std::string_view name);
CombinationRule parse_combination_rule(std::string_view name);
std::string_view to_string(TopologyKind kind);
std::string_view to_string(CombinationRule rule);

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

/// Undirected graph with self-loops on every node.
class Topology {
public:
    explicit Topology(std::size_t node_count);

    std::size_t node_count() const noexcept { return n_; }
    bool adjacent(std::size_t q, std::size_t l) const { return adj_.at(q * n_ + l) != 0; }
    /// Neighborhood of q including q itself, ascending.
    std::vector<std::size_t> neighbors(std::size_t q) const;
    std::size_t degree(std::size_t q) const;  ///< |N_q|, self included
    bool connected() const;

    void connect(std::size_t q, std::size_t l);

    /// Node placement, present for random-geometric graphs.
    const std::vector<Point2>& positions() const noexcept { return positions_; }
    void set_positions(std::vector<Point2> p) { positions_ = std::move(p); }

private:
    std::size_t n_;
    std::vector<unsigned char> adj_;
    std::vector<Point2> positions_;
};

/// Connected topology. Random-geometric graphs place nodes uniformly on the
/// unit square and link pairs within `radius`, redrawing until connected.
Topology build_topology(TopologyKind kind, std::size_t node_count, std::uint64_t seed,
                        std::optional<double> radius = std::nullopt);

/// Row-stochastic weights M(q, l) supported on the neighborhoods of `topo`.
Matrix build_combination_matrix(const Topology& topo, CombinationRule rule);

/// A(q, l) = a_ql weights errors received at q. C(l, q) = c_lq weights
/// observations fused at q, so every column of C sums to one.
struct CombinationMatrices {
    Matrix A;
    Matrix C;

    std::size_t node_count() const noexcept { return A.rows(); }
    static CombinationMatrices single_node();
    static CombinationMatrices from_rules(const Topology& topo, CombinationRule rule_a,
                                          CombinationRule rule_c);
};

/// x'_q = sum_l C(l, q) x_l.
Vector fuse_observations(const Matrix& C, std::size_t node, std::span<const Vector> observations);

/// Fusion where some nodes did not report: their weight is zeroed and the rest
/// renormalized. The receiving node must have at least one reporting neighbor.
Vector fuse_observations(const Matrix& C, std::size_t node, std::span<const Vector> observations,
                         const std::vector<bool>& present);

/// e' = A e.
Vector diffuse_errors(const Matrix& A, std::span<const double> errors);

/// Row q of A e.
double diffuse_error_at(const Matrix& A, std::size_t node, std::span<const double> errors);

}  // namespace dkaf
