#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "dkaf/kernel.hpp"

namespace dkaf {

struct Sample {
    Vector input;
    double desired = 0.0;

    friend bool operator==(const Sample&, const Sample&) = default;
};

enum class Task { Channel, Crescent, Spiral };

/// How the per-node streams relate to each other.
///   Shared: one latent sample per round (symbol, or point with label) observed
///           by every node through its own additive noise.
///   Independent: every node draws its own latent samples.
enum class SourceModel { Shared, Independent };

Task parse_task(std::string_view name);
SourceModel parse_source_model(std::string_view name);
std::string_view to_string(Task task);
std::string_view to_string(SourceModel source);

struct ChannelParams {
    std::size_t taps = 3;         ///< regressor length
    std::size_t delay = 1;        ///< decision delay D, desired = s[n - D]
    double drift_period = 1000;   ///< tap drift period in samples; 0 freezes the taps
    double nonlinearity = 0.9;    ///< z = r - nonlinearity * r^2
};

struct StreamSpec {
    Task task = Task::Channel;
    std::size_t node_count = 1;
    std::size_t rounds = 1;
    std::uint64_t seed = 0;
    double noise_std = 0.1;
    SourceModel source = SourceModel::Shared;
    std::optional<double> jitter;  ///< geometric jitter; task default when absent
    ChannelParams channel;
};

/// Throws ConfigError naming the offending field.
void validate(const StreamSpec& spec);

/// Per-node, per-round samples, node-major.
class StreamData {
public:
    StreamData(std::size_t node_count, std::size_t rounds, std::size_t dim)
        : node_count_(node_count), rounds_(rounds), dim_(dim), samples_(node_count * rounds) {}

    std::size_t node_count() const noexcept { return node_count_; }
    std::size_t rounds() const noexcept { return rounds_; }
    std::size_t dim() const noexcept { return dim_; }
    const Sample& at(std::size_t node, std::size_t round) const {
        return samples_.at(node * rounds_ + round);
    }
    Sample& at(std::size_t node, std::size_t round) { return samples_.at(node * rounds_ + round); }

    friend bool operator==(const StreamData&, const StreamData&) = default;

private:
    std::size_t node_count_;
    std::size_t rounds_;
    std::size_t dim_;
    std::vector<Sample> samples_;
};

std::size_t input_dim(const StreamSpec& spec);
double default_jitter(Task task);

/// Channel taps at sample index n: h1 = 1 + 0.2 sin(2 pi n / P), h2 = 0.5 - 0.2 sin(2 pi n / P).
struct ChannelTaps {
    double h1;
    double h2;
};
ChannelTaps channel_taps(double n, double drift_period);

/// Noise-free channel output for symbols s[n], s[n-1] at index n.
double channel_output(double s_now, double s_prev, double n, const ChannelParams& params);

/// Binary symbols through a drifting two-tap channel and a quadratic
/// nonlinearity, observed in Gaussian noise. Regressor (z[n], ..., z[n-taps+1]),
/// desired s[n - delay].
StreamData nonstationary_channel_stream(const StreamSpec& spec);

/// Noise-free crescent point: +1 on the upper unit arc, -1 on the lower arc
/// centered at (1, -0.5). `radial` scales the arc radius (1 + radial).
Vector crescent_point(double theta, int label, double radial = 0.0);

/// Two interleaved half moons with radial jitter, labels +-1.
StreamData crescent_moon_dataset(const StreamSpec& spec);

/// Noise-free spiral point: (t cos t, t sin t) / (3 pi) for +1, negated for -1.
Vector spiral_point(double t, int label);

/// Two-arm Archimedean spiral, t uniform on [0, 3 pi], labels +-1.
StreamData spiral_dataset(const StreamSpec& spec);

/// Dispatch on spec.task.
StreamData generate_stream(const StreamSpec& spec);

}  // namespace dkaf
