#include "dkaf/datasets.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "dkaf/errors.hpp"
#include "dkaf/rng.hpp"

namespace dkaf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kSpiralSpan = 3.0 * std::numbers::pi;

int draw_label(Rng& rng) {
    std::bernoulli_distribution coin(0.5);
    return coin(rng) ? 1 : -1;
}

struct LabeledPoint {
    Vector point;
    int label = 0;
};

LabeledPoint draw_crescent(Rng& rng, double jitter) {
    std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
    std::normal_distribution<double> radial(0.0, 1.0);
    const int label = draw_label(rng);
    const double theta = angle(rng);
    const double r = jitter * radial(rng);
    return {crescent_point(theta, label, r), label};
}

LabeledPoint draw_spiral(Rng& rng, double jitter) {
    std::uniform_real_distribution<double> param(0.0, kSpiralSpan);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int label = draw_label(rng);
    Vector p = spiral_point(param(rng), label);
    for (double& v : p) v += jitter * gauss(rng);
    return {std::move(p), label};
}

template <typename Draw>
StreamData point_stream(const StreamSpec& spec, Draw draw) {
    validate(spec);
    const double jitter = spec.jitter.value_or(default_jitter(spec.task));
    StreamData data(spec.node_count, spec.rounds, 2);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<Rng> node_rng;
    node_rng.reserve(spec.node_count);
    for (std::size_t q = 0; q < spec.node_count; ++q) node_rng.emplace_back(mix_seed(spec.seed, q));
    Rng latent(mix_seed(spec.seed, kLatentStream));

    for (std::size_t n = 0; n < spec.rounds; ++n) {
        LabeledPoint common;
        if (spec.source == SourceModel::Shared) common = draw(latent, jitter);
        for (std::size_t q = 0; q < spec.node_count; ++q) {
            LabeledPoint lp = spec.source == SourceModel::Shared ? common : draw(node_rng[q], jitter);
            for (double& v : lp.point) v += spec.noise_std * gauss(node_rng[q]);
            data.at(q, n) = Sample{std::move(lp.point), static_cast<double>(lp.label)};
        }
    }
    return data;
}

}  // namespace

Task parse_task(std::string_view name) {
    if (name == "channel") return Task::Channel;
    if (name == "crescent") return Task::Crescent;
    if (name == "spiral") return Task::Spiral;
    throw ConfigError("stream.task", "unknown task '" + std::string(name) + "'");
}

SourceModel parse_source_model(std::string_view name) {
    if (name == "shared") return SourceModel::Shared;
    if (name == "independent") return SourceModel::Independent;
    throw ConfigError("stream.source", "unknown source model '" + std::string(name) + "'");
}

std::string_view to_string(Task task) {
    switch (task) {
        case Task::Channel: return "channel";
        case Task::Crescent: return "crescent";
        case Task::Spiral: return "spiral";
    }
    return "?";
}

std::string_view to_string(SourceModel source) {
    return source == SourceModel::Shared ? "shared" : "independent";
}

void validate(const StreamSpec& spec) {
    if (spec.node_count < 1) throw ConfigError("stream.node_count", "must be at least 1");
    if (spec.rounds < 1) throw ConfigError("stream.rounds", "must be at least 1");
    if (!(spec.noise_std >= 0.0) || !std::isfinite(spec.noise_std)) {
        throw ConfigError("stream.noise_std", "must be a finite nonnegative number");
    }
    if (spec.jitter && !(*spec.jitter >= 0.0 && std::isfinite(*spec.jitter))) {
        throw ConfigError("stream.jitter", "must be a finite nonnegative number");
    }
    if (spec.task == Task::Channel) {
        if (spec.channel.taps < 1) throw ConfigError("stream.channel.taps", "must be at least 1");
        if (!(spec.channel.drift_period >= 0.0)) {
            throw ConfigError("stream.channel.drift_period", "must be nonnegative");
        }
    }
}

std::size_t input_dim(const StreamSpec& spec) {
    return spec.task == Task::Channel ? spec.channel.taps : 2;
}

double default_jitter(Task task) {
    switch (task) {
        case Task::Crescent: return 0.1;
        case Task::Spiral: return 0.02;
        case Task::Channel: return 0.0;
    }
    return 0.0;
}

ChannelTaps channel_taps(double n, double drift_period) {
    const double s = drift_period > 0.0 ? std::sin(kTwoPi * n / drift_period) : 0.0;
    return {1.0 + 0.2 * s, 0.5 - 0.2 * s};
}

double channel_output(double s_now, double s_prev, double n, const ChannelParams& params) {
    const ChannelTaps h = channel_taps(n, params.drift_period);
    const double r = h.h1 * s_now + h.h2 * s_prev;
    return r - params.nonlinearity * r * r;
}

StreamData nonstationary_channel_stream(const StreamSpec& spec) {
    validate(spec);
    const ChannelParams& ch = spec.channel;
    // Sample index runs from -warm to rounds-1 so the first emitted regressor
    // and its delayed symbol are fully populated.
    const std::size_t warm = std::max(ch.taps - 1, ch.delay) + 1;
    const std::size_t total = warm + spec.rounds;

    std::uniform_int_distribution<int> bit(0, 1);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto symbols = [&](Rng& rng) {
        std::vector<double> s(total);
        for (double& v : s) v = bit(rng) ? 1.0 : -1.0;
        return s;
    };
    auto clean = [&](const std::vector<double>& s) {
        std::vector<double> z(total, 0.0);
        for (std::size_t i = 1; i < total; ++i) {
            const double n = static_cast<double>(i) - static_cast<double>(warm);
            z[i] = channel_output(s[i], s[i - 1], n, ch);
        }
        return z;
    };

    std::vector<double> shared_s;
    std::vector<double> shared_z;
    if (spec.source == SourceModel::Shared) {
        Rng latent(mix_seed(spec.seed, kLatentStream));
        shared_s = symbols(latent);
        shared_z = clean(shared_s);
    }

    StreamData data(spec.node_count, spec.rounds, ch.taps);
    for (std::size_t q = 0; q < spec.node_count; ++q) {
        Rng rng(mix_seed(spec.seed, q));
        std::vector<double> s;
        std::vector<double> z;
        if (spec.source == SourceModel::Shared) {
            s = shared_s;
            z = shared_z;
        } else {
            s = symbols(rng);
            z = clean(s);
        }
        for (double& v : z) v += spec.noise_std * gauss(rng);
        for (std::size_t n = 0; n < spec.rounds; ++n) {
            const std::size_t i = warm + n;
            Vector reg(ch.taps);
            for (std::size_t t = 0; t < ch.taps; ++t) reg[t] = z[i - t];
            data.at(q, n) = Sample{std::move(reg), s[i - ch.delay]};
        }
    }
    return data;
}

Vector crescent_point(double theta, int label, double radial) {
    const double r = 1.0 + radial;
    if (label > 0) {
        return {r * std::cos(theta), r * std::sin(theta)};
    }
    return {1.0 + r * std::cos(theta), -0.5 - r * std::sin(theta)};
}

StreamData crescent_moon_dataset(const StreamSpec& spec) {
    return point_stream(spec, draw_crescent);
}

Vector spiral_point(double t, int label) {
    const double sign = label > 0 ? 1.0 : -1.0;
    return {sign * t * std::cos(t) / kSpiralSpan, sign * t * std::sin(t) / kSpiralSpan};
}

StreamData spiral_dataset(const StreamSpec& spec) {
    return point_stream(spec, draw_spiral);
}

StreamData generate_stream(const StreamSpec& spec) {
    switch (spec.task) {
        case Task::Channel: return nonstationary_channel_stream(spec);
        case Task::Crescent: return crescent_moon_dataset(spec);
        case Task::Spiral: return spiral_dataset(spec);
    }
    throw ConfigError("stream.task", "unsupported task");
}

}  // namespace dkaf
