#include "dkaf/kernel.hpp"

#include <cmath>
#include <string>

#include "dkaf/errors.hpp"

namespace dkaf {

void validate(const KernelParams& params) {
    if (!(params.sigma > 0.0) || !std::isfinite(params.sigma)) {
        throw ConfigError("kernel.sigma", "must be a finite positive number");
    }
}

double squared_distance(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw ShapeError("kernel: dimension mismatch (" + std::to_string(x.size()) + " vs " +
                         std::to_string(y.size()) + ")");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        s += d * d;
    }
    return s;
}

double gaussian_kernel(std::span<const double> x, std::span<const double> y,
                       const KernelParams& params) {
    return gaussian_from_sqdist(squared_distance(x, y), params.sigma);
}

KernelParams silverman_bandwidth(std::span<const Vector> samples) {
    if (samples.size() < 2) {
        throw DegenerateDataError("silverman_bandwidth: need at least 2 samples");
    }
    const std::size_t dim = samples.front().size();
    if (dim == 0) {
        throw DegenerateDataError("silverman_bandwidth: zero-dimensional samples");
    }
    const double n = static_cast<double>(samples.size());

    double spread = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        double mean = 0.0;
        for (const auto& s : samples) {
            if (s.size() != dim) {
                throw ShapeError("silverman_bandwidth: ragged samples");
            }
            mean += s[i];
        }
        mean /= n;
        double ss = 0.0;
        for (const auto& s : samples) {
            ss += (s[i] - mean) * (s[i] - mean);
        }
        spread += std::sqrt(ss / (n - 1.0));
    }
    spread /= static_cast<double>(dim);
    if (!(spread > 0.0)) {
        throw DegenerateDataError("silverman_bandwidth: samples have zero spread");
    }
    return KernelParams{1.06 * spread * std::pow(n, -0.2)};
}

}  // namespace dkaf
