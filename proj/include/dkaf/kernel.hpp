#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace dkaf {

using Vector = std::vector<double>;

struct KernelParams {
    double sigma = 1.0;
};

/// Throws ConfigError unless sigma is finite and positive.
void validate(const KernelParams& params);

/// Squared Euclidean distance. Throws ShapeError on dimension mismatch.
double squared_distance(std::span<const double> x, std::span<const double> y);

/// exp(-|x - y|^2 / sigma^2). Note: sigma^2, not 2 sigma^2.
double gaussian_kernel(std::span<const double> x, std::span<const double> y,
                       const KernelParams& params);

/// Same as gaussian_kernel for an already computed squared distance.
inline double gaussian_from_sqdist(double sqdist, double sigma) {
    return std::exp(-sqdist / (sigma * sigma));
}

/// Silverman's rule, 1.06 * s * N^(-1/5), with s the mean per-coordinate
/// sample standard deviation. Requires >= 2 samples and nonzero spread.
KernelParams silverman_bandwidth(std::span<const Vector> samples);

}  // namespace dkaf

