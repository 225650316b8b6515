#include "dkaf/dictionary.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "dkaf/errors.hpp"

namespace dkaf {

namespace {

void check_index(const Dictionary& dict, std::size_t j, const char* op) {
    if (j >= dict.size()) {
        throw StateError(std::string(op) + ": index " + std::to_string(j) +
                         " out of range for dictionary of size " + std::to_string(dict.size()));
    }
}

void check_dim(const Dictionary& dict, std::span<const double> x, const char* op) {
    if (x.size() != dict.dim()) {
        throw ShapeError(std::string(op) + ": input dimension " + std::to_string(x.size()) +
                         " does not match dictionary dimension " + std::to_string(dict.dim()));
    }
}

void check_nonempty(const Dictionary& dict, const char* op) {
    if (dict.empty()) {
        throw StateError(std::string(op) + ": dictionary is empty");
    }
}

}  // namespace

Dictionary::Dictionary(std::size_t dim, std::optional<std::size_t> budget)
    : dim_(dim), budget_(budget) {
    if (dim == 0) {
        throw ShapeError("Dictionary: dimension must be positive");
    }
    if (budget && *budget == 0) {
        throw ConfigError("hyper.budget", "must be at least 1");
    }
}

std::span<const double> Dictionary::center(std::size_t j) const {
    check_index(*this, j, "Dictionary::center");
    return std::span<const double>(centers_).subspan(j * dim_, dim_);
}

DictionaryEntry Dictionary::entry(std::size_t j) const {
    check_index(*this, j, "Dictionary::entry");
    auto c = center(j);
    return DictionaryEntry{Vector(c.begin(), c.end()), weights_[j], significance_[j], age_[j]};
}

std::vector<DictionaryEntry> Dictionary::entries() const {
    std::vector<DictionaryEntry> out;
    out.reserve(size());
    for (std::size_t j = 0; j < size(); ++j) {
        out.push_back(entry(j));
    }
    return out;
}

void Dictionary::append(const DictionaryEntry& e) {
    check_dim(*this, e.center, "Dictionary::append");
    centers_.insert(centers_.end(), e.center.begin(), e.center.end());
    weights_.push_back(e.weight);
    significance_.push_back(e.significance);
    age_.push_back(e.age_accum);
}

DictionaryEntry Dictionary::remove(std::size_t j) {
    DictionaryEntry out = entry(j);
    const auto off = static_cast<std::ptrdiff_t>(j);
    const auto coff = static_cast<std::ptrdiff_t>(j * dim_);
    centers_.erase(centers_.begin() + coff, centers_.begin() + coff + static_cast<std::ptrdiff_t>(dim_));
    weights_.erase(weights_.begin() + off);
    significance_.erase(significance_.begin() + off);
    age_.erase(age_.begin() + off);
    return out;
}

double predict(const Dictionary& dict, std::span<const double> x, const KernelParams& params) {
    check_nonempty(dict, "predict");
    check_dim(dict, x, "predict");
    double y = 0.0;
    for (std::size_t j = 0; j < dict.size(); ++j) {
        y += dict.weight(j) * gaussian_from_sqdist(squared_distance(dict.center(j), x), params.sigma);
    }
    return y;
}

Nearest nearest_entry(const Dictionary& dict, std::span<const double> x) {
    check_nonempty(dict, "nearest_entry");
    check_dim(dict, x, "nearest_entry");
    Nearest best{0, std::numeric_limits<double>::infinity()};
    double best_sq = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < dict.size(); ++j) {
        const double sq = squared_distance(dict.center(j), x);
        if (sq < best_sq) {
            best_sq = sq;
            best.index = j;
        }
    }
    best.distance = std::sqrt(best_sq);
    return best;
}

void merge_update(Dictionary& dict, std::size_t j_star, double eta, double diffused_error) {
    check_index(dict, j_star, "merge_update");
    dict.weight_ref(j_star) += eta * diffused_error;
}

void add_entry(Dictionary& dict, std::span<const double> x, double eta, double diffused_error) {
    check_dim(dict, x, "add_entry");
    dict.append(DictionaryEntry{Vector(x.begin(), x.end()), eta * diffused_error,
                                std::fabs(diffused_error), 1.0});
}

void significance_on_add(Dictionary& dict, double abs_error, double zeta,
                         std::span<const double> new_center, const KernelParams& params) {
    check_dim(dict, new_center, "significance_on_add");
    for (std::size_t j = 0; j < dict.size(); ++j) {
        const double k = gaussian_kernel(dict.center(j), new_center, params);
        dict.significance_ref(j) = zeta * dict.significance(j) + abs_error * k;
    }
}

void significance_on_merge(Dictionary& dict, std::size_t j_star, double eta, double error,
                           double zeta, const KernelParams& params) {
    check_index(dict, j_star, "significance_on_merge");
    const auto star = dict.center(j_star);
    for (std::size_t j = 0; j < dict.size(); ++j) {
        if (j == j_star) {
            continue;
        }
        const double k = gaussian_kernel(dict.center(j), star, params);
        dict.significance_ref(j) = zeta * dict.significance(j) + std::fabs(dict.weight(j)) * k;
        dict.age_ref(j) = zeta * dict.age_accum(j);
    }

    const double w_old = std::fabs(dict.weight(j_star));
    const double w_new = std::fabs(dict.weight(j_star) + eta * error);
    // A zero old weight makes the rescaling ratio singular; fall back to plain decay.
    const double ratio = (w_old == 0.0) ? 1.0 : w_new / w_old;
    dict.significance_ref(j_star) = ratio * zeta * dict.significance(j_star) + w_new;
    dict.age_ref(j_star) = zeta * dict.age_accum(j_star) + 1.0;
}

void significance_on_prune(Dictionary& dict, const DictionaryEntry& removed, double zeta,
                           const KernelParams& params) {
    check_dim(dict, removed.center, "significance_on_prune");
    for (std::size_t j = 0; j < dict.size(); ++j) {
        const double k = gaussian_kernel(dict.center(j), removed.center, params);
        dict.significance_ref(j) -= std::fabs(dict.weight(j)) * removed.age_accum * k;
        dict.age_ref(j) = zeta * dict.age_accum(j) + 1.0;
    }
}

std::optional<DictionaryEntry> prune_min_significance(Dictionary& dict, double zeta,
                                                      const KernelParams& params) {
    if (!dict.over_budget() || dict.size() < 2) {
        return std::nullopt;
    }
    std::size_t victim = 0;
    for (std::size_t j = 1; j < dict.size(); ++j) {
        if (dict.significance(j) < dict.significance(victim)) {
            victim = j;
        }
    }
    DictionaryEntry removed = dict.remove(victim);
    significance_on_prune(dict, removed, zeta, params);
    return removed;
}

}  // namespace dkaf
