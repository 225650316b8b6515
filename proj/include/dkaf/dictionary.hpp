#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "dkaf/kernel.hpp"

namespace dkaf {

/// One RBF center with its accumulated innovation weight and the two
/// quantities the budget pruning needs: the significance estimate and the
/// discounted-age accumulator.
struct DictionaryEntry {
    Vector center;
    double weight = 0.0;        ///< stores eta-scaled innovations
    double significance = 0.0;
    double age_accum = 0.0;
};

/// Ordered per-node dictionary, optionally capped at a budget.
///
/// Entries are stored column-wise (centers packed contiguously) because the
/// hot loops are prediction and nearest-center search over all entries.
class Dictionary {
public:
    explicit Dictionary(std::size_t dim, std::optional<std::size_t> budget = std::nullopt);

    std::size_t size() const noexcept { return weights_.size(); }
    bool empty() const noexcept { return weights_.empty(); }
    std::size_t dim() const noexcept { return dim_; }
    const std::optional<std::size_t>& budget() const noexcept { return budget_; }
    bool over_budget() const noexcept { return budget_ && size() > *budget_; }

    std::span<const double> center(std::size_t j) const;
    double weight(std::size_t j) const { return weights_.at(j); }
    double significance(std::size_t j) const { return significance_.at(j); }
    double age_accum(std::size_t j) const { return age_.at(j); }

    std::span<const double> weights() const noexcept { return weights_; }
    std::span<const double> significances() const noexcept { return significance_; }
    std::span<const double> age_accums() const noexcept { return age_; }

    DictionaryEntry entry(std::size_t j) const;
    std::vector<DictionaryEntry> entries() const;

    /// Appends an entry verbatim. Throws ShapeError on center dimension mismatch.
    void append(const DictionaryEntry& e);
    /// Removes entry j and returns it. Throws StateError when out of range.
    DictionaryEntry remove(std::size_t j);

    // Raw mutable access for the update rules below.
    double& weight_ref(std::size_t j) { return weights_.at(j); }
    double& significance_ref(std::size_t j) { return significance_.at(j); }
    double& age_ref(std::size_t j) { return age_.at(j); }

    friend bool operator==(const Dictionary&, const Dictionary&) = default;

private:
    std::size_t dim_;
    std::optional<std::size_t> budget_;
    std::vector<double> centers_;
    std::vector<double> weights_;
    std::vector<double> significance_;
    std::vector<double> age_;
};

/// Plain weighted kernel sum over all entries.
double predict(const Dictionary& dict, std::span<const double> x, const KernelParams& params);

struct Nearest {
    std::size_t index = 0;
    double distance = 0.0;
};

/// Closest center in Euclidean distance; lowest index wins ties.
Nearest nearest_entry(const Dictionary& dict, std::span<const double> x);

/// weight[j_star] += eta * diffused_error.
void merge_update(Dictionary& dict, std::size_t j_star, double eta, double diffused_error);

/// Appends (x, eta * diffused_error) with significance |diffused_error| and
/// age accumulator 1.
void add_entry(Dictionary& dict, std::span<const double> x, double eta, double diffused_error);

// Significance bookkeeping. The add and merge rules must run before the
// corresponding add_entry / merge_update call: they read the pre-update state.

/// E_j <- zeta E_j + abs_error k(c_j, new_center) over the current entries.
void significance_on_add(Dictionary& dict, double abs_error, double zeta,
                         std::span<const double> new_center, const KernelParams& params);

/// Merge-case recursions. `error` is the innovation about to be merged, so the
/// new weight of j_star is weight(j_star) + eta * error.
void significance_on_merge(Dictionary& dict, std::size_t j_star, double eta, double error,
                           double zeta, const KernelParams& params);

/// Correction applied to the survivors after `removed` left the dictionary.
void significance_on_prune(Dictionary& dict, const DictionaryEntry& removed, double zeta,
                           const KernelParams& params);

/// When over budget, removes the minimum-significance entry (lowest index on
/// ties) and applies significance_on_prune. Otherwise a no-op returning nullopt.
std::optional<DictionaryEntry> prune_min_significance(Dictionary& dict, double zeta,
                                                      const KernelParams& params);

}  // namespace dkaf
