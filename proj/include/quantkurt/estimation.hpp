#pragma once

#include "quantkurt/measures.hpp"

#include <optional>
#include <span>
#include <vector>

namespace quantkurt {

/// Why a sample-based estimate could not be formed. These are ordinary
/// outcomes of heavy-tailed or tied data, not programming errors.
enum class EstimationFailure {
    none,
    degenerate_ties,        // a needed spacing of order statistics is zero
    negative_discriminant,  // estimated 4 a0 a2 - a1^2 <= 0
};

const char* to_string(EstimationFailure f) noexcept;

/// A value or the reason it is missing.
template <class T>
class Outcome {
public:
    Outcome(T value) : value_(std::move(value)) {}
    Outcome(EstimationFailure failure) : failure_(failure) {}

    bool ok() const noexcept { return value_.has_value(); }
    explicit operator bool() const noexcept { return ok(); }
    const T& value() const { return value_.value(); }
    const T& operator*() const { return *value_; }
    const T* operator->() const { return &*value_; }
    EstimationFailure failure() const noexcept { return failure_; }

private:
    std::optional<T> value_;
    EstimationFailure failure_ = EstimationFailure::none;
};

/// Nondecreasing data, indexed by 1-based order statistics.
class SortedSample {
public:
    /// Smallest sample accepted from user data files.
    static constexpr std::size_t kMinimumUserSize = 20;

    /// Takes ownership and sorts.
    static SortedSample from_unsorted(std::vector<double> values);

    /// Requires already sorted, finite, nonempty data.
    explicit SortedSample(std::vector<double> sorted_values);

    std::size_t size() const noexcept { return values_.size(); }
    /// k-th order statistic, 1 <= k <= n.
    double order_stat(std::size_t k) const;
    std::span<const double> values() const noexcept { return values_; }

private:
    std::vector<double> values_;
};

/// Bandwidth for the sparsity estimate at probability t:
/// b = a n^{-1/5} 2 min(t, 1-t). It shrinks in proportion to the tail
/// probability, which keeps the difference quotient off the extreme order
/// statistics where the quantile function is steep. With a < 1/2 the
/// window t +/- b never leaves (0, 1).
struct BandwidthRule {
    double a = 0.2;
    double operator()(std::size_t n, double t) const;
};

namespace estimation {

/// X_(n-[nt]+1) - X_([nt]) with [.] the floor. Throws std::domain_error if [nt] < 1.
double sample_interquantile_range(const SortedSample& s, double t);

/// kappa-hat = R-hat_p / R-hat_r.
Outcome<double> kurtosis_estimate(const SortedSample& s, double p, double r);

/// Difference-quotient sparsity estimate
/// (X_(ceil(n(t+b))) - X_(ceil(n(t-b)))) / (2b), indices clamped to [1, n].
Outcome<double> sparsity_estimate(const SortedSample& s, double t, double bandwidth);

/// Constants from the four sparsity values at p, 1-p, r, 1-r and R_r.
VstConstants constants_from_sparsity(double p, double r, double g_p, double g_1mp, double g_r,
                                     double g_1mr, double range_r);

/// Thrown when a model lacks a finite positive density at a required quantile.
class SingularModelError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

VstConstants vst_constants_theoretical(const Model& model, double p, double r);

Outcome<VstConstants> vst_constants_estimated(const SortedSample& s, double p, double r,
                                              const BandwidthRule& rule = {});

}  // namespace estimation
}  // namespace quantkurt
