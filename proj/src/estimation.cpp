#include "quantkurt/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace quantkurt {

const char* to_string(EstimationFailure f) noexcept {
    switch (f) {
        case EstimationFailure::none: return "none";
        case EstimationFailure::degenerate_ties: return "degenerate ties";
        case EstimationFailure::negative_discriminant: return "negative discriminant";
    }
    return "unknown";
}

SortedSample SortedSample::from_unsorted(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    return SortedSample(std::move(values));
}

SortedSample::SortedSample(std::vector<double> sorted_values) : values_(std::move(sorted_values)) {
    if (values_.empty()) throw std::invalid_argument("sample is empty");
    for (double v : values_) {
        if (!std::isfinite(v)) throw std::invalid_argument("sample contains a non-finite value");
    }
    if (!std::is_sorted(values_.begin(), values_.end())) {
        throw std::invalid_argument("sample is not sorted");
    }
}

double SortedSample::order_stat(std::size_t k) const {
    if (k < 1 || k > values_.size()) throw std::out_of_range("order statistic index out of range");
    return values_[k - 1];
}

double BandwidthRule::operator()(std::size_t n, double t) const {
    if (!(t > 0.0 && t < 1.0)) throw std::domain_error("bandwidth probability must lie in (0,1)");
    return a * std::pow(static_cast<double>(n), -0.2) * 2.0 * std::min(t, 1.0 - t);
}

namespace estimation {

namespace {

std::size_t floor_index(std::size_t n, double t) {
    return static_cast<std::size_t>(std::floor(static_cast<double>(n) * t));
}

std::size_t clamped_ceil_index(std::size_t n, double u) {
    const double k = std::ceil(static_cast<double>(n) * u);
    if (k < 1.0) return 1;
    if (k > static_cast<double>(n)) return n;
    return static_cast<std::size_t>(k);
}

}  // namespace

double sample_interquantile_range(const SortedSample& s, double t) {
    if (!(t > 0.0 && t < 0.5)) throw std::domain_error("interquantile probability must lie in (0, 0.5)");
    const std::size_t n = s.size();
    const std::size_t k = floor_index(n, t);
    if (k < 1) throw std::domain_error("n*t < 1: sample too small for this probability");
    return s.order_stat(n - k + 1) - s.order_stat(k);
}

Outcome<double> kurtosis_estimate(const SortedSample& s, double p, double r) {
    if (!(p < r)) throw std::domain_error("kurtosis_estimate needs p < r");
    const double rp = sample_interquantile_range(s, p);
    const double rr = sample_interquantile_range(s, r);
    if (!(rr > 0.0)) return EstimationFailure::degenerate_ties;
    return rp / rr;
}

Outcome<double> sparsity_estimate(const SortedSample& s, double t, double bandwidth) {
    if (!(t > 0.0 && t < 1.0)) throw std::domain_error("sparsity probability must lie in (0,1)");
    if (!(bandwidth > 0.0)) throw std::domain_error("bandwidth must be positive");
    const std::size_t n = s.size();
    const double upper = s.order_stat(clamped_ceil_index(n, t + bandwidth));
    const double lower = s.order_stat(clamped_ceil_index(n, t - bandwidth));
    const double g = (upper - lower) / (2.0 * bandwidth);
    if (!(g > 0.0)) return EstimationFailure::degenerate_ties;
    return g;
}

VstConstants constants_from_sparsity(double p, double r, double g_p, double g_1mp, double g_r,
                                     double g_1mr, double range_r) {
    const double r2 = range_r * range_r;
    const double sum_p = g_p + g_1mp;
    const double sum_r = g_r + g_1mr;
    const double a0 = (p * (g_p * g_p + g_1mp * g_1mp) - p * p * sum_p * sum_p) / r2;
    const double a1 =
        2.0 * (p * r * (g_r * g_1mp + g_p * g_1mr) - p * (1.0 - r) * (g_p * g_r + g_1mp * g_1mr)) / r2;
    const double a2 = (r * (g_r * g_r + g_1mr * g_1mr) - r * r * sum_r * sum_r) / r2;
    return VstConstants::from(a0, a1, a2);
}

VstConstants vst_constants_theoretical(const Model& model, double p, double r) {
    if (!(0.0 < p && p < r && r < 0.5)) throw std::domain_error("need 0 < p < r < 0.5");
    const double g[4] = {model.sparsity(p), model.sparsity(1.0 - p), model.sparsity(r),
                         model.sparsity(1.0 - r)};
    for (double v : g) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw SingularModelError("model " + model.spec() +
                                     " has zero or unbounded density at a required quantile");
        }
    }
    return constants_from_sparsity(p, r, g[0], g[1], g[2], g[3],
                                   measures::interquantile_range(model, r));
}

Outcome<VstConstants> vst_constants_estimated(const SortedSample& s, double p, double r,
                                              const BandwidthRule& rule) {
    if (!(0.0 < p && p < r && r < 0.5)) throw std::domain_error("need 0 < p < r < 0.5");
    const double range_r = sample_interquantile_range(s, r);
    if (!(range_r > 0.0)) return EstimationFailure::degenerate_ties;
    double g[4];
    const double at[4] = {p, 1.0 - p, r, 1.0 - r};
    for (int i = 0; i < 4; ++i) {
        auto est = sparsity_estimate(s, at[i], rule(s.size(), at[i]));
        if (!est) return est.failure();
        g[i] = *est;
    }
    const auto c = constants_from_sparsity(p, r, g[0], g[1], g[2], g[3], range_r);
    if (!(c.d2 > 0.0) || !(c.a2 > 0.0)) return EstimationFailure::negative_discriminant;
    return c;
}

}  // namespace estimation
}  // namespace quantkurt
