#include "quantkurt/inference.hpp"

#include <cmath>

namespace quantkurt::inference {

namespace {

void require_valid(const VstConstants& c) {
    if (!c.valid()) throw std::domain_error("VST constants need a2 > 0 and 4 a0 a2 - a1^2 > 0");
}

void require_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("level must lie in (0,1)");
}

double scaled_slope(const VstConstants& c, double x) {
    return std::asinh(c.slope(x) / std::sqrt(c.d2));
}

}  // namespace

double vst_transform(const VstConstants& c, std::size_t n, double x) {
    require_valid(c);
    return std::sqrt(static_cast<double>(n) / c.a2) * scaled_slope(c, x);
}

double key_function(const VstConstants& c, double kappa0, double kappa) {
    require_valid(c);
    return (scaled_slope(c, kappa) - scaled_slope(c, kappa0)) / std::sqrt(c.a2);
}

double test_statistic(const VstConstants& c, std::size_t n, double kappa0, double kappa_hat) {
    return std::sqrt(static_cast<double>(n)) * key_function(c, kappa0, kappa_hat);
}

ConfidenceInterval interval_for_z(const VstConstants& c, std::size_t n, double kappa_hat,
                                  double z, double level) {
    require_valid(c);
    if (n == 0) throw std::domain_error("sample size must be positive");
    const double d = std::sqrt(c.d2);
    const double center = scaled_slope(c, kappa_hat);
    const double half = z * std::sqrt(c.a2 / static_cast<double>(n));
    const double lower = (d * std::sinh(center - half) - c.a1) / (2.0 * c.a2);
    const double upper = (d * std::sinh(center + half) - c.a1) / (2.0 * c.a2);
    return {kappa_hat, lower, upper, level, (upper - lower) / kappa_hat};
}

ConfidenceInterval confidence_interval(const VstConstants& c, std::size_t n, double kappa_hat,
                                       double alpha) {
    require_alpha(alpha);
    const double z = special::std_normal_quantile(1.0 - 0.5 * alpha);
    return interval_for_z(c, n, kappa_hat, z, 1.0 - alpha);
}

double width_expansion(const VstConstants& c, double kappa, std::size_t n, double alpha) {
    require_alpha(alpha);
    const double z = special::std_normal_quantile(1.0 - 0.5 * alpha);
    return measures::asymptotic_width(c, kappa).width * z / std::sqrt(static_cast<double>(n));
}

TestResult two_sided_test(const VstConstants& c, std::size_t n, double kappa0, double kappa_hat,
                          double level) {
    require_alpha(level);
    TestResult out;
    out.statistic = test_statistic(c, n, kappa0, kappa_hat);
    out.z_critical = special::std_normal_quantile(1.0 - 0.5 * level);
    out.reject = std::fabs(out.statistic) >= out.z_critical;
    out.p_value = 2.0 * special::std_normal_cdf(-std::fabs(out.statistic));
    return out;
}

TestResult one_sided_test(const VstConstants& c, std::size_t n, double kappa0, double kappa_hat,
                          double level) {
    require_alpha(level);
    TestResult out;
    out.statistic = test_statistic(c, n, kappa0, kappa_hat);
    out.z_critical = special::std_normal_quantile(1.0 - level);
    out.reject = out.statistic >= out.z_critical;
    out.p_value = special::std_normal_cdf(-out.statistic);
    return out;
}

TestResult peakedness_test(const SortedSample& s, double q, double r, double pi0, double level,
                           const BandwidthRule& rule) {
    require_alpha(level);
    const auto pi_hat = estimation::kurtosis_estimate(s, q, r);
    if (!pi_hat) {
        TestResult failed;
        failed.failure = pi_hat.failure();
        failed.z_critical = special::std_normal_quantile(1.0 - 0.5 * level);
        return failed;
    }
    const auto constants = estimation::vst_constants_estimated(s, q, r, rule);
    if (!constants) {
        TestResult failed;
        failed.failure = constants.failure();
        failed.z_critical = special::std_normal_quantile(1.0 - 0.5 * level);
        return failed;
    }
    return two_sided_test(*constants, s.size(), pi0, *pi_hat, level);
}

Outcome<RatioInference> ratio_interval(const SortedSample& s, double p, double r, double alpha,
                                       const BandwidthRule& rule) {
    const auto estimate = estimation::kurtosis_estimate(s, p, r);
    if (!estimate) return estimate.failure();
    const auto constants = estimation::vst_constants_estimated(s, p, r, rule);
    if (!constants) return constants.failure();
    return RatioInference{*estimate, *constants,
                          confidence_interval(*constants, s.size(), *estimate, alpha)};
}

}  // namespace quantkurt::inference
