#pragma once

#include "quantkurt/estimation.hpp"

namespace quantkurt {

struct ConfidenceInterval {
    double estimate;
    double lower;
    double upper;
    double level;           // nominal coverage 1 - alpha
    double relative_width;  // (upper - lower) / estimate

    bool contains(double value) const noexcept { return lower <= value && value <= upper; }
};

struct TestResult {
    double statistic = 0.0;
    double z_critical = 0.0;
    bool reject = false;
    double p_value = 1.0;
    EstimationFailure failure = EstimationFailure::none;
};

namespace inference {

/// h_n(x) = sqrt(n / a2) asinh(q'(x) / D), the additive constant fixed at 0.
double vst_transform(const VstConstants& c, std::size_t n, double x);

/// K_{kappa0}(kappa) = [asinh(q'(kappa)/D) - asinh(q'(kappa0)/D)] / sqrt(a2).
double key_function(const VstConstants& c, double kappa0, double kappa);

/// T = sqrt(n) K_{kappa0}(kappa_hat).
double test_statistic(const VstConstants& c, std::size_t n, double kappa0, double kappa_hat);

/// Back-transformed interval h_n(kappa_hat) -/+ z. The inversion is
/// kappa = (D sinh(.) - a1) / (2 a2), so z = 0 gives [kappa_hat, kappa_hat].
ConfidenceInterval interval_for_z(const VstConstants& c, std::size_t n, double kappa_hat,
                                  double z, double level);

/// Two-sided 100(1-alpha)% interval with z = z_{1-alpha/2}.
ConfidenceInterval confidence_interval(const VstConstants& c, std::size_t n, double kappa_hat,
                                       double alpha);

/// First-order width w_asym(kappa) z_{1-alpha/2} / sqrt(n).
double width_expansion(const VstConstants& c, double kappa, std::size_t n, double alpha);

/// Rejects kappa = kappa0 when |T| >= z_{1-level/2}; p-value 2(1 - Phi(|T|)).
TestResult two_sided_test(const VstConstants& c, std::size_t n, double kappa0, double kappa_hat,
                          double level);

/// Rejects kappa = kappa0 in favour of kappa > kappa0 when T >= z_{1-level}.
TestResult one_sided_test(const VstConstants& c, std::size_t n, double kappa0, double kappa_hat,
                          double level);

/// Two-sided test of pi_{q,r} = pi0 with estimated constants for the (q, r) pair.
/// Estimation failures give a non-rejection with the failure recorded.
TestResult peakedness_test(const SortedSample& s, double q, double r, double pi0, double level,
                           const BandwidthRule& rule = {});

/// Estimate, estimated constants and interval for R_p/R_r from one sample.
struct RatioInference {
    double estimate;
    VstConstants constants;
    ConfidenceInterval interval;
};

Outcome<RatioInference> ratio_interval(const SortedSample& s, double p, double r, double alpha,
                                       const BandwidthRule& rule = {});

}  // namespace inference
}  // namespace quantkurt
