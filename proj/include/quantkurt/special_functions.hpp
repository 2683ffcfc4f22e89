#pragma once

#include <functional>
#include <optional>
#include <stdexcept>

namespace quantkurt {

/// A probability strictly inside (0, 1).
class Probability {
public:
    explicit Probability(double value);

    double value() const noexcept { return value_; }
    operator double() const noexcept { return value_; }

private:
    double value_;
};

namespace special {

/// Thrown when a root cannot be bracketed or the iteration budget runs out.
class NumericFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Standard normal distribution function. Evaluated through erfc on both
/// sides so each tail keeps full relative precision.
double std_normal_cdf(double x) noexcept;

double std_normal_pdf(double x) noexcept;

/// Inverse of std_normal_cdf (Wichura's AS241 followed by one Halley
/// correction). Throws std::domain_error unless 0 < t < 1.
double std_normal_quantile(double t);

/// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double a, double b, double x);

/// Regularized lower incomplete gamma P(s, x).
double incomplete_gamma(double s, double x);

/// x such that I_x(a, b) = target, 0 < target < 1.
double incomplete_beta_inverse(double a, double b, double target);

/// x such that P(s, x) = target, 0 < target < 1.
double incomplete_gamma_inverse(double s, double target);

struct RootOptions {
    double prob_tol = 1e-14;   // stop once |f(x) - target| <= prob_tol
    double rel_x_tol = 1e-15;  // or once the bracket is this narrow (relative)
    int max_iter = 500;
};

/// Finds x in [lo, hi] with f(x) = target for nondecreasing f, assuming
/// f(lo) <= target <= f(hi). Newton steps on `derivative` are taken while
/// they stay inside the shrinking bracket and make progress; bisection
/// otherwise.
double solve_monotone(const std::function<double(double)>& f,
                      const std::function<double(double)>& derivative,
                      double target, double lo, double hi,
                      std::optional<double> guess = std::nullopt,
                      const RootOptions& opts = {});

}  // namespace special
}  // namespace quantkurt
