#include "quantkurt/special_functions.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace quantkurt {

Probability::Probability(double value) : value_(value) {
    if (!(value > 0.0 && value < 1.0)) {
        throw std::domain_error("probability must lie in (0,1), got " + std::to_string(value));
    }
}

namespace special {

double std_normal_cdf(double x) noexcept {
    if (std::isnan(x)) return x;
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double std_normal_pdf(double x) noexcept {
    constexpr double inv_sqrt_2pi = 0.3989422804014326779399461;
    return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

namespace {

// Wichura (1988), algorithm AS241 PPND16.
double ppnd16(double p) {
    const double q = p - 0.5;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q *
               (((((((2509.0809287301226727 * r + 33430.575583588128105) * r +
                     67265.770927008700853) * r + 45921.953931549871457) * r +
                   13731.693765509461125) * r + 1971.5909503065514427) * r +
                 133.14166789178437745) * r + 3.387132872796366608) /
               (((((((5226.495278852545925 * r + 28729.085735721942674) * r +
                     39307.89580009271061) * r + 21213.794301586595867) * r +
                   5394.1960214247511077) * r + 687.1870074920579083) * r +
                 42.313330701600911252) * r + 1.0);
    }
    double r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        val = (((((((7.7454501427834140764e-4 * r + 0.0227238449892691845833) * r +
                    0.24178072517745061177) * r + 1.27045825245236838258) * r +
                  3.64784832476320460504) * r + 5.7694972214606914055) * r +
                4.6303378461565452959) * r + 1.42343711074968357734) /
              (((((((1.05075007164441684324e-9 * r + 5.475938084995344946e-4) * r +
                    0.0151986665636164571966) * r + 0.14810397642748007459) * r +
                  0.68976733498510000455) * r + 1.6763848301838038494) * r +
                2.05319162663775882187) * r + 1.0);
    } else {
        r -= 5.0;
        val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                    0.0012426609473880784386) * r + 0.026532189526576123093) * r +
                  0.29656057182850489123) * r + 1.7848265399172913358) * r +
                5.4637849111641143699) * r + 6.6579046435011037772) /
              (((((((2.04426310338993978564e-15 * r + 1.4215117583164458887e-7) * r +
                    1.8463183175100546818e-5) * r + 7.868691311456132591e-4) * r +
                  0.0148753612908506148525) * r + 0.13692988092273580531) * r +
                0.59983220655588793769) * r + 1.0);
    }
    return q < 0.0 ? -val : val;
}

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::domain_error(std::string(what) + " must be positive and finite");
    }
}

void require_open_unit(double t, const char* what) {
    if (!(t > 0.0 && t < 1.0)) {
        throw std::domain_error(std::string(what) + " must lie in (0,1)");
    }
}

}  // namespace

double std_normal_quantile(double t) {
    require_open_unit(t, "normal quantile argument");
    double x = ppnd16(t);
    // Halley step against the erfc-based cdf; tightens the tails to the cdf's accuracy.
    const double pdf = std_normal_pdf(x);
    if (pdf > 0.0) {
        const double e = std_normal_cdf(x) - t;
        const double u = e / pdf;
        x -= u / (1.0 + 0.5 * x * u);
    }
    return x;
}

double incomplete_beta(double a, double b, double x) {
    require_positive(a, "incomplete_beta a");
    require_positive(b, "incomplete_beta b");
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("incomplete_beta x must lie in [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    return boost::math::ibeta(a, b, x);
}

double incomplete_gamma(double s, double x) {
    require_positive(s, "incomplete_gamma s");
    if (!(x >= 0.0)) throw std::domain_error("incomplete_gamma x must be nonnegative");
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    return boost::math::gamma_p(s, x);
}

double incomplete_beta_inverse(double a, double b, double target) {
    require_positive(a, "incomplete_beta_inverse a");
    require_positive(b, "incomplete_beta_inverse b");
    require_open_unit(target, "incomplete_beta_inverse target");
    // Work on the side where the answer is small so the bracket [0, 1/2]
    // resolves it with relative precision.
    const double mid = incomplete_beta(a, b, 0.5);
    if (target > mid) {
        return 1.0 - incomplete_beta_inverse(b, a, 1.0 - target);
    }
    const double log_beta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    auto f = [&](double x) { return incomplete_beta(a, b, x); };
    auto df = [&](double x) {
        if (x <= 0.0 || x >= 1.0) return std::numeric_limits<double>::quiet_NaN();
        return std::exp((a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - log_beta);
    };
    // Small-x asymptote I_x ~ x^a / (a B(a,b)) as a starting point.
    double guess = std::exp((std::log(target) + std::log(a) + log_beta) / a);
    if (!(guess > 0.0 && guess < 0.5)) guess = 0.25;
    return solve_monotone(f, df, target, 0.0, 0.5, guess);
}

double incomplete_gamma_inverse(double s, double target) {
    require_positive(s, "incomplete_gamma_inverse s");
    require_open_unit(target, "incomplete_gamma_inverse target");
    auto f = [&](double x) { return incomplete_gamma(s, x); };
    const double log_gamma = std::lgamma(s);
    auto df = [&](double x) {
        if (x <= 0.0) return std::numeric_limits<double>::quiet_NaN();
        return std::exp((s - 1.0) * std::log(x) - x - log_gamma);
    };
    double hi = std::max(1.0, 2.0 * s);
    while (f(hi) < target) {
        hi *= 2.0;
        if (hi > 1e300) throw NumericFailure("incomplete_gamma_inverse: cannot bracket");
    }
    return solve_monotone(f, df, target, 0.0, hi);
}

double solve_monotone(const std::function<double(double)>& f,
                      const std::function<double(double)>& derivative,
                      double target, double lo, double hi,
                      std::optional<double> guess, const RootOptions& opts) {
    if (!(lo <= hi)) throw NumericFailure("solve_monotone: empty bracket");
    const double lo0 = lo, hi0 = hi;
    // Called only when the bracket has collapsed with a large residual.
    auto require_bracketed = [&] {
        if (f(lo0) > target + opts.prob_tol || f(hi0) < target - opts.prob_tol) {
            throw NumericFailure("solve_monotone: target is not bracketed");
        }
    };
    double x = guess.value_or(0.5 * (lo + hi));
    if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    double prev_step = hi - lo;
    double step = prev_step;
    for (int iter = 0; iter < opts.max_iter; ++iter) {
        const double residual = f(x) - target;
        if (std::fabs(residual) <= opts.prob_tol) return x;
        if (residual < 0.0) {
            lo = x;
        } else {
            hi = x;
        }
        const double scale = std::max(std::fabs(lo), std::fabs(hi));
        if (hi - lo <= opts.rel_x_tol * scale || hi - lo <= std::numeric_limits<double>::min()) {
            if (std::fabs(residual) > 1e-6) require_bracketed();
            return x;
        }
        const double d = derivative ? derivative(x) : std::numeric_limits<double>::quiet_NaN();
        double next = std::numeric_limits<double>::quiet_NaN();
        if (std::isfinite(d) && d > 0.0) next = x - residual / d;
        const bool newton_ok = std::isfinite(next) && next > lo && next < hi &&
                               std::fabs(next - x) < 0.5 * prev_step;
        prev_step = step;
        if (newton_ok) {
            step = std::fabs(next - x);
            x = next;
        } else {
            const double mid = 0.5 * (lo + hi);
            step = std::fabs(mid - x);
            x = mid;
        }
    }
    throw NumericFailure("solve_monotone: iteration budget exhausted");
}

}  // namespace special
}  // namespace quantkurt
