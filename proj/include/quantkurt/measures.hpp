#pragma once

#include "quantkurt/distributions.hpp"

#include <cstdint>

namespace quantkurt {

/// Three probabilities with 0 < p < q < r < 1/2.
class QuantileTriple {
public:
    QuantileTriple(double p, double q, double r);

    double p() const noexcept { return p_; }
    double q() const noexcept { return q_; }
    double r() const noexcept { return r_; }

private:
    double p_, q_, r_;
};

/// kappa = R_p/R_r factored into peakedness pi = R_q/R_r and tail-weight tau = R_p/R_q.
struct ShapeSummary {
    double kappa;
    double pi;
    double tau;
};

/// Quadratic variance model q(t) = a0 + a1 t + a2 t^2 of the ratio estimator,
/// with discriminant quantity d2 = 4 a0 a2 - a1^2.
struct VstConstants {
    double a0;
    double a1;
    double a2;
    double d2;

    static VstConstants from(double a0, double a1, double a2) {
        return {a0, a1, a2, 4.0 * a0 * a2 - a1 * a1};
    }
    double variance(double t) const noexcept { return a0 + (a1 + a2 * t) * t; }
    double slope(double t) const noexcept { return a1 + 2.0 * a2 * t; }
    bool valid() const noexcept { return a2 > 0.0 && d2 > 0.0; }
};

enum class TailSide { left, right };

namespace measures {

/// R_t = x_{1-t} - x_t, 0 < t < 1/2.
double interquantile_range(const Model& model, double t);

/// p(r) = Phi(3 Phi^{-1}(r)): the lower probability that makes kappa_{p,r} = 3 for the normal.
double matched_p(double r);

/// kappa_{p,r} = R_p / R_r.
double kurtosis_ratio(const Model& model, double p, double r);

ShapeSummary shape_summary(const Model& model, const QuantileTriple& triple);

/// Extended Horn peakedness in [-1, 1] from A_q = f(median) R_q.
/// Exactly +1 when f(median) is infinite and -1 when it is 0.
double horn_extended(const Model& model, double q);

/// Same statistic with A_q/(1-2q) replaced by c_{q,r} pi_{q,r},
/// c_{q,r} = (1-2r)/(1-2q); needs no density.
double horn_approx(const Model& model, double q, double r);

/// Maps the normalized rectangle area A_q/(1-2q) to the extended Horn scale.
double horn_from_area_ratio(double ratio);

/// Morgenthaler-Tukey practical tail index on one side, computed on the
/// quantiles of X - center. Throws std::domain_error if the two quantiles on
/// that side do not share a sign (the log-ratio is then undefined).
double practical_tail_index(const Model& model, double p, double q, TailSide side,
                            double center = 0.0);

/// tau_{p,q} rebuilt from x_q, x_{1-q} and the two practical tail indices.
double tau_from_indices(double xq, double x1q, double alpha_left, double alpha_right,
                        double p, double q);

struct AsymptoticWidth {
    double width;           // 2 sqrt(q(kappa))
    double relative_width;  // width / kappa
};

AsymptoticWidth asymptotic_width(const VstConstants& c, double kappa);

/// Smallest n with n >= (max_rw_asym z_{1-alpha/2} / target_rw)^2.
std::uint64_t required_sample_size(double alpha, double target_rw, double max_rw_asym);

}  // namespace measures
}  // namespace quantkurt
