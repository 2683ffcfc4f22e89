#include "quantkurt/measures.hpp"

#include <cmath>
#include <string>

namespace quantkurt {

QuantileTriple::QuantileTriple(double p, double q, double r) : p_(p), q_(q), r_(r) {
    if (!(0.0 < p && p < q && q < r && r < 0.5)) {
        throw std::domain_error("quantile triple must satisfy 0 < p < q < r < 0.5");
    }
}

namespace measures {

namespace {

void check_lower_half(double t, const char* what) {
    if (!(t > 0.0 && t < 0.5)) throw std::domain_error(std::string(what) + " must lie in (0, 0.5)");
}

void check_ordered(double lo, double hi) {
    check_lower_half(lo, "lower probability");
    check_lower_half(hi, "upper probability");
    if (!(lo < hi)) throw std::domain_error("probabilities must be strictly increasing");
}

}  // namespace

double interquantile_range(const Model& model, double t) {
    check_lower_half(t, "interquantile range probability");
    return model.quantile(1.0 - t) - model.quantile(t);
}

double matched_p(double r) {
    if (!(r > 0.0 && r < 0.5)) throw std::domain_error("matched_p: r must lie in (0, 0.5)");
    return special::std_normal_cdf(3.0 * special::std_normal_quantile(r));
}

double kurtosis_ratio(const Model& model, double p, double r) {
    check_ordered(p, r);
    return interquantile_range(model, p) / interquantile_range(model, r);
}

ShapeSummary shape_summary(const Model& model, const QuantileTriple& triple) {
    const double rp = interquantile_range(model, triple.p());
    const double rq = interquantile_range(model, triple.q());
    const double rr = interquantile_range(model, triple.r());
    return {rp / rr, rq / rr, rp / rq};
}

double horn_from_area_ratio(double ratio) {
    if (std::isinf(ratio)) return 1.0;
    if (ratio <= 1.0) return -1.0 + ratio;
    return 1.0 - 1.0 / ratio;
}

double horn_extended(const Model& model, double q) {
    check_lower_half(q, "horn q");
    const double height = model.density(model.median());
    if (std::isinf(height)) return 1.0;
    if (height == 0.0) return -1.0;
    const double area = height * interquantile_range(model, q);
    return horn_from_area_ratio(area / (1.0 - 2.0 * q));
}

double horn_approx(const Model& model, double q, double r) {
    check_ordered(q, r);
    const double c = (1.0 - 2.0 * r) / (1.0 - 2.0 * q);
    const double pi = interquantile_range(model, q) / interquantile_range(model, r);
    return horn_from_area_ratio(c * pi);
}

double practical_tail_index(const Model& model, double p, double q, TailSide side, double center) {
    check_ordered(p, q);
    double outer, inner;
    if (side == TailSide::right) {
        outer = model.quantile(1.0 - p) - center;
        inner = model.quantile(1.0 - q) - center;
        if (!(inner > 0.0)) throw std::domain_error("right tail index needs x_{1-q} > center");
    } else {
        outer = model.quantile(p) - center;
        inner = model.quantile(q) - center;
        if (!(inner < 0.0)) throw std::domain_error("left tail index needs x_q < center");
    }
    return std::log(q / p) / std::log(outer / inner);
}

double tau_from_indices(double xq, double x1q, double alpha_left, double alpha_right, double p,
                        double q) {
    if (!(x1q > xq)) throw std::domain_error("tau_from_indices: need x_{1-q} > x_q");
    const double ratio = q / p;
    return (x1q * std::pow(ratio, 1.0 / alpha_right) - xq * std::pow(ratio, 1.0 / alpha_left)) /
           (x1q - xq);
}

AsymptoticWidth asymptotic_width(const VstConstants& c, double kappa) {
    const double v = c.variance(kappa);
    if (!(v > 0.0)) throw std::domain_error("asymptotic_width: q(kappa) must be positive");
    const double w = 2.0 * std::sqrt(v);
    return {w, w / kappa};
}

std::uint64_t required_sample_size(double alpha, double target_rw, double max_rw_asym) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("alpha must lie in (0,1)");
    if (!(target_rw > 0.0) || !(max_rw_asym > 0.0)) {
        throw std::domain_error("relative widths must be positive");
    }
    const double z = special::std_normal_quantile(1.0 - 0.5 * alpha);
    const double root = max_rw_asym * z / target_rw;
    // Guard against an exact integer square landing one ulp above itself.
    const double n = std::ceil(root * root * (1.0 - 1e-12));
    return n < 1.0 ? 1u : static_cast<std::uint64_t>(n);
}

}  // namespace measures
}  // namespace quantkurt
