#pragma once

#include "quantkurt/rng.hpp"
#include "quantkurt/special_functions.hpp"

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace quantkurt {

/// A continuous univariate distribution. Implementations are immutable, so a
/// model may be shared freely between threads.
///
/// density() returns +infinity where the density diverges (for example the
/// chi-squared with one degree of freedom at 0); callers that need f(x) at a
/// point test for that with std::isinf.
class Model {
public:
    virtual ~Model() = default;

    virtual double cdf(double x) const = 0;
    virtual double quantile(double t) const = 0;
    virtual double density(double x) const = 0;

    /// Tukey's sparsity index g(t) = 1 / f(F^{-1}(t)).
    virtual double sparsity(double t) const;

    virtual double median() const { return quantile(0.5); }

    /// Canonical specification string, parseable by parse_model().
    virtual std::string spec() const = 0;

    /// n draws by inverse transform on quantile().
    std::vector<double> sample(Stream& stream, std::size_t n) const;
};

using ModelPtr = std::shared_ptr<const Model>;

struct SkewTParams {
    double epsilon;
    double nu;
};

struct MixtureParams {
    ModelPtr first;
    ModelPtr second;
    double weight;  // mass on `first`
};

ModelPtr make_beta(double alpha, double beta);
ModelPtr make_uniform();
ModelPtr make_normal();
ModelPtr make_logistic();
ModelPtr make_student_t(double nu);
ModelPtr make_laplace();
ModelPtr make_cauchy();
ModelPtr make_chi_squared(double nu);
ModelPtr make_lognormal();
ModelPtr make_pareto2();
ModelPtr make_skew_t(SkewTParams params);
ModelPtr make_mixture(MixtureParams params);
/// Two-component t_{1/2} mixture: weight on t_{1/2}, the rest on t_{1/2} + delta.
ModelPtr make_t_half_mixture(double weight, double delta);
/// Law of location + scale * X for X ~ base, scale != 0. A negative scale
/// reflects the distribution.
ModelPtr make_affine(ModelPtr base, double location, double scale);

/// Quantile of sinh(asinh(X) + epsilon) with X ~ t_nu.
double skew_t_quantile(SkewTParams params, double t);

/// Thrown by parse_model on malformed specifications.
class ModelSpecError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Parses `name(param,...)`: beta(a,b), uniform, normal, logistic, t(nu),
/// laplace, cauchy, chisq(nu), lognormal, pareto2, skewt(eps,nu),
/// mixt(weight,delta).
ModelPtr parse_model(std::string_view spec);

struct CatalogueEntry {
    int number;
    std::string label;
    ModelPtr model;
    bool symmetric;
};

/// The twenty reference models, in tabulation order.
const std::vector<CatalogueEntry>& catalogue();

}  // namespace quantkurt
