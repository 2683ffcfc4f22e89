#include "quantkurt/distributions.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>

namespace quantkurt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

void check_t(double t) {
    if (!(t > 0.0 && t < 1.0)) throw std::domain_error("quantile argument must lie in (0,1)");
}

std::string fmt(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

class BetaModel final : public Model {
public:
    BetaModel(double a, double b) : a_(a), b_(b) {
        if (!(a > 0.0 && b > 0.0 && std::isfinite(a) && std::isfinite(b))) {
            throw std::domain_error("beta parameters must be positive");
        }
        log_beta_ = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    }
    double cdf(double x) const override {
        if (x <= 0.0) return 0.0;
        if (x >= 1.0) return 1.0;
        return special::incomplete_beta(a_, b_, x);
    }
    double quantile(double t) const override {
        check_t(t);
        return special::incomplete_beta_inverse(a_, b_, t);
    }
    double density(double x) const override {
        if (x < 0.0 || x > 1.0) return 0.0;
        if (x == 0.0) return a_ < 1.0 ? kInf : (a_ == 1.0 ? std::exp(-log_beta_) : 0.0);
        if (x == 1.0) return b_ < 1.0 ? kInf : (b_ == 1.0 ? std::exp(-log_beta_) : 0.0);
        return std::exp((a_ - 1.0) * std::log(x) + (b_ - 1.0) * std::log1p(-x) - log_beta_);
    }
    std::string spec() const override { return "beta(" + fmt(a_) + "," + fmt(b_) + ")"; }

private:
    double a_, b_, log_beta_;
};

class UniformModel final : public Model {
public:
    double cdf(double x) const override { return std::clamp(x, 0.0, 1.0); }
    double quantile(double t) const override {
        check_t(t);
        return t;
    }
    double density(double x) const override { return (x >= 0.0 && x <= 1.0) ? 1.0 : 0.0; }
    double sparsity(double t) const override {
        check_t(t);
        return 1.0;
    }
    std::string spec() const override { return "uniform"; }
};

class NormalModel final : public Model {
public:
    double cdf(double x) const override { return special::std_normal_cdf(x); }
    double quantile(double t) const override { return special::std_normal_quantile(t); }
    double density(double x) const override { return special::std_normal_pdf(x); }
    std::string spec() const override { return "normal"; }
};

class LogisticModel final : public Model {
public:
    double cdf(double x) const override {
        return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
    }
    double quantile(double t) const override {
        check_t(t);
        return std::log(t) - std::log1p(-t);
    }
    double density(double x) const override {
        const double e = std::exp(-std::fabs(x));
        return e / ((1.0 + e) * (1.0 + e));
    }
    double sparsity(double t) const override {
        check_t(t);
        return 1.0 / (t * (1.0 - t));
    }
    std::string spec() const override { return "logistic"; }
};

class StudentTModel final : public Model {
public:
    explicit StudentTModel(double nu) : nu_(nu) {
        if (!(nu > 0.0) || !std::isfinite(nu)) throw std::domain_error("t degrees of freedom must be positive");
        log_norm_ = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) - 0.5 * std::log(nu * kPi);
        center_split_ = special::incomplete_beta(0.5 * nu_, 0.5, 0.5);
    }
    double cdf(double x) const override {
        if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
        const double x2 = x * x;
        double lower;  // P(T <= -|x|)
        if (x2 < nu_) {
            lower = 0.5 - 0.5 * special::incomplete_beta(0.5, 0.5 * nu_, x2 / (nu_ + x2));
        } else {
            lower = 0.5 * special::incomplete_beta(0.5 * nu_, 0.5, nu_ / (nu_ + x2));
        }
        return x <= 0.0 ? lower : 1.0 - lower;
    }
    double quantile(double t) const override {
        check_t(t);
        if (t == 0.5) return 0.0;
        const double lower = std::min(t, 1.0 - t);
        const double twice = 2.0 * lower;
        double magnitude;
        if (twice <= center_split_) {
            // z = nu / (nu + x^2) is at most 1/2 here and is solved for directly.
            const double z = special::incomplete_beta_inverse(0.5 * nu_, 0.5, twice);
            magnitude = std::sqrt(nu_ * (1.0 - z) / z);
        } else {
            const double w = special::incomplete_beta_inverse(0.5, 0.5 * nu_, 1.0 - twice);
            magnitude = std::sqrt(nu_ * w / (1.0 - w));
        }
        return t < 0.5 ? -magnitude : magnitude;
    }
    double density(double x) const override {
        return std::exp(log_norm_ - 0.5 * (nu_ + 1.0) * std::log1p(x * x / nu_));
    }
    std::string spec() const override { return "t(" + fmt(nu_) + ")"; }

    double nu() const { return nu_; }

private:
    double nu_, log_norm_, center_split_;
};

class LaplaceModel final : public Model {
public:
    double cdf(double x) const override {
        return x < 0.0 ? 0.5 * std::exp(x) : 1.0 - 0.5 * std::exp(-x);
    }
    double quantile(double t) const override {
        check_t(t);
        return t < 0.5 ? std::log(2.0 * t) : -std::log(2.0 * (1.0 - t));
    }
    double density(double x) const override { return 0.5 * std::exp(-std::fabs(x)); }
    std::string spec() const override { return "laplace"; }
};

class CauchyModel final : public Model {
public:
    double cdf(double x) const override {
        if (x < -1.0) return std::atan(-1.0 / x) / kPi;
        if (x > 1.0) return 1.0 - std::atan(1.0 / x) / kPi;
        return 0.5 + std::atan(x) / kPi;
    }
    double quantile(double t) const override {
        check_t(t);
        if (t < 0.25) return -1.0 / std::tan(kPi * t);
        if (t > 0.75) return 1.0 / std::tan(kPi * (1.0 - t));
        return std::tan(kPi * (t - 0.5));
    }
    double density(double x) const override { return 1.0 / (kPi * (1.0 + x * x)); }
    std::string spec() const override { return "cauchy"; }
};

class ChiSquaredModel final : public Model {
public:
    explicit ChiSquaredModel(double nu) : nu_(nu) {
        if (!(nu > 0.0) || !std::isfinite(nu)) throw std::domain_error("chi-squared degrees of freedom must be positive");
        log_norm_ = -0.5 * nu * std::numbers::ln2 - std::lgamma(0.5 * nu);
    }
    double cdf(double x) const override {
        if (x <= 0.0) return 0.0;
        return special::incomplete_gamma(0.5 * nu_, 0.5 * x);
    }
    double quantile(double t) const override {
        check_t(t);
        return 2.0 * special::incomplete_gamma_inverse(0.5 * nu_, t);
    }
    double density(double x) const override {
        if (x < 0.0) return 0.0;
        if (x == 0.0) {
            if (nu_ < 2.0) return kInf;
            return nu_ == 2.0 ? 0.5 : 0.0;
        }
        return std::exp(log_norm_ + (0.5 * nu_ - 1.0) * std::log(x) - 0.5 * x);
    }
    std::string spec() const override { return "chisq(" + fmt(nu_) + ")"; }

private:
    double nu_, log_norm_;
};

class LogNormalModel final : public Model {
public:
    double cdf(double x) const override {
        if (x <= 0.0) return 0.0;
        return special::std_normal_cdf(std::log(x));
    }
    double quantile(double t) const override { return std::exp(special::std_normal_quantile(t)); }
    double density(double x) const override {
        if (x <= 0.0) return 0.0;
        return special::std_normal_pdf(std::log(x)) / x;
    }
    std::string spec() const override { return "lognormal"; }
};

class Pareto2Model final : public Model {
public:
    double cdf(double x) const override { return x <= 1.0 ? 0.0 : 1.0 - 1.0 / (x * x); }
    double quantile(double t) const override {
        check_t(t);
        return 1.0 / std::sqrt(1.0 - t);
    }
    double density(double x) const override { return x < 1.0 ? 0.0 : 2.0 / (x * x * x); }
    std::string spec() const override { return "pareto2"; }
};

class SkewTModel final : public Model {
public:
    explicit SkewTModel(SkewTParams p) : params_(p), base_(p.nu) {}
    double cdf(double y) const override {
        return base_.cdf(std::sinh(std::asinh(y) - params_.epsilon));
    }
    double quantile(double t) const override {
        return std::sinh(std::asinh(base_.quantile(t)) + params_.epsilon);
    }
    double density(double y) const override {
        const double s = std::asinh(y) - params_.epsilon;
        return base_.density(std::sinh(s)) * std::cosh(s) / std::sqrt(1.0 + y * y);
    }
    std::string spec() const override {
        return "skewt(" + fmt(params_.epsilon) + "," + fmt(params_.nu) + ")";
    }

private:
    SkewTParams params_;
    StudentTModel base_;
};

class AffineModel final : public Model {
public:
    AffineModel(ModelPtr base, double location, double scale)
        : base_(std::move(base)), location_(location), scale_(scale) {
        if (!base_) throw std::invalid_argument("affine: null base model");
        if (!(scale != 0.0) || !std::isfinite(scale) || !std::isfinite(location)) {
            throw std::domain_error("affine: scale must be finite and nonzero");
        }
    }
    double cdf(double x) const override {
        const double z = (x - location_) / scale_;
        return scale_ > 0.0 ? base_->cdf(z) : 1.0 - base_->cdf(z);
    }
    double quantile(double t) const override {
        check_t(t);
        return scale_ > 0.0 ? location_ + scale_ * base_->quantile(t)
                            : location_ + scale_ * base_->quantile(1.0 - t);
    }
    double density(double x) const override {
        return base_->density((x - location_) / scale_) / std::fabs(scale_);
    }
    double sparsity(double t) const override {
        check_t(t);
        return std::fabs(scale_) * base_->sparsity(scale_ > 0.0 ? t : 1.0 - t);
    }
    std::string spec() const override {
        return "affine(" + base_->spec() + "," + fmt(location_) + "," + fmt(scale_) + ")";
    }

private:
    ModelPtr base_;
    double location_, scale_;
};

class MixtureModel final : public Model {
public:
    explicit MixtureModel(MixtureParams p) : params_(std::move(p)) {
        if (!params_.first || !params_.second) throw std::invalid_argument("mixture: null component");
        if (!(params_.weight > 0.0 && params_.weight < 1.0)) {
            throw std::domain_error("mixture weight must lie in (0,1)");
        }
    }
    double cdf(double x) const override {
        return params_.weight * params_.first->cdf(x) + (1.0 - params_.weight) * params_.second->cdf(x);
    }
    double density(double x) const override {
        return params_.weight * params_.first->density(x) +
               (1.0 - params_.weight) * params_.second->density(x);
    }
    double quantile(double t) const override {
        check_t(t);
        const double a = params_.first->quantile(t);
        const double b = params_.second->quantile(t);
        const double lo = std::min(a, b), hi = std::max(a, b);
        if (lo == hi) return lo;
        special::RootOptions opts;
        opts.prob_tol = 1e-15;
        return special::solve_monotone([this](double x) { return cdf(x); },
                                       [this](double x) { return density(x); }, t, lo, hi,
                                       std::nullopt, opts);
    }
    std::string spec() const override {
        if (!label_.empty()) return label_;
        return "mix(" + fmt(params_.weight) + "," + params_.first->spec() + "," +
               params_.second->spec() + ")";
    }
    void set_label(std::string label) { label_ = std::move(label); }

private:
    MixtureParams params_;
    std::string label_;
};

}  // namespace

double Model::sparsity(double t) const {
    return 1.0 / density(quantile(t));
}

std::vector<double> Model::sample(Stream& stream, std::size_t n) const {
    std::vector<double> out(n);
    for (auto& v : out) v = quantile(stream.uniform());
    return out;
}

ModelPtr make_beta(double alpha, double beta) { return std::make_shared<BetaModel>(alpha, beta); }
ModelPtr make_uniform() { return std::make_shared<UniformModel>(); }
ModelPtr make_normal() { return std::make_shared<NormalModel>(); }
ModelPtr make_logistic() { return std::make_shared<LogisticModel>(); }
ModelPtr make_student_t(double nu) { return std::make_shared<StudentTModel>(nu); }
ModelPtr make_laplace() { return std::make_shared<LaplaceModel>(); }
ModelPtr make_cauchy() { return std::make_shared<CauchyModel>(); }
ModelPtr make_chi_squared(double nu) { return std::make_shared<ChiSquaredModel>(nu); }
ModelPtr make_lognormal() { return std::make_shared<LogNormalModel>(); }
ModelPtr make_pareto2() { return std::make_shared<Pareto2Model>(); }
ModelPtr make_skew_t(SkewTParams params) { return std::make_shared<SkewTModel>(params); }
ModelPtr make_mixture(MixtureParams params) { return std::make_shared<MixtureModel>(std::move(params)); }

ModelPtr make_affine(ModelPtr base, double location, double scale) {
    return std::make_shared<AffineModel>(std::move(base), location, scale);
}

ModelPtr make_t_half_mixture(double weight, double delta) {
    auto base = make_student_t(0.5);
    auto mix = std::make_shared<MixtureModel>(
        MixtureParams{base, make_affine(base, delta, 1.0), weight});
    mix->set_label("mixt(" + fmt(weight) + "," + fmt(delta) + ")");
    return mix;
}

double skew_t_quantile(SkewTParams params, double t) {
    return SkewTModel(params).quantile(t);
}

namespace {

class SpecParser {
public:
    explicit SpecParser(std::string_view text) : text_(text) {}

    ModelPtr parse_all() {
        auto m = parse_model_expr();
        skip_ws();
        if (pos_ != text_.size()) fail("trailing characters");
        return m;
    }

private:
    struct Arg {
        bool is_number;
        double number;
        std::string_view raw;
    };

    [[noreturn]] void fail(const std::string& why) const {
        throw ModelSpecError("model spec '" + std::string(text_) + "': " + why);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    std::string parse_name() {
        skip_ws();
        const auto start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
        }
        if (start == pos_) fail("expected a model name");
        std::string name(text_.substr(start, pos_ - start));
        std::transform(name.begin(), name.end(), name.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        return name;
    }

    double parse_number() {
        skip_ws();
        // Accept simple fractions like 1/3 as a convenience.
        double value = 0.0;
        const char* begin = text_.data() + pos_;
        const char* end = text_.data() + text_.size();
        auto res = std::from_chars(begin, end, value);
        if (res.ec != std::errc{}) fail("expected a number");
        pos_ += static_cast<std::size_t>(res.ptr - begin);
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == '/') {
            ++pos_;
            skip_ws();
            double denom = 0.0;
            begin = text_.data() + pos_;
            res = std::from_chars(begin, end, denom);
            if (res.ec != std::errc{} || denom == 0.0) fail("bad fraction");
            pos_ += static_cast<std::size_t>(res.ptr - begin);
            value /= denom;
        }
        return value;
    }

    bool peek_is_number() {
        skip_ws();
        if (pos_ >= text_.size()) return false;
        const char c = text_[pos_];
        return std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.';
    }

    bool consume(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!consume(c)) fail(std::string("expected '") + c + "'");
    }

    std::vector<double> numbers_until_close() {
        std::vector<double> out;
        if (consume(')')) return out;
        do {
            out.push_back(parse_number());
        } while (consume(','));
        expect(')');
        return out;
    }

    void want(const std::vector<double>& args, std::size_t count, const std::string& name) {
        if (args.size() != count) {
            fail(name + " takes " + std::to_string(count) + " parameter(s), got " +
                 std::to_string(args.size()));
        }
    }

    ModelPtr parse_model_expr() {
        const std::string name = parse_name();
        if (name == "affine") {
            expect('(');
            auto base = parse_model_expr();
            expect(',');
            const double loc = parse_number();
            expect(',');
            const double scale = parse_number();
            expect(')');
            return make_affine(base, loc, scale);
        }
        if (name == "mix") {
            expect('(');
            const double w = parse_number();
            expect(',');
            auto a = parse_model_expr();
            expect(',');
            auto b = parse_model_expr();
            expect(')');
            return make_mixture({a, b, w});
        }
        std::vector<double> args;
        if (consume('(')) args = numbers_until_close();
        try {
            if (name == "beta") {
                want(args, 2, name);
                return make_beta(args[0], args[1]);
            }
            if (name == "t") {
                want(args, 1, name);
                return make_student_t(args[0]);
            }
            if (name == "chisq") {
                want(args, 1, name);
                return make_chi_squared(args[0]);
            }
            if (name == "skewt") {
                want(args, 2, name);
                return make_skew_t({args[0], args[1]});
            }
            if (name == "mixt") {
                want(args, 2, name);
                return make_t_half_mixture(args[0], args[1]);
            }
            want(args, 0, name);
            if (name == "uniform") return make_uniform();
            if (name == "normal") return make_normal();
            if (name == "cauchy") return make_cauchy();
            if (name == "laplace") return make_laplace();
            if (name == "logistic") return make_logistic();
            if (name == "lognormal") return make_lognormal();
            if (name == "pareto2") return make_pareto2();
        } catch (const std::domain_error& e) {
            fail(e.what());
        }
        fail("unknown model '" + name + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

ModelPtr parse_model(std::string_view spec) { return SpecParser(spec).parse_all(); }

const std::vector<CatalogueEntry>& catalogue() {
    static const std::vector<CatalogueEntry> entries = {
        {1, "Beta(1/2,1/2)", make_beta(0.5, 0.5), true},
        {2, "Uniform", make_uniform(), true},
        {3, "Beta(2,2)", make_beta(2.0, 2.0), true},
        {4, "Normal", make_normal(), true},
        {5, "Logistic", make_logistic(), true},
        {6, "Student-t5", make_student_t(5.0), true},
        {7, "Student-t4", make_student_t(4.0), true},
        {8, "Student-t2", make_student_t(2.0), true},
        {9, "Laplace", make_laplace(), true},
        {10, "Cauchy", make_cauchy(), true},
        {11, "Beta(2,1)", make_beta(2.0, 1.0), false},
        {12, "Chisq5", make_chi_squared(5.0), false},
        {13, "Chisq3", make_chi_squared(3.0), false},
        {14, "Chisq2", make_chi_squared(2.0), false},
        {15, "Chisq1", make_chi_squared(1.0), false},
        {16, "Log-normal", make_lognormal(), false},
        {17, "Skew-t(2,2)", make_skew_t({2.0, 2.0}), false},
        {18, "Pareto(2)", make_pareto2(), false},
        {19, "Skew-t(2,1)", make_skew_t({2.0, 1.0}), false},
        {20, "Skew-t(2,1/2)", make_skew_t({2.0, 0.5}), false},
    };
    return entries;
}

}  // namespace quantkurt
