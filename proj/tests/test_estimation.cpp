#include "oracles.hpp"
#include "quantkurt/estimation.hpp"

#include <doctest.h>

#include <numeric>

using namespace quantkurt;
using namespace quantkurt::estimation;

namespace {

SortedSample one_to(int n) {
    std::vector<double> v(n);
    std::iota(v.begin(), v.end(), 1.0);
    return SortedSample(v);
}

SortedSample draw(const ModelPtr& m, size_t n, std::uint64_t seed) {
    Stream s(seed);
    return SortedSample::from_unsorted(m->sample(s, n));
}

SortedSample affine(const SortedSample& s, double a, double b) {
    std::vector<double> v(s.values().begin(), s.values().end());
    for (auto& x : v) x = a + b * x;
    return SortedSample::from_unsorted(v);
}

// Constants from the sparsity formulas evaluated with exact quantile
// densities, written out independently of the library.
std::array<double, 3> reference_constants(const Model& m, double p, double r) {
    auto g = [&](double t) { return 1.0 / m.density(m.quantile(t)); };
    const double gp = g(p), g1p = g(1 - p), gr = g(r), g1r = g(1 - r);
    const double rr = m.quantile(1 - r) - m.quantile(r);
    const double a0 = p * (gp * gp + g1p * g1p) - p * p * (gp + g1p) * (gp + g1p);
    const double a1 = 2 * (p * r * (gr * g1p + gp * g1r) - p * (1 - r) * (gp * gr + g1p * g1r));
    const double a2 = r * (gr * gr + g1r * g1r) - r * r * (gr + g1r) * (gr + g1r);
    return {a0 / (rr * rr), a1 / (rr * rr), a2 / (rr * rr)};
}

// X = cbrt(U - 1/3): the density 3x^2 vanishes at the 1/3 quantile.
class CubeRoot final : public Model {
public:
    double quantile(double t) const override { return std::cbrt(t - 1.0 / 3); }
    double cdf(double x) const override { return std::clamp(x * x * x + 1.0 / 3, 0.0, 1.0); }
    double density(double x) const override {
        const double c = cdf(x);
        return c > 0 && c < 1 ? 3 * x * x : 0.0;
    }
    std::string spec() const override { return "cuberoot"; }
};

}  // namespace

TEST_CASE("sorted sample construction and indexing") {
    const auto s = SortedSample::from_unsorted({3, 1, 2});
    CHECK(s.size() == 3);
    CHECK(s.order_stat(1) == 1);
    CHECK(s.order_stat(3) == 3);
    CHECK_THROWS_AS(s.order_stat(0), std::out_of_range);
    CHECK_THROWS_AS(s.order_stat(4), std::out_of_range);
    CHECK_THROWS_AS(SortedSample({2, 1}), std::invalid_argument);
    CHECK_THROWS_AS(SortedSample(std::vector<double>{}), std::invalid_argument);
    CHECK_THROWS_AS(SortedSample::from_unsorted({1, std::nan(""), 2}), std::invalid_argument);
    CHECK_THROWS_AS(SortedSample::from_unsorted({1, INFINITY}), std::invalid_argument);
}

TEST_CASE("sample interquantile range index arithmetic") {
    const auto s = one_to(12);
    CHECK(sample_interquantile_range(s, 1.0 / 3) == 5.0);   // X(9) - X(4)
    CHECK(sample_interquantile_range(s, 0.09815) == 11.0);  // X(12) - X(1)
    const SortedSample flat(std::vector<double>(30, 4.2));
    CHECK(sample_interquantile_range(flat, 0.25) == 0.0);
    CHECK_THROWS_AS(sample_interquantile_range(s, 0.05), std::domain_error);  // [12 * 0.05] = 0
}

TEST_CASE("kurtosis estimate") {
    const auto s = one_to(12);
    REQUIRE(kurtosis_estimate(s, 0.09815, 1.0 / 3).ok());
    CHECK(*kurtosis_estimate(s, 0.09815, 1.0 / 3) == doctest::Approx(2.2).epsilon(1e-15));
    const auto x = draw(make_laplace(), 301, 3);
    const auto mirrored = affine(x, 0.0, -1.0);
    CHECK(*kurtosis_estimate(x, 0.1, 0.3) == *kurtosis_estimate(mirrored, 0.1, 0.3));
    const SortedSample flat(std::vector<double>(30, 1.0));
    CHECK(kurtosis_estimate(flat, 0.1, 0.3).failure() == EstimationFailure::degenerate_ties);
}

TEST_CASE("bandwidth rule") {
    BandwidthRule rule;
    CHECK(rule.a == 0.2);
    CHECK(rule(1000, 0.5) == doctest::Approx(0.2 * std::pow(1000.0, -0.2)).epsilon(1e-15));
    CHECK(rule(1000, 0.1) == doctest::Approx(0.2 * std::pow(1000.0, -0.2) * 0.2).epsilon(1e-15));
    CHECK(rule(1000, 0.9) == doctest::Approx(rule(1000, 0.1)).epsilon(1e-14));
    CHECK_THROWS_AS(rule(10, 0.0), std::domain_error);
}

TEST_CASE("sparsity estimate on an exact uniform grid") {
    const size_t n = 400;
    std::vector<double> v(n);
    for (size_t i = 0; i < n; ++i) v[i] = (i + 1.0) / n;
    const SortedSample s(v);
    for (double t : {0.1, 0.3, 0.5, 0.8}) {
        for (double b : {0.01, 0.05, 0.1}) {
            const double hi = std::min(std::ceil(n * (t + b)), double(n));
            const double lo = std::max(std::ceil(n * (t - b)), 1.0);
            CHECK(*sparsity_estimate(s, t, b) == doctest::Approx((hi - lo) / (2 * b * n)).epsilon(1e-14));
        }
    }
    const SortedSample flat(std::vector<double>(50, 2.0));
    CHECK(sparsity_estimate(flat, 0.5, 0.1).failure() == EstimationFailure::degenerate_ties);
    CHECK_THROWS_AS(sparsity_estimate(s, 0.5, 0.0), std::domain_error);
}

TEST_CASE("sparsity estimate recovers known densities") {
    const double b = 0.5 * std::pow(4000.0, -0.2);
    const auto u = draw(make_uniform(), 4000, 17);
    CHECK(*sparsity_estimate(u, 0.5, b) == doctest::Approx(1.0).epsilon(0.1));
    const auto z = draw(make_normal(), 4000, 18);
    CHECK(*sparsity_estimate(z, 0.5, b) == doctest::Approx(std::sqrt(2 * std::numbers::pi)).epsilon(0.1));
}

TEST_CASE("sparsity estimate is location-scale equivariant") {
    const auto x = draw(make_student_t(3), 500, 4);
    const auto shifted = affine(x, 12.5, 1.0);
    // Order statistics of a scaled sample are exactly the scaled order
    // statistics; a power-of-two scale keeps every product exact.
    const auto scaled = affine(x, 0.0, 4.0);
    for (double t : {0.1, 0.5, 0.9}) {
        const double g = *sparsity_estimate(x, t, 0.05);
        CHECK(*sparsity_estimate(scaled, t, 0.05) == 4.0 * g);
        CHECK(*sparsity_estimate(shifted, t, 0.05) == doctest::Approx(g).epsilon(1e-12));
    }
}

TEST_CASE("theoretical constants match independent formulas and tabulated values") {
    const double p = 0.09815, r = 1.0 / 3;
    for (const auto& e : catalogue()) {
        CAPTURE(e.label);
        const auto c = vst_constants_theoretical(*e.model, p, r);
        const auto ref = reference_constants(*e.model, p, r);
        CHECK(c.a0 == doctest::Approx(ref[0]).epsilon(1e-12));
        CHECK(c.a1 == doctest::Approx(ref[1]).epsilon(1e-12));
        CHECK(c.a2 == doctest::Approx(ref[2]).epsilon(1e-12));
        CHECK(c.d2 > 0.0);
    }
    const auto uniform = vst_constants_theoretical(*make_uniform(), p, r);
    CHECK(uniform.a0 == doctest::Approx(9 * 2 * p * (1 - 2 * p)).epsilon(1e-12));
    CHECK(uniform.a1 == doctest::Approx(9 * 4 * p * (2 * r - 1)).epsilon(1e-12));
    CHECK(uniform.a2 == doctest::Approx(9 * 2 * r * (1 - 2 * r)).epsilon(1e-12));
    CHECK(uniform.a0 == doctest::Approx(1.420).epsilon(5e-4));
    CHECK(uniform.a1 == doctest::Approx(-1.178).epsilon(5e-4));
    CHECK(uniform.a2 == doctest::Approx(2.000).epsilon(5e-4));
    const auto normal = vst_constants_theoretical(*make_normal(), p, r);
    CHECK(normal.a0 == doctest::Approx(7.094).epsilon(2e-4));
    CHECK(normal.a1 == doctest::Approx(-2.802).epsilon(2e-4));
    CHECK(normal.a2 == doctest::Approx(2.265).epsilon(2e-4));
    const auto cauchy = vst_constants_theoretical(*make_cauchy(), p, r);
    CHECK(cauchy.a0 == doctest::Approx(137.680).epsilon(2e-4));
    CHECK(cauchy.a1 == doctest::Approx(-14.024).epsilon(2e-4));
    CHECK(cauchy.a2 == doctest::Approx(2.924).epsilon(2e-4));
}

TEST_CASE("theoretical constants reject singular models") {
    const CubeRoot cube;
    CHECK(std::isinf(cube.sparsity(1.0 / 3)));
    CHECK_THROWS_AS(vst_constants_theoretical(cube, 0.1, 1.0 / 3), SingularModelError);
    CHECK_NOTHROW(vst_constants_theoretical(cube, 0.1, 0.3));
}

TEST_CASE("estimated constants") {
    const SortedSample flat(std::vector<double>(100, 3.0));
    CHECK(vst_constants_estimated(flat, 0.09815, 1.0 / 3).failure() == EstimationFailure::degenerate_ties);

    // A sample whose outer tails collapse onto the inner quantiles makes the
    // estimated variance quadratic indefinite.
    std::vector<double> v;
    for (int i = 0; i < 20; ++i) v.push_back(-1.0);
    for (int i = 0; i < 60; ++i) v.push_back(-1.0 + 2.0 * i / 59.0);
    for (int i = 0; i < 20; ++i) v.push_back(1.0);
    const auto collapsed = vst_constants_estimated(SortedSample(v), 0.09815, 1.0 / 3);
    CHECK_FALSE(collapsed.ok());
    CHECK(collapsed.failure() != EstimationFailure::none);

    const auto x = draw(make_normal(), 4000, 99);
    const auto c = vst_constants_estimated(x, 0.09815, 1.0 / 3);
    REQUIRE(c.ok());
    CHECK(c->valid());
    // q-hat is positive on [1, 3 kappa-hat] whenever d2 > 0
    const double k = *kurtosis_estimate(x, 0.09815, 1.0 / 3);
    for (double t = 1.0; t <= 3 * k; t += 0.01) CHECK(c->variance(t) > 0.0);
}

TEST_CASE("estimated constants are invariant to affine transforms of the data") {
    for (int number : {2, 4, 10, 16}) {
        const auto x = draw(catalogue()[number - 1].model, 1000, 50 + number);
        const auto c = vst_constants_estimated(x, 0.09815, 1.0 / 3);
        REQUIRE(c.ok());
        for (auto [a, b] : {std::pair{5.0, 3.0}, std::pair{-100.0, 0.001}, std::pair{1e3, 7.0}}) {
            const auto d = vst_constants_estimated(affine(x, a, b), 0.09815, 1.0 / 3);
            REQUIRE(d.ok());
            CHECK(d->a0 == doctest::Approx(c->a0).epsilon(1e-10));
            CHECK(d->a1 == doctest::Approx(c->a1).epsilon(1e-10));
            CHECK(d->a2 == doctest::Approx(c->a2).epsilon(1e-10));
        }
    }
}

TEST_CASE("estimated normal constants approach the population values") {
    const double p = 0.09815, r = 1.0 / 3;
    const auto truth = vst_constants_theoretical(*make_normal(), p, r);
    double previous = std::numeric_limits<double>::infinity();
    for (size_t n : {400, 4000, 40000}) {
        const int seeds = n == 40000 ? 25 : 100;
        double a0 = 0, a1 = 0, a2 = 0, err = 0;
        int used = 0;
        for (int s = 0; s < seeds; ++s) {
            const auto c = vst_constants_estimated(draw(make_normal(), n, 1000 + s), p, r);
            if (!c) continue;
            ++used;
            a0 += c->a0;
            a1 += c->a1;
            a2 += c->a2;
            err += std::abs(c->a0 - truth.a0) / truth.a0 + std::abs(c->a1 - truth.a1) / -truth.a1 +
                   std::abs(c->a2 - truth.a2) / truth.a2;
        }
        err /= used;
        CAPTURE(n);
        CHECK(err < previous);
        previous = err;
        if (n == 4000) {
            CHECK(a0 / used == doctest::Approx(7.094).epsilon(0.15));
            CHECK(a1 / used == doctest::Approx(-2.802).epsilon(0.15));
            CHECK(a2 / used == doctest::Approx(2.265).epsilon(0.15));
        }
    }
}
