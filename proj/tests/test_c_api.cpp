#include "quantkurt/quantkurt.h"

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <memory>
#include <string>
#include <vector>

namespace {

struct ModelFree {
    void operator()(qk_model* m) const { qk_model_free(m); }
};
using Handle = std::unique_ptr<qk_model, ModelFree>;

Handle parse(const char* spec) {
    qk_model* m = nullptr;
    REQUIRE(qk_model_parse(spec, &m) == QK_OK);
    return Handle(m);
}

std::vector<double> draw(const qk_model* m, uint64_t seed, size_t n) {
    std::vector<double> x(n);
    REQUIRE(qk_model_sample(m, seed, n, x.data()) == QK_OK);
    return x;
}

}  // namespace

TEST_CASE("version and status strings") {
    CHECK(std::strlen(qk_version()) > 0);
    for (int s = QK_OK; s <= QK_ERR_INTERNAL; ++s) {
        CHECK(std::strlen(qk_status_string(static_cast<qk_status>(s))) > 0);
    }
    CHECK(qk_min_sample_size() == 20);
    CHECK(qk_default_bandwidth_a() > 0.0);
}

TEST_CASE("null arguments are rejected") {
    double out;
    CHECK(qk_std_normal_cdf(0.0, nullptr) == QK_ERR_INVALID_ARGUMENT);
    CHECK(qk_model_cdf(nullptr, 0.0, &out) == QK_ERR_INVALID_ARGUMENT);
    CHECK(std::strlen(qk_last_error()) > 0);
    CHECK(qk_model_parse(nullptr, nullptr) == QK_ERR_INVALID_ARGUMENT);
    CHECK(qk_ratio_interval(nullptr, 100, 0.1, 0.3, 0.05, 0, nullptr) == QK_ERR_INVALID_ARGUMENT);
    CHECK(qk_coverage_study(nullptr, nullptr, nullptr) == QK_ERR_INVALID_ARGUMENT);
    qk_model_free(nullptr);
}

TEST_CASE("normal helpers") {
    double v;
    REQUIRE(qk_std_normal_cdf(1.0, &v) == QK_OK);
    CHECK(v == doctest::Approx(0.8413447460685429).epsilon(1e-14));
    REQUIRE(qk_std_normal_quantile(0.975, &v) == QK_OK);
    CHECK(v == doctest::Approx(1.959963984540054).epsilon(1e-14));
    CHECK(qk_std_normal_quantile(1.5, &v) == QK_ERR_DOMAIN);
    REQUIRE(qk_matched_p(1.0 / 3, &v) == QK_OK);
    CHECK(v == doctest::Approx(0.09815).epsilon(1e-3));
    CHECK(qk_matched_p(0.5, &v) == QK_ERR_DOMAIN);
}

TEST_CASE("model handles") {
    qk_model* bad = nullptr;
    CHECK(qk_model_parse("beta(1", &bad) == QK_ERR_PARSE);
    CHECK(bad == nullptr);
    CHECK(std::string(qk_last_error()).size() > 0);
    CHECK(qk_model_parse("nosuch(2)", &bad) == QK_ERR_PARSE);

    const auto m = parse("t(4)");
    size_t needed = 0;
    CHECK(qk_model_spec(m.get(), nullptr, 0, &needed) == QK_ERR_BUFFER_TOO_SMALL);
    REQUIRE(needed > 1);
    std::string buf(needed, '\0');
    CHECK(qk_model_spec(m.get(), buf.data(), 1, &needed) == QK_ERR_BUFFER_TOO_SMALL);
    REQUIRE(qk_model_spec(m.get(), buf.data(), buf.size(), &needed) == QK_OK);
    CHECK(std::strlen(buf.c_str()) == needed - 1);
    const auto again = parse(buf.c_str());

    double x, t, d, g;
    REQUIRE(qk_model_quantile(m.get(), 0.9, &x) == QK_OK);
    REQUIRE(qk_model_cdf(again.get(), x, &t) == QK_OK);
    CHECK(t == doctest::Approx(0.9).epsilon(1e-12));
    REQUIRE(qk_model_density(m.get(), x, &d) == QK_OK);
    REQUIRE(qk_model_sparsity(m.get(), 0.9, &g) == QK_OK);
    CHECK(d * g == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(qk_model_quantile(m.get(), 1.5, &x) == QK_ERR_DOMAIN);

    const auto a = draw(m.get(), 99, 50);
    const auto b = draw(again.get(), 99, 50);
    CHECK(a == b);
    CHECK(draw(m.get(), 100, 50) != a);
}

TEST_CASE("catalogue through the C interface") {
    REQUIRE(qk_catalogue_size() == 20);
    for (size_t i = 0; i < qk_catalogue_size(); ++i) {
        int number = 0;
        const char* label = nullptr;
        qk_model* raw = nullptr;
        REQUIRE(qk_catalogue_entry(i, &number, &label, &raw) == QK_OK);
        Handle m(raw);
        CHECK(number == int(i) + 1);
        CHECK(std::strlen(label) > 0);
        double kappa;
        REQUIRE(qk_kurtosis_ratio(m.get(), 0.09815, 1.0 / 3, &kappa) == QK_OK);
        qk_shape_summary s;
        REQUIRE(qk_model_shape_summary(m.get(), 0.09815, 0.1586553, 1.0 / 3, &s) == QK_OK);
        CHECK(s.kappa == doctest::Approx(kappa).epsilon(1e-14));
        CHECK(s.kappa == doctest::Approx(s.pi * s.tau).epsilon(1e-12));
    }
    CHECK(qk_catalogue_entry(20, nullptr, nullptr, nullptr) == QK_ERR_DOMAIN);
}

TEST_CASE("population measures") {
    const auto normal = parse("normal");
    double v;
    REQUIRE(qk_interquantile_range(normal.get(), 0.25, &v) == QK_OK);
    CHECK(v == doctest::Approx(1.3489795003921634).epsilon(1e-12));
    CHECK(qk_kurtosis_ratio(normal.get(), 0.3, 0.1, &v) == QK_ERR_DOMAIN);
    REQUIRE(qk_horn_extended(parse("uniform").get(), 0.25, &v) == QK_OK);
    CHECK(std::abs(v) <= 1e-12);
    REQUIRE(qk_horn_approx(parse("uniform").get(), 0.25, 0.375, &v) == QK_OK);
    CHECK(std::abs(v) <= 1e-12);
    REQUIRE(qk_practical_tail_index(parse("cauchy").get(), 0.01, 0.1, QK_TAIL_RIGHT, 0.0, &v) == QK_OK);
    CHECK(v == doctest::Approx(1.0).epsilon(0.05));

    qk_vst_constants c;
    REQUIRE(qk_model_vst_constants(normal.get(), 0.09815, 1.0 / 3, &c) == QK_OK);
    CHECK(c.a0 == doctest::Approx(7.094).epsilon(1e-3));
    CHECK(c.d2 == doctest::Approx(4 * c.a0 * c.a2 - c.a1 * c.a1).epsilon(1e-12));
    double w, rw;
    REQUIRE(qk_asymptotic_width(&c, 3.0, &w, &rw) == QK_OK);
    CHECK(w == doctest::Approx(8.735).epsilon(1e-3));
    uint64_t n;
    REQUIRE(qk_required_sample_size(0.05, 0.2, 4.652, &n) == QK_OK);
    CHECK(n == 2079);
    CHECK(qk_required_sample_size(1.5, 0.2, 4.652, &n) == QK_ERR_DOMAIN);

    const auto shifted = parse("affine(normal,0,1)");
    CHECK(qk_model_vst_constants(shifted.get(), 0.3, 0.1, &c) == QK_ERR_DOMAIN);
}

TEST_CASE("inference entry points") {
    qk_vst_constants c{7.094, -2.802, 2.265, 4 * 7.094 * 2.265 - 2.802 * 2.802};
    double h, t;
    REQUIRE(qk_vst_transform(&c, 400, 3.0, &h) == QK_OK);
    REQUIRE(qk_test_statistic(&c, 400, 3.0, 3.0, &t) == QK_OK);
    CHECK(t == 0.0);
    qk_interval ci;
    REQUIRE(qk_confidence_interval(&c, 400, 3.0, 0.05, &ci) == QK_OK);
    CHECK(ci.lower < 3.0);
    CHECK(ci.upper > 3.0);
    CHECK(ci.level == doctest::Approx(0.95));
    qk_vst_constants neg{1.0, 5.0, 1.0, 4.0 - 25.0};
    CHECK(qk_vst_transform(&neg, 400, 3.0, &h) != QK_OK);
}

TEST_CASE("data entry points report their failure modes") {
    const auto normal = parse("normal");
    qk_ratio_report rep;
    const auto x = draw(normal.get(), 3, 19);
    CHECK(qk_ratio_interval(x.data(), x.size(), 0.09815, 1.0 / 3, 0.05, 0, &rep) == QK_ERR_INSUFFICIENT_DATA);
    const std::vector<double> flat(200, 2.5);
    CHECK(qk_ratio_interval(flat.data(), flat.size(), 0.09815, 1.0 / 3, 0.05, 0, &rep) ==
          QK_ERR_DEGENERATE_TIES);
    std::vector<double> nan_data(100, 1.0);
    nan_data[7] = std::nan("");
    CHECK(qk_ratio_interval(nan_data.data(), nan_data.size(), 0.09815, 1.0 / 3, 0.05, 0, &rep) != QK_OK);

    const auto y = draw(normal.get(), 4, 1000);
    REQUIRE(qk_ratio_interval(y.data(), y.size(), 0.09815, 1.0 / 3, 0.05, 0, &rep) == QK_OK);
    CHECK(rep.n == 1000);
    CHECK(rep.interval.lower < rep.interval.estimate);
    CHECK(rep.interval.upper > rep.interval.estimate);
    CHECK(rep.interval.estimate == doctest::Approx(3.0).epsilon(0.1));

    qk_test_result tr;
    REQUIRE(qk_peakedness_test(flat.data(), flat.size(), 0.25, 0.375, 0, 0.05, 0, &tr) == QK_OK);
    CHECK(tr.failure == QK_ERR_DEGENERATE_TIES);
    CHECK(tr.reject == 0);
    REQUIRE(qk_peakedness_test(y.data(), y.size(), 0.25, 0.375, 0, 0.05, 0, &tr) == QK_OK);
    CHECK(tr.failure == QK_OK);
    CHECK(tr.reject == 1);
    CHECK(qk_peakedness_test(y.data(), 10, 0.25, 0.375, 0, 0.05, 0, &tr) == QK_ERR_INSUFFICIENT_DATA);
}

TEST_CASE("simulation entry points") {
    const auto normal = parse("normal");
    qk_coverage_config cfg;
    qk_coverage_config_init(&cfg);
    CHECK(cfg.reps > 0);
    cfg.n = 400;
    cfg.reps = 200;
    cfg.seed = 5;
    cfg.workers = 1;
    qk_coverage_report one, two;
    REQUIRE(qk_coverage_study(normal.get(), &cfg, &one) == QK_OK);
    cfg.workers = 3;
    REQUIRE(qk_coverage_study(normal.get(), &cfg, &two) == QK_OK);
    CHECK(std::memcmp(&one.coverage, &two.coverage, sizeof(double)) == 0);
    CHECK(std::memcmp(&one.mean_estimate, &two.mean_estimate, sizeof(double)) == 0);
    CHECK(one.failures + one.reps_effective == 200);
    CHECK(one.true_kappa == doctest::Approx(3.0).epsilon(1e-3));
    cfg.reps = 0;
    CHECK(qk_coverage_study(normal.get(), &cfg, &one) == QK_ERR_INVALID_ARGUMENT);

    qk_power_config pc;
    qk_power_config_init(&pc);
    pc.n = 200;
    pc.reps = 50;
    pc.workers = 1;
    const double grid[] = {1.0, 1.0 / 3};
    qk_power_point pts[2];
    REQUIRE(qk_power_study("beta", grid, 2, &pc, pts) == QK_OK);
    CHECK(pts[0].x == doctest::Approx(0.5));
    CHECK(pts[1].parameter == doctest::Approx(1.0 / 3));
    CHECK(qk_power_study("gamma", grid, 2, &pc, pts) != QK_OK);
}
