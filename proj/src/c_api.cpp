#include "quantkurt/quantkurt.h"

#include "quantkurt/simulation.hpp"

#include <cstring>
#include <string>

struct qk_model {
    quantkurt::ModelPtr model;
};

namespace {

using namespace quantkurt;

thread_local std::string last_error;

qk_status fail(qk_status status, std::string message) {
    last_error = std::move(message);
    return status;
}

qk_status from_failure(EstimationFailure f) {
    switch (f) {
        case EstimationFailure::none: return QK_OK;
        case EstimationFailure::degenerate_ties: return QK_ERR_DEGENERATE_TIES;
        case EstimationFailure::negative_discriminant: return QK_ERR_NEGATIVE_DISCRIMINANT;
    }
    return QK_ERR_INTERNAL;
}

// Runs fn, translating exceptions into status codes.
template <class Fn>
qk_status guarded(Fn&& fn) noexcept {
    try {
        return fn();
    } catch (const ModelSpecError& e) {
        return fail(QK_ERR_PARSE, e.what());
    } catch (const estimation::SingularModelError& e) {
        return fail(QK_ERR_SINGULAR_MODEL, e.what());
    } catch (const special::NumericFailure& e) {
        return fail(QK_ERR_NUMERIC, e.what());
    } catch (const std::domain_error& e) {
        return fail(QK_ERR_DOMAIN, e.what());
    } catch (const std::out_of_range& e) {
        return fail(QK_ERR_DOMAIN, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(QK_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::exception& e) {
        return fail(QK_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(QK_ERR_INTERNAL, "unknown exception");
    }
}

#define QK_REQUIRE(ptr)                                                         \
    do {                                                                        \
        if ((ptr) == nullptr) return fail(QK_ERR_INVALID_ARGUMENT, #ptr " is null"); \
    } while (0)

qk_vst_constants to_c(const VstConstants& c) { return {c.a0, c.a1, c.a2, c.d2}; }
VstConstants from_c(const qk_vst_constants& c) { return VstConstants::from(c.a0, c.a1, c.a2); }

qk_interval to_c(const ConfidenceInterval& ci) {
    return {ci.estimate, ci.lower, ci.upper, ci.level, ci.relative_width};
}

BandwidthRule rule_for(double a) {
    BandwidthRule rule;
    if (a > 0.0) rule.a = a;
    return rule;
}

SortedSample ingest(const double* data, size_t n) {
    if (n < SortedSample::kMinimumUserSize) {
        throw std::length_error("insufficient data: need at least " +
                                std::to_string(SortedSample::kMinimumUserSize) + " values, got " +
                                std::to_string(n));
    }
    return SortedSample::from_unsorted(std::vector<double>(data, data + n));
}

}  // namespace

extern "C" {

const char* qk_version(void) { return "1.0.0"; }

const char* qk_status_string(qk_status status) {
    switch (status) {
        case QK_OK: return "ok";
        case QK_ERR_INVALID_ARGUMENT: return "invalid argument";
        case QK_ERR_DOMAIN: return "domain error";
        case QK_ERR_PARSE: return "parse error";
        case QK_ERR_INSUFFICIENT_DATA: return "insufficient data";
        case QK_ERR_DEGENERATE_TIES: return "degenerate ties";
        case QK_ERR_NEGATIVE_DISCRIMINANT: return "negative discriminant";
        case QK_ERR_SINGULAR_MODEL: return "singular model";
        case QK_ERR_NUMERIC: return "numeric failure";
        case QK_ERR_BUFFER_TOO_SMALL: return "buffer too small";
        case QK_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* qk_last_error(void) { return last_error.c_str(); }

size_t qk_min_sample_size(void) { return SortedSample::kMinimumUserSize; }

double qk_default_bandwidth_a(void) { return BandwidthRule{}.a; }

qk_status qk_std_normal_cdf(double x, double* out) {
    QK_REQUIRE(out);
    if (!std::isfinite(x)) return fail(QK_ERR_DOMAIN, "x must be finite");
    *out = special::std_normal_cdf(x);
    return QK_OK;
}

qk_status qk_std_normal_quantile(double t, double* out) {
    QK_REQUIRE(out);
    return guarded([&] {
        *out = special::std_normal_quantile(t);
        return QK_OK;
    });
}

qk_status qk_model_parse(const char* spec, qk_model** out) {
    QK_REQUIRE(spec);
    QK_REQUIRE(out);
    return guarded([&] {
        *out = new qk_model{parse_model(spec)};
        return QK_OK;
    });
}

void qk_model_free(qk_model* model) { delete model; }

qk_status qk_model_spec(const qk_model* model, char* buf, size_t cap, size_t* needed) {
    QK_REQUIRE(model);
    return guarded([&] {
        const std::string s = model->model->spec();
        if (needed) *needed = s.size() + 1;
        if (cap < s.size() + 1 || buf == nullptr) {
            return fail(QK_ERR_BUFFER_TOO_SMALL, "buffer needs " + std::to_string(s.size() + 1) + " bytes");
        }
        std::memcpy(buf, s.c_str(), s.size() + 1);
        return QK_OK;
    });
}

#define QK_MODEL_SCALAR(fn_name, method)                                    \
    qk_status fn_name(const qk_model* model, double arg, double* out) {     \
        QK_REQUIRE(model);                                                  \
        QK_REQUIRE(out);                                                    \
        return guarded([&] {                                                \
            *out = model->model->method(arg);                               \
            return QK_OK;                                                   \
        });                                                                 \
    }

QK_MODEL_SCALAR(qk_model_cdf, cdf)
QK_MODEL_SCALAR(qk_model_quantile, quantile)
QK_MODEL_SCALAR(qk_model_density, density)
QK_MODEL_SCALAR(qk_model_sparsity, sparsity)

#undef QK_MODEL_SCALAR

qk_status qk_model_sample(const qk_model* model, uint64_t seed, size_t n, double* out) {
    QK_REQUIRE(model);
    if (n > 0) QK_REQUIRE(out);
    return guarded([&] {
        Stream stream(seed);
        for (size_t i = 0; i < n; ++i) out[i] = model->model->quantile(stream.uniform());
        return QK_OK;
    });
}

size_t qk_catalogue_size(void) { return catalogue().size(); }

qk_status qk_catalogue_entry(size_t index, int* number, const char** label, qk_model** model) {
    return guarded([&] {
        const auto& entries = catalogue();
        if (index >= entries.size()) return fail(QK_ERR_DOMAIN, "catalogue index out of range");
        const auto& e = entries[index];
        if (number) *number = e.number;
        if (label) *label = e.label.c_str();
        if (model) *model = new qk_model{e.model};
        return QK_OK;
    });
}

qk_status qk_matched_p(double r, double* out) {
    QK_REQUIRE(out);
    return guarded([&] {
        if (!(r > 0.0 && r < 0.5)) return fail(QK_ERR_DOMAIN, "matched_p: r must lie in (0, 0.5)");
        *out = measures::matched_p(r);
        return QK_OK;
    });
}

qk_status qk_interquantile_range(const qk_model* model, double t, double* out) {
    QK_REQUIRE(model);
    QK_REQUIRE(out);
    return guarded([&] {
        *out = measures::interquantile_range(*model->model, t);
        return QK_OK;
    });
}

qk_status qk_kurtosis_ratio(const qk_model* model, double p, double r, double* out) {
    QK_REQUIRE(model);
    QK_REQUIRE(out);
    return guarded([&] {
        *out = measures::kurtosis_ratio(*model->model, p, r);
        return QK_OK;
    });
}

qk_status qk_model_shape_summary(const qk_model* model, double p, double q, double r,
                           qk_shape_summary* out) {
    QK_REQUIRE(model);
    QK_REQUIRE(out);
    return guarded([&] {
        const auto s = measures::shape_summary(*model->model, QuantileTriple(p, q, r));
        *out = {s.kappa, s.pi, s.tau};
        return QK_OK;
    });
}

qk_status qk_horn_extended(const qk_model* model, double q, double* out) {
    QK_REQUIRE(model);
    QK_REQUIRE(out);
    return guarded([&] {
        *out = measures::horn_extended(*model->model, q);
        return QK_OK;
    });
}

qk_status qk_horn_approx(const qk_model* model, double q, double r, double* out) {
    QK_REQUIRE(model);
    QK_REQUIRE(out);
    return guarded([&] {
        *out = measures::horn_approx(*model->model, q, r);
        return QK_OK;
    });
}

qk_status qk_practical_tail_index(const qk_model* model, double p, double q, qk_tail_side side,
                                  double center, double* out) {
    QK_REQUIRE(model);
    QK_REQUIRE(out);
    return guarded([&] {
        const auto s = side == QK_TAIL_LEFT ? TailSide::left : TailSide::right;
        *out = measures::practical_tail_index(*model->model, p, q, s, center);
        return QK_OK;
    });
}

qk_status qk_model_vst_constants(const qk_model* model, double p, double r, qk_vst_constants* out) {
    QK_REQUIRE(model);
    QK_REQUIRE(out);
    return guarded([&] {
        *out = to_c(estimation::vst_constants_theoretical(*model->model, p, r));
        return QK_OK;
    });
}

qk_status qk_asymptotic_width(const qk_vst_constants* constants, double kappa, double* width,
                              double* relative_width) {
    QK_REQUIRE(constants);
    return guarded([&] {
        const auto w = measures::asymptotic_width(from_c(*constants), kappa);
        if (width) *width = w.width;
        if (relative_width) *relative_width = w.relative_width;
        return QK_OK;
    });
}

qk_status qk_required_sample_size(double alpha, double target_rw, double max_rw_asym,
                                  uint64_t* out) {
    QK_REQUIRE(out);
    return guarded([&] {
        *out = measures::required_sample_size(alpha, target_rw, max_rw_asym);
        return QK_OK;
    });
}

qk_status qk_vst_transform(const qk_vst_constants* constants, size_t n, double x, double* out) {
    QK_REQUIRE(constants);
    QK_REQUIRE(out);
    return guarded([&] {
        *out = inference::vst_transform(from_c(*constants), n, x);
        return QK_OK;
    });
}

qk_status qk_test_statistic(const qk_vst_constants* constants, size_t n, double kappa0,
                            double kappa_hat, double* out) {
    QK_REQUIRE(constants);
    QK_REQUIRE(out);
    return guarded([&] {
        *out = inference::test_statistic(from_c(*constants), n, kappa0, kappa_hat);
        return QK_OK;
    });
}

qk_status qk_confidence_interval(const qk_vst_constants* constants, size_t n, double kappa_hat,
                                 double alpha, qk_interval* out) {
    QK_REQUIRE(constants);
    QK_REQUIRE(out);
    return guarded([&] {
        *out = to_c(inference::confidence_interval(from_c(*constants), n, kappa_hat, alpha));
        return QK_OK;
    });
}

qk_status qk_ratio_interval(const double* data, size_t n, double p, double r, double alpha,
                            double bandwidth_a, qk_ratio_report* out) {
    QK_REQUIRE(out);
    if (n > 0) QK_REQUIRE(data);
    return guarded([&] {
        if (n < SortedSample::kMinimumUserSize) {
            return fail(QK_ERR_INSUFFICIENT_DATA,
                        "insufficient data: need at least " +
                            std::to_string(SortedSample::kMinimumUserSize) + " values, got " +
                            std::to_string(n));
        }
        const auto sample = ingest(data, n);
        const auto fit = inference::ratio_interval(sample, p, r, alpha, rule_for(bandwidth_a));
        if (!fit) {
            return fail(from_failure(fit.failure()),
                        std::string("estimation failed: ") + to_string(fit.failure()));
        }
        *out = {n, p, r, to_c(fit->constants), to_c(fit->interval)};
        return QK_OK;
    });
}

qk_status qk_peakedness_test(const double* data, size_t n, double q, double r, double pi0,
                             double level, double bandwidth_a, qk_test_result* out) {
    QK_REQUIRE(out);
    if (n > 0) QK_REQUIRE(data);
    return guarded([&] {
        if (n < SortedSample::kMinimumUserSize) {
            return fail(QK_ERR_INSUFFICIENT_DATA, "insufficient data");
        }
        const auto sample = ingest(data, n);
        const auto t = inference::peakedness_test(sample, q, r, pi0, level, rule_for(bandwidth_a));
        *out = {t.statistic, t.z_critical, t.p_value, t.reject ? 1 : 0, from_failure(t.failure)};
        return QK_OK;
    });
}

void qk_coverage_config_init(qk_coverage_config* cfg) {
    if (!cfg) return;
    const StudyConfig d;
    *cfg = {d.n, d.reps, 0.0, d.r, d.alpha, d.master_seed, d.bandwidth.a, 0};
}

void qk_power_config_init(qk_power_config* cfg) {
    if (!cfg) return;
    const PowerConfig d;
    *cfg = {d.n, d.reps, d.q, d.r, 0.0, d.level, d.master_seed, d.bandwidth.a, 0};
}

qk_status qk_coverage_study(const qk_model* model, const qk_coverage_config* cfg,
                            qk_coverage_report* out) {
    QK_REQUIRE(model);
    QK_REQUIRE(cfg);
    QK_REQUIRE(out);
    return guarded([&] {
        StudyConfig sc;
        sc.model = model->model;
        sc.n = cfg->n;
        sc.reps = cfg->reps;
        sc.p = cfg->p;
        sc.r = cfg->r;
        sc.alpha = cfg->alpha;
        sc.master_seed = cfg->seed;
        sc.bandwidth = rule_for(cfg->bandwidth_a);
        sc.workers = cfg->workers;
        const auto rep = simulation::coverage_study(sc);
        *out = {rep.n,        rep.level,       rep.true_kappa,     rep.mean_estimate,
                rep.coverage, rep.mean_rw_asym_hat, rep.failures, rep.reps_effective,
                rep.seed};
        return QK_OK;
    });
}

qk_status qk_power_study(const char* family, const double* grid, size_t grid_len,
                         const qk_power_config* cfg, qk_power_point* out) {
    QK_REQUIRE(family);
    QK_REQUIRE(cfg);
    if (grid_len > 0) {
        QK_REQUIRE(grid);
        QK_REQUIRE(out);
    }
    return guarded([&] {
        const auto fam = power_family(family);
        PowerConfig pc;
        pc.grid.assign(grid, grid + grid_len);
        pc.n = cfg->n;
        pc.reps = cfg->reps;
        pc.q = cfg->q;
        pc.r = cfg->r;
        pc.pi0 = cfg->pi0;
        pc.level = cfg->level;
        pc.master_seed = cfg->seed;
        pc.bandwidth = rule_for(cfg->bandwidth_a);
        pc.workers = cfg->workers;
        const auto points = simulation::power_study(fam, pc);
        for (size_t i = 0; i < points.size(); ++i) {
            out[i] = {points[i].parameter, points[i].x, points[i].rejection_rate, points[i].failures};
        }
        return QK_OK;
    });
}

}  // extern "C"
