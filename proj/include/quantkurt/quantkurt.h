/*
 * quantkurt C API.
 *
 * Quantile measures of kurtosis, peakedness and tail-weight: exact population
 * values for a catalogue of distributions, distribution-free confidence
 * intervals for ratios of interquantile ranges, and seeded Monte Carlo
 * coverage and power studies.
 *
 * Every function returns a qk_status. On failure, qk_last_error() returns a
 * message describing the most recent failure on the calling thread. Output
 * parameters are left untouched on failure.
 */
#ifndef QUANTKURT_H
#define QUANTKURT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(QUANTKURT_BUILDING)
#    define QK_API __declspec(dllexport)
#  else
#    define QK_API __declspec(dllimport)
#  endif
#else
#  define QK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qk_status {
    QK_OK = 0,
    QK_ERR_INVALID_ARGUMENT = 1,      /* null pointer or malformed configuration */
    QK_ERR_DOMAIN = 2,                /* argument outside its mathematical domain */
    QK_ERR_PARSE = 3,                 /* malformed model specification */
    QK_ERR_INSUFFICIENT_DATA = 4,     /* fewer than qk_min_sample_size() values */
    QK_ERR_DEGENERATE_TIES = 5,       /* zero spacing between required order statistics */
    QK_ERR_NEGATIVE_DISCRIMINANT = 6, /* estimated 4 a0 a2 - a1^2 <= 0 */
    QK_ERR_SINGULAR_MODEL = 7,        /* zero or unbounded density at a required quantile */
    QK_ERR_NUMERIC = 8,               /* root finding failed */
    QK_ERR_BUFFER_TOO_SMALL = 9,
    QK_ERR_INTERNAL = 10
} qk_status;

typedef enum qk_tail_side { QK_TAIL_LEFT = 0, QK_TAIL_RIGHT = 1 } qk_tail_side;

/* Opaque, immutable distribution. Safe to share between threads. */
typedef struct qk_model qk_model;

typedef struct qk_vst_constants {
    double a0, a1, a2;
    double d2; /* 4 a0 a2 - a1^2 */
} qk_vst_constants;

typedef struct qk_shape_summary {
    double kappa; /* R_p / R_r */
    double pi;    /* R_q / R_r */
    double tau;   /* R_p / R_q */
} qk_shape_summary;

typedef struct qk_interval {
    double estimate;
    double lower;
    double upper;
    double level;
    double relative_width;
} qk_interval;

/* Result of estimating R_p/R_r with its interval from one data vector. */
typedef struct qk_ratio_report {
    size_t n;
    double p, r;
    qk_vst_constants constants;
    qk_interval interval;
} qk_ratio_report;

typedef struct qk_test_result {
    double statistic;
    double z_critical;
    double p_value;
    int reject;
    qk_status failure; /* QK_OK, or why constants could not be estimated */
} qk_test_result;

typedef struct qk_coverage_config {
    size_t n;
    size_t reps;
    double p; /* 0 selects matched_p(r) */
    double r;
    double alpha;
    uint64_t seed;
    double bandwidth_a;
    unsigned workers; /* 0: hardware concurrency */
} qk_coverage_config;

typedef struct qk_coverage_report {
    size_t n;
    double level;
    double true_kappa;
    double mean_estimate;
    double coverage;
    double mean_rw_asym_hat;
    size_t failures;
    size_t reps_effective;
    uint64_t seed;
} qk_coverage_report;

typedef struct qk_power_config {
    size_t n;
    size_t reps;
    double q;
    double r;
    double pi0; /* 0 selects (1-2q)/(1-2r) */
    double level;
    uint64_t seed;
    double bandwidth_a;
    unsigned workers;
} qk_power_config;

typedef struct qk_power_point {
    double parameter;
    double x;
    double rejection_rate;
    size_t failures;
} qk_power_point;

QK_API const char* qk_version(void);
QK_API const char* qk_status_string(qk_status status);
QK_API const char* qk_last_error(void);
QK_API size_t qk_min_sample_size(void);
QK_API double qk_default_bandwidth_a(void);

/* ---- special functions ---- */
QK_API qk_status qk_std_normal_cdf(double x, double* out);
QK_API qk_status qk_std_normal_quantile(double t, double* out);

/* ---- models ---- */
QK_API qk_status qk_model_parse(const char* spec, qk_model** out);
QK_API void qk_model_free(qk_model* model);
/* Writes the canonical spec (NUL-terminated) into buf. *needed receives the
 * required capacity including the terminator; buf may be NULL when cap is 0. */
QK_API qk_status qk_model_spec(const qk_model* model, char* buf, size_t cap, size_t* needed);
QK_API qk_status qk_model_cdf(const qk_model* model, double x, double* out);
QK_API qk_status qk_model_quantile(const qk_model* model, double t, double* out);
/* +infinity where the density diverges. */
QK_API qk_status qk_model_density(const qk_model* model, double x, double* out);
QK_API qk_status qk_model_sparsity(const qk_model* model, double t, double* out);
QK_API qk_status qk_model_sample(const qk_model* model, uint64_t seed, size_t n, double* out);

/* The twenty reference models. label points to static storage. */
QK_API size_t qk_catalogue_size(void);
QK_API qk_status qk_catalogue_entry(size_t index, int* number, const char** label,
                                    qk_model** model);

/* ---- population measures ---- */
QK_API qk_status qk_matched_p(double r, double* out);
QK_API qk_status qk_interquantile_range(const qk_model* model, double t, double* out);
QK_API qk_status qk_kurtosis_ratio(const qk_model* model, double p, double r, double* out);
QK_API qk_status qk_model_shape_summary(const qk_model* model, double p, double q, double r,
                                  qk_shape_summary* out);
QK_API qk_status qk_horn_extended(const qk_model* model, double q, double* out);
QK_API qk_status qk_horn_approx(const qk_model* model, double q, double r, double* out);
QK_API qk_status qk_practical_tail_index(const qk_model* model, double p, double q,
                                         qk_tail_side side, double center, double* out);
QK_API qk_status qk_model_vst_constants(const qk_model* model, double p, double r,
                                  qk_vst_constants* out);
QK_API qk_status qk_asymptotic_width(const qk_vst_constants* constants, double kappa,
                                     double* width, double* relative_width);
QK_API qk_status qk_required_sample_size(double alpha, double target_rw, double max_rw_asym,
                                         uint64_t* out);

/* ---- inference ---- */
QK_API qk_status qk_vst_transform(const qk_vst_constants* constants, size_t n, double x,
                                  double* out);
QK_API qk_status qk_test_statistic(const qk_vst_constants* constants, size_t n, double kappa0,
                                   double kappa_hat, double* out);
QK_API qk_status qk_confidence_interval(const qk_vst_constants* constants, size_t n,
                                        double kappa_hat, double alpha, qk_interval* out);
/* Estimates R_p/R_r, its VST constants and a 100(1-alpha)% interval from
 * unsorted data. bandwidth_a <= 0 selects the default. */
QK_API qk_status qk_ratio_interval(const double* data, size_t n, double p, double r,
                                   double alpha, double bandwidth_a, qk_ratio_report* out);
/* Two-sided test of R_q/R_r = pi0. Estimation failures are reported in
 * out->failure with reject = 0 and QK_OK returned. */
QK_API qk_status qk_peakedness_test(const double* data, size_t n, double q, double r, double pi0,
                                    double level, double bandwidth_a, qk_test_result* out);

/* ---- simulation ---- */
QK_API void qk_coverage_config_init(qk_coverage_config* cfg);
QK_API void qk_power_config_init(qk_power_config* cfg);
QK_API qk_status qk_coverage_study(const qk_model* model, const qk_coverage_config* cfg,
                                   qk_coverage_report* out);
/* family: "beta" (Beta(b,b), x = b/(b+1)) or "tmix" (50:50 t_{1/2} mixture,
 * x = delta). out must hold grid_len points. */
QK_API qk_status qk_power_study(const char* family, const double* grid, size_t grid_len,
                                const qk_power_config* cfg, qk_power_point* out);

#ifdef __cplusplus
}
#endif

#endif /* QUANTKURT_H */
