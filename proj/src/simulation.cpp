#include "quantkurt/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace quantkurt {

PowerFamily power_family(const std::string& name) {
    if (name == "beta") {
        return {"beta", [](double b) { return make_beta(b, b); },
                [](double b) { return b / (b + 1.0); }};
    }
    if (name == "tmix") {
        return {"tmix", [](double delta) { return make_t_half_mixture(0.5, delta); },
                [](double delta) { return delta; }};
    }
    throw std::invalid_argument("unknown power family '" + name + "' (expected beta or tmix)");
}

namespace simulation {

void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& fn) {
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(count, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(count);
                return;
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
    pool.clear();
    if (error) std::rethrow_exception(error);
}

namespace {

struct ReplicateResult {
    bool failed = true;
    bool covered = false;
    double estimate = 0.0;
    double rw_hat = 0.0;
};

}  // namespace

SimulationReport coverage_study(const StudyConfig& cfg) {
    if (!cfg.model) throw std::invalid_argument("coverage_study: no model");
    if (cfg.reps < 1) throw std::invalid_argument("coverage_study: reps must be >= 1");
    const double p = cfg.p > 0.0 ? cfg.p : measures::matched_p(cfg.r);
    if (std::floor(static_cast<double>(cfg.n) * p) < 1.0) {
        throw std::domain_error("coverage_study: n*p < 1");
    }
    const double true_kappa = measures::kurtosis_ratio(*cfg.model, p, cfg.r);
    const double z = special::std_normal_quantile(1.0 - 0.5 * cfg.alpha);
    const double root_n = std::sqrt(static_cast<double>(cfg.n));

    std::vector<ReplicateResult> results(cfg.reps);
    parallel_for(cfg.reps, cfg.workers, [&](std::size_t i) {
        auto stream = Stream::derive(cfg.master_seed, i);
        const auto sample = SortedSample::from_unsorted(cfg.model->sample(stream, cfg.n));
        const auto fit = inference::ratio_interval(sample, p, cfg.r, cfg.alpha, cfg.bandwidth);
        if (!fit) return;
        auto& out = results[i];
        out.failed = false;
        out.covered = fit->interval.contains(true_kappa);
        out.estimate = fit->estimate;
        out.rw_hat = root_n * fit->interval.relative_width / z;
    });

    SimulationReport report;
    report.model = cfg.model->spec();
    report.n = cfg.n;
    report.level = 1.0 - cfg.alpha;
    report.true_kappa = true_kappa;
    report.seed = cfg.master_seed;
    double sum_estimate = 0.0, sum_rw = 0.0;
    std::size_t covered = 0;
    for (const auto& r : results) {
        if (r.failed) {
            ++report.failures;
            continue;
        }
        ++report.reps_effective;
        covered += r.covered ? 1 : 0;
        sum_estimate += r.estimate;
        sum_rw += r.rw_hat;
    }
    if (report.reps_effective > 0) {
        const double m = static_cast<double>(report.reps_effective);
        report.coverage = static_cast<double>(covered) / m;
        report.mean_estimate = sum_estimate / m;
        report.mean_rw_asym_hat = sum_rw / m;
    } else {
        report.coverage = report.mean_estimate = report.mean_rw_asym_hat = std::nan("");
    }
    return report;
}

std::vector<PowerPoint> power_study(const PowerFamily& family, const PowerConfig& cfg) {
    if (cfg.reps < 1) throw std::invalid_argument("power_study: reps must be >= 1");
    const double pi0 = cfg.pi0 > 0.0 ? cfg.pi0 : (1.0 - 2.0 * cfg.q) / (1.0 - 2.0 * cfg.r);
    std::vector<PowerPoint> points;
    points.reserve(cfg.grid.size());
    for (std::size_t g = 0; g < cfg.grid.size(); ++g) {
        const double param = cfg.grid[g];
        const auto model = family.make(param);
        const std::uint64_t point_seed = splitmix64(cfg.master_seed + 0x9E3779B97F4A7C15ULL * (g + 1));
        std::vector<signed char> outcome(cfg.reps, 0);  // 1 reject, 0 accept, -1 failed
        parallel_for(cfg.reps, cfg.workers, [&](std::size_t i) {
            auto stream = Stream::derive(point_seed, i);
            const auto sample = SortedSample::from_unsorted(model->sample(stream, cfg.n));
            const auto test =
                inference::peakedness_test(sample, cfg.q, cfg.r, pi0, cfg.level, cfg.bandwidth);
            outcome[i] = test.failure != EstimationFailure::none ? -1 : (test.reject ? 1 : 0);
        });
        PowerPoint pt;
        pt.parameter = param;
        pt.x = family.abscissa(param);
        std::size_t rejections = 0;
        for (auto o : outcome) {
            if (o < 0) ++pt.failures;
            if (o > 0) ++rejections;
        }
        pt.rejection_rate = static_cast<double>(rejections) / static_cast<double>(cfg.reps);
        points.push_back(pt);
    }
    return points;
}

}  // namespace simulation
}  // namespace quantkurt
