#pragma once

#include "quantkurt/inference.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace quantkurt {

struct StudyConfig {
    ModelPtr model;
    std::size_t n = 400;
    std::size_t reps = 2000;
    double p = 0.0;  // 0 selects matched_p(r)
    double r = 1.0 / 3.0;
    double alpha = 0.05;
    std::uint64_t master_seed = 1;
    BandwidthRule bandwidth;
    unsigned workers = 0;  // 0: hardware concurrency
};

struct SimulationReport {
    std::string model;
    std::size_t n = 0;
    double level = 0.0;
    double true_kappa = 0.0;
    double mean_estimate = 0.0;
    double coverage = 0.0;          // over non-failed replicates
    double mean_rw_asym_hat = 0.0;  // average of sqrt(n) (U-L)/kappa_hat / z
    std::size_t failures = 0;
    std::size_t reps_effective = 0;
    std::uint64_t seed = 0;
};

/// Builds the model for one grid value of a one-parameter family, and the
/// abscissa used when plotting that value.
struct PowerFamily {
    std::string name;
    std::function<ModelPtr(double)> make;
    std::function<double(double)> abscissa;
};

/// "beta": Beta(b, b) plotted at b/(b+1). "tmix": 50:50 t_{1/2} mixture at
/// separation delta, plotted at delta.
PowerFamily power_family(const std::string& name);

struct PowerConfig {
    std::vector<double> grid;
    std::size_t n = 200;
    std::size_t reps = 1000;
    double q = 0.25;
    double r = 0.375;
    double pi0 = 0.0;  // 0 selects (1-2q)/(1-2r)
    double level = 0.05;
    std::uint64_t master_seed = 1;
    BandwidthRule bandwidth;
    unsigned workers = 0;
};

struct PowerPoint {
    double parameter = 0.0;
    double x = 0.0;
    double rejection_rate = 0.0;  // rejections / reps; failed replicates do not reject
    std::size_t failures = 0;
};

namespace simulation {

/// Runs fn(i) for i in [0, count) on up to `workers` threads.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& fn);

SimulationReport coverage_study(const StudyConfig& cfg);

std::vector<PowerPoint> power_study(const PowerFamily& family, const PowerConfig& cfg);

}  // namespace simulation
}  // namespace quantkurt
