#pragma once
// Monte-Carlo check of the Catoni deviation bound on i.i.d. samples.

#include <cstdint>
#include <vector>

#include "rcb/environments.hpp"

namespace rcb {

struct ConcentrationSpec {
    RewardDistribution distribution = RewardDistribution::deterministic(0.0);
    std::size_t sample_count = 200;  // n
    std::size_t trials = 2000;       // M
    double delta = 0.05;
    std::uint64_t seed = 1;
    std::size_t grid_points = 9;     // theta values checked on [a, A]
    double offset = 1.0;             // epsilon in the bound
};

struct QuantileRow {
    double level;
    double catoni;
    double empirical;
};

struct ConcentrationReport {
    double mean = 0.0;
    double variance_budget = 0.0;  // V = n Var
    double range = 0.0;            // max |Z|
    double theta_reference = 0.0;  // sqrt(2 log(1/delta) / V)
    double theta_low = 0.0;        // a
    double theta_high = 0.0;       // A
    double theta_star = 0.0;       // clamp(2 iota_0 / sqrt(V), a, A)
    double log_factor_sq = 0.0;    // iota_0^2
    std::vector<double> theta_grid;
    std::size_t trials = 0;
    // Trials where the bound failed at some grid theta.
    double failure_fraction = 0.0;
    // Trials where |Catoni - mean| > sqrt(2 V log(2/delta)) / n at theta_reference.
    double fixed_theta_failure_fraction = 0.0;
    std::vector<QuantileRow> quantiles;  // |error| at theta_star vs. empirical mean
};

ConcentrationReport concentration_experiment(const ConcentrationSpec& spec);

// Linear-interpolated sample quantile (type 7) of a copy of `values`.
double sample_quantile(std::vector<double> values, double level);

}  // namespace rcb
