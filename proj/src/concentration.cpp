#include "rcb/concentration.hpp"

#include <algorithm>
#include <cmath>

#include "rcb/errors.hpp"
#include "rcb/robust_mean.hpp"
#include "rcb/rng.hpp"

namespace rcb {

double sample_quantile(std::vector<double> values, double level) {
    if (values.empty()) throw PreconditionError("sample_quantile: no values");
    if (!(level >= 0.0 && level <= 1.0)) throw PreconditionError("sample_quantile: level outside [0, 1]");
    std::sort(values.begin(), values.end());
    const double pos = level * static_cast<double>(values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(values.size() - 1, lo + 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

ConcentrationReport concentration_experiment(const ConcentrationSpec& spec) {
    if (spec.sample_count < 1 || spec.trials < 1)
        throw PreconditionError("concentration: sample count and trials must be positive");
    if (!(spec.delta > 0.0 && spec.delta < 1.0)) throw PreconditionError("concentration: delta outside (0, 1)");
    if (spec.grid_points < 2) throw PreconditionError("concentration: need at least two grid points");

    const RewardDistribution& dist = spec.distribution;
    const double n = static_cast<double>(spec.sample_count);
    ConcentrationReport rep;
    rep.trials = spec.trials;
    rep.mean = dist.mean();
    rep.variance_budget = n * dist.variance();
    for (double v : dist.support()) rep.range = std::max(rep.range, std::abs(v));
    if (rep.range == 0.0) rep.range = 1.0;

    std::vector<double> catoni_err;
    std::vector<double> mean_err;
    catoni_err.reserve(spec.trials);
    mean_err.reserve(spec.trials);
    std::vector<double> samples(spec.sample_count);

    if (rep.variance_budget == 0.0) {
        // Every estimator is exact; theta is irrelevant.
        rep.theta_reference = rep.theta_low = rep.theta_high = rep.theta_star = 1.0;
        rep.theta_grid = {1.0};
        for (std::size_t k = 0; k < spec.trials; ++k) {
            catoni_err.push_back(0.0);
            mean_err.push_back(0.0);
        }
    } else {
        const double v = rep.variance_budget;
        rep.theta_reference = std::sqrt(2.0 * std::log(1.0 / spec.delta) / v);
        rep.theta_low = 0.5 * rep.theta_reference;
        rep.theta_high = 2.0 * rep.theta_reference;
        rep.log_factor_sq = catoni_log_factor_squared(rep.range, rep.theta_low, rep.theta_high,
                                                      spec.sample_count, spec.offset, spec.delta);
        const double iota0 = std::sqrt(rep.log_factor_sq);
        rep.theta_star = std::clamp(2.0 * iota0 / std::sqrt(v), rep.theta_low, rep.theta_high);
        const double ratio = rep.theta_high / rep.theta_low;
        for (std::size_t g = 0; g < spec.grid_points; ++g)
            rep.theta_grid.push_back(rep.theta_low *
                                     std::pow(ratio, static_cast<double>(g) /
                                                         static_cast<double>(spec.grid_points - 1)));
        const double fixed_radius = std::sqrt(2.0 * v * std::log(2.0 / spec.delta)) / n;

        std::size_t failures = 0;
        std::size_t fixed_failures = 0;
        for (std::size_t k = 0; k < spec.trials; ++k) {
            CounterRng rng(spec.seed, k, Stream::concentration);
            for (double& z : samples) z = dist.draw(rng);
            bool failed = false;
            for (double theta : rep.theta_grid) {
                const double est = catoni_mean(samples, theta);
                const double bound = deviation_bound(
                    {v, 0.0, theta, spec.sample_count, iota0, spec.offset});
                if (std::abs(est - rep.mean) > bound) failed = true;
            }
            failures += failed;
            const double at_ref = catoni_mean(samples, rep.theta_reference);
            fixed_failures += std::abs(at_ref - rep.mean) > fixed_radius;
            catoni_err.push_back(std::abs(catoni_mean(samples, rep.theta_star) - rep.mean));
            mean_err.push_back(std::abs(empirical_mean(samples) - rep.mean));
        }
        rep.failure_fraction = static_cast<double>(failures) / static_cast<double>(spec.trials);
        rep.fixed_theta_failure_fraction =
            static_cast<double>(fixed_failures) / static_cast<double>(spec.trials);
    }
    for (double level : {0.5, 0.9, 0.99, 0.999})
        rep.quantiles.push_back({level, sample_quantile(catoni_err, level), sample_quantile(mean_err, level)});
    return rep;
}

}  // namespace rcb
