#include "rcb/robust_mean.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

#include "rcb/errors.hpp"

namespace rcb {

double psi(double x) noexcept {
    const double a = std::abs(x);
    const double v = std::log1p(a + 0.5 * a * a);
    return x >= 0.0 ? v : -v;
}

double psi_derivative(double x) noexcept {
    const double a = std::abs(x);
    return (1.0 + a) / (1.0 + a + 0.5 * a * a);
}

namespace {

void validate(std::span<const double> samples, double theta, const CatoniOptions& options,
              std::optional<double> range_bound) {
    if (samples.empty()) throw PreconditionError("catoni: samples must be nonempty");
    if (!(theta > 0.0) || !std::isfinite(theta))
        throw PreconditionError("catoni: theta must be positive and finite");
    if (!(options.tolerance > 0.0)) throw PreconditionError("catoni: tolerance must be positive");
    if (options.max_iterations < 1)
        throw PreconditionError("catoni: max_iterations must be positive");
    for (double z : samples) {
        if (!std::isfinite(z)) throw PreconditionError("catoni: non-finite sample");
        if (range_bound && std::abs(z) > *range_bound)
            throw PreconditionError("catoni: sample exceeds range bound");
    }
}

}  // namespace

CatoniQuery::CatoniQuery(std::vector<double> samples, double theta, CatoniOptions options,
                         std::optional<double> range_bound)
    : samples_(std::move(samples)), theta_(theta), options_(options), range_bound_(range_bound) {
    validate(samples_, theta_, options_, range_bound_);
}

CatoniResidual catoni_residual(std::span<const double> samples, double theta, double x) {
    double value = 0.0;
    double slope = 0.0;
    for (double z : samples) {
        const double u = theta * (z - x);
        value += psi(u);
        slope -= theta * psi_derivative(u);
    }
    return {value, slope};
}

double catoni_mean(const CatoniQuery& query) {
    return catoni_mean(query.samples(), query.theta(), query.options());
}

double catoni_mean(std::span<const double> samples, double theta, const CatoniOptions& options) {
    validate(samples, theta, options, std::nullopt);
    if (samples.size() == 1) return samples.front();

    const auto [min_it, max_it] = std::minmax_element(samples.begin(), samples.end());
    if (*min_it == *max_it) return *min_it;

    // g(lo) > 0 > g(hi) on this bracket.
    double lo = *min_it - 1.0 / theta;
    double hi = *max_it + 1.0 / theta;
    const double tol = options.tolerance;

    double x = std::clamp(empirical_mean(samples), lo, hi);
    double width_two_steps_ago = std::numeric_limits<double>::infinity();
    double width_one_step_ago = width_two_steps_ago;

    for (int it = 0; it < options.max_iterations; ++it) {
        const CatoniResidual r = catoni_residual(samples, theta, x);
        if (r.value == 0.0) return x;
        if (r.value > 0.0) {
            lo = x;
        } else {
            hi = x;
        }
        if (hi - lo <= 2.0 * tol) return 0.5 * (lo + hi);

        const double mid = 0.5 * (lo + hi);
        double next = x - r.value / r.slope;
        const bool stalled = (hi - lo) > 0.5 * width_two_steps_ago;
        if (!(next > lo && next < hi) || stalled) {
            next = mid;
        } else if (std::abs(next - x) < tol) {
            // Newton has settled; probe either side to close the bracket.
            const double a = std::max(lo, next - tol);
            const double b = std::min(hi, next + tol);
            if (catoni_residual(samples, theta, a).value >= 0.0) lo = a;
            if (catoni_residual(samples, theta, b).value <= 0.0) hi = b;
            if (hi - lo <= 2.0 * tol) return 0.5 * (lo + hi);
            next = 0.5 * (lo + hi);
        }
        if (next == lo || next == hi) next = mid;
        width_two_steps_ago = width_one_step_ago;
        width_one_step_ago = hi - lo;
        x = next;
    }

    std::ostringstream msg;
    msg << "catoni: no convergence to tolerance " << tol << " within " << options.max_iterations
        << " iterations (bracket [" << lo << ", " << hi << "], theta " << theta << ")";
    throw ConvergenceError(msg.str());
}

double empirical_mean(std::span<const double> samples) {
    if (samples.empty()) throw PreconditionError("empirical_mean: samples must be nonempty");
    return std::accumulate(samples.begin(), samples.end(), 0.0) /
           static_cast<double>(samples.size());
}

double deviation_bound(const DeviationBoundInput& in) {
    const bool finite = std::isfinite(in.variance_budget) && std::isfinite(in.mean_spread) &&
                        std::isfinite(in.theta) && std::isfinite(in.log_factor) &&
                        std::isfinite(in.offset);
    if (!finite) throw PreconditionError("deviation_bound: non-finite input");
    if (in.variance_budget < 0.0 || in.mean_spread < 0.0 || in.offset < 0.0)
        throw PreconditionError("deviation_bound: negative variance, spread or offset");
    if (!(in.theta > 0.0)) throw PreconditionError("deviation_bound: theta must be positive");
    if (!(in.log_factor > 0.0)) throw PreconditionError("deviation_bound: log factor must be positive");
    if (in.sample_count < 1) throw PreconditionError("deviation_bound: sample_count must be >= 1");

    const double t = static_cast<double>(in.sample_count);
    return in.theta * (in.variance_budget + in.mean_spread) / t +
           4.0 * in.log_factor * in.log_factor / (in.theta * t) + in.offset / t;
}

double catoni_log_factor_squared(double range, double theta_low, double theta_high,
                                 std::size_t sample_count, double offset, double delta) {
    if (!(range > 0.0) || !(theta_low > 0.0) || !(theta_high > theta_low) || sample_count < 1 ||
        !(offset > 0.0) || !(delta > 0.0 && delta < 1.0))
        throw PreconditionError("catoni_log_factor_squared: invalid parameters");
    const double t = static_cast<double>(sample_count);
    const double grid = 48.0 * range * (1.0 + 2.0 * theta_high * range) * t * t /
                        (std::min(1.0, theta_low) * offset * offset) *
                        std::log(theta_high / theta_low);
    return 4.0 * std::log(grid / delta);
}

double sensitivity_delta(std::span<const double> samples, std::span<const double> perturbed,
                         double theta, double perturbed_theta, double range) {
    if (samples.size() != perturbed.size() || samples.empty())
        throw PreconditionError("sensitivity_delta: sample sets must be nonempty and equal length");
    double sum = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) sum += theta * std::abs(samples[i] - perturbed[i]);
    return sum / static_cast<double>(samples.size()) + 3.0 * range * std::abs(theta - perturbed_theta);
}

double sensitivity_bound(double delta, double theta, double range) {
    if (!(delta >= 0.0) || !(theta > 0.0) || !(range > 0.0))
        throw PreconditionError("sensitivity_bound: need delta >= 0, theta > 0, range > 0");
    const double limit = std::min(1.0, theta * theta * range * range) / 18.0;
    if (delta > limit) {
        std::ostringstream msg;
        msg << "sensitivity_bound: bound inapplicable, delta " << delta << " exceeds " << limit;
        throw PreconditionError(msg.str());
    }
    return (1.0 + 2.0 * theta * range) / theta * delta + std::sqrt(2.0 * delta / (theta * theta));
}

}  // namespace rcb
