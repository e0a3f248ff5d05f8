#pragma once
// Catoni's robust mean estimator and the deviation / sensitivity bounds
// that go with it.
//
// The estimate is the unique zero of
//
//   g(x) = sum_i psi(theta * (Z_i - x)),
//   psi(u) = log(1 + u + u^2/2)    for u >= 0,
//          = -log(1 - u + u^2/2)   for u <  0.
//
// psi is odd and increasing, so g is strictly decreasing in x and changes
// sign inside [min Z, max Z]. All functions here are pure.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace rcb {

double psi(double x) noexcept;

// psi'(u) = (1 + |u|) / (1 + |u| + u^2/2), always in (0, 1].
double psi_derivative(double x) noexcept;

struct CatoniOptions {
    double tolerance = 1e-10;  // absolute, on the returned location
    int max_iterations = 200;
};

// Validated input bundle. Rejects empty samples, theta <= 0, non-finite
// samples, and samples outside +-range_bound when a bound is supplied.
class CatoniQuery {
public:
    CatoniQuery(std::vector<double> samples, double theta, CatoniOptions options = {},
                std::optional<double> range_bound = std::nullopt);

    std::span<const double> samples() const noexcept { return samples_; }
    double theta() const noexcept { return theta_; }
    const CatoniOptions& options() const noexcept { return options_; }
    std::optional<double> range_bound() const noexcept { return range_bound_; }

private:
    std::vector<double> samples_;
    double theta_;
    CatoniOptions options_;
    std::optional<double> range_bound_;
};

// g(x) and g'(x) for the estimating equation.
struct CatoniResidual {
    double value;
    double slope;  // always negative for nonempty samples
};
CatoniResidual catoni_residual(std::span<const double> samples, double theta, double x);

double catoni_mean(const CatoniQuery& query);

// Unchecked-allocation entry point used on hot paths. Performs the same
// validation as CatoniQuery. Throws ConvergenceError when the tolerance
// cannot be reached within max_iterations.
double catoni_mean(std::span<const double> samples, double theta,
                   const CatoniOptions& options = {});

double empirical_mean(std::span<const double> samples);

struct DeviationBoundInput {
    double variance_budget = 0.0;  // V: sum of conditional variances
    double mean_spread = 0.0;      // sum_i (mu_i - mu_bar)^2
    double theta = 1.0;
    std::size_t sample_count = 1;  // t
    double log_factor = 1.0;       // iota_0
    double offset = 0.0;           // epsilon
};

// theta (V + spread) / t + 4 iota_0^2 / (theta t) + epsilon / t
double deviation_bound(const DeviationBoundInput& input);

// iota_0^2 = 4 log( 48 R (1 + 2 A R) t^2 / (min(1, a) eps^2 delta) * log(A / a) ),
// the log factor that makes the deviation bound hold uniformly for theta in [a, A].
double catoni_log_factor_squared(double range, double theta_low, double theta_high,
                                 std::size_t sample_count, double offset, double delta);

// Perturbation size for the sensitivity bound:
// (1/t) sum_i theta |Z_i - Z~_i| + 3 R |theta - theta~|.
double sensitivity_delta(std::span<const double> samples, std::span<const double> perturbed,
                         double theta, double perturbed_theta, double range);

// (1 + 2 theta R) / theta * delta + sqrt(2 delta / theta^2).
// Requires delta <= min(1, theta^2 R^2) / 18, otherwise throws PreconditionError.
double sensitivity_bound(double delta, double theta, double range);

}  // namespace rcb
