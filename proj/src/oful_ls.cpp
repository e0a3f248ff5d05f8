#include "rcb/oful_ls.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rcb/errors.hpp"

namespace rcb {

double least_squares_radius(double noise_range, std::size_t num_functions, std::uint64_t horizon,
                            double delta, double constant_scale) {
    const double log_arg = std::log(static_cast<double>(num_functions)) +
                           std::log(static_cast<double>(horizon)) - std::log(delta);
    return constant_scale * noise_range * std::sqrt(std::max(1.0, log_arg));
}

OfulLeastSquares::OfulLeastSquares(std::shared_ptr<const HypothesisClass> cls, AgentConfig config,
                                   ProblemInfo problem)
    : cls_(std::move(cls)),
      config_(config),
      beta_hat_(least_squares_radius(problem.noise_range, cls_->size(), problem.horizon, config.delta,
                                     config.constant_scale)),
      accumulator_(cls_),
      squared_error_(cls_->size(), 0.0),
      version_space_(full_version_space(cls_->size())) {
    config_.validate();
}

Selection OfulLeastSquares::select(std::span<const ActionId> context) {
    return {optimistic_argmax(*cls_, version_space_.active, context).action,
            SelectionMode::optimistic, std::nullopt};
}

void OfulLeastSquares::observe(ActionId x, double reward, double) {
    accumulator_.update(x, 1.0);
    for (FunctionId f = 0; f < cls_->size(); ++f) {
        const double r = (*cls_)(f, x) - reward;
        squared_error_[f] += r * r;
    }
    FunctionId best = cls_->size();
    double best_value = std::numeric_limits<double>::infinity();
    for (FunctionId f = 0; f < cls_->size(); ++f)
        if (version_space_.active[f] && squared_error_[f] < best_value) {
            best_value = squared_error_[f];
            best = f;
        }
    version_space_ =
        refit_version_space(accumulator_, version_space_.active, best, beta_hat_ * beta_hat_);
    last_ = RoundDiagnostics{1.0, std::nullopt, version_space_.active_count(), beta_hat_, false};
}

}  // namespace rcb
