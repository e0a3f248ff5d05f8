#include "rcb/catoni_oful.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rcb/errors.hpp"

namespace rcb {

namespace {

double log_or_one(double log_value) { return std::max(1.0, log_value); }

}  // namespace

double known_variance_iota(double noise_range, double range_bound, std::size_t num_functions,
                           std::uint64_t horizon, double delta) {
    const double log_arg = std::log(720.0) + 2.0 * std::log(noise_range) + 3.0 * std::log(range_bound) +
                           2.0 * std::log(static_cast<double>(num_functions)) +
                           5.0 * std::log(static_cast<double>(horizon)) - std::log(delta);
    return std::sqrt(log_or_one(log_arg));
}

double known_variance_radius(double noise_range, double range_bound, std::size_t num_functions,
                             std::uint64_t horizon, double delta, double constant_scale) {
    const double log_arg = std::log(noise_range) + std::log(range_bound) +
                           std::log(static_cast<double>(num_functions)) +
                           std::log(static_cast<double>(horizon)) - std::log(delta);
    return constant_scale * std::sqrt(log_or_one(log_arg));
}

CatoniOful::CatoniOful(std::shared_ptr<const HypothesisClass> cls, AgentConfig config,
                       ProblemInfo problem)
    : cls_(std::move(cls)),
      config_(config),
      problem_(problem),
      alpha_(config.weight_floor(problem.horizon)),
      iota_(config.constant_scale * known_variance_iota(problem.noise_range, cls_->range_bound(),
                                                        cls_->size(), problem.horizon, config.delta)),
      beta_hat_(known_variance_radius(problem.noise_range, cls_->range_bound(), cls_->size(),
                                      problem.horizon, config.delta, config.constant_scale)),
      accumulator_(cls_),
      version_space_(full_version_space(cls_->size())) {
    config_.validate();
}

Selection CatoniOful::select(std::span<const ActionId> context) {
    return {optimistic_argmax(*cls_, version_space_.active, context).action,
            SelectionMode::optimistic, std::nullopt};
}

double CatoniOful::weight(ActionId x, double sigma) const {
    const double d = eluder_coefficient(accumulator_, version_space_.active, x, 1.0, config_.lambda);
    return std::max({alpha_, sigma, std::sqrt(4.0 * iota_ * cls_->range_bound() * d)});
}

double CatoniOful::theta(FunctionId f, FunctionId g) const {
    const double v = accumulator_.pair_distance(f, g);
    const double inflation = 1.0 + std::sqrt(beta_hat_ * beta_hat_ + config_.lambda) / (2.0 * iota_);
    const double eps = config_.epsilon_offset;
    return 2.0 * iota_ / std::sqrt(v * inflation + eps * eps);
}

double CatoniOful::excess_loss(FunctionId f, FunctionId g) const {
    const std::size_t t = history_.size();
    if (t == 0 || f == g) return 0.0;
    cross_terms(*cls_, history_, f, g, scratch_);
    const double robust = catoni_mean(scratch_, theta(f, g), {config_.catoni_tolerance, 200});
    return accumulator_.pair_distance(f, g) + 2.0 * static_cast<double>(t) * robust;
}

FunctionId CatoniOful::fit_minmax() const {
    return saddle_point_fit(accumulator_, history_, version_space_.active,
                            static_cast<double>(history_.size()),
                            [this](FunctionId f, FunctionId g) { return theta(f, g); },
                            {config_.catoni_tolerance, 200}, scratch_);
}

bool CatoniOful::refit_due(std::size_t t) const noexcept {
    if (config_.refit_cadence == RefitCadence::every_round) return true;
    return (t & (t - 1)) == 0;  // powers of two
}

void CatoniOful::observe(ActionId x, double reward, double sigma) {
    const double sigma_bar = weight(x, sigma);
    history_.push_back(x, reward, sigma_bar);
    accumulator_.update(x, sigma_bar);

    const FunctionId estimator = refit_due(history_.size()) ? fit_minmax() : version_space_.estimator;
    version_space_ =
        refit_version_space(accumulator_, version_space_.active, estimator, beta_hat_ * beta_hat_);

    last_ = RoundDiagnostics{sigma_bar, std::nullopt, version_space_.active_count(), beta_hat_, false};
}

}  // namespace rcb
