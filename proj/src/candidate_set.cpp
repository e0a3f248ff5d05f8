#include "rcb/candidate_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rcb/catoni_oful.hpp"
#include "rcb/errors.hpp"

namespace rcb {

double candidate_explicit_radius(double lambda, double iota) {
    const double base = std::sqrt(8.0 * (8.0 * std::pow(13.0, 4) + 2.0 * 13.0 * 13.0 + 13.0));
    return (base + 13.0 * std::sqrt(2.0) * std::pow(lambda, 0.25)) * iota;
}

double candidate_iota(double noise_range, double range_bound, std::size_t num_functions,
                      std::uint64_t horizon, double delta) {
    const double n = static_cast<double>(num_functions);
    const double t = static_cast<double>(horizon);
    const double delta_nt = delta / (n * (t + 1.0));
    const double log_arg = std::log(std::sqrt(21.0) * 288.0) + 2.0 * std::log(range_bound) +
                           2.0 * std::log(noise_range) + 3.5 * std::log(t) - std::log(delta_nt);
    return std::sqrt(std::max(1.0, log_arg));
}

CandidateSetOful::CandidateSetOful(std::shared_ptr<const HypothesisClass> cls, AgentConfig config,
                                   ProblemInfo problem)
    : cls_(std::move(cls)),
      config_(config),
      problem_(problem),
      alpha_(config.weight_floor(problem.horizon)),
      iota_(config.constant_scale * candidate_iota(problem.noise_range, cls_->range_bound(),
                                                   cls_->size(), problem.horizon, config.delta)),
      beta_hat_(config.candidate_radius == CandidateRadius::explicit_constant
                    ? candidate_explicit_radius(config.lambda, iota_)
                    : known_variance_radius(problem.noise_range, cls_->range_bound(), cls_->size(),
                                            problem.horizon, config.delta, config.constant_scale)),
      accumulator_(cls_),
      confidence_(full_version_space(cls_->size())) {
    config_.validate();
}

Selection CandidateSetOful::select(std::span<const ActionId> context) {
    return {optimistic_argmax(*cls_, confidence_.active, context).action, SelectionMode::optimistic,
            std::nullopt};
}

double CandidateSetOful::weight(ActionId x, double sigma) const {
    const Mask all(cls_->size(), true);
    const double d = eluder_coefficient(accumulator_, all, x, 1.0, config_.lambda);
    return std::max({sigma, alpha_, 4.0 * std::sqrt(2.0 * iota_ * cls_->range_bound() * d)});
}

double CandidateSetOful::theta(FunctionId f, FunctionId g) const {
    const double eps = config_.epsilon_offset;
    const double denom =
        accumulator_.pair_distance(f, g) + 2.0 * accumulator_.pair_quartic(f, g) + eps * eps;
    return std::sqrt(iota_ * iota_ / denom);
}

double CandidateSetOful::candidate_value(FunctionId g, double stop_below) const {
    const std::size_t t = history_.size();
    double lowest = 0.0;  // f = g contributes exactly zero
    if (t == 0) return lowest;
    for (FunctionId f = 0; f < cls_->size(); ++f) {
        if (f == g) continue;
        cross_terms(*cls_, history_, f, g, scratch_);
        const double robust = catoni_mean(scratch_, theta(f, g), {config_.catoni_tolerance, 200});
        const double value = accumulator_.pair_distance(f, g) + 2.0 * static_cast<double>(t) * robust;
        lowest = std::min(lowest, value);
        if (lowest < stop_below) break;
    }
    return lowest;
}

bool CandidateSetOful::in_candidate_set(FunctionId g) const {
    const double threshold = -0.25 * beta_hat_ * beta_hat_;
    return candidate_value(g, threshold) >= threshold;
}

FunctionId CandidateSetOful::candidate_set_fit() const {
    for (FunctionId g = 0; g < cls_->size(); ++g)
        if (in_candidate_set(g)) return g;
    throw ConfidenceFailure("candidate set is empty at round " + std::to_string(history_.size()));
}

void CandidateSetOful::observe(ActionId x, double reward, double sigma) {
    const double sigma_bar = weight(x, sigma);
    history_.push_back(x, reward, sigma_bar);
    accumulator_.update(x, sigma_bar);

    bool failed = false;
    FunctionId estimator = confidence_.estimator;
    try {
        estimator = candidate_set_fit();
    } catch (const ConfidenceFailure&) {
        failed = true;  // keep the previous estimator
    }
    const Mask all(cls_->size(), true);
    confidence_ = refit_version_space(accumulator_, all, estimator, beta_hat_ * beta_hat_);
    last_ = RoundDiagnostics{sigma_bar, std::nullopt, confidence_.active_count(), beta_hat_, failed};
}

}  // namespace rcb
