#include "rcb/environments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "rcb/errors.hpp"

namespace rcb {

RewardDistribution::RewardDistribution(DistributionKind kind, std::vector<double> values,
                                       std::vector<double> probs)
    : kind_(kind), values_(std::move(values)), probs_(std::move(probs)) {
    double total = 0.0;
    for (std::size_t k = 0; k < values_.size(); ++k) {
        if (!std::isfinite(values_[k])) throw PreconditionError("distribution: non-finite support point");
        if (!(probs_[k] >= 0.0) || probs_[k] > 1.0)
            throw PreconditionError("distribution: probabilities must lie in [0, 1]");
        total += probs_[k];
    }
    if (std::abs(total - 1.0) > 1e-12) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "distribution: probabilities sum to " << total;
        throw PreconditionError(msg.str());
    }
    for (std::size_t k = 0; k < values_.size(); ++k) mean_ += probs_[k] * values_[k];
    double fourth = 0.0;
    for (std::size_t k = 0; k < values_.size(); ++k) {
        const double c2 = (values_[k] - mean_) * (values_[k] - mean_);
        variance_ += probs_[k] * c2;
        fourth += probs_[k] * c2 * c2;
    }
    variance_of_square_ = std::max(0.0, fourth - variance_ * variance_);
}

RewardDistribution RewardDistribution::deterministic(double value) {
    return RewardDistribution(DistributionKind::deterministic, {value}, {1.0});
}

RewardDistribution RewardDistribution::three_point(std::array<double, 3> values,
                                                   std::array<double, 3> probs) {
    return RewardDistribution(DistributionKind::three_point, {values.begin(), values.end()},
                              {probs.begin(), probs.end()});
}

RewardDistribution RewardDistribution::bernoulli_scaled(double p, double range) {
    if (!(p >= 0.0 && p <= 1.0)) throw PreconditionError("bernoulli_scaled: p must lie in [0, 1]");
    if (!(range > 0.0)) throw PreconditionError("bernoulli_scaled: range must be positive");
    return RewardDistribution(DistributionKind::bernoulli_scaled, {range, 0.0}, {p, 1.0 - p});
}

double RewardDistribution::quantile(double u) const noexcept {
    double cumulative = 0.0;
    for (std::size_t k = 0; k + 1 < values_.size(); ++k) {
        cumulative += probs_[k];
        if (u < cumulative) return values_[k];
    }
    return values_.back();
}

std::vector<ActionId> ContextSchedule::context(std::uint64_t seed, std::uint64_t round,
                                               std::size_t num_actions) const {
    std::vector<ActionId> out;
    const std::size_t k = (subset_size == 0 || subset_size > num_actions) ? num_actions : subset_size;
    switch (kind) {
        case Kind::fixed:
            if (actions.empty()) {
                out.resize(num_actions);
                std::iota(out.begin(), out.end(), ActionId{0});
            } else {
                out = actions;
            }
            break;
        case Kind::round_robin: {
            const std::size_t start = static_cast<std::size_t>(((round - 1) * k) % num_actions);
            for (std::size_t j = 0; j < k; ++j) out.push_back((start + j) % num_actions);
            break;
        }
        case Kind::seeded_random: {
            std::vector<ActionId> pool(num_actions);
            std::iota(pool.begin(), pool.end(), ActionId{0});
            CounterRng rng(seed, round, Stream::context);
            for (std::size_t j = 0; j < k; ++j) {
                const std::size_t pick = j + static_cast<std::size_t>(rng() % (num_actions - j));
                std::swap(pool[j], pool[pick]);
            }
            out.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
            break;
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (out.empty()) throw PreconditionError("context schedule produced an empty set");
    for (ActionId x : out)
        if (x >= num_actions) throw PreconditionError("context schedule names an unknown action");
    return out;
}

Instance::Instance(std::shared_ptr<const HypothesisClass> cls, FunctionId true_function,
                   std::vector<RewardDistribution> noise, double noise_range,
                   ContextSchedule schedule, std::optional<double> c_eta, std::string name)
    : cls_(std::move(cls)),
      true_function_(true_function),
      noise_(std::move(noise)),
      noise_range_(noise_range),
      schedule_(std::move(schedule)),
      name_(std::move(name)) {
    if (!cls_) throw PreconditionError("instance: missing hypothesis class");
    if (true_function_ >= cls_->size()) throw PreconditionError("instance: true function out of range");
    if (noise_.size() != cls_->num_actions())
        throw PreconditionError("instance: need one noise distribution per action");
    if (!(noise_range_ > 0.0)) throw PreconditionError("instance: noise range must be positive");

    double max_ratio = 0.0;
    for (std::size_t x = 0; x < noise_.size(); ++x) {
        const auto& d = noise_[x];
        for (double v : d.support()) {
            if (std::abs(v - d.mean()) > noise_range_ * (1.0 + 1e-12)) {
                std::ostringstream msg;
                msg << "instance: action " << x << " noise support exceeds range " << noise_range_;
                throw PreconditionError(msg.str());
            }
        }
        sigma_eta_ = std::max(sigma_eta_, std::sqrt(d.variance()));
        if (d.variance() > 0.0) max_ratio = std::max(max_ratio, d.variance_of_square() / d.variance());
    }
    if (c_eta) {
        for (std::size_t x = 0; x < noise_.size(); ++x) {
            if (noise_[x].variance_of_square() > *c_eta * noise_[x].variance() * (1.0 + 1e-12)) {
                std::ostringstream msg;
                msg << "instance: action " << x << " violates Var[eta^2] <= c_eta Var[eta] for c_eta "
                    << *c_eta;
                throw PreconditionError(msg.str());
            }
        }
        c_eta_ = *c_eta;
    } else {
        c_eta_ = max_ratio;
    }
    schedule_.context(0, 1, cls_->num_actions());  // validates the schedule
}

double Instance::mean_reward(ActionId x) const {
    if (x >= num_actions()) throw PreconditionError("instance: unknown action");
    return (*cls_)(true_function_, x);
}

const RewardDistribution& Instance::noise(ActionId x) const {
    if (x >= num_actions()) throw PreconditionError("instance: unknown action");
    return noise_[x];
}

double sample_reward(const Instance& instance, ActionId x, CounterRng& rng) {
    const auto& d = instance.noise(x);
    return instance.mean_reward(x) + (d.draw(rng) - d.mean());
}

double sample_reward(const Instance& instance, ActionId x, std::uint64_t seed, std::uint64_t round) {
    CounterRng rng(seed, round, Stream::reward);
    return sample_reward(instance, x, rng);
}

double instant_regret(const Instance& instance, std::span<const ActionId> context, ActionId chosen) {
    if (std::find(context.begin(), context.end(), chosen) == context.end())
        throw PreconditionError("instant_regret: chosen action not in context");
    double best = instance.mean_reward(chosen);
    for (ActionId x : context) best = std::max(best, instance.mean_reward(x));
    return best - instance.mean_reward(chosen);
}

double variance_oracle(const Instance& instance, ActionId x) {
    return instance.noise(x).variance();
}

RewardDistribution lower_bound_arm2(double sigma, double epsilon, double range,
                                    LowerBoundVariant variant) {
    if (!(sigma > 0.0 && sigma <= 0.5)) throw PreconditionError("lower bound: sigma must lie in (0, 1/2]");
    if (!(epsilon >= 0.0 && epsilon <= sigma / 2.0))
        throw PreconditionError("lower bound: epsilon must lie in [0, sigma/2]");
    if (!(range > std::sqrt(3.0))) throw PreconditionError("lower bound: R must exceed sqrt(3)");
    const double s = variant == LowerBoundVariant::plus ? sigma + epsilon : sigma - epsilon;
    const double p_mid = s / (2.0 * sigma);
    const double p_far = s / (2.0 * sigma * range * range);
    return RewardDistribution::three_point({2.0 * sigma, 2.0 * sigma * range, 0.0},
                                           {p_mid, p_far, 1.0 - p_mid - p_far});
}

Instance make_lower_bound_instance(double sigma, double epsilon, double range,
                                   LowerBoundVariant variant) {
    const auto arm1 = RewardDistribution::deterministic(sigma * (1.0 + 1.0 / range));
    const auto plus = lower_bound_arm2(sigma, epsilon, range, LowerBoundVariant::plus);
    const auto minus = lower_bound_arm2(sigma, epsilon, range, LowerBoundVariant::minus);
    const double bound = std::max({std::abs(arm1.mean()), std::abs(plus.mean()), std::abs(minus.mean())});
    auto cls = std::make_shared<const HypothesisClass>(HypothesisClass::from_rows(
        {{arm1.mean(), plus.mean()}, {arm1.mean(), minus.mean()}}, bound, {"arm1", "arm2"}));
    const bool is_plus = variant == LowerBoundVariant::plus;
    return Instance(cls, is_plus ? 0 : 1, {arm1, is_plus ? plus : minus}, range,
                    ContextSchedule::all(), std::nullopt, is_plus ? "lb-plus" : "lb-minus");
}

double lower_bound_epsilon(double sigma, double range, std::uint64_t horizon) {
    if (horizon < 1) throw PreconditionError("lower_bound_epsilon: horizon must be positive");
    return std::sqrt(sigma * sigma / (4.0 * (1.0 + 1.0 / (range * range)) * static_cast<double>(horizon)));
}

RewardDistribution three_point_noise(double sigma, double range) {
    if (!(sigma >= 0.0)) throw PreconditionError("three_point_noise: sigma must be nonnegative");
    if (!(range > std::sqrt(3.0))) throw PreconditionError("three_point_noise: R must exceed sqrt(3)");
    if (sigma == 0.0) return RewardDistribution::deterministic(0.0);
    const double c = 1.0 + 1.0 / range;
    const double s = sigma / std::sqrt(4.0 - c * c);
    const double p_far = 1.0 / (2.0 * range * range);
    return RewardDistribution::three_point({2.0 * s, 2.0 * s * range, 0.0}, {0.5, p_far, 0.5 - p_far});
}

RewardDistribution bernoulli_noise(double sigma, double range) {
    if (!(sigma >= 0.0) || !(2.0 * sigma <= range))
        throw PreconditionError("bernoulli_noise: need 0 <= 2 sigma <= R");
    const double r = 4.0 * sigma * sigma / (range * range);
    const double p = 0.5 * r / (1.0 + std::sqrt(1.0 - r));
    return RewardDistribution::bernoulli_scaled(p, range);
}

std::shared_ptr<const HypothesisClass> make_bumped_class(std::span<const double> means, double bump) {
    if (means.empty()) throw PreconditionError("bumped class: need at least one action");
    if (!(bump > 0.0)) throw PreconditionError("bumped class: bump must be positive");
    const double top = *std::max_element(means.begin(), means.end()) + bump;
    std::vector<std::vector<double>> rows;
    rows.emplace_back(means.begin(), means.end());
    for (std::size_t k = 0; k < means.size(); ++k) {
        rows.emplace_back(means.begin(), means.end());
        rows.back()[k] = top;
    }
    double bound = 0.0;
    for (const auto& r : rows)
        for (double v : r) bound = std::max(bound, std::abs(v));
    return std::make_shared<const HypothesisClass>(HypothesisClass::from_rows(rows, bound));
}

Instance make_bumped_instance(std::span<const double> means, std::span<const double> sigmas,
                              double range, double bump, NoiseFamily family,
                              ContextSchedule schedule, std::string name) {
    if (sigmas.size() != means.size())
        throw PreconditionError("bumped instance: need one sigma per action");
    std::vector<RewardDistribution> noise;
    noise.reserve(sigmas.size());
    for (double s : sigmas)
        noise.push_back(family == NoiseFamily::three_point ? three_point_noise(s, range)
                                                           : bernoulli_noise(s, range));
    return Instance(make_bumped_class(means, bump), 0, std::move(noise), range, std::move(schedule),
                    std::nullopt, std::move(name));
}

}  // namespace rcb
