#pragma once
// Heavy-tailed reward environments with known ground truth.

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rcb/hypothesis.hpp"
#include "rcb/rng.hpp"

namespace rcb {

enum class DistributionKind { deterministic, three_point, bernoulli_scaled };

// Finite-support reward distribution with cached moments.
class RewardDistribution {
public:
    static RewardDistribution deterministic(double value);
    static RewardDistribution three_point(std::array<double, 3> values, std::array<double, 3> probs);
    // Takes value `range` with probability p and 0 otherwise.
    static RewardDistribution bernoulli_scaled(double p, double range);

    DistributionKind kind() const noexcept { return kind_; }
    std::span<const double> support() const noexcept { return values_; }
    std::span<const double> probabilities() const noexcept { return probs_; }

    double mean() const noexcept { return mean_; }
    double variance() const noexcept { return variance_; }
    // Var[(Y - E Y)^2]
    double variance_of_square() const noexcept { return variance_of_square_; }

    // Inverse CDF at u in [0, 1).
    double quantile(double u) const noexcept;
    double draw(CounterRng& rng) const noexcept { return quantile(rng.uniform()); }

private:
    RewardDistribution(DistributionKind kind, std::vector<double> values, std::vector<double> probs);

    DistributionKind kind_;
    std::vector<double> values_;
    std::vector<double> probs_;
    double mean_ = 0.0;
    double variance_ = 0.0;
    double variance_of_square_ = 0.0;
};

// Which subset of the action universe is offered each round.
struct ContextSchedule {
    enum class Kind { fixed, round_robin, seeded_random };

    Kind kind = Kind::fixed;
    std::size_t subset_size = 0;    // round_robin / seeded_random; 0 means all actions
    std::vector<ActionId> actions;  // fixed: the offered set; empty means all actions

    static ContextSchedule all() { return {}; }
    static ContextSchedule fixed(std::vector<ActionId> set) { return {Kind::fixed, 0, std::move(set)}; }
    static ContextSchedule round_robin(std::size_t k) { return {Kind::round_robin, k, {}}; }
    static ContextSchedule seeded_random(std::size_t k) { return {Kind::seeded_random, k, {}}; }

    // Sorted, duplicate-free action set for round t (1-based).
    std::vector<ActionId> context(std::uint64_t seed, std::uint64_t round, std::size_t num_actions) const;
};

// A realizable bandit problem: rewards are y = f*(x) + eta with eta the
// per-action noise distribution shifted to mean zero.
class Instance {
public:
    // `noise` holds one distribution per action; only its centered shape is
    // used. When c_eta is omitted it is computed as the realized maximum of
    // Var[eta^2] / Var[eta]; when given it is verified.
    Instance(std::shared_ptr<const HypothesisClass> cls, FunctionId true_function,
             std::vector<RewardDistribution> noise, double noise_range,
             ContextSchedule schedule = ContextSchedule::all(),
             std::optional<double> c_eta = std::nullopt, std::string name = {});

    const std::string& name() const noexcept { return name_; }
    const std::shared_ptr<const HypothesisClass>& class_ptr() const noexcept { return cls_; }
    const HypothesisClass& hypothesis_class() const noexcept { return *cls_; }
    FunctionId true_function() const noexcept { return true_function_; }
    std::size_t num_actions() const noexcept { return cls_->num_actions(); }

    double mean_reward(ActionId x) const;
    const RewardDistribution& noise(ActionId x) const;
    double noise_range() const noexcept { return noise_range_; }
    double sigma_eta() const noexcept { return sigma_eta_; }
    double c_eta() const noexcept { return c_eta_; }
    const ContextSchedule& schedule() const noexcept { return schedule_; }

    std::vector<ActionId> context(std::uint64_t seed, std::uint64_t round) const {
        return schedule_.context(seed, round, num_actions());
    }

private:
    std::shared_ptr<const HypothesisClass> cls_;
    FunctionId true_function_;
    std::vector<RewardDistribution> noise_;
    double noise_range_;
    ContextSchedule schedule_;
    double sigma_eta_ = 0.0;
    double c_eta_ = 0.0;
    std::string name_;
};

double sample_reward(const Instance& instance, ActionId x, CounterRng& rng);
// Draw for round `round` of run `seed`, independent of any other draw.
double sample_reward(const Instance& instance, ActionId x, std::uint64_t seed, std::uint64_t round);
double instant_regret(const Instance& instance, std::span<const ActionId> context, ActionId chosen);
double variance_oracle(const Instance& instance, ActionId x);

// --- two-armed lower-bound construction -------------------------------

enum class LowerBoundVariant { plus, minus };

// Arm 1 is deterministic at sigma (1 + 1/R); arm 2 is three-point on
// {2 sigma, 2 sigma R, 0}. The class holds the plus and minus mean vectors
// (rows 0 and 1); the variant selects the true one.
Instance make_lower_bound_instance(double sigma, double epsilon, double range,
                                   LowerBoundVariant variant);
RewardDistribution lower_bound_arm2(double sigma, double epsilon, double range,
                                    LowerBoundVariant variant);
// sqrt(sigma^2 / (4 (1 + R^-2) T))
double lower_bound_epsilon(double sigma, double range, std::uint64_t horizon);

// --- generic heavy-tailed presets -----------------------------------------

// Lower-bound arm-2 shape (epsilon = 0) rescaled so its variance is sigma^2.
RewardDistribution three_point_noise(double sigma, double range);
// {0, range} shape whose variance is sigma^2.
RewardDistribution bernoulli_noise(double sigma, double range);

// f* = means plus, for every action k, a rival equal to f* except that
// action k is raised to max(means) + bump. Row 0 is f*.
std::shared_ptr<const HypothesisClass> make_bumped_class(std::span<const double> means, double bump);

enum class NoiseFamily { three_point, bernoulli_scaled };

Instance make_bumped_instance(std::span<const double> means, std::span<const double> sigmas,
                              double range, double bump, NoiseFamily family,
                              ContextSchedule schedule = ContextSchedule::all(),
                              std::string name = {});

}  // namespace rcb
