#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "rcb/environments.hpp"
#include "rcb/errors.hpp"

using namespace rcb;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

struct Moments {
    double mean, var, var_sq;
    double se_mean, se_var;
};

Moments monte_carlo(const RewardDistribution& d, std::size_t n, std::uint64_t seed) {
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) {
        CounterRng rng(seed, i, Stream::fixture);
        xs[i] = d.draw(rng);
    }
    double m = 0.0;
    for (double x : xs) m += x;
    m /= static_cast<double>(n);
    double v = 0.0, m4 = 0.0;
    for (double x : xs) {
        const double c = (x - d.mean()) * (x - d.mean());
        v += c;
        m4 += c * c;
    }
    v /= static_cast<double>(n);
    m4 /= static_cast<double>(n);
    const double nn = static_cast<double>(n);
    return {m, v, m4 - v * v, std::sqrt(d.variance() / nn),
            std::sqrt(std::max(d.variance_of_square(), 1e-300) / nn)};
}

}  // namespace

TEST_CASE("distribution constructors and moments") {
    const auto det = RewardDistribution::deterministic(0.7);
    CHECK(det.mean() == 0.7);
    CHECK(det.variance() == 0.0);
    CounterRng rng(1, 1, Stream::fixture);
    for (int i = 0; i < 20; ++i) CHECK(det.draw(rng) == 0.7);

    const auto zero = RewardDistribution::bernoulli_scaled(0.0, 100.0);
    for (int i = 0; i < 20; ++i) CHECK(zero.draw(rng) == 0.0);

    const auto b = RewardDistribution::bernoulli_scaled(0.3, 10.0);
    CHECK_THAT(b.mean(), WithinAbs(3.0, 1e-12));
    CHECK_THAT(b.variance(), WithinAbs(100.0 * 0.3 * 0.7, 1e-12));

    CHECK_THROWS_AS(RewardDistribution::bernoulli_scaled(1.5, 1.0), PreconditionError);
    CHECK_THROWS_AS(RewardDistribution::bernoulli_scaled(0.5, 0.0), PreconditionError);
    CHECK_THROWS_AS(RewardDistribution::three_point({0, 1, 2}, {0.5, 0.6, 0.1}), PreconditionError);
    CHECK_THROWS_AS(RewardDistribution::three_point({0, 1, 2}, {0.5, -0.1, 0.6}), PreconditionError);
}

TEST_CASE("lower bound instance closed forms") {
    const double sigma = 0.3, eps = 0.1, R = 10.0, c = 1.0 + 1.0 / R;
    const auto plus = make_lower_bound_instance(sigma, eps, R, LowerBoundVariant::plus);
    const auto minus = make_lower_bound_instance(sigma, eps, R, LowerBoundVariant::minus);
    CHECK_THAT(plus.mean_reward(0), WithinRel(sigma * c, 1e-14));
    CHECK_THAT(plus.mean_reward(1), WithinRel((sigma + eps) * c, 1e-14));
    CHECK_THAT(minus.mean_reward(1), WithinRel((sigma - eps) * c, 1e-14));
    CHECK(variance_oracle(plus, 0) == 0.0);

    const double vp = (sigma + eps) * (4 * sigma - c * c * sigma - c * c * eps);
    const double vm = (sigma - eps) * (4 * sigma - c * c * sigma + c * c * eps);
    CHECK_THAT(variance_oracle(plus, 1), WithinRel(vp, 1e-12));
    CHECK_THAT(variance_oracle(minus, 1), WithinRel(vm, 1e-12));
    CHECK(vp <= 6 * sigma * sigma);
    // the minus variance only drops under 2 sigma^2 near eps = sigma / 2; its
    // supremum over eps is (4 - c^2) sigma^2 at eps = 0
    CHECK(vm <= (4 - c * c) * sigma * sigma);
    CHECK(variance_oracle(make_lower_bound_instance(sigma, sigma / 2, R, LowerBoundVariant::minus), 1) <=
          2 * sigma * sigma);
    CHECK_THAT(variance_oracle(make_lower_bound_instance(sigma, 0.0, R, LowerBoundVariant::minus), 1),
               WithinRel((4 - c * c) * sigma * sigma, 1e-12));

    for (auto v : {LowerBoundVariant::plus, LowerBoundVariant::minus}) {
        const auto d = lower_bound_arm2(sigma, eps, R, v);
        double total = 0.0;
        for (double p : d.probabilities()) total += p;
        CHECK_THAT(total, WithinAbs(1.0, 1e-15));
    }

    const std::vector<ActionId> both{0, 1};
    CHECK_THAT(instant_regret(plus, both, 0), WithinRel(eps * c, 1e-12));
    CHECK(instant_regret(plus, both, 1) == 0.0);
    CHECK(instant_regret(minus, both, 0) == 0.0);
    CHECK(instant_regret(plus, std::vector<ActionId>{0}, 0) == 0.0);
    CHECK_THROWS_AS(instant_regret(plus, std::vector<ActionId>{0}, 1), PreconditionError);

    CHECK_THROWS_AS(make_lower_bound_instance(0.6, 0.1, R, LowerBoundVariant::plus), PreconditionError);
    CHECK_THROWS_AS(make_lower_bound_instance(0.3, 0.2, R, LowerBoundVariant::plus), PreconditionError);
    CHECK_THROWS_AS(make_lower_bound_instance(0.3, 0.1, 1.5, LowerBoundVariant::plus), PreconditionError);

    CHECK_THAT(lower_bound_epsilon(0.5, 100.0, 1000),
               WithinRel(std::sqrt(0.25 / (4 * (1 + 1e-4) * 1000)), 1e-14));
}

TEST_CASE("sampled moments agree with closed forms") {
    const std::vector<RewardDistribution> dists{
        lower_bound_arm2(0.4, 0.2, 20.0, LowerBoundVariant::plus),
        lower_bound_arm2(0.4, 0.2, 20.0, LowerBoundVariant::minus),
        three_point_noise(0.2, 50.0),
        bernoulli_noise(0.1, 100.0),
        RewardDistribution::three_point({-1.0, 0.5, 3.0}, {0.2, 0.5, 0.3}),
    };
    std::uint64_t seed = 100;
    for (const auto& d : dists) {
        const auto m = monte_carlo(d, 200000, seed++);
        CHECK(std::abs(m.mean - d.mean()) <= 4 * m.se_mean);
        CHECK(std::abs(m.var - d.variance()) <= 4 * m.se_var);
    }
}

TEST_CASE("generic noise presets hit their variance") {
    for (double s : {0.05, 0.1, 0.5, 2.0}) {
        CHECK_THAT(three_point_noise(s, 100.0).variance(), WithinRel(s * s, 1e-12));
        CHECK_THAT(bernoulli_noise(s, 100.0).variance(), WithinRel(s * s, 1e-10));
    }
    CHECK(three_point_noise(0.0, 10.0).variance() == 0.0);
    CHECK_THROWS_AS(bernoulli_noise(60.0, 100.0), PreconditionError);
}

TEST_CASE("bumped instances are realizable") {
    const std::vector<double> means{0.2, 0.5, 0.3};
    const std::vector<double> sigmas{0.1, 0.2, 0.0};
    const auto inst = make_bumped_instance(means, sigmas, 50.0, 0.25, NoiseFamily::three_point);
    const auto& cls = inst.hypothesis_class();
    CHECK(cls.size() == 4);
    for (ActionId x = 0; x < 3; ++x) {
        CHECK(inst.mean_reward(x) == means[x]);
        CHECK_THAT(variance_oracle(inst, x), WithinAbs(sigmas[x] * sigmas[x], 1e-12));
        CHECK(cls(x + 1, x) == 0.75);
    }
    CHECK(inst.c_eta() >= 0.0);
    for (ActionId x = 0; x < 3; ++x)
        CHECK(inst.noise(x).variance_of_square() <= inst.c_eta() * inst.noise(x).variance() + 1e-12);
    CHECK_THROWS_AS(make_bumped_instance(means, std::vector<double>{0.1}, 50.0, 0.25,
                                         NoiseFamily::three_point),
                    PreconditionError);
}

TEST_CASE("instance rejects a c_eta below the realized moment ratio") {
    const auto cls = std::make_shared<const HypothesisClass>(HypothesisClass::from_rows({{0.0}}, 1.0));
    const auto noise = RewardDistribution::bernoulli_scaled(0.01, 10.0);
    CHECK_THROWS_AS(Instance(cls, 0, {noise}, 10.0, ContextSchedule::all(), 1e-6), PreconditionError);
    CHECK_NOTHROW(Instance(cls, 0, {noise}, 10.0, ContextSchedule::all(), 1e6));
}

TEST_CASE("reward draws are reproducible and keyed by round") {
    const auto inst = make_lower_bound_instance(0.3, 0.1, 10.0, LowerBoundVariant::plus);
    for (std::uint64_t t = 1; t <= 50; ++t) CHECK(sample_reward(inst, 1, 9, t) == sample_reward(inst, 1, 9, t));
    int differ = 0;
    for (std::uint64_t t = 1; t <= 50; ++t) differ += sample_reward(inst, 1, 9, t) != sample_reward(inst, 1, 10, t);
    CHECK(differ > 0);
    CHECK_THROWS_AS(sample_reward(inst, 5, 1, 1), PreconditionError);
}

TEST_CASE("context schedules") {
    const auto all = ContextSchedule::all().context(1, 1, 4);
    CHECK(all == std::vector<ActionId>{0, 1, 2, 3});
    CHECK(ContextSchedule::fixed({2, 0, 2}).context(1, 7, 4) == std::vector<ActionId>{0, 2});
    CHECK_THROWS_AS(ContextSchedule::fixed({9}).context(1, 1, 4), PreconditionError);

    const auto rr = ContextSchedule::round_robin(2);
    CHECK(rr.context(1, 1, 5) == std::vector<ActionId>{0, 1});
    CHECK(rr.context(1, 2, 5) == std::vector<ActionId>{2, 3});
    CHECK(rr.context(1, 3, 5) == std::vector<ActionId>{0, 4});

    const auto sr = ContextSchedule::seeded_random(3);
    std::vector<int> hits(6, 0);
    for (std::uint64_t t = 1; t <= 600; ++t) {
        const auto c = sr.context(5, t, 6);
        CHECK(c.size() == 3);
        CHECK(c == sr.context(5, t, 6));
        for (ActionId x : c) ++hits[x];
    }
    for (int h : hits) CHECK(h > 200);
}
