#pragma once
// Known-variance Catoni-OFUL: optimistic selection over a nested version
// space fitted by a robust saddle-point estimator.

#include <memory>
#include <vector>

#include "rcb/agent.hpp"

namespace rcb {

// iota(delta) = sqrt(log(720 R^2 L_f^3 N^2 T^5 / delta))
double known_variance_iota(double noise_range, double range_bound, std::size_t num_functions,
                           std::uint64_t horizon, double delta);
// c * sqrt(log(R L_f N T / delta))
double known_variance_radius(double noise_range, double range_bound, std::size_t num_functions,
                             std::uint64_t horizon, double delta, double constant_scale);

class CatoniOful final : public Agent {
public:
    CatoniOful(std::shared_ptr<const HypothesisClass> cls, AgentConfig config, ProblemInfo problem);

    std::string_view name() const noexcept override { return "catoni-oful"; }
    Selection select(std::span<const ActionId> context) override;
    void observe(ActionId x, double reward, double sigma) override;
    RoundDiagnostics diagnostics() const override { return last_; }
    bool covers(FunctionId f) const override { return version_space_.contains(f); }

    // sigma_bar = max(alpha, sigma, sqrt(4 iota L_f D)) with D the eluder
    // coefficient of x over the current version space.
    double weight(ActionId x, double sigma) const;
    // V_t(f, g) + 2 t Catoni_theta({Z_i(f, g)}).
    double excess_loss(FunctionId f, FunctionId g) const;
    double theta(FunctionId f, FunctionId g) const;
    // argmin over active f of max over active g of excess_loss(f, g).
    FunctionId fit_minmax() const;

    const VersionSpace& version_space() const noexcept { return version_space_; }
    const PairAccumulator& accumulator() const noexcept { return accumulator_; }
    const WeightedHistory& history() const noexcept { return history_; }
    double iota() const noexcept { return iota_; }
    double beta_hat() const noexcept { return beta_hat_; }
    double alpha() const noexcept { return alpha_; }
    const AgentConfig& config() const noexcept { return config_; }

private:
    bool refit_due(std::size_t t) const noexcept;

    std::shared_ptr<const HypothesisClass> cls_;
    AgentConfig config_;
    ProblemInfo problem_;
    double alpha_;
    double iota_;
    double beta_hat_;
    PairAccumulator accumulator_;
    WeightedHistory history_;
    VersionSpace version_space_;
    RoundDiagnostics last_;
    mutable std::vector<double> scratch_;
};

}  // namespace rcb
