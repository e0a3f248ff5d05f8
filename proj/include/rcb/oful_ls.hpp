#pragma once
// Least-squares OFUL baseline: unweighted squared-error fit over a nested
// version space with a radius that scales with the noise range R.

#include <memory>
#include <vector>

#include "rcb/agent.hpp"

namespace rcb {

// c * R * sqrt(log(N T / delta))
double least_squares_radius(double noise_range, std::size_t num_functions, std::uint64_t horizon,
                            double delta, double constant_scale);

class OfulLeastSquares final : public Agent {
public:
    OfulLeastSquares(std::shared_ptr<const HypothesisClass> cls, AgentConfig config, ProblemInfo problem);

    std::string_view name() const noexcept override { return "oful-ls"; }
    Selection select(std::span<const ActionId> context) override;
    void observe(ActionId x, double reward, double sigma) override;
    RoundDiagnostics diagnostics() const override { return last_; }
    bool covers(FunctionId f) const override { return version_space_.contains(f); }

    // sum_i (f(x_i) - y_i)^2
    double squared_error(FunctionId f) const { return squared_error_.at(f); }
    const VersionSpace& version_space() const noexcept { return version_space_; }
    double beta_hat() const noexcept { return beta_hat_; }

private:
    std::shared_ptr<const HypothesisClass> cls_;
    AgentConfig config_;
    double beta_hat_;
    PairAccumulator accumulator_;
    std::vector<double> squared_error_;
    VersionSpace version_space_;
    RoundDiagnostics last_;
};

}  // namespace rcb
