#pragma once
// Catoni-OFUL with a candidate set: instead of solving the saddle point,
// keep every estimator whose worst robust excess loss against any rival is
// not too negative, pick one, and rebuild the confidence set around it over
// the whole class each round.

#include <limits>
#include <memory>
#include <vector>

#include "rcb/agent.hpp"

namespace rcb {

// [ (8 (8 * 13^4 + 2 * 13^2 + 13))^(1/2) + 13 sqrt(2) lambda^(1/4) ] * iota
double candidate_explicit_radius(double lambda, double iota);

// iota(delta_{n,t}) = sqrt(log(sqrt(21) * 288 * L_f^2 R^2 T^3.5 / delta_{n,t})),
// delta_{n,t} = delta / (N (T + 1)).
double candidate_iota(double noise_range, double range_bound, std::size_t num_functions,
                      std::uint64_t horizon, double delta);

class CandidateSetOful final : public Agent {
public:
    CandidateSetOful(std::shared_ptr<const HypothesisClass> cls, AgentConfig config,
                     ProblemInfo problem);

    std::string_view name() const noexcept override { return "catoni-oful-cs"; }
    Selection select(std::span<const ActionId> context) override;
    void observe(ActionId x, double reward, double sigma) override;
    RoundDiagnostics diagnostics() const override { return last_; }
    bool covers(FunctionId f) const override { return confidence_.contains(f); }

    // max(sigma, alpha, 4 sqrt(2 iota L_f D_F(x))) with D over the full class.
    double weight(ActionId x, double sigma) const;
    // sqrt(iota^2 / (V(f, g) + 2 sum (f - g)^4 / w^4 + eps^2))
    double theta(FunctionId f, FunctionId g) const;
    // min over f of V(f, g) + 2 t Catoni_theta({Z_i(f, g)}); +inf stops early
    // once the value drops below `stop_below`.
    double candidate_value(FunctionId g, double stop_below = -std::numeric_limits<double>::infinity()) const;
    bool in_candidate_set(FunctionId g) const;
    // Lowest-index member of the candidate set; throws ConfidenceFailure if empty.
    FunctionId candidate_set_fit() const;

    const VersionSpace& confidence_set() const noexcept { return confidence_; }
    const WeightedHistory& history() const noexcept { return history_; }
    const PairAccumulator& accumulator() const noexcept { return accumulator_; }
    double iota() const noexcept { return iota_; }
    double beta_hat() const noexcept { return beta_hat_; }

private:
    std::shared_ptr<const HypothesisClass> cls_;
    AgentConfig config_;
    ProblemInfo problem_;
    double alpha_;
    double iota_;
    double beta_hat_;
    PairAccumulator accumulator_;
    WeightedHistory history_;
    VersionSpace confidence_;
    RoundDiagnostics last_;
    mutable std::vector<double> scratch_;
};

}  // namespace rcb
