#pragma once
// Variance-agnostic Catoni bandit: rounds are peeled into uncertainty levels
// 2^-l, each level keeping its own weighted history, robust estimator,
// variance estimate and version space.

#include <memory>
#include <optional>
#include <vector>

#include "rcb/agent.hpp"

namespace rcb {

// iota'(delta) = sqrt(log(R L_f (sigma_eta^2 + c_eta + Delta + 1) N L T / delta)), floored at 1.
double vacb_iota_prime(double noise_range, double range_bound, double sigma_eta, double c_eta,
                       double cover_residue, std::size_t num_functions, int num_levels,
                       std::uint64_t horizon, double delta);

struct VacbLevel {
    int level = 0;
    double lambda = 0.0;     // 2^-2l
    double beta_hat = 0.0;   // starts at 2^(-l+1)
    double var_estimate = 0.0;
    double bonus = 0.0;      // b-hat of the last update
    std::vector<std::size_t> rounds;  // Psi^l, 1-based round ids
    WeightedHistory history;
    std::vector<double> oracle_variances;  // sigma_i^2, diagnostics only
    PairAccumulator accumulator;
    VersionSpace version_space;

    explicit VacbLevel(int l, std::shared_ptr<const HypothesisClass> cls);
};

// One explore step as recorded at selection time.
struct VacbExploreRecord {
    std::size_t round;
    int level;
    ActionId action;
    double uncertainty;  // D_t^l(x_t)
    double weight;       // w_t = 2^l D_t^l(x_t)
};

// Variance estimate next to the oracle sum it should sandwich, taken right
// after each update.
struct VacbVarianceRecord {
    std::size_t round;
    int level;
    double var_estimate;
    double bonus;
    double oracle_sum;  // sum over Psi^l of sigma_i^2 / w_i^2
};

class Vacb final : public Agent {
public:
    Vacb(std::shared_ptr<const HypothesisClass> cls, AgentConfig config, ProblemInfo problem);

    std::string_view name() const noexcept override { return "vacb"; }
    Selection select(std::span<const ActionId> context) override;
    void observe(ActionId x, double reward, double sigma) override;
    RoundDiagnostics diagnostics() const override { return last_; }
    // f lies in the version space of every level.
    bool covers(FunctionId f) const override;

    // D_t^l(x) over the level's version space and history.
    double uncertainty(int level, ActionId x) const;
    // |Psi^l| Catoni_thetaVar({(y_i - f-hat(x_i))^2 / w_i^2}) + b-hat, floored at 0.
    double var_estimate(int level) const;
    double bonus(int level) const;
    double theta_var(int level) const;
    double theta_prime(int level, FunctionId f, FunctionId g) const;

    double gamma() const noexcept { return gamma_; }
    int top_level() const noexcept { return top_level_; }
    int first_level() const noexcept { return first_level_; }
    double iota_prime() const noexcept { return iota_prime_; }
    const VacbLevel& level_state(int l) const;
    const std::vector<VacbLevel>& levels() const noexcept { return levels_; }
    const std::vector<VacbExploreRecord>& explore_log() const noexcept { return explore_log_; }
    const std::vector<VacbVarianceRecord>& variance_log() const noexcept { return variance_log_; }
    std::size_t round() const noexcept { return round_; }

private:
    VacbLevel& mutable_level(int l);
    void update_level(VacbLevel& state, ActionId x, double reward, double sigma);

    struct Pending {
        Selection selection;
        double weight = 0.0;
        double uncertainty = 0.0;
    };

    std::shared_ptr<const HypothesisClass> cls_;
    AgentConfig config_;
    ProblemInfo problem_;
    double gamma_;
    int top_level_;    // L
    int first_level_;  // l_star
    double iota_prime_;
    std::vector<VacbLevel> levels_;
    std::optional<Pending> pending_;
    std::size_t round_ = 0;
    std::vector<VacbExploreRecord> explore_log_;
    std::vector<VacbVarianceRecord> variance_log_;
    RoundDiagnostics last_;
    mutable std::vector<double> scratch_;
};

}  // namespace rcb
