#pragma once
// Common select/observe interface shared by every bandit agent.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rcb/hypothesis.hpp"
#include "rcb/robust_mean.hpp"

namespace rcb {

enum class RefitCadence { every_round, doubling };
// Candidate-set radius: c sqrt(log(R L_f N T / delta)) or the explicit
// constant [sqrt(1830712) + 13 sqrt(2) lambda^(1/4)] iota.
enum class CandidateRadius { log_formula, explicit_constant };

struct AgentConfig {
    double delta = 0.1;            // failure probability
    double lambda = 1.0;           // eluder regularizer
    double alpha = 0.0;            // weight floor; 0 selects 1/sqrt(T)
    double epsilon_offset = 1.0;   // epsilon inside theta_t
    double constant_scale = 1.0;   // multiplies iota, iota', radii, bonus and the level threshold
    double catoni_tolerance = 1e-10;
    RefitCadence refit_cadence = RefitCadence::every_round;
    CandidateRadius candidate_radius = CandidateRadius::log_formula;
    double cover_residue = 0.0;    // Delta_upsilon (zero for finite classes)
    double cover_residue_2 = 0.0;  // Delta_{upsilon,2}

    void validate() const;
    double weight_floor(std::uint64_t horizon) const;
};

// Problem constants the learner is allowed to know.
struct ProblemInfo {
    double noise_range = 1.0;  // R
    double sigma_eta = 1.0;    // uniform noise standard deviation bound
    double c_eta = 1.0;        // Var[eta^2] <= c_eta Var[eta]
    std::uint64_t horizon = 1; // T
};

enum class SelectionMode { optimistic, explore, exploit };

struct Selection {
    ActionId action = 0;
    SelectionMode mode = SelectionMode::optimistic;
    std::optional<int> level;
};

// What the most recent observe() did, for traces.
struct RoundDiagnostics {
    std::optional<double> weight;
    std::optional<int> level;
    std::optional<std::size_t> active_size;
    std::optional<double> beta_hat;
    bool confidence_failure = false;
};

// Rounds fed to an estimator: action, reward and weight per round.
struct WeightedHistory {
    std::vector<ActionId> actions;
    std::vector<double> rewards;
    std::vector<double> weights;

    std::size_t size() const noexcept { return actions.size(); }
    bool empty() const noexcept { return actions.empty(); }
    void push_back(ActionId x, double y, double w) {
        actions.push_back(x);
        rewards.push_back(y);
        weights.push_back(w);
    }
};

// Z_i(f, g) = (f(x_i) - g(x_i)) (g(x_i) - y_i) / w_i^2 for every history row.
void cross_terms(const HypothesisClass& cls, const WeightedHistory& history, FunctionId f,
                 FunctionId g, std::vector<double>& out);

// argmin over active f of max over active g of
//   V(f, g) + 2 * sample_factor * Catoni_theta(f, g)({Z_i(f, g)}),
// lowest index on ties. Rivals are skipped once f is already beaten.
using ThetaRule = std::function<double(FunctionId, FunctionId)>;
FunctionId saddle_point_fit(const PairAccumulator& acc, const WeightedHistory& history,
                            const Mask& active, double sample_factor, const ThetaRule& theta,
                            const CatoniOptions& options, std::vector<double>& scratch);

// Lowest (action, function) pair maximizing f(x) over x in context and active f.
struct OptimisticChoice {
    ActionId action;
    FunctionId function;
    double value;
};
OptimisticChoice optimistic_argmax(const HypothesisClass& cls, const Mask& active,
                                   std::span<const ActionId> context);

class Agent {
public:
    virtual ~Agent() = default;

    virtual std::string_view name() const noexcept = 0;
    virtual Selection select(std::span<const ActionId> context) = 0;
    // sigma is the reward standard deviation of x reported by the variance
    // oracle. Variance-agnostic agents never use it for decisions.
    virtual void observe(ActionId x, double reward, double sigma) = 0;
    virtual RoundDiagnostics diagnostics() const = 0;
    // Whether f lies in the agent's current confidence set(s).
    virtual bool covers(FunctionId f) const = 0;
};

// Presets: "catoni-oful", "catoni-oful-cs", "vacb", "oful-ls".
std::unique_ptr<Agent> make_agent(std::string_view preset, const AgentConfig& config,
                                  std::shared_ptr<const HypothesisClass> cls,
                                  const ProblemInfo& problem);

bool is_known_agent(std::string_view preset) noexcept;

}  // namespace rcb
