#include "rcb/agent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rcb/candidate_set.hpp"
#include "rcb/catoni_oful.hpp"
#include "rcb/errors.hpp"
#include "rcb/oful_ls.hpp"
#include "rcb/vacb.hpp"

namespace rcb {

void AgentConfig::validate() const {
    if (!(delta > 0.0 && delta < 1.0)) throw PreconditionError("agent config: delta must lie in (0, 1)");
    if (!(lambda > 0.0)) throw PreconditionError("agent config: lambda must be positive");
    if (!(alpha >= 0.0)) throw PreconditionError("agent config: alpha must be nonnegative");
    if (!(epsilon_offset > 0.0)) throw PreconditionError("agent config: epsilon must be positive");
    if (!(constant_scale > 0.0)) throw PreconditionError("agent config: constant_scale must be positive");
    if (!(catoni_tolerance > 0.0)) throw PreconditionError("agent config: catoni tolerance must be positive");
    if (!(cover_residue >= 0.0) || !(cover_residue_2 >= 0.0))
        throw PreconditionError("agent config: cover residues must be nonnegative");
}

double AgentConfig::weight_floor(std::uint64_t horizon) const {
    return alpha > 0.0 ? alpha : 1.0 / std::sqrt(static_cast<double>(std::max<std::uint64_t>(1, horizon)));
}

void cross_terms(const HypothesisClass& cls, const WeightedHistory& history, FunctionId f,
                 FunctionId g, std::vector<double>& out) {
    const std::size_t t = history.size();
    out.resize(t);
    for (std::size_t i = 0; i < t; ++i) {
        const ActionId x = history.actions[i];
        const double fg = cls(g, x);
        const double w = history.weights[i];
        out[i] = (cls(f, x) - fg) * (fg - history.rewards[i]) / (w * w);
    }
}

FunctionId saddle_point_fit(const PairAccumulator& acc, const WeightedHistory& history,
                            const Mask& active, double sample_factor, const ThetaRule& theta,
                            const CatoniOptions& options, std::vector<double>& scratch) {
    const HypothesisClass& cls = acc.hypothesis_class();
    const std::size_t n = cls.size();
    FunctionId best = n;
    double best_value = std::numeric_limits<double>::infinity();
    for (FunctionId f = 0; f < n; ++f) {
        if (!active[f]) continue;
        double worst = 0.0;  // g = f
        for (FunctionId g = 0; g < n && worst < best_value; ++g) {
            if (!active[g] || g == f || history.empty()) continue;
            cross_terms(cls, history, f, g, scratch);
            const double robust = catoni_mean(scratch, theta(f, g), options);
            worst = std::max(worst, acc.pair_distance(f, g) + 2.0 * sample_factor * robust);
        }
        if (worst < best_value) {
            best_value = worst;
            best = f;
        }
    }
    if (best == n) throw PreconditionError("saddle point fit: empty version space");
    return best;
}

OptimisticChoice optimistic_argmax(const HypothesisClass& cls, const Mask& active,
                                   std::span<const ActionId> context) {
    if (context.empty()) throw PreconditionError("select: empty context");
    std::optional<OptimisticChoice> best;
    for (ActionId x : context) {
        if (x >= cls.num_actions()) throw PreconditionError("select: unknown action in context");
        for (FunctionId f = 0; f < cls.size(); ++f) {
            if (!active[f]) continue;
            const double v = cls(f, x);
            const bool better = !best || v > best->value ||
                                (v == best->value && (x < best->action ||
                                                      (x == best->action && f < best->function)));
            if (better) best = OptimisticChoice{x, f, v};
        }
    }
    if (!best) throw PreconditionError("select: no active function");
    return *best;
}

bool is_known_agent(std::string_view preset) noexcept {
    return preset == "catoni-oful" || preset == "catoni-oful-cs" || preset == "vacb" ||
           preset == "oful-ls";
}

std::unique_ptr<Agent> make_agent(std::string_view preset, const AgentConfig& config,
                                  std::shared_ptr<const HypothesisClass> cls,
                                  const ProblemInfo& problem) {
    if (preset == "catoni-oful") return std::make_unique<CatoniOful>(std::move(cls), config, problem);
    if (preset == "catoni-oful-cs")
        return std::make_unique<CandidateSetOful>(std::move(cls), config, problem);
    if (preset == "vacb") return std::make_unique<Vacb>(std::move(cls), config, problem);
    if (preset == "oful-ls") return std::make_unique<OfulLeastSquares>(std::move(cls), config, problem);
    throw PreconditionError("unknown agent preset: " + std::string(preset));
}

}  // namespace rcb
