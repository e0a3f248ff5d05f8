#include "rcb/harness.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <thread>

#include "rcb/errors.hpp"

namespace rcb {

bool RegretTrace::covered_after(std::uint64_t burn_in) const noexcept {
    return std::all_of(rows.begin(), rows.end(),
                       [burn_in](const TraceRow& r) { return r.round < burn_in || r.covered; });
}

ProblemInfo problem_info(const Instance& instance, std::uint64_t horizon) {
    return ProblemInfo{instance.noise_range(), instance.sigma_eta(), instance.c_eta(), horizon};
}

RegretTrace run_episode(const Instance& instance, Agent& agent, std::uint64_t seed,
                        std::uint64_t horizon) {
    if (horizon < 1) throw PreconditionError("run_episode: horizon must be at least 1");
    RegretTrace trace{std::string(agent.name()), seed, {}};
    trace.rows.reserve(horizon);
    double cum = 0.0;
    for (std::uint64_t t = 1; t <= horizon; ++t) {
        const std::vector<ActionId> context = instance.context(seed, t);
        const Selection sel = agent.select(context);
        const double reward = sample_reward(instance, sel.action, seed, t);
        const double regret = instant_regret(instance, context, sel.action);
        const double sigma = std::sqrt(variance_oracle(instance, sel.action));
        bool failed = false;
        try {
            agent.observe(sel.action, reward, sigma);
        } catch (const ConfidenceFailure&) {
            failed = true;
        }
        cum += regret;
        const RoundDiagnostics d = agent.diagnostics();
        trace.rows.push_back(TraceRow{t, sel.action, reward, regret, cum, d.weight,
                                      sel.level ? sel.level : d.level, d.active_size, d.beta_hat,
                                      agent.covers(instance.true_function()),
                                      failed || d.confidence_failure});
    }
    return trace;
}

std::vector<RegretTrace> run_seeds(const Instance& instance, const std::string& preset,
                                   const AgentConfig& config, const std::vector<std::uint64_t>& seeds,
                                   std::uint64_t horizon, unsigned max_threads) {
    if (seeds.empty()) throw PreconditionError("run_seeds: no seeds");
    const ProblemInfo problem = problem_info(instance, horizon);
    auto one = [&](std::uint64_t seed) {
        auto agent = make_agent(preset, config, instance.class_ptr(), problem);
        return run_episode(instance, *agent, seed, horizon);
    };
    unsigned threads = max_threads ? max_threads : std::max(1u, std::thread::hardware_concurrency());
    std::vector<RegretTrace> out(seeds.size());
    if (threads == 1) {
        for (std::size_t i = 0; i < seeds.size(); ++i) out[i] = one(seeds[i]);
        return out;
    }
    for (std::size_t start = 0; start < seeds.size(); start += threads) {
        const std::size_t stop = std::min(seeds.size(), start + threads);
        std::vector<std::future<RegretTrace>> batch;
        for (std::size_t i = start; i < stop; ++i)
            batch.push_back(std::async(std::launch::async, one, seeds[i]));
        for (std::size_t i = start; i < stop; ++i) out[i] = batch[i - start].get();
    }
    return out;
}

SummaryStats aggregate(const std::vector<RegretTrace>& traces) {
    if (traces.empty()) throw PreconditionError("aggregate: no traces");
    const std::size_t len = traces.front().size();
    for (const auto& tr : traces)
        if (tr.size() != len) throw PreconditionError("aggregate: traces differ in length");
    SummaryStats out{traces.front().agent, traces.size(), {}};
    out.rows.reserve(len);
    std::vector<double> column(traces.size());
    for (std::size_t r = 0; r < len; ++r) {
        for (std::size_t k = 0; k < traces.size(); ++k) column[k] = traces[k].rows[r].cum_regret;
        const SampleStats s = sample_stats(column);
        const auto [lo, hi] = std::minmax_element(column.begin(), column.end());
        out.rows.push_back({traces.front().rows[r].round, s.mean, s.std, *lo, *hi});
    }
    return out;
}

SampleStats sample_stats(const std::vector<double>& values) {
    if (values.empty()) throw PreconditionError("sample_stats: no values");
    const double n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double sd = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    return {mean, sd, sd / std::sqrt(n)};
}

}  // namespace rcb
