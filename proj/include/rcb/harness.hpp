#pragma once
// Seeded bandit episodes, regret traces and their aggregation.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rcb/agent.hpp"
#include "rcb/environments.hpp"

namespace rcb {

struct TraceRow {
    std::uint64_t round = 0;
    ActionId action = 0;
    double reward = 0.0;
    double instant_regret = 0.0;
    double cum_regret = 0.0;
    std::optional<double> weight;
    std::optional<int> level;
    std::optional<std::size_t> active_size;
    std::optional<double> beta_hat;
    // Not part of the CSV schema.
    bool covered = true;
    bool confidence_failure = false;

    bool operator==(const TraceRow&) const = default;
};

struct RegretTrace {
    std::string agent;
    std::uint64_t seed = 0;
    std::vector<TraceRow> rows;

    std::size_t size() const noexcept { return rows.size(); }
    double final_regret() const noexcept { return rows.empty() ? 0.0 : rows.back().cum_regret; }
    // f* stayed covered at every round >= burn_in (1-based rounds).
    bool covered_after(std::uint64_t burn_in) const noexcept;
};

// Plays `horizon` rounds of `instance` with `agent`. Each round's context and
// reward come from counter streams keyed by (seed, round); the agent is
// handed the oracle standard deviation of the chosen action.
RegretTrace run_episode(const Instance& instance, Agent& agent, std::uint64_t seed,
                        std::uint64_t horizon);

ProblemInfo problem_info(const Instance& instance, std::uint64_t horizon);

// One fresh agent per seed, run concurrently (at most `max_threads` at a
// time, 0 = hardware concurrency) and returned in seed order.
std::vector<RegretTrace> run_seeds(const Instance& instance, const std::string& preset,
                                   const AgentConfig& config, const std::vector<std::uint64_t>& seeds,
                                   std::uint64_t horizon, unsigned max_threads = 0);

struct SummaryRow {
    std::uint64_t round = 0;
    double mean = 0.0;
    double std = 0.0;  // unbiased (n - 1); 0 for a single trace
    double min = 0.0;
    double max = 0.0;

    bool operator==(const SummaryRow&) const = default;
};

struct SummaryStats {
    std::string agent;
    std::size_t runs = 0;
    std::vector<SummaryRow> rows;
};

// Per-round statistics of cumulative regret across traces of equal length.
SummaryStats aggregate(const std::vector<RegretTrace>& traces);

struct SampleStats {
    double mean = 0.0;
    double std = 0.0;
    double std_error = 0.0;
};
SampleStats sample_stats(const std::vector<double>& values);

}  // namespace rcb
