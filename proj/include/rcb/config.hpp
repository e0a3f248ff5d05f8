#pragma once
// JSON experiment configuration: instance preset, agents, horizon, seeds
// and output settings in one file.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rcb/agent.hpp"
#include "rcb/concentration.hpp"
#include "rcb/environments.hpp"

namespace rcb {

struct InstanceSpec {
    // lb-plus, lb-minus, bernoulli-scaled, three-point, linear-grid
    std::string preset = "bernoulli-scaled";
    double sigma = 0.1;
    std::vector<double> sigmas;  // per action; overrides sigma
    double range = 100.0;        // R
    std::optional<double> epsilon;        // lower-bound gap; defaults to the horizon preset
    std::optional<double> epsilon_ratio;  // gap as a multiple of sigma
    std::vector<double> means{0.5, 0.4, 0.3, 0.2};
    double bump = 0.25;
    std::string noise = "three-point";  // linear-grid noise family
    std::size_t dimension = 3;
    std::size_t points_per_axis = 5;
    std::size_t num_actions = 8;
    double half_width = 0.25;
    std::size_t true_function = 0;
    std::uint64_t feature_seed = 7;
    ContextSchedule schedule;
};

struct AgentSpec {
    std::string preset;
    AgentConfig config;
};

struct SweepSpec {
    std::string parameter;  // "sigma" or "horizon"
    std::vector<double> values;
};

struct ConcentrationSettings {
    std::string distribution = "three-point";  // three-point, lb-plus, lb-minus, bernoulli-scaled, deterministic
    double sigma = 0.5;
    double range = 100.0;
    double epsilon = 0.0;
    double value = 0.0;  // deterministic
    ConcentrationSpec spec;
};

struct ExperimentConfig {
    InstanceSpec instance;
    std::vector<AgentSpec> agents;
    std::uint64_t horizon = 1000;
    std::vector<std::uint64_t> seeds{1};
    std::uint64_t burn_in = 0;
    std::filesystem::path output = "out";
    std::string format = "csv";
    unsigned threads = 0;
    std::optional<SweepSpec> sweep;
    std::optional<ConcentrationSettings> concentration;

    void validate() const;
};

// Throws ConfigError with the offending key on schema violations.
ExperimentConfig parse_config(const nlohmann::json& doc);
// ConfigError on bad content, IoError when the file cannot be read.
ExperimentConfig load_config(const std::filesystem::path& path);

// "20" (seeds 1..20), "5-9" (inclusive range) or "3,5,8" (explicit list).
std::vector<std::uint64_t> parse_seed_list(const std::string& text);

Instance build_instance(const InstanceSpec& spec, std::uint64_t horizon);
RewardDistribution build_distribution(const ConcentrationSettings& settings);

}  // namespace rcb
