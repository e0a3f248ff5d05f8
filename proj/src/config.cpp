#include "rcb/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "rcb/errors.hpp"
#include "rcb/linear.hpp"
#include "rcb/rng.hpp"

namespace rcb {

using nlohmann::json;

namespace {

template <class T>
T get_or(const json& obj, const char* key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config key '") + key + "': " + e.what());
    }
}

const json& require_object(const json& obj, const char* key) {
    if (!obj.contains(key) || !obj.at(key).is_object())
        throw ConfigError(std::string("config: '") + key + "' must be an object");
    return obj.at(key);
}

ContextSchedule parse_schedule(const json& j) {
    const std::string kind = get_or<std::string>(j, "kind", "all");
    if (kind == "all") return ContextSchedule::all();
    if (kind == "fixed") return ContextSchedule::fixed(get_or<std::vector<ActionId>>(j, "actions", {}));
    const std::size_t size = get_or<std::size_t>(j, "size", 0);
    if (kind == "round-robin") return ContextSchedule::round_robin(size);
    if (kind == "seeded-random") return ContextSchedule::seeded_random(size);
    throw ConfigError("config: unknown context kind '" + kind + "'");
}

InstanceSpec parse_instance(const json& j) {
    InstanceSpec s;
    s.preset = get_or<std::string>(j, "preset", s.preset);
    s.sigma = get_or(j, "sigma", s.sigma);
    s.sigmas = get_or(j, "sigmas", s.sigmas);
    s.range = get_or(j, "range", s.range);
    if (j.contains("epsilon")) s.epsilon = get_or(j, "epsilon", 0.0);
    if (j.contains("epsilon_ratio")) s.epsilon_ratio = get_or(j, "epsilon_ratio", 0.0);
    s.means = get_or(j, "means", s.means);
    s.bump = get_or(j, "bump", s.bump);
    s.noise = get_or(j, "noise", s.noise);
    s.dimension = get_or(j, "dimension", s.dimension);
    s.points_per_axis = get_or(j, "points_per_axis", s.points_per_axis);
    s.num_actions = get_or(j, "num_actions", s.num_actions);
    s.half_width = get_or(j, "half_width", s.half_width);
    s.true_function = get_or(j, "true_function", s.true_function);
    s.feature_seed = get_or(j, "feature_seed", s.feature_seed);
    if (j.contains("context")) s.schedule = parse_schedule(j.at("context"));
    return s;
}

AgentSpec parse_agent(const json& j) {
    if (j.is_string()) return {j.get<std::string>(), AgentConfig{}};
    if (!j.is_object()) throw ConfigError("config: agents entries must be strings or objects");
    AgentSpec a;
    a.preset = get_or<std::string>(j, "preset", "");
    if (!is_known_agent(a.preset)) throw ConfigError("config: unknown agent preset '" + a.preset + "'");
    AgentConfig& c = a.config;
    c.delta = get_or(j, "delta", c.delta);
    c.lambda = get_or(j, "lambda", c.lambda);
    c.alpha = get_or(j, "alpha", c.alpha);
    c.epsilon_offset = get_or(j, "epsilon", c.epsilon_offset);
    c.constant_scale = get_or(j, "constant_scale", c.constant_scale);
    c.catoni_tolerance = get_or(j, "catoni_tolerance", c.catoni_tolerance);
    c.cover_residue = get_or(j, "cover_residue", c.cover_residue);
    c.cover_residue_2 = get_or(j, "cover_residue_2", c.cover_residue_2);
    const std::string cadence = get_or<std::string>(j, "refit_cadence", "every-round");
    if (cadence == "every-round") c.refit_cadence = RefitCadence::every_round;
    else if (cadence == "doubling") c.refit_cadence = RefitCadence::doubling;
    else throw ConfigError("config: unknown refit_cadence '" + cadence + "'");
    const std::string radius = get_or<std::string>(j, "candidate_radius", "log");
    if (radius == "log") c.candidate_radius = CandidateRadius::log_formula;
    else if (radius == "explicit") c.candidate_radius = CandidateRadius::explicit_constant;
    else throw ConfigError("config: unknown candidate_radius '" + radius + "'");
    return a;
}

std::vector<std::uint64_t> parse_seeds(const json& j) {
    if (j.is_array()) return j.get<std::vector<std::uint64_t>>();
    if (j.is_string()) return parse_seed_list(j.get<std::string>());
    if (j.is_number_unsigned()) return parse_seed_list(std::to_string(j.get<std::uint64_t>()));
    if (j.is_object()) {
        const auto first = get_or<std::uint64_t>(j, "first", 1);
        const auto count = get_or<std::uint64_t>(j, "count", 1);
        std::vector<std::uint64_t> seeds;
        for (std::uint64_t k = 0; k < count; ++k) seeds.push_back(first + k);
        return seeds;
    }
    throw ConfigError("config: 'seeds' must be a list, a count, a range string or {first, count}");
}

std::vector<Eigen::VectorXd> unit_features(std::size_t count, std::size_t dim, std::uint64_t seed) {
    std::vector<Eigen::VectorXd> out;
    for (std::size_t a = 0; a < count; ++a) {
        CounterRng rng(seed, a, Stream::fixture);
        Eigen::VectorXd v(dim);
        for (std::size_t k = 0; k < dim; ++k) v[k] = 2.0 * rng.uniform() - 1.0;
        const double norm = v.norm();
        out.push_back(norm > 0.0 ? Eigen::VectorXd(v / norm) : Eigen::VectorXd::Unit(dim, 0));
    }
    return out;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (horizon < 1) throw ConfigError("config: horizon must be at least 1");
    if (seeds.empty()) throw ConfigError("config: seeds must be nonempty");
    if (burn_in >= horizon) throw ConfigError("config: burn_in must be below the horizon");
    if (format != "csv" && format != "json") throw ConfigError("config: format must be csv or json");
    for (const auto& a : agents) {
        if (!is_known_agent(a.preset)) throw ConfigError("config: unknown agent preset '" + a.preset + "'");
        try {
            a.config.validate();
        } catch (const PreconditionError& e) {
            throw ConfigError(std::string("config: ") + e.what());
        }
    }
    if (sweep && sweep->parameter != "sigma" && sweep->parameter != "horizon")
        throw ConfigError("config: sweep parameter must be sigma or horizon");
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
    auto number = [&](const std::string& s) -> std::uint64_t {
        std::size_t used = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (s.empty() || used != s.size() || s[0] == '-') throw ConfigError("seeds: bad value '" + text + "'");
        return v;
    };
    std::vector<std::uint64_t> seeds;
    if (text.find(',') != std::string::npos) {
        std::istringstream in(text);
        std::string item;
        while (std::getline(in, item, ',')) seeds.push_back(number(item));
    } else if (const auto dash = text.find('-'); dash != std::string::npos && dash > 0) {
        const auto lo = number(text.substr(0, dash));
        const auto hi = number(text.substr(dash + 1));
        if (hi < lo) throw ConfigError("seeds: empty range '" + text + "'");
        for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
    } else {
        const auto count = number(text);
        for (std::uint64_t s = 1; s <= count; ++s) seeds.push_back(s);
    }
    if (seeds.empty()) throw ConfigError("seeds: no seeds in '" + text + "'");
    return seeds;
}

ExperimentConfig parse_config(const json& doc) {
    if (!doc.is_object()) throw ConfigError("config: top level must be an object");
    ExperimentConfig cfg;
    if (doc.contains("instance")) cfg.instance = parse_instance(require_object(doc, "instance"));
    if (doc.contains("agents")) {
        if (!doc.at("agents").is_array()) throw ConfigError("config: 'agents' must be a list");
        for (const auto& a : doc.at("agents")) cfg.agents.push_back(parse_agent(a));
    }
    cfg.horizon = get_or(doc, "horizon", cfg.horizon);
    if (doc.contains("seeds")) cfg.seeds = parse_seeds(doc.at("seeds"));
    cfg.burn_in = get_or(doc, "burn_in", cfg.burn_in);
    cfg.threads = get_or(doc, "threads", cfg.threads);
    if (doc.contains("output")) {
        const json& o = require_object(doc, "output");
        cfg.output = get_or<std::string>(o, "path", cfg.output.string());
        cfg.format = get_or(o, "format", cfg.format);
    }
    if (doc.contains("sweep")) {
        const json& s = require_object(doc, "sweep");
        cfg.sweep = SweepSpec{get_or<std::string>(s, "parameter", ""), get_or<std::vector<double>>(s, "values", {})};
        if (cfg.sweep->values.empty()) throw ConfigError("config: sweep values must be nonempty");
    }
    if (doc.contains("concentration")) {
        const json& c = require_object(doc, "concentration");
        ConcentrationSettings s;
        s.distribution = get_or(c, "distribution", s.distribution);
        s.sigma = get_or(c, "sigma", s.sigma);
        s.range = get_or(c, "range", s.range);
        s.epsilon = get_or(c, "epsilon", s.epsilon);
        s.value = get_or(c, "value", s.value);
        s.spec.sample_count = get_or(c, "samples", s.spec.sample_count);
        s.spec.trials = get_or(c, "trials", s.spec.trials);
        s.spec.delta = get_or(c, "delta", s.spec.delta);
        s.spec.seed = get_or(c, "seed", s.spec.seed);
        s.spec.grid_points = get_or(c, "grid_points", s.spec.grid_points);
        s.spec.offset = get_or(c, "offset", s.spec.offset);
        cfg.concentration = s;
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config: " + path.string());
    json doc;
    try {
        doc = json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return parse_config(doc);
}

Instance build_instance(const InstanceSpec& spec, std::uint64_t horizon) {
    try {
        if (spec.preset == "lb-plus" || spec.preset == "lb-minus") {
            const double eps = spec.epsilon         ? *spec.epsilon
                               : spec.epsilon_ratio ? *spec.epsilon_ratio * spec.sigma
                                                    : lower_bound_epsilon(spec.sigma, spec.range, horizon);
            return make_lower_bound_instance(spec.sigma, eps, spec.range,
                                             spec.preset == "lb-plus" ? LowerBoundVariant::plus
                                                                      : LowerBoundVariant::minus);
        }
        if (spec.preset == "bernoulli-scaled" || spec.preset == "three-point") {
            std::vector<double> sigmas = spec.sigmas;
            if (sigmas.empty()) sigmas.assign(spec.means.size(), spec.sigma);
            const NoiseFamily family =
                spec.preset == "three-point" ? NoiseFamily::three_point : NoiseFamily::bernoulli_scaled;
            return make_bumped_instance(spec.means, sigmas, spec.range, spec.bump, family, spec.schedule,
                                        spec.preset);
        }
        if (spec.preset == "linear-grid") {
            const LinearGridClass grid = make_linear_grid_class(
                unit_features(spec.num_actions, spec.dimension, spec.feature_seed), spec.points_per_axis,
                spec.half_width);
            if (spec.true_function >= grid.cls->size())
                throw ConfigError("config: true_function outside the grid");
            std::vector<RewardDistribution> noise;
            for (std::size_t a = 0; a < spec.num_actions; ++a) {
                const double s = spec.sigmas.empty() ? spec.sigma : spec.sigmas.at(a);
                if (spec.noise == "three-point") noise.push_back(three_point_noise(s, spec.range));
                else if (spec.noise == "bernoulli-scaled") noise.push_back(bernoulli_noise(s, spec.range));
                else throw ConfigError("config: unknown noise family '" + spec.noise + "'");
            }
            return Instance(grid.cls, spec.true_function, std::move(noise), spec.range, spec.schedule,
                            std::nullopt, "linear-grid");
        }
    } catch (const PreconditionError& e) {
        throw ConfigError(std::string("instance '") + spec.preset + "': " + e.what());
    } catch (const std::out_of_range&) {
        throw ConfigError("instance '" + spec.preset + "': sigmas must list one value per action");
    }
    throw ConfigError("config: unknown instance preset '" + spec.preset + "'");
}

RewardDistribution build_distribution(const ConcentrationSettings& s) {
    try {
        if (s.distribution == "three-point") return three_point_noise(s.sigma, s.range);
        if (s.distribution == "lb-plus")
            return lower_bound_arm2(s.sigma, s.epsilon, s.range, LowerBoundVariant::plus);
        if (s.distribution == "lb-minus")
            return lower_bound_arm2(s.sigma, s.epsilon, s.range, LowerBoundVariant::minus);
        if (s.distribution == "bernoulli-scaled") return bernoulli_noise(s.sigma, s.range);
        if (s.distribution == "deterministic") return RewardDistribution::deterministic(s.value);
    } catch (const PreconditionError& e) {
        throw ConfigError(std::string("concentration distribution: ") + e.what());
    }
    throw ConfigError("config: unknown distribution '" + s.distribution + "'");
}

}  // namespace rcb
