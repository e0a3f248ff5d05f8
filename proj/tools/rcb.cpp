// rcb: run bandit experiments from a JSON config.
//
//   rcb run <config>             episodes per agent and seed, traces + summaries
//   rcb sweep <config>           final regret over a grid of sigma or horizon
//   rcb concentration <config>   Catoni deviation-bound experiment
//   rcb eluder <class> <trace>   eluder dimension of a recorded action sequence
//
// Exit codes: 0 success, 2 config error, 3 I/O error.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>

#include "rcb/config.hpp"
#include "rcb/errors.hpp"
#include "rcb/harness.hpp"
#include "rcb/hypothesis.hpp"
#include "rcb/io.hpp"

namespace {

using namespace rcb;
namespace fs = std::filesystem;

struct Overrides {
    std::string seeds;
    std::string out;
    std::string format;
    double constant_scale = 0.0;
    unsigned threads = 0;
};

ExperimentConfig load_with_overrides(const std::string& path, const Overrides& o) {
    ExperimentConfig cfg = load_config(path);
    if (!o.seeds.empty()) cfg.seeds = parse_seed_list(o.seeds);
    if (!o.out.empty()) cfg.output = o.out;
    if (!o.format.empty()) cfg.format = o.format;
    if (o.threads) cfg.threads = o.threads;
    if (o.constant_scale > 0.0)
        for (auto& a : cfg.agents) a.config.constant_scale = o.constant_scale;
    cfg.validate();
    return cfg;
}

std::string seed_file(const std::string& agent, std::uint64_t seed) {
    return agent + "_seed" + std::to_string(seed) + ".csv";
}

struct AgentResult {
    SummaryStats summary;
    SampleStats final_regret;
    double coverage = 0.0;
    std::size_t failures = 0;
};

AgentResult summarize(const std::vector<RegretTrace>& traces, std::uint64_t burn_in) {
    AgentResult r{aggregate(traces), {}, 0.0, 0};
    std::vector<double> finals;
    std::size_t covered = 0;
    for (const auto& tr : traces) {
        finals.push_back(tr.final_regret());
        covered += tr.covered_after(burn_in);
        for (const auto& row : tr.rows) r.failures += row.confidence_failure;
    }
    r.final_regret = sample_stats(finals);
    r.coverage = static_cast<double>(covered) / static_cast<double>(traces.size());
    return r;
}

void print_result(const std::string& label, const AgentResult& r) {
    std::cout << label << ": final regret " << format_number(r.final_regret.mean) << " +- "
              << format_number(r.final_regret.std_error) << " (sd " << format_number(r.final_regret.std)
              << ", " << r.summary.runs << " runs), coverage " << format_number(r.coverage)
              << ", confidence failures " << r.failures << '\n';
}

int cmd_run(const std::string& path, const Overrides& o) {
    const ExperimentConfig cfg = load_with_overrides(path, o);
    if (cfg.agents.empty()) throw ConfigError("config: no agents to run");
    const Instance instance = build_instance(cfg.instance, cfg.horizon);
    nlohmann::json doc = {{"instance", instance.name()}, {"horizon", cfg.horizon}, {"agents", nlohmann::json::array()}};
    for (const AgentSpec& a : cfg.agents) {
        const auto traces = run_seeds(instance, a.preset, a.config, cfg.seeds, cfg.horizon, cfg.threads);
        const AgentResult r = summarize(traces, cfg.burn_in);
        print_result(a.preset, r);
        if (cfg.format == "csv") {
            for (const auto& tr : traces) emit_csv(tr, cfg.output / seed_file(a.preset, tr.seed));
            emit_csv(r.summary, cfg.output / (a.preset + "_summary.csv"));
        } else {
            nlohmann::json runs = nlohmann::json::array();
            for (const auto& tr : traces) runs.push_back(to_json(tr));
            doc["agents"].push_back({{"preset", a.preset}, {"summary", to_json(r.summary)}, {"runs", runs},
                                     {"coverage", r.coverage}});
        }
    }
    if (cfg.format == "json") write_text_file(cfg.output / "results.json", doc.dump(1) + "\n");
    return 0;
}

int cmd_sweep(const std::string& path, const Overrides& o) {
    const ExperimentConfig cfg = load_with_overrides(path, o);
    if (!cfg.sweep) throw ConfigError("config: sweep needs a 'sweep' section");
    if (cfg.agents.empty()) throw ConfigError("config: no agents to run");
    std::ostringstream table;
    table << "parameter,value,agent,mean_final_regret,std_final_regret,runs\n";
    nlohmann::json doc = nlohmann::json::array();
    for (double value : cfg.sweep->values) {
        InstanceSpec spec = cfg.instance;
        std::uint64_t horizon = cfg.horizon;
        if (cfg.sweep->parameter == "sigma") {
            spec.sigma = value;
            spec.sigmas.clear();
        } else {
            if (!(value >= 1.0) || value != std::floor(value)) throw ConfigError("sweep: horizons must be positive integers");
            horizon = static_cast<std::uint64_t>(value);
        }
        const Instance instance = build_instance(spec, horizon);
        for (const AgentSpec& a : cfg.agents) {
            const auto traces = run_seeds(instance, a.preset, a.config, cfg.seeds, horizon, cfg.threads);
            const AgentResult r = summarize(traces, std::min(cfg.burn_in, horizon - 1));
            print_result(a.preset + " " + cfg.sweep->parameter + "=" + format_number(value), r);
            table << cfg.sweep->parameter << ',' << format_number(value) << ',' << a.preset << ','
                  << format_number(r.final_regret.mean) << ',' << format_number(r.final_regret.std) << ','
                  << r.summary.runs << '\n';
            const std::string stem = a.preset + "_" + cfg.sweep->parameter + "=" + format_number(value);
            if (cfg.format == "csv") emit_csv(r.summary, cfg.output / (stem + "_summary.csv"));
            else doc.push_back({{"parameter", cfg.sweep->parameter}, {"value", value}, {"preset", a.preset},
                                {"summary", to_json(r.summary)}});
        }
    }
    if (cfg.format == "csv") write_text_file(cfg.output / "sweep.csv", table.str());
    else write_text_file(cfg.output / "sweep.json", doc.dump(1) + "\n");
    return 0;
}

int cmd_concentration(const std::string& path, const Overrides& o) {
    const ExperimentConfig cfg = load_with_overrides(path, o);
    if (!cfg.concentration) throw ConfigError("config: concentration needs a 'concentration' section");
    ConcentrationSpec spec = cfg.concentration->spec;
    spec.distribution = build_distribution(*cfg.concentration);
    const ConcentrationReport rep = concentration_experiment(spec);
    std::cout << "failure fraction " << format_number(rep.failure_fraction) << " over " << rep.trials
              << " trials (fixed-theta " << format_number(rep.fixed_theta_failure_fraction) << ")\n";
    for (const auto& q : rep.quantiles)
        std::cout << "q" << format_number(q.level) << " catoni " << format_number(q.catoni) << " empirical "
                  << format_number(q.empirical) << '\n';
    if (cfg.format == "json") {
        write_text_file(cfg.output / "concentration.json", to_json(rep).dump(1) + "\n");
    } else {
        std::ostringstream out;
        out << "level,catoni_error,empirical_error\n";
        for (const auto& q : rep.quantiles)
            out << format_number(q.level) << ',' << format_number(q.catoni) << ',' << format_number(q.empirical) << '\n';
        write_text_file(cfg.output / "concentration_quantiles.csv", out.str());
        std::ostringstream meta;
        meta << "metric,value\n"
             << "failure_fraction," << format_number(rep.failure_fraction) << '\n'
             << "fixed_theta_failure_fraction," << format_number(rep.fixed_theta_failure_fraction) << '\n'
             << "theta_low," << format_number(rep.theta_low) << '\n'
             << "theta_high," << format_number(rep.theta_high) << '\n'
             << "theta_star," << format_number(rep.theta_star) << '\n'
             << "log_factor_sq," << format_number(rep.log_factor_sq) << '\n'
             << "variance_budget," << format_number(rep.variance_budget) << '\n';
        write_text_file(cfg.output / "concentration.csv", meta.str());
    }
    return 0;
}

int cmd_eluder(const std::string& class_path, const std::string& trace_path, double lambda,
               const std::string& out) {
    if (!(lambda > 0.0)) throw ConfigError("eluder: lambda must be positive");
    std::shared_ptr<const HypothesisClass> cls;
    try {
        cls = std::make_shared<const HypothesisClass>(load_hypothesis_class(class_path));
    } catch (const PreconditionError& e) {
        throw ConfigError(class_path + ": " + e.what());
    }
    const RegretTrace trace = load_trace_csv(trace_path);
    std::vector<ActionId> actions;
    std::vector<double> weights;
    for (const auto& r : trace.rows) {
        if (r.action >= cls->num_actions()) throw ConfigError("eluder: trace action outside the class");
        actions.push_back(r.action);
        weights.push_back(r.weight.value_or(1.0));
    }
    std::ostringstream csv;
    csv << "round,action,weight,eluder_dimension\n";
    double total = 0.0;
    for (std::size_t k = 1; k <= actions.size(); ++k) {
        total = eluder_dimension(cls, std::span(actions).first(k), std::span(weights).first(k), lambda);
        csv << trace.rows[k - 1].round << ',' << actions[k - 1] << ',' << format_number(weights[k - 1]) << ','
            << format_number(total) << '\n';
    }
    std::cout << "eluder dimension " << format_number(total) << " over " << actions.size() << " rounds\n";
    if (!out.empty()) write_text_file(out, csv.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Robust contextual bandit experiments"};
    app.require_subcommand(1);
    Overrides o;
    std::string config;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("config", config, "JSON experiment file")->required();
        sub->add_option("--seeds", o.seeds, "N (seeds 1..N), a-b, or a,b,c");
        sub->add_option("--out", o.out, "output directory");
        sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--constant-scale", o.constant_scale, "override every agent's constant_scale");
        sub->add_option("--threads", o.threads, "parallel seeds (0 = all cores)");
    };
    auto* run = app.add_subcommand("run", "run episodes and write traces");
    add_common(run);
    auto* sweep = app.add_subcommand("sweep", "sweep sigma or horizon");
    add_common(sweep);
    auto* conc = app.add_subcommand("concentration", "Catoni deviation experiment");
    add_common(conc);
    auto* eluder = app.add_subcommand("eluder", "eluder dimension of a trace");
    std::string class_path, trace_path, eluder_out;
    double lambda = 1.0;
    eluder->add_option("class", class_path, "hypothesis class file")->required();
    eluder->add_option("trace", trace_path, "trace CSV")->required();
    eluder->add_option("--lambda", lambda, "regularizer");
    eluder->add_option("--out", eluder_out, "per-round CSV output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    try {
        if (run->parsed()) return cmd_run(config, o);
        if (sweep->parsed()) return cmd_sweep(config, o);
        if (conc->parsed()) return cmd_concentration(config, o);
        return cmd_eluder(class_path, trace_path, lambda, eluder_out);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
