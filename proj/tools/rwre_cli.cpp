// Command-line harness around the rwre library: single-walk dumps, one-shot
// estimation, full experiment grids, limit-functional validation and CSV
// summaries. See README.md for the config file format.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <span>
#include <sstream>

#include "rwre/environment.hpp"
#include "rwre/errors.hpp"
#include "rwre/experiment.hpp"
#include "rwre/infinite_valley.hpp"
#include "rwre/rng.hpp"
#include "rwre/valley.hpp"
#include "rwre/walk.hpp"

namespace {

using namespace rwre;

struct CommonArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> replicates;
    std::optional<std::string> out;
    std::optional<int> workers;
    std::optional<std::string> family;
    std::vector<double> params;
    bool timing = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "config file (key = value lines)");
    cmd->add_option("--seed", args.seed, "master seed");
    cmd->add_option("--replicates", args.replicates, "number of replicates");
    cmd->add_option("--out", args.out, "output path (default stdout)");
    cmd->add_option("--workers", args.workers, "worker threads");
    cmd->add_option("--family", args.family, "family: temkin | two_point | lazy_temkin");
    cmd->add_option("--params", args.params, "true free parameters");
    cmd->add_flag("--timing", args.timing, "write measured wall times (breaks byte determinism)");
}

ExperimentConfig resolve_config(const CommonArgs& args) {
    ExperimentConfig cfg;
    if (!args.config_path.empty()) cfg = load_config(args.config_path);
    if (args.family) cfg.family = family_from_name(*args.family);
    if (!args.params.empty()) cfg.true_free = args.params;
    if (args.seed) cfg.seed = *args.seed;
    if (args.replicates) cfg.replicates = *args.replicates;
    if (args.out) cfg.out_path = *args.out;
    if (args.workers) cfg.workers = *args.workers;
    if (args.timing) cfg.timing = true;
    return cfg;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    return out;
}

int cmd_simulate(const CommonArgs& args, std::int64_t n, const std::string& env_out) {
    ExperimentConfig cfg = resolve_config(args);
    const auto theta = cfg.true_theta();
    auto env_rng = make_engine(cfg.seed, 0);
    const auto env = sample_environment(theta, static_cast<int>(cfg.x_max), env_rng);
    if (!env_out.empty()) {
        auto out = open_out(env_out);
        write_environment_csv(env, out);
    }
    const auto result = simulate_walk(env, n, substream_seed(cfg.seed, 1));
    if (!cfg.out_path.empty()) {
        auto out = open_out(cfg.out_path);
        write_stats_csv(result.stats, out);
    } else {
        write_stats_csv(result.stats, std::cout);
    }
    std::cerr << "n=" << n << " R_n=" << result.stats.range_size()
              << " max_site=" << result.stats.max_site << "\n";

    // Valley diagnostics for the depth-(log n + sqrt(log n)) trap.
    const double h = std::log(static_cast<double>(n)) +
                     std::sqrt(std::log(static_cast<double>(n)));
    try {
        const auto prof = potential(env);
        const auto valley = find_valley(prof, h);
        const auto decomp = deep_sites(prof, valley, n, cfg.delta);
        const bool event = deep_site_event(result.stats, decomp, n, cfg.delta);
        std::cerr << "valley: b=" << valley.b << " c=" << valley.c
                  << " deep_sites=" << decomp.size() << " delta=" << cfg.delta
                  << " deep_site_event=" << (event ? "yes" : "no") << "\n";
    } catch (const ValleyNotClosedError&) {
        std::cerr << "valley: not closed within x_max=" << cfg.x_max << "\n";
    }
    return 0;
}

int cmd_estimate(const CommonArgs& args, std::int64_t n,
                 const std::vector<std::string>& estimator_names) {
    ExperimentConfig cfg = resolve_config(args);
    cfg.replicates = 1;
    cfg.n_grid = {n};
    if (!estimator_names.empty()) {
        cfg.estimators.clear();
        for (const auto& name : estimator_names)
            cfg.estimators.push_back(estimator_from_name(name));
    } else {
        cfg.estimators = {EstimatorKind::MPLE, EstimatorKind::MLE};
        if (cfg.family == FamilyKind::Temkin) {
            cfg.estimators.push_back(EstimatorKind::AE);
            cfg.estimators.push_back(EstimatorKind::Naive);
        }
    }
    cfg.timing = true;
    const auto records = run_experiment(cfg);
    std::cout << "estimator parameter truth      estimate   criterion  status\n";
    for (const auto& rec : records) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%-9s %-9s %-10.6f %-10.6f %-11.6g %s\n",
                      estimator_name(rec.estimator).c_str(), rec.parameter.c_str(),
                      rec.truth, rec.estimate.value_or(std::nan("")),
                      rec.criterion.value_or(std::nan("")), rec.status.c_str());
        std::cout << buf;
    }
    return 0;
}

int cmd_experiment(const CommonArgs& args) {
    ExperimentConfig cfg = resolve_config(args);
    const auto records = run_experiment(cfg);
    if (!cfg.out_path.empty()) {
        auto out = open_out(cfg.out_path);
        write_records_csv(records, cfg, out);
        std::cerr << "wrote " << records.size() << " rows to " << cfg.out_path << "\n";
    } else {
        write_records_csv(records, cfg, std::cout);
    }
    return 0;
}

int cmd_limit(const CommonArgs& args) {
    ExperimentConfig cfg = resolve_config(args);
    if (cfg.candidates.empty()) {
        std::cerr << "limit: empty candidate grid, nothing to do\n";
        if (!cfg.out_path.empty()) {
            auto out = open_out(cfg.out_path);
            out << "candidate,sample_id,l_inf,trunc_bound,branch,closed_form\n";
        }
        return 0;
    }
    std::vector<LimitSummary> summary;
    if (!cfg.out_path.empty()) {
        auto out = open_out(cfg.out_path);
        summary = limit_run(cfg, out);
    } else {
        std::ostringstream sink;
        summary = limit_run(cfg, sink);
        std::cout << sink.str();
    }
    print_limit_summary(summary, std::cerr);
    return 0;
}

int cmd_summarize(const std::string& in_path, bool trim) {
    std::ifstream in(in_path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open csv: " + in_path);
    std::vector<std::string> issues;
    const auto records = read_records_csv(in, &issues);
    for (const auto& msg : issues) std::cerr << "warning: " << msg << "\n";
    std::cout << "untrimmed:\n";
    print_summary(summarize(records, false), std::cout);
    if (trim) {
        std::cout << "\ntrimmed (1.5 IQR):\n";
        print_summary(summarize(records, true), std::cout);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"recurrent random walk in random environment: simulation and estimation"};
    app.require_subcommand(1);

    CommonArgs sim_args, est_args, exp_args, lim_args;
    std::int64_t sim_n = 10000, est_n = 10000;
    std::string env_out;
    std::vector<std::string> est_names;
    std::string summarize_in;
    bool trim = true;

    auto* sim = app.add_subcommand("simulate", "run one walk and dump its local times");
    add_common(sim, sim_args);
    sim->add_option("--n", sim_n, "number of steps");
    sim->add_option("--env-out", env_out, "also dump the environment table");

    auto* est = app.add_subcommand("estimate", "estimate one simulated dataset");
    add_common(est, est_args);
    est->add_option("--n", est_n, "number of steps");
    est->add_option("--estimators", est_names, "subset of mle,mple,ae,naive");

    auto* exp = app.add_subcommand("experiment", "full replicate grid, CSV output");
    add_common(exp, exp_args);

    auto* lim = app.add_subcommand("limit", "limit-functional Monte Carlo validation");
    add_common(lim, lim_args);

    auto* summ = app.add_subcommand("summarize", "summarize an experiment CSV");
    summ->add_option("--in", summarize_in, "experiment CSV path")->required();
    summ->add_flag("--trim,!--no-trim", trim, "also print the 1.5 IQR trimmed table");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(sim_args, sim_n, env_out);
        if (est->parsed()) return cmd_estimate(est_args, est_n, est_names);
        if (exp->parsed()) return cmd_experiment(exp_args);
        if (lim->parsed()) return cmd_limit(lim_args);
        if (summ->parsed()) return cmd_summarize(summarize_in, trim);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
