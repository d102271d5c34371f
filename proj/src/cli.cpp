#include "driftbandit/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "driftbandit/analysis.hpp"
#include "driftbandit/experiment.hpp"
#include "driftbandit/io.hpp"
#include "driftbandit/mechanism.hpp"
#include "driftbandit/random.hpp"

namespace driftbandit::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kReferenceMeans = "0.9,0.8,0.7,0.6,0.5,0.4,0.3,0.2,0.1";
constexpr std::uint64_t kMaxTraceRounds = 20;

/** Bad user input: reported with exit code 2. */
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EnvFlags {
    std::string means = kReferenceMeans;
    std::string noise = "gaussian";
    double sigma = 1.0;
};

struct SimFlags {
    std::string policy = "ucb";
    double c = 4.0;
    std::string drift = "linear";
    double l = 0.0;
    double cap = 0.0;
    std::string project = "auto";
};

struct RunFlags {
    EnvFlags env;
    SimFlags sim;
    std::uint64_t horizon = 20000;
    std::uint64_t seed = 1;
    bool check_ucb = false;
    std::string out_dir = "out";
    unsigned jobs = 1;
};

struct SweepFlags {
    std::string config;
    std::string out_dir = "out";
    unsigned jobs = 0;
    std::uint64_t seed = 0;  // 0 keeps the config's master_seed
};

struct BoundsFlags {
    std::string means = kReferenceMeans;
    double l = 0.0;
    double c = 4.0;
    double delta_lower = 0.0;  // 0: min pairwise gap of the means
    double horizon = 20000;
    std::string out_dir;
};

struct TraceFlags {
    EnvFlags env{"0.6,0.4", "gaussian", 0.0};
    SimFlags sim{"ucb", 1.0, "linear", 0.5, 0.0, "auto"};
    std::uint64_t horizon = 6;
    std::string script;
};

void add_env_flags(CLI::App* app, EnvFlags& f) {
    app->add_option("--means", f.means, "comma-separated arm means")->capture_default_str();
    app->add_option("--noise", f.noise, "gaussian | bernoulli")->capture_default_str();
    app->add_option("--sigma", f.sigma, "gaussian noise std")->capture_default_str();
}

void add_sim_flags(CLI::App* app, SimFlags& f) {
    app->add_option("--policy", f.policy, "ucb | egreedy | thompson | greedy")->capture_default_str();
    app->add_option("--c", f.c, "egreedy exploration constant")->capture_default_str();
    app->add_option("--drift", f.drift, "zero | linear | clipped_linear")->capture_default_str();
    app->add_option("--l", f.l, "drift Lipschitz coefficient")->capture_default_str();
    app->add_option("--cap", f.cap, "cap for clipped_linear drift")->capture_default_str();
    app->add_option("--project", f.project, "clip feedback to [0,1]: auto | on | off")
        ->capture_default_str();
}

BanditInstance make_instance(const EnvFlags& f) {
    std::vector<double> means = parse_real_list(f.means);
    if (f.noise == "gaussian") return BanditInstance(std::move(means), Noise::gaussian(f.sigma));
    if (f.noise == "bernoulli") return BanditInstance(std::move(means), Noise::bernoulli());
    throw UsageError("unknown noise '" + f.noise + "'");
}

DriftModel make_drift_model(const SimFlags& f) {
    if (f.l < 0.0) {
        throw UsageError("--l must be >= 0: the drift function is non-decreasing with f(0) = 0 "
                         "and Lipschitz constant l >= 0");
    }
    return make_drift(drift_kind_from_string(f.drift), f.l, f.cap);
}

MechanismOptions make_options(const SimFlags& f, const PolicyKind& policy) {
    MechanismOptions options = default_options(policy);
    if (f.project == "on") {
        options.project_feedback = true;
    } else if (f.project == "off") {
        options.project_feedback = false;
    } else if (f.project != "auto") {
        throw UsageError("--project must be auto, on or off");
    }
    return options;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

json manifest_base(const std::string& command) {
    return {{"tool", "driftbandit"}, {"version", library_version()}, {"command", command}};
}

json sim_flags_json(const SimFlags& f) {
    return {{"policy", f.policy}, {"c", f.c}, {"drift", f.drift},
            {"l", f.l},           {"cap", f.cap}, {"project", f.project}};
}

json env_flags_json(const EnvFlags& f) {
    return {{"means", f.means}, {"noise", f.noise}, {"sigma", f.sigma}};
}

int do_run(const RunFlags& f, std::ostream& out) {
    BanditInstance instance = make_instance(f.env);
    PolicyKind policy = PolicyKind::parse(f.sim.policy, f.sim.c);
    DriftModel drift = make_drift_model(f.sim);
    MechanismOptions options = make_options(f.sim, policy);
    options.check_ucb_bounds = f.check_ucb;
    if (f.horizon < instance.num_arms()) throw UsageError("--T must be >= number of arms");

    auto trajectory = [&] {
        try {
            return run(instance, policy, drift, options, f.horizon, f.seed);
        } catch (const std::exception& e) {
            throw std::runtime_error(std::string("mechanism.run: ") + e.what());
        }
    }();
    SummaryMetrics summary = summarize(trajectory, instance);

    fs::path dir(f.out_dir);
    fs::create_directories(dir);
    std::ostringstream csv;
    write_trajectory_csv(csv, trajectory.rounds);
    write_file(dir / "trajectory.csv", csv.str());

    json manifest = manifest_base("run");
    manifest["seed"] = f.seed;
    manifest["flags"] = {{"env", env_flags_json(f.env)}, {"sim", sim_flags_json(f.sim)},
                         {"T", f.horizon},               {"seed", f.seed},
                         {"check_ucb", f.check_ucb}};
    manifest["outputs"] = {{"trajectories_csv", "trajectory.csv"}};
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");

    out << "policy=" << policy.name() << " l=" << format_real(drift.lipschitz) << " T=" << f.horizon
        << " seed=" << f.seed << " regret=" << format_real(summary.regret)
        << " compensation=" << format_real(summary.compensation)
        << " comp_rounds=" << summary.comp_rounds
        << " arm1_err=" << format_real(summary.arm1_rel_error);
    if (f.check_ucb) {
        out << " ucb_violations="
            << trajectory.diagnostics.ucb_compensation_violations +
                   trajectory.diagnostics.ucb_drift_violations;
    }
    out << '\n';
    return kExitOk;
}

int do_sweep(const SweepFlags& f, std::ostream& out) {
    ExperimentConfig config = load_config(f.config);
    if (f.seed != 0) config.master_seed = f.seed;

    AggregateResult result;
    try {
        result = run_experiment(config, f.jobs);
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("experiment.run_experiment: ") + e.what());
    }

    fs::path dir(f.out_dir);
    fs::create_directories(dir);
    std::ostringstream summary;
    write_summary_csv(summary, result);
    write_file(dir / "summary.csv", summary.str());

    json outputs = {{"summary_csv", "summary.csv"}};
    if (config.capture_trajectories) {
        std::ostringstream curves;
        write_curves_csv(curves, result);
        write_file(dir / "curves.csv", curves.str());
        std::ostringstream gp;
        write_gnuplot_script(gp, "curves.csv");
        write_file(dir / "curves.gp", gp.str());
        outputs["trajectories_csv"] = "curves.csv";
        outputs["gnuplot_script"] = "curves.gp";
    }
    json manifest = manifest_base("sweep");
    manifest["master_seed"] = config.master_seed;
    manifest["config"] = config_to_json(config);
    manifest["outputs"] = outputs;
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");

    out << summary.str();
    return kExitOk;
}

int do_bounds(const BoundsFlags& f, std::ostream& out) {
    BanditInstance instance(parse_real_list(f.means), Noise::bernoulli());
    if (f.l < 0.0) throw UsageError("--l must be >= 0 (Lipschitz constant of the drift)");
    if (!(f.c > 0.0)) throw UsageError("--c must be > 0");
    if (!(f.horizon >= 2.0)) throw UsageError("--T must be >= 2");
    if (f.delta_lower < 0.0) throw UsageError("--delta-lower must be > 0");
    std::optional<double> delta_lower;
    if (f.delta_lower > 0.0) delta_lower = f.delta_lower;
    BoundInputs in = bound_inputs(instance, f.l, f.c, f.horizon, delta_lower);

    std::ostringstream table;
    table << "K=" << in.num_arms << " T=" << format_real(in.horizon) << " l=" << format_real(in.l)
          << " c=" << format_real(in.c) << " delta=" << format_real(in.delta_min)
          << " delta_lower=" << format_real(in.delta_lower) << '\n';
    auto row = [&](const char* label, double value) {
        table << std::left << std::setw(34) << label << format_real(value) << '\n';
    };
    row("ucb_regret_bound", ucb_regret_bound(in));
    row("ucb_compensation_bound", ucb_compensation_bound(in));
    row("egreedy_regret_bound", egreedy_regret_bound(in));
    row("egreedy_compensation_bound", egreedy_compensation_bound(in));
    row("thompson_regret_bound", thompson_regret_bound(in));
    row("thompson_compensation_bound", thompson_compensation_bound(in));
    row("thompson_comp_frequency_bound", thompson_comp_frequency_bound(in.delta_lower, in.horizon));
    if (!check_c_condition(in.c, in.delta_min)) {
        table << "warning: c=" << format_real(in.c) << " is below 36/delta="
              << format_real(36.0 / in.delta_min) << "; the egreedy bounds assume c >= 36/delta\n";
    }
    out << table.str();

    if (!f.out_dir.empty()) {
        fs::path dir(f.out_dir);
        fs::create_directories(dir);
        write_file(dir / "bounds.txt", table.str());
        json manifest = manifest_base("bounds");
        manifest["flags"] = {{"means", f.means}, {"l", f.l}, {"c", f.c},
                             {"delta_lower", in.delta_lower}, {"T", f.horizon}};
        manifest["outputs"] = {{"bounds_txt", "bounds.txt"}};
        write_file(dir / "manifest.json", manifest.dump(2) + "\n");
    }
    return kExitOk;
}

int do_trace(const TraceFlags& f, std::ostream& out) {
    BanditInstance instance = make_instance(f.env);
    PolicyKind policy = PolicyKind::parse(f.sim.policy, f.sim.c);
    DriftModel drift = make_drift_model(f.sim);
    MechanismOptions options = make_options(f.sim, policy);
    if (f.horizon > kMaxTraceRounds) throw UsageError("trace: --T must be <= 20");
    if (f.horizon < instance.num_arms()) throw UsageError("trace: --T must be >= number of arms");
    std::vector<double> draws;
    if (!f.script.empty()) draws = parse_real_list(f.script);

    ScriptedRandom rng(std::move(draws));
    Trajectory trajectory = run(instance, policy, drift, options, f.horizon, rng);
    if (rng.deficit() > 0) {
        throw UsageError("scripted rng is short by " + std::to_string(rng.deficit()) +
                         " draw(s): supplied " + std::to_string(rng.supplied()) + ", needed " +
                         std::to_string(rng.consumed()));
    }
    write_trajectory_csv(out, trajectory.rounds);
    return kExitOk;
}

}  // namespace

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Incentivized bandit exploration under reward drift"};
    app.require_subcommand(1);

    RunFlags run_flags;
    CLI::App* run_cmd = app.add_subcommand("run", "simulate one seeded run and write its trajectory");
    add_env_flags(run_cmd, run_flags.env);
    add_sim_flags(run_cmd, run_flags.sim);
    run_cmd->add_option("--T", run_flags.horizon, "horizon")->capture_default_str();
    run_cmd->add_option("--seed", run_flags.seed, "rng seed")->capture_default_str();
    run_cmd->add_flag("--check-ucb", run_flags.check_ucb, "count UCB inequality violations");
    run_cmd->add_option("--out-dir", run_flags.out_dir)->capture_default_str();
    run_cmd->add_option("--jobs", run_flags.jobs, "unused by run; accepted for symmetry");

    SweepFlags sweep_flags;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "replicated experiment from a config file");
    sweep_cmd->add_option("--config", sweep_flags.config, "JSON config or manifest")->required();
    sweep_cmd->add_option("--out-dir", sweep_flags.out_dir)->capture_default_str();
    sweep_cmd->add_option("--jobs", sweep_flags.jobs, "worker threads (0 = all cores)")
        ->capture_default_str();
    sweep_cmd->add_option("--seed", sweep_flags.seed, "override master_seed (0 keeps config)");

    BoundsFlags bounds_flags;
    CLI::App* bounds_cmd = app.add_subcommand("bounds", "evaluate the closed-form bounds");
    bounds_cmd->add_option("--means", bounds_flags.means)->capture_default_str();
    bounds_cmd->add_option("--l", bounds_flags.l)->capture_default_str();
    bounds_cmd->add_option("--c", bounds_flags.c)->capture_default_str();
    bounds_cmd->add_option("--delta-lower", bounds_flags.delta_lower,
                           "posted-mean separation (default: min pairwise gap)");
    bounds_cmd->add_option("--T", bounds_flags.horizon)->capture_default_str();
    bounds_cmd->add_option("--out-dir", bounds_flags.out_dir, "also write bounds.txt here");
    std::uint64_t unused_seed = 0;
    unsigned unused_jobs = 0;
    bounds_cmd->add_option("--seed", unused_seed, "ignored");
    bounds_cmd->add_option("--jobs", unused_jobs, "ignored");

    TraceFlags trace_flags;
    CLI::App* trace_cmd = app.add_subcommand("trace", "short run with scripted draws, printed as CSV");
    add_env_flags(trace_cmd, trace_flags.env);
    add_sim_flags(trace_cmd, trace_flags.sim);
    trace_cmd->add_option("--T", trace_flags.horizon)->capture_default_str();
    trace_cmd->add_option("--script", trace_flags.script, "comma-separated draws, consumed in order");

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    const char* stage = "";
    try {
        if (*run_cmd) {
            stage = "run";
            return do_run(run_flags, out);
        }
        if (*sweep_cmd) {
            stage = "sweep";
            return do_sweep(sweep_flags, out);
        }
        if (*bounds_cmd) {
            stage = "bounds";
            return do_bounds(bounds_flags, out);
        }
        stage = "trace";
        return do_trace(trace_flags, out);
    } catch (const UsageError& e) {
        err << "error: " << stage << ": " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << stage << ": " << e.what() << '\n';
        return e.code() == ErrorCode::invalid_argument || e.code() == ErrorCode::non_unique_optimum
                   ? kExitUsage
                   : kExitRuntime;
    } catch (const std::exception& e) {
        err << "error: " << stage << ": " << e.what() << '\n';
        return kExitRuntime;
    }
}

}  // namespace driftbandit::cli
