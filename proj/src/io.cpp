#include "driftbandit/io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace driftbandit {

using nlohmann::json;

namespace {

[[noreturn]] void bad_config(const std::string& what) {
    throw Error(ErrorCode::invalid_argument, "config: " + what);
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        bad_config(std::string("field '") + key + "' has the wrong type");
    }
}

}  // namespace

std::string format_real(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", value);
    std::string s(buf);
    if (s == "-0") s = "0";
    return s;
}

std::vector<double> parse_real_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw Error(ErrorCode::invalid_argument, "not a number: '" + item + "'");
        }
        while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
        if (used != item.size()) {
            throw Error(ErrorCode::invalid_argument, "not a number: '" + item + "'");
        }
        out.push_back(v);
    }
    return out;
}

ExperimentConfig config_from_json(const json& input) {
    const json& doc = input.contains("config") ? input.at("config") : input;
    if (!doc.is_object()) bad_config("top level must be an object");
    ExperimentConfig config;

    if (!doc.contains("instance")) bad_config("missing 'instance'");
    const json& inst = doc.at("instance");
    config.means = get_or<std::vector<double>>(inst, "means", {});
    std::string noise = get_or<std::string>(inst, "noise", "gaussian");
    if (noise == "gaussian") {
        config.noise = Noise::gaussian(get_or<double>(inst, "sigma", 1.0));
    } else if (noise == "bernoulli") {
        config.noise = Noise::bernoulli();
    } else {
        bad_config("unknown noise '" + noise + "'");
    }

    if (!doc.contains("policies") || !doc.at("policies").is_array()) {
        bad_config("missing 'policies' array");
    }
    for (const json& p : doc.at("policies")) {
        PolicySetup setup;
        setup.policy = PolicyKind::parse(get_or<std::string>(p, "kind", ""), get_or<double>(p, "c", 4.0));
        if (p.contains("project_feedback")) setup.project_feedback = get_or<bool>(p, "project_feedback", false);
        config.policies.push_back(setup);
    }

    if (!doc.contains("drift")) bad_config("missing 'drift'");
    const json& drift = doc.at("drift");
    config.drift_kind = drift_kind_from_string(get_or<std::string>(drift, "kind", "linear"));
    config.drift_cap = get_or<double>(drift, "cap", 0.0);
    config.l_values = get_or<std::vector<double>>(drift, "l_values", {});

    config.horizon = get_or<std::uint64_t>(doc, "T", config.horizon);
    config.replications = get_or<std::uint64_t>(doc, "replications", config.replications);
    config.master_seed = get_or<std::uint64_t>(doc, "master_seed", config.master_seed);
    config.capture_trajectories = get_or<bool>(doc, "capture_trajectories", false);
    config.trajectory_stride = get_or<std::uint64_t>(doc, "trajectory_stride", config.trajectory_stride);
    config.check_ucb_bounds = get_or<bool>(doc, "check_ucb_bounds", false);
    config.validate();
    return config;
}

json config_to_json(const ExperimentConfig& config) {
    json inst = {{"means", config.means}};
    if (config.noise.kind == Noise::Kind::gaussian) {
        inst["noise"] = "gaussian";
        inst["sigma"] = config.noise.sigma;
    } else {
        inst["noise"] = "bernoulli";
    }
    json policies = json::array();
    for (const PolicySetup& setup : config.policies) {
        json p = {{"kind", setup.policy.name()}};
        if (setup.policy.kind == PolicyKind::Kind::egreedy) p["c"] = setup.policy.c;
        if (setup.project_feedback) p["project_feedback"] = *setup.project_feedback;
        policies.push_back(p);
    }
    json drift = {{"kind", to_string(config.drift_kind)}, {"l_values", config.l_values}};
    if (config.drift_kind == DriftModel::Kind::clipped_linear) drift["cap"] = config.drift_cap;
    return {
        {"instance", inst},
        {"policies", policies},
        {"drift", drift},
        {"T", config.horizon},
        {"replications", config.replications},
        {"master_seed", config.master_seed},
        {"capture_trajectories", config.capture_trajectories},
        {"trajectory_stride", config.trajectory_stride},
        {"check_ucb_bounds", config.check_ucb_bounds},
    };
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::invalid_argument, "cannot open config file " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        bad_config(std::string("parse error: ") + e.what());
    }
    return config_from_json(doc);
}

void write_summary_csv(std::ostream& out, const AggregateResult& result) {
    out << "policy,l,regret_mean,regret_std,comp_mean,comp_std,comp_rounds_mean,arm1_err_mean\n";
    for (const CellResult& c : result.cells) {
        out << c.policy.name() << ',' << format_real(c.l) << ',' << format_real(c.regret.mean) << ','
            << format_real(c.regret.std) << ',' << format_real(c.compensation.mean) << ','
            << format_real(c.compensation.std) << ',' << format_real(c.comp_rounds.mean) << ','
            << format_real(c.arm1_rel_error.mean) << '\n';
    }
}

void write_curves_csv(std::ostream& out, const AggregateResult& result) {
    out << "policy,l,t,cum_regret_mean,cum_compensation_mean\n";
    for (const CellResult& c : result.cells) {
        for (std::size_t i = 0; i < c.curve_t.size(); ++i) {
            out << c.policy.name() << ',' << format_real(c.l) << ',' << c.curve_t[i] << ','
                << format_real(c.curve_regret[i]) << ',' << format_real(c.curve_compensation[i])
                << '\n';
        }
    }
}

void write_gnuplot_script(std::ostream& out, const std::string& curves_file) {
    out << "# usage: gnuplot -e \"l=0\" curves.gp\n"
        << "if (!exists(\"l\")) l = 0\n"
        << "set datafile separator ','\n"
        << "set terminal pngcairo size 1200,500\n"
        << "set output sprintf('curves_l%g.png', l)\n"
        << "set multiplot layout 1,2\n"
        << "set xlabel 't'\n"
        << "sel(p) = sprintf(\"< awk -F, '$1==\\\"%s\\\" && $2==%g' " << curves_file << "\", p, l)\n"
        << "set title 'cumulative regret'\n"
        << "plot for [p in \"ucb egreedy thompson\"] sel(p) using 3:4 with lines title p\n"
        << "set title 'cumulative compensation'\n"
        << "plot for [p in \"ucb egreedy thompson\"] sel(p) using 3:5 with lines title p\n"
        << "unset multiplot\n";
}

std::string library_version() {
#ifdef DRIFTBANDIT_VERSION
    return DRIFTBANDIT_VERSION;
#else
    return "unknown";
#endif
}

}  // namespace driftbandit
