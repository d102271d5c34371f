/**
 * File formats: experiment config (JSON), summary and curve CSVs, run
 * manifests. Column order in every CSV is fixed.
 */

#ifndef DRIFTBANDIT_IO_HPP
#define DRIFTBANDIT_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "driftbandit/experiment.hpp"

namespace driftbandit {

/** Shortest "%.9g" rendering; 9 significant digits. */
std::string format_real(double value);

std::vector<double> parse_real_list(const std::string& text);

/**
 * Config schema:
 *
 *   {
 *     "instance": {"means": [..], "noise": "gaussian" | "bernoulli", "sigma": 1.0},
 *     "policies": [{"kind": "ucb" | "egreedy" | "thompson" | "greedy",
 *                   "c": 4.0, "project_feedback": false}, ...],
 *     "drift": {"kind": "zero" | "linear" | "clipped_linear", "cap": 0.0,
 *               "l_values": [..]},
 *     "T": 20000, "replications": 50, "master_seed": 1,
 *     "capture_trajectories": false, "trajectory_stride": 10,
 *     "check_ucb_bounds": false
 *   }
 *
 * A run manifest (which embeds the config under "config") is accepted too.
 */
ExperimentConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig load_config(const std::filesystem::path& path);

/** policy,l,regret_mean,regret_std,comp_mean,comp_std,comp_rounds_mean,arm1_err_mean */
void write_summary_csv(std::ostream& out, const AggregateResult& result);

/** policy,l,t,cum_regret_mean,cum_compensation_mean */
void write_curves_csv(std::ostream& out, const AggregateResult& result);

/** gnuplot script plotting curves.csv, one panel for regret and one for compensation. */
void write_gnuplot_script(std::ostream& out, const std::string& curves_file);

std::string library_version();

}  // namespace driftbandit

#endif  // DRIFTBANDIT_IO_HPP
