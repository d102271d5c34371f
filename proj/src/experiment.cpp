#include "driftbandit/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "driftbandit/mechanism.hpp"
#include "driftbandit/random.hpp"

namespace driftbandit {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

struct ReplicationResult {
    SummaryMetrics summary;
    Diagnostics diagnostics;
    std::vector<double> curve_regret;
    std::vector<double> curve_compensation;
};

bool on_curve(std::uint64_t t, std::uint64_t horizon, std::uint64_t stride) {
    return t % stride == 0 || t == horizon;
}

void add(Diagnostics& into, const Diagnostics& d) {
    into.projection_binding += d.projection_binding;
    into.ucb_rounds_checked += d.ucb_rounds_checked;
    into.ucb_compensation_violations += d.ucb_compensation_violations;
    into.ucb_drift_violations += d.ucb_drift_violations;
}

}  // namespace

void ExperimentConfig::validate() const {
    auto fail = [](const std::string& what) { throw Error(ErrorCode::invalid_argument, what); };
    BanditInstance probe(means, noise);
    if (policies.empty()) fail("config: policies must not be empty");
    if (l_values.empty()) fail("config: l_values must not be empty");
    for (double l : l_values) make_drift(drift_kind, l, drift_cap);
    if (horizon < means.size()) fail("config: T must be >= number of arms");
    if (replications < 1) fail("config: replications must be >= 1");
    if (trajectory_stride < 1) fail("config: trajectory_stride must be >= 1");
    for (const PolicySetup& setup : policies) {
        if (setup.policy.kind == PolicyKind::Kind::egreedy && !(setup.policy.c > 0.0)) {
            fail("config: egreedy requires c > 0");
        }
    }
}

ExperimentConfig reference_config() {
    ExperimentConfig config;
    config.means = {0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1};
    config.noise = Noise::gaussian(1.0);
    // Gaussian rewards are not in [0,1]; clipping them would bias every posted mean.
    config.policies = {{PolicyKind::ucb(), std::nullopt},
                       {PolicyKind::egreedy(4.0), false},
                       {PolicyKind::thompson(), std::nullopt}};
    config.drift_kind = DriftModel::Kind::linear;
    config.l_values = {0.0, 0.05, 0.1, 0.4, 0.7, 0.9, 1.1};
    config.horizon = 20000;
    config.replications = 50;
    config.master_seed = 20200101;
    config.trajectory_stride = 10;
    return config;
}

const CellResult& AggregateResult::cell(std::size_t policy_index, std::size_t l_index) const {
    for (const CellResult& c : cells) {
        if (c.policy_index == policy_index && c.l_index == l_index) return c;
    }
    throw Error(ErrorCode::invalid_argument, "AggregateResult: no such cell");
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t policy_id, std::uint64_t l_index,
                          std::uint64_t rep) {
    std::uint64_t h = splitmix64(master);
    h = splitmix64(h ^ policy_id);
    h = splitmix64(h ^ l_index);
    return splitmix64(h ^ rep);
}

MetricStats aggregate(std::span<const double> samples) {
    MetricStats out;
    if (samples.empty()) return out;
    double n = static_cast<double>(samples.size());
    double sum = 0.0;
    for (double v : samples) sum += v;
    out.mean = sum / n;
    if (samples.size() > 1) {
        double ss = 0.0;
        for (double v : samples) ss += (v - out.mean) * (v - out.mean);
        out.std = std::sqrt(ss / (n - 1.0));
    }
    return out;
}

AggregateSummary aggregate(std::span<const SummaryMetrics> samples) {
    std::vector<double> regret, comp, rounds, err;
    for (const SummaryMetrics& s : samples) {
        regret.push_back(s.regret);
        comp.push_back(s.compensation);
        rounds.push_back(static_cast<double>(s.comp_rounds));
        err.push_back(s.arm1_rel_error);
    }
    return {aggregate(regret), aggregate(comp), aggregate(rounds), aggregate(err)};
}

std::size_t curve_length(std::uint64_t horizon, std::uint64_t stride) {
    return static_cast<std::size_t>((horizon + stride - 1) / stride);
}

AggregateResult run_experiment(const ExperimentConfig& config, unsigned jobs) {
    config.validate();
    const BanditInstance instance(config.means, config.noise);
    const std::size_t n_policies = config.policies.size();
    const std::size_t n_l = config.l_values.size();
    const std::size_t reps = config.replications;
    const std::size_t total = n_policies * n_l * reps;

    std::vector<ReplicationResult> results(total);
    std::vector<std::exception_ptr> errors(total);

    auto work = [&](std::size_t item) {
        std::size_t rep = item % reps;
        std::size_t l_index = (item / reps) % n_l;
        std::size_t p = item / (reps * n_l);
        const PolicySetup& setup = config.policies[p];
        MechanismOptions options = default_options(setup.policy);
        if (setup.project_feedback) options.project_feedback = *setup.project_feedback;
        options.check_ucb_bounds = config.check_ucb_bounds;
        DriftModel drift = make_drift(config.drift_kind, config.l_values[l_index], config.drift_cap);

        ReplicationResult& out = results[item];
        if (config.capture_trajectories) {
            std::size_t n = curve_length(config.horizon, config.trajectory_stride);
            out.curve_regret.reserve(n);
            out.curve_compensation.reserve(n);
        }
        RoundObserver observer;
        if (config.capture_trajectories) {
            observer = [&](const RoundRecord& rec) {
                if (on_curve(rec.t, config.horizon, config.trajectory_stride)) {
                    out.curve_regret.push_back(rec.cum_regret);
                    out.curve_compensation.push_back(rec.cum_compensation);
                }
            };
        }
        SeededRandom rng(derive_seed(config.master_seed, p, l_index, rep));
        SimState final_state = simulate(instance, setup.policy, drift, options, config.horizon, rng,
                                        observer, out.diagnostics);
        out.summary = summarize(final_state, instance);
    };

    unsigned threads = jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : jobs;
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, total));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t item = next++; item < total; item = next++) {
            try {
                work(item);
            } catch (...) {
                errors[item] = std::current_exception();
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    }

    for (std::size_t item = 0; item < total; ++item) {
        if (!errors[item]) continue;
        std::string detail = "unknown error";
        try {
            std::rethrow_exception(errors[item]);
        } catch (const std::exception& e) {
            detail = e.what();
        } catch (...) {
        }
        std::size_t rep = item % reps;
        std::size_t l_index = (item / reps) % n_l;
        std::size_t p = item / (reps * n_l);
        throw Error(ErrorCode::invalid_argument,
                    "run_experiment failed at (policy=" + config.policies[p].policy.name() +
                        ", l=" + std::to_string(config.l_values[l_index]) +
                        ", replication=" + std::to_string(rep) + "): " + detail);
    }

    AggregateResult aggregate_result;
    const std::size_t k = instance.num_arms();
    for (std::size_t p = 0; p < n_policies; ++p) {
        for (std::size_t li = 0; li < n_l; ++li) {
            CellResult cell;
            cell.policy_index = p;
            cell.policy = config.policies[p].policy;
            cell.l_index = li;
            cell.l = config.l_values[li];
            std::vector<SummaryMetrics> summaries;
            summaries.reserve(reps);
            cell.mean_pulls.assign(k, 0.0);
            cell.mean_comp_count.assign(k, 0.0);
            cell.mean_drift_sum.assign(k, 0.0);
            std::size_t base = (p * n_l + li) * reps;
            for (std::size_t r = 0; r < reps; ++r) {
                const ReplicationResult& res = results[base + r];
                summaries.push_back(res.summary);
                add(cell.diagnostics, res.diagnostics);
                for (std::size_t a = 0; a < k; ++a) {
                    cell.mean_pulls[a] += static_cast<double>(res.summary.per_arm[a].pulls);
                    cell.mean_comp_count[a] += static_cast<double>(res.summary.per_arm[a].comp_count);
                    cell.mean_drift_sum[a] += res.summary.per_arm[a].drift_sum;
                }
            }
            for (std::size_t a = 0; a < k; ++a) {
                cell.mean_pulls[a] /= static_cast<double>(reps);
                cell.mean_comp_count[a] /= static_cast<double>(reps);
                cell.mean_drift_sum[a] /= static_cast<double>(reps);
            }
            AggregateSummary s = aggregate(std::span<const SummaryMetrics>(summaries));
            cell.regret = s.regret;
            cell.compensation = s.compensation;
            cell.comp_rounds = s.comp_rounds;
            cell.arm1_rel_error = s.arm1_rel_error;

            if (config.capture_trajectories) {
                std::size_t n = curve_length(config.horizon, config.trajectory_stride);
                for (std::uint64_t t = 1; t <= config.horizon; ++t) {
                    if (on_curve(t, config.horizon, config.trajectory_stride)) cell.curve_t.push_back(t);
                }
                cell.curve_regret.assign(n, 0.0);
                cell.curve_compensation.assign(n, 0.0);
                for (std::size_t r = 0; r < reps; ++r) {
                    const ReplicationResult& res = results[base + r];
                    for (std::size_t i = 0; i < n; ++i) {
                        cell.curve_regret[i] += res.curve_regret[i];
                        cell.curve_compensation[i] += res.curve_compensation[i];
                    }
                }
                for (std::size_t i = 0; i < n; ++i) {
                    cell.curve_regret[i] /= static_cast<double>(reps);
                    cell.curve_compensation[i] /= static_cast<double>(reps);
                }
            }
            aggregate_result.cells.push_back(std::move(cell));
        }
    }
    return aggregate_result;
}

}  // namespace driftbandit
