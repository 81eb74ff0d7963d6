#include "sns/experiment.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "sns/error.hpp"
#include "sns/markov.hpp"
#include "sns/model_io.hpp"
#include "sns/rng.hpp"
#include "sns/simulator.hpp"
#include "sns/solvers.hpp"
#include "sns/wireless.hpp"

namespace sns::experiment {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

json to_json(const Vector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

json to_json(const Matrix& m) {
    json out = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(to_json(Vector(m.row(i).transpose())));
    return out;
}

json schedule_json(const RunConfig& cfg) {
    json s;
    if (cfg.schedule.kind() == StepSchedule::Kind::Constant) {
        s["kind"] = "constant";
        s["alpha"] = cfg.schedule.alpha();
    } else {
        s["kind"] = "robbins_monro";
        s["c"] = cfg.schedule.c();
        s["t0"] = cfg.schedule.t0();
    }
    s["clock"] = cfg.clock == StepClock::PerEntry ? "per_entry" : "global";
    return s;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!out) throw Error("write failed for " + path.string());
}

void write_json(const fs::path& path, const json& doc) { write_text(path, doc.dump(2) + "\n"); }

void write_manifest(const RunConfig& cfg, const std::vector<std::string>& outputs) {
    json m;
    m["command"] = cfg.command;
    m["model"] = cfg.model;
    m["seeds"] = cfg.seeds;
    m["gamma"] = cfg.gamma ? json(*cfg.gamma) : json(nullptr);
    m["steps"] = cfg.steps;
    m["schedule"] = schedule_json(cfg);
    m["policy"] = cfg.policy;
    m["strict_assumptions"] = cfg.strict_assumptions;
    m["generator"] = std::string(kGeneratorId);
    m["outputs"] = outputs;
    m["out_dir"] = cfg.out_dir.string();
    m["tool_version"] = std::string(kToolVersion);
    m["created_at"] = utc_timestamp();
    write_json(cfg.out_dir / "manifest.json", m);
}

void prepare_out_dir(const RunConfig& cfg) {
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (ec) throw Error("cannot create output directory " + cfg.out_dir.string() + ": " + ec.message());
}

AssumptionMode assumption_mode(const RunConfig& cfg) {
    return cfg.strict_assumptions ? AssumptionMode::Enforce : AssumptionMode::Report;
}

std::vector<std::string> assumption_warnings(const SnsMdp& model, const RunConfig& cfg) {
    const AssumptionReport report = check_assumption(model);
    if (!report.env_ok) throw AssumptionError("environment chain is not irreducible and aperiodic");
    if (cfg.strict_assumptions && !report.all_ok()) {
        throw AssumptionError("assumption check failed: " + report.failures().front());
    }
    return report.failures();
}

void log_warnings(std::ostream& log, const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) log << "warning: " << w << '\n';
}

// Runs `body(i)` for every seed index on the OpenMP team and rethrows the first failure.
template <typename Body>
void for_each_seed(std::size_t n, Body&& body) {
    std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

std::vector<std::string> write_traces(const RunConfig& cfg, const std::vector<LearnerTrace>& traces) {
    std::vector<std::string> outputs;
    for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
        const std::string name = "trace_seed" + std::to_string(cfg.seeds[i]) + ".csv";
        std::ostringstream os;
        write_trace_csv(os, traces[i].checkpoints);
        write_text(cfg.out_dir / name, os.str());
        outputs.push_back(name);
    }
    std::ostringstream os;
    write_trace_csv(os, mean_trace(traces));
    write_text(cfg.out_dir / "trace_mean.csv", os.str());
    outputs.emplace_back("trace_mean.csv");
    return outputs;
}

void require_seeds(const RunConfig& cfg) {
    if (cfg.seeds.empty()) throw ValidationError("at least one seed is required");
    if (cfg.steps == 0) throw ValidationError("--steps must be positive");
}

StepSchedule schedule_from_json(const json& s) {
    const std::string kind = s.at("kind").get<std::string>();
    if (kind == "constant") return StepSchedule::constant(s.at("alpha").get<double>());
    if (kind == "robbins_monro") return StepSchedule::robbins_monro(s.at("c").get<double>(), s.at("t0").get<double>());
    throw ParseError("unknown schedule kind \"" + kind + "\"");
}

}  // namespace

SnsMdp load_model_source(const std::string& source, std::optional<double> gamma) {
    SnsMdp model = source == "wireless" ? wireless::build_wireless_mdp(wireless::default_wireless_config())
                                        : load_model(source);
    if (gamma) {
        model.gamma = *gamma;
        require_valid(model);
    }
    return model;
}

Policy resolve_policy(const std::string& spec, const SnsMdp& model) {
    if (spec == "action0") return Policy::constant_action(model.n_states, model.n_actions, 0);
    if (spec == "uniform") return Policy::uniform(model.n_states, model.n_actions);
    Policy policy = load_policy(spec);
    if (policy.n_states() != model.n_states || policy.n_actions() != model.n_actions) {
        throw ValidationError("policy file " + spec + " does not match the model dimensions");
    }
    return policy;
}

std::vector<Checkpoint> mean_trace(const std::vector<LearnerTrace>& traces) {
    if (traces.empty()) return {};
    std::vector<Checkpoint> mean = traces.front().checkpoints;
    for (auto& c : mean) c.err_sup = c.err_l2 = 0.0;
    for (const auto& t : traces) {
        if (t.checkpoints.size() != mean.size()) throw Error("traces have different checkpoint schedules");
        for (std::size_t i = 0; i < mean.size(); ++i) {
            mean[i].err_sup += t.checkpoints[i].err_sup;
            mean[i].err_l2 += t.checkpoints[i].err_l2;
        }
    }
    const double n = static_cast<double>(traces.size());
    for (auto& c : mean) {
        c.err_sup /= n;
        c.err_l2 /= n;
    }
    return mean;
}

void run_inspect(const RunConfig& cfg, std::ostream& out) {
    const SnsMdp model = load_model_source(cfg.model, cfg.gamma);
    out << "model: " << cfg.model << '\n';
    out << "dims: n_states=" << model.n_states << " n_actions=" << model.n_actions << " n_envs=" << model.n_envs()
        << '\n';
    out << "gamma: " << model.gamma << '\n';

    const AssumptionReport report = check_assumption(model);
    try {
        const Distribution pi = stationary_distribution(model.env.q);
        out << "env stationary distribution: [";
        for (Eigen::Index e = 0; e < pi.size(); ++e) out << (e ? ", " : "") << std::setprecision(17) << pi(e);
        out << "] (residual " << std::setprecision(3) << stationary_residual(model.env.q, pi) << ")\n";
    } catch (const NumericalError& e) {
        out << "env stationary distribution: unavailable (" << e.what() << ")\n";
    }
    out << std::setprecision(6);
    out << "env chain: " << (report.env_ok ? "irreducible, aperiodic" : "NOT irreducible and aperiodic") << '\n';
    std::size_t good = 0, total = 0;
    for (const auto& row : report.chain_ok)
        for (bool ok : row) {
            ++total;
            good += ok ? 1 : 0;
        }
    out << "state chains (e,a): " << good << "/" << total << " irreducible, aperiodic\n";
    if (!report.env_ok) out << "warning: environment chain is not irreducible and aperiodic\n";
    log_warnings(out, report.failures());
}

void run_evaluate(const RunConfig& cfg, std::ostream& log) {
    require_seeds(cfg);
    const SnsMdp model = load_model_source(cfg.model, cfg.gamma);
    const auto warnings = assumption_warnings(model, cfg);
    log_warnings(log, warnings);
    const Policy policy = resolve_policy(cfg.policy, model);
    const SnsMrp mrp = induce_mrp(model, policy);
    const ValueVector reference = sns_value_closed_form(mrp, assumption_mode(cfg));

    std::vector<TdResult> runs(cfg.seeds.size());
    for_each_seed(cfg.seeds.size(), [&](std::size_t i) {
        TdOptions opts;
        opts.schedule = cfg.schedule;
        opts.clock = cfg.clock;
        opts.n_steps = cfg.steps;
        opts.seed = cfg.seeds[i];
        opts.reference = reference;
        runs[i] = td_evaluate(model, policy, opts);
    });

    prepare_out_dir(cfg);
    std::vector<LearnerTrace> traces;
    Vector mean_estimate = Vector::Zero(reference.size());
    json per_seed = json::array();
    for (std::size_t i = 0; i < runs.size(); ++i) {
        traces.push_back(runs[i].trace);
        mean_estimate += runs[i].v / static_cast<double>(runs.size());
        per_seed.push_back({{"seed", cfg.seeds[i]},
                            {"final_err_sup", runs[i].trace.checkpoints.back().err_sup},
                            {"final_err_l2", runs[i].trace.checkpoints.back().err_l2},
                            {"estimate", to_json(runs[i].v)}});
    }
    auto outputs = write_traces(cfg, traces);
    const auto mean = mean_trace(traces);

    json summary;
    summary["command"] = "evaluate";
    summary["n_steps"] = cfg.steps;
    summary["gamma"] = model.gamma;
    summary["reference_value"] = to_json(reference);
    summary["reference_residual"] = sns_fixed_point_residual(mrp, reference);
    summary["mean_estimate"] = to_json(mean_estimate);
    summary["mean_initial_err_sup"] = mean.front().err_sup;
    summary["mean_final_err_sup"] = mean.back().err_sup;
    summary["mean_final_err_l2"] = mean.back().err_l2;
    summary["runs"] = per_seed;
    summary["assumption_warnings"] = warnings;
    write_json(cfg.out_dir / "summary.json", summary);
    outputs.emplace_back("summary.json");
    write_manifest(cfg, outputs);
    log << "evaluate: mean final sup-norm error " << mean.back().err_sup << " (initial " << mean.front().err_sup
        << ")\n";
}

void run_solve(const RunConfig& cfg, std::ostream& log) {
    const SnsMdp model = load_model_source(cfg.model, cfg.gamma);
    const auto warnings = assumption_warnings(model, cfg);
    log_warnings(log, warnings);
    const PolicyIterationResult pi = policy_iteration(model, {assumption_mode(cfg)});
    const ValueIterationResult vi = optimal_q_value_iteration(model);
    const double gap = (vi.q.rowwise().maxCoeff() - pi.value).lpNorm<Eigen::Infinity>();
    if (!(gap < 1e-8)) {
        throw NumericalError("solvers disagree: ||max_a Q* - v*||_inf = " + std::to_string(gap));
    }

    prepare_out_dir(cfg);
    json trace = json::array();
    for (std::size_t n = 0; n < pi.trace.size(); ++n) {
        trace.push_back({{"iteration", n}, {"policy", pi.policies[n].actions()}, {"value", to_json(pi.trace[n])}});
    }
    json summary;
    summary["command"] = "solve";
    summary["gamma"] = model.gamma;
    summary["policy"] = pi.policy.actions();
    summary["v_star"] = to_json(pi.value);
    summary["q_star"] = to_json(vi.q);
    summary["iteration_trace"] = trace;
    summary["improvement_steps"] = pi.improvement_steps;
    summary["bellman_residual"] = pi.bellman_residual;
    summary["value_iteration"] = {{"iterations", vi.iterations}, {"error_bound", vi.error_bound}};
    summary["solver_gap"] = gap;
    summary["assumption_warnings"] = warnings;
    write_json(cfg.out_dir / "summary.json", summary);
    write_manifest(cfg, {"summary.json"});
    log << "solve: policy iteration stopped after " << pi.improvement_steps << " improvement steps ("
        << pi.trace.size() << " evaluations)\n";
}

void run_qlearn(const RunConfig& cfg, std::ostream& log) {
    require_seeds(cfg);
    const SnsMdp model = load_model_source(cfg.model, cfg.gamma);
    const auto warnings = assumption_warnings(model, cfg);
    log_warnings(log, warnings);
    const ValueIterationResult vi = optimal_q_value_iteration(model);
    const Policy behavior = Policy::uniform(model.n_states, model.n_actions);

    std::vector<QLearnResult> runs(cfg.seeds.size());
    for_each_seed(cfg.seeds.size(), [&](std::size_t i) {
        QLearnOptions opts;
        opts.schedule = cfg.schedule;
        opts.clock = cfg.clock;
        opts.n_steps = cfg.steps;
        opts.seed = cfg.seeds[i];
        opts.reference = vi.q;
        runs[i] = q_learn(model, behavior, opts);
    });

    prepare_out_dir(cfg);
    std::vector<LearnerTrace> traces;
    json per_seed = json::array();
    bool bound_ok = true;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        traces.push_back(runs[i].trace);
        bound_ok = bound_ok && runs[i].trace.bound_ok;
        per_seed.push_back({{"seed", cfg.seeds[i]},
                            {"final_err_sup", runs[i].trace.checkpoints.back().err_sup},
                            {"final_err_l2", runs[i].trace.checkpoints.back().err_l2},
                            {"bound_ok", runs[i].trace.bound_ok}});
    }
    auto outputs = write_traces(cfg, traces);
    const auto mean = mean_trace(traces);
    QTable mean_q = QTable::Zero(vi.q.rows(), vi.q.cols());
    for (const auto& r : runs) mean_q += r.q / static_cast<double>(runs.size());
    double max_l2 = 0.0;
    for (const auto& c : mean) max_l2 = std::max(max_l2, c.err_l2);

    json summary;
    summary["command"] = "qlearn";
    summary["n_steps"] = cfg.steps;
    summary["gamma"] = model.gamma;
    summary["q_star"] = to_json(vi.q);
    summary["q_star_error_bound"] = vi.error_bound;
    summary["mean_q"] = to_json(mean_q);
    summary["mean_first_err_l2"] = mean.front().err_l2;
    summary["mean_final_err_l2"] = mean.back().err_l2;
    summary["mean_max_err_l2"] = max_l2;
    summary["mean_final_err_sup"] = mean.back().err_sup;
    summary["bound_ok"] = bound_ok;
    summary["runs"] = per_seed;
    summary["assumption_warnings"] = warnings;
    write_json(cfg.out_dir / "summary.json", summary);
    outputs.emplace_back("summary.json");
    write_manifest(cfg, outputs);
    log << "qlearn: mean final L2 distance " << mean.back().err_l2 << " (first " << mean.front().err_l2 << ")\n";
}

void run_simulate(const RunConfig& cfg, std::ostream& log) {
    require_seeds(cfg);
    const SnsMdp model = load_model_source(cfg.model, cfg.gamma);
    const Policy policy = resolve_policy(cfg.policy, model);
    Simulator sim(model, 0, std::nullopt, cfg.seeds.front());
    const auto samples = rollout(sim, policy, cfg.steps);
    prepare_out_dir(cfg);
    std::ostringstream os;
    write_trajectory_csv(os, samples);
    write_text(cfg.out_dir / "trajectory.csv", os.str());
    write_manifest(cfg, {"trajectory.csv"});
    log << "simulate: wrote " << samples.size() << " steps\n";
}

void run_wireless(const RunConfig& cfg, std::ostream& log) {
    SnsMdp model = wireless::build_wireless_mdp(wireless::default_wireless_config());
    if (cfg.gamma) {
        model.gamma = *cfg.gamma;
        require_valid(model);
    }
    prepare_out_dir(cfg);
    save_model(model, cfg.out_dir / "wireless_model.json");
    write_manifest(cfg, {"wireless_model.json"});
    log << "wireless: wrote " << (cfg.out_dir / "wireless_model.json").string() << '\n';
}

void run(const RunConfig& cfg, std::ostream& log) {
    if (cfg.command == "inspect") return run_inspect(cfg, log);
    if (cfg.command == "evaluate") return run_evaluate(cfg, log);
    if (cfg.command == "solve") return run_solve(cfg, log);
    if (cfg.command == "qlearn") return run_qlearn(cfg, log);
    if (cfg.command == "simulate") return run_simulate(cfg, log);
    if (cfg.command == "wireless") return run_wireless(cfg, log);
    throw ValidationError("unknown command \"" + cfg.command + "\"");
}

RunConfig read_manifest(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    json m;
    try {
        m = json::parse(in);
        RunConfig cfg;
        cfg.command = m.at("command").get<std::string>();
        cfg.model = m.at("model").get<std::string>();
        cfg.seeds = m.at("seeds").get<std::vector<std::uint64_t>>();
        if (!m.at("gamma").is_null()) cfg.gamma = m.at("gamma").get<double>();
        cfg.steps = m.at("steps").get<std::size_t>();
        cfg.schedule = schedule_from_json(m.at("schedule"));
        cfg.clock = m.at("schedule").at("clock").get<std::string>() == "global" ? StepClock::Global : StepClock::PerEntry;
        cfg.policy = m.at("policy").get<std::string>();
        cfg.strict_assumptions = m.at("strict_assumptions").get<bool>();
        cfg.out_dir = m.at("out_dir").get<std::string>();
        return cfg;
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": malformed manifest: " + e.what());
    }
}

int exit_code_for(const std::exception& error) {
    if (dynamic_cast<const NumericalError*>(&error)) return kNumerical;
    return kValidation;
}

}  // namespace sns::experiment
