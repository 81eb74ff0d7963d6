// Command-line front end: inspect / evaluate / solve / qlearn / wireless /
// simulate, plus replay of a previous run's manifest.

#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "sns/experiment.hpp"

namespace {

using sns::experiment::RunConfig;

struct CommonFlags {
    std::string model;
    bool wireless = false;
    std::string seeds;
    std::size_t steps = 0;
    double gamma = -1.0;
    double alpha = -1.0;
    double rm_c = -1.0;
    double rm_t0 = -1.0;
    bool global_clock = false;
    std::string policy;
    std::string out = ".";
    bool strict = false;
};

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        unsigned long long value = 0;
        try {
            value = std::stoull(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size()) throw CLI::ValidationError("--seed", "not an integer: " + item);
        out.push_back(value);
    }
    if (out.empty()) throw CLI::ValidationError("--seed", "no seeds given");
    return out;
}

void add_common(CLI::App* cmd, CommonFlags& f, bool learner) {
    auto* model = cmd->add_option("--model", f.model, "Model file (JSON)");
    auto* wl = cmd->add_flag("--wireless", f.wireless, "Use the built-in adaptive-modulation model");
    model->excludes(wl);
    cmd->add_option("--gamma", f.gamma, "Override the model discount");
    cmd->add_option("--out", f.out, "Output directory");
    cmd->add_flag("--strict-assumptions", f.strict, "Fail when any per-(e,a) state chain is not irreducible/aperiodic");
    if (!learner) return;
    cmd->add_option("--seed", f.seeds, "Seed or comma-separated seeds");
    cmd->add_option("--steps", f.steps, "Simulation steps per seed");
    auto* alpha = cmd->add_option("--alpha", f.alpha, "Constant step size");
    auto* c = cmd->add_option("--rm-c", f.rm_c, "Robbins-Monro scale c in c/(n+t0)");
    auto* t0 = cmd->add_option("--rm-t0", f.rm_t0, "Robbins-Monro offset t0 in c/(n+t0)");
    alpha->excludes(c)->excludes(t0);
    c->needs(t0);
    t0->needs(c);
    cmd->add_flag("--global-clock", f.global_clock, "Index step sizes by global step instead of per-entry visits");
}

RunConfig to_config(const std::string& command, const CommonFlags& f) {
    RunConfig cfg;
    cfg.command = command;
    cfg.model = f.wireless || f.model.empty() ? "wireless" : f.model;
    if (!f.seeds.empty()) cfg.seeds = parse_seeds(f.seeds);
    if (f.steps > 0) cfg.steps = f.steps;
    if (f.gamma >= 0.0) cfg.gamma = f.gamma;
    if (f.alpha > 0.0) cfg.schedule = sns::StepSchedule::constant(f.alpha);
    if (f.rm_c > 0.0) cfg.schedule = sns::StepSchedule::robbins_monro(f.rm_c, f.rm_t0);
    cfg.clock = f.global_clock ? sns::StepClock::Global : sns::StepClock::PerEntry;
    if (!f.policy.empty()) cfg.policy = f.policy;
    cfg.out_dir = f.out;
    cfg.strict_assumptions = f.strict;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Switching non-stationary MDP toolkit"};
    app.require_subcommand(1);

    CommonFlags inspect_f, evaluate_f, solve_f, qlearn_f, wireless_f, simulate_f;
    auto* inspect = app.add_subcommand("inspect", "Dimensions, stationary environment distribution, chain checks");
    add_common(inspect, inspect_f, false);
    auto* evaluate = app.add_subcommand("evaluate", "TD(0) policy evaluation against the closed-form value");
    add_common(evaluate, evaluate_f, true);
    evaluate->add_option("--policy", evaluate_f.policy, "action0 | uniform | policy JSON file");
    auto* solve = app.add_subcommand("solve", "Policy iteration and value iteration");
    add_common(solve, solve_f, false);
    auto* qlearn = app.add_subcommand("qlearn", "Q-learning with a uniform behavior policy");
    add_common(qlearn, qlearn_f, true);
    auto* wireless = app.add_subcommand("wireless", "Write the built-in wireless model file");
    wireless->add_option("--gamma", wireless_f.gamma, "Override the discount");
    wireless->add_option("--out", wireless_f.out, "Output directory");
    auto* simulate = app.add_subcommand("simulate", "Dump a trajectory as CSV");
    add_common(simulate, simulate_f, true);
    simulate->add_option("--policy", simulate_f.policy, "action0 | uniform | policy JSON file");

    std::string manifest_path, replay_out;
    auto* replay = app.add_subcommand("replay", "Re-run a previous run from its manifest.json");
    replay->add_option("--manifest", manifest_path, "Path to manifest.json")->required();
    replay->add_option("--out", replay_out, "Output directory (defaults to the manifest's)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : sns::experiment::kUsage;
    }

    try {
        RunConfig cfg;
        if (*replay) {
            cfg = sns::experiment::read_manifest(manifest_path);
            if (!replay_out.empty()) cfg.out_dir = replay_out;
        } else if (*inspect) {
            cfg = to_config("inspect", inspect_f);
        } else if (*evaluate) {
            cfg = to_config("evaluate", evaluate_f);
        } else if (*solve) {
            cfg = to_config("solve", solve_f);
        } else if (*qlearn) {
            cfg = to_config("qlearn", qlearn_f);
        } else if (*wireless) {
            cfg = to_config("wireless", wireless_f);
        } else if (*simulate) {
            cfg = to_config("simulate", simulate_f);
        }
        sns::experiment::run(cfg, std::cout);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return sns::experiment::kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return sns::experiment::exit_code_for(e);
    }
    return sns::experiment::kOk;
}
