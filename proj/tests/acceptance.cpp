// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "sns/experiment.hpp"
#include "sns/learners.hpp"
#include "sns/markov.hpp"
#include "sns/solvers.hpp"
#include "sns/wireless.hpp"

using namespace sns;
using namespace sns::testing;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double median(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    return xs[xs.size() / 2];
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

/// The corpus for criteria 1 and 2.
std::vector<SnsMrp> mrp_corpus() {
    Rng64 rng(2024);
    std::uniform_int_distribution<std::size_t> states(1, 6), envs(1, 4);
    std::uniform_real_distribution<double> gamma(0.1, 0.95);
    std::vector<SnsMrp> out;
    for (int i = 0; i < 100; ++i) {
        const std::size_t ns = states(rng), ne = envs(rng);
        out.push_back(random_valid_mrp(rng, ns, ne, gamma(rng)));
    }
    return out;
}

/// Fixed 3-state / 2-action / 2-env instance used by criteria 4 and 6.
SnsMdp seeded_instance() {
    Rng64 rng(1);
    return random_valid_mdp(rng, 3, 2, 2, 0.9);
}

Outcome criterion1() {
    double worst = 0.0, worst_iid = 0.0;
    std::size_t failing = 0;
    for (const auto& m : mrp_corpus()) {
        const Vector pi = stationary_distribution(m.env.q);
        const double gap = sup_norm(sns_value_closed_form(m) - marginalize(joint_value_oracle(m), pi));
        worst = std::max(worst, gap);
        failing += gap < 1e-8 ? 0 : 1;
        // Same instance with every env row replaced by pi (environment independent of its past).
        SnsMrp iid = m;
        iid.env.q = pi.transpose().replicate(pi.size(), 1);
        worst_iid = std::max(worst_iid, sup_norm(sns_value_closed_form(iid) - marginalize(joint_value_oracle(iid), pi)));
    }
    return {worst < 1e-8,
            fmt("max |closed form - joint oracle marginal| = %.3g over 100 MRPs, %zu above tol 1e-8; with iid env rows "
                "the max gap is %.3g",
                worst, failing, worst_iid)};
}

Outcome criterion2() {
    double worst = 0.0;
    for (const auto& m : mrp_corpus()) worst = std::max(worst, sns_fixed_point_residual(m, sns_value_closed_form(m)));
    return {worst < 1e-10, fmt("max fixed-point residual = %.3g (tol 1e-10)", worst)};
}

Outcome criterion3() {
    const Matrix q = wireless::default_wireless_config().env_chain;
    const Vector direct = stationary_distribution(q);
    const auto power = stationary_distribution_power(q);
    const double agree = sup_norm(direct - power.pi);
    const double residual = stationary_residual(q, direct);
    const double pinned = sup_norm(direct - wireless_env_stationary());
    return {power.converged && agree < 1e-10 && residual < 1e-12 && pinned < 1e-15,
            fmt("pi = [%.15f, %.15f, %.15f, %.15f], direct vs power %.3g, residual %.3g, vs pinned %.3g", direct(0),
                direct(1), direct(2), direct(3), agree, residual, pinned)};
}

Outcome criterion4() {
    const SnsMdp m = seeded_instance();
    const Policy mu = Policy::uniform(3, 2);
    const Vector v = sns_value_closed_form(induce_mrp(m, mu));
    std::vector<double> errs;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        TdOptions o;
        o.schedule = StepSchedule::robbins_monro(50, 100);
        o.n_steps = 200000;
        o.seed = seed;
        o.reference = v;
        errs.push_back(td_evaluate(m, mu, o).trace.checkpoints.back().err_sup);
    }
    const double tol = 0.05 * (1 + v.cwiseAbs().maxCoeff());
    const double bias = sup_norm(td_limit(m, mu.mu()) - v);
    return {median(errs) < tol,
            fmt("median final sup error %.4g < %.4g (exact trajectory limit differs from v_SNS by %.3g)", median(errs),
                tol, bias)};
}

Outcome criterion5() {
    Rng64 rng(5);
    std::uniform_int_distribution<std::size_t> states(1, 4), actions(1, 3), envs(1, 3);
    std::uniform_real_distribution<double> gamma(0.1, 0.95);
    std::size_t max_evals = 0, enumerated = 0;
    double worst_drop = 0.0, worst_residual = 0.0, worst_gap = 0.0;
    for (int i = 0; i < 50; ++i) {
        const std::size_t ns = states(rng), na = actions(rng), ne = envs(rng);
        const SnsMdp m = random_valid_mdp(rng, ns, na, ne, gamma(rng));
        const auto r = policy_iteration(m);
        for (std::size_t n = 1; n < r.trace.size(); ++n)
            worst_drop = std::max(worst_drop, (r.trace[n - 1] - r.trace[n]).maxCoeff());
        max_evals = std::max(max_evals, r.trace.size());
        worst_residual = std::max(worst_residual, r.bellman_residual);
        if (std::pow(static_cast<double>(na), static_cast<double>(ns)) <= 256) {
            ++enumerated;
            worst_gap = std::max(worst_gap, sup_norm(r.value - enumerate_policies(m).best_value));
        }
    }
    return {worst_drop <= 1e-10 && max_evals <= 20 && worst_residual < 1e-8 && worst_gap < 1e-10,
            fmt("max value drop %.3g, max iterations %zu, max Bellman residual %.3g, max gap to enumeration %.3g (%zu "
                "instances enumerated)",
                worst_drop, max_evals, worst_residual, worst_gap, enumerated)};
}

Outcome criterion6() {
    const SnsMdp m = seeded_instance();
    const Policy behavior = Policy::uniform(3, 2);
    const QTable q_star = optimal_q_value_iteration(m, 1e-12).q;
    std::vector<double> errs;
    bool bound_ok = true;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        QLearnOptions o;
        o.schedule = StepSchedule::robbins_monro(50, 100);
        o.n_steps = 500000;
        o.seed = seed;
        o.reference = q_star;
        const auto r = q_learn(m, behavior, o);
        errs.push_back(r.trace.checkpoints.back().err_sup);
        bound_ok = bound_ok && r.trace.bound_ok;
    }
    const double tol = 0.1 * (1 + sup_norm(q_star));
    const double bias = sup_norm(q_learning_limit(m, behavior.mu()) - q_star);
    return {median(errs) < tol && bound_ok,
            fmt("median final sup error %.4g < %.4g, iterates within max|r|/(1-gamma): %s (exact trajectory limit "
                "differs from Q* by %.3g)",
                median(errs), tol, bound_ok ? "yes" : "no", bias)};
}

Outcome criterion7() {
    Rng64 rng(7);
    double solver_gap = 0.0;
    for (int i = 0; i < 20; ++i) {
        const SnsMdp m = random_valid_mdp(rng, 1 + static_cast<std::size_t>(i % 5), 1 + static_cast<std::size_t>(i % 3), 1, 0.9);
        const Policy mu = Policy::uniform(m.n_states, m.n_actions);
        const SnsMrp mrp = induce_mrp(m, mu);
        const Vector classical_v = oracle_mrp_value(mrp.P[0], mrp.R.col(0), m.gamma);
        const QTable classical_q = oracle_stationary_optimal_q(m.trans[0], m.rewards[0], m.gamma);
        const double scale = std::max(1.0, sup_norm(classical_q));
        solver_gap = std::max(solver_gap, sup_norm(sns_value_closed_form(mrp) - classical_v) / scale);
        solver_gap = std::max(solver_gap, sup_norm(joint_value_oracle(mrp).col(0) - classical_v) / scale);
        solver_gap = std::max(solver_gap, sup_norm(optimal_q_value_iteration(m).q - classical_q) / scale);
        solver_gap = std::max(solver_gap, sup_norm(policy_iteration(m).value - Vector(classical_q.rowwise().maxCoeff())) / scale);
    }

    const SnsMdp m = random_valid_mdp(rng, 3, 2, 1, 0.9);
    const Policy mu = Policy::uniform(3, 2);
    const SnsMrp mrp = induce_mrp(m, mu);
    const Vector classical_v = oracle_mrp_value(mrp.P[0], mrp.R.col(0), m.gamma);
    const QTable classical_q = oracle_stationary_optimal_q(m.trans[0], m.rewards[0], m.gamma);
    std::vector<double> td_errs, q_errs;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        TdOptions t;
        t.schedule = StepSchedule::robbins_monro(50, 100);
        t.n_steps = 200000;
        t.seed = seed;
        t.reference = classical_v;
        td_errs.push_back(td_evaluate(m, mu, t).trace.checkpoints.back().err_sup);
        QLearnOptions q;
        q.schedule = StepSchedule::robbins_monro(50, 100);
        q.n_steps = 500000;
        q.seed = seed;
        q.reference = classical_q;
        q_errs.push_back(q_learn(m, mu, q).trace.checkpoints.back().err_sup);
    }
    const double td_tol = 0.05 * (1 + classical_v.cwiseAbs().maxCoeff());
    const double q_tol = 0.1 * (1 + sup_norm(classical_q));
    return {solver_gap < 1e-10 && median(td_errs) < td_tol && median(q_errs) < q_tol,
            fmt("solvers vs classical: max relative gap %.3g (tol 1e-10); TD median %.4g < %.4g; Q-learning median %.4g "
                "< %.4g",
                solver_gap, median(td_errs), td_tol, median(q_errs), q_tol)};
}

Outcome criterion8() {
    const SnsMdp m = wireless::build_wireless_mdp(wireless::default_wireless_config());
    const std::size_t seeds = 10;

    const Policy band1 = Policy::constant_action(11, 11, 0);
    const Vector v = sns_value_closed_form(induce_mrp(m, band1), AssumptionMode::Report);
    std::vector<LearnerTrace> td(seeds);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(seeds); ++i) {
        TdOptions o;
        o.schedule = StepSchedule::constant(0.01);
        o.n_steps = 1'000'000;
        o.seed = static_cast<std::uint64_t>(i + 1);
        o.reference = v;
        td[static_cast<std::size_t>(i)] = td_evaluate(m, band1, o).trace;
    }
    const auto td_mean = experiment::mean_trace(td);
    const double td_final = td_mean.back().err_sup;
    const double v_norm = v.cwiseAbs().maxCoeff();
    const bool a = td_final < 0.1 * td_mean.front().err_sup && td_final < 0.1 * v_norm;

    PolicyIterationOptions pio;
    pio.assumptions = AssumptionMode::Report;
    const auto pi = policy_iteration(m, pio);
    const bool b = pi.trace.size() <= 10;

    const QTable q_star = optimal_q_value_iteration(m).q;
    const Policy uniform = Policy::uniform(11, 11);
    std::vector<LearnerTrace> ql(seeds);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(seeds); ++i) {
        QLearnOptions o;
        o.schedule = StepSchedule::constant(0.01);
        o.n_steps = 5'000'000;
        o.seed = static_cast<std::uint64_t>(i + 1);
        o.reference = q_star;
        ql[static_cast<std::size_t>(i)] = q_learn(m, uniform, o).trace;
    }
    const auto ql_mean = experiment::mean_trace(ql);
    double ql_max = 0.0;
    for (const auto& c : ql_mean) ql_max = std::max(ql_max, c.err_l2);
    const double ql_first = ql_mean.front().err_l2, ql_final = ql_mean.back().err_l2;
    const bool c = ql_final < ql_first && ql_final < 0.3 * ql_max;

    return {a && b && c,
            fmt("(a) TD final %.4g vs initial %.4g and |v| %.4g: %s; (b) policy iteration evaluations %zu: %s; "
                "(c) Q-learning L2 final %.4g vs first %.4g, max %.4g: %s",
                td_final, td_mean.front().err_sup, v_norm, a ? "ok" : "fail", pi.trace.size(), b ? "ok" : "fail",
                ql_final, ql_first, ql_max, c ? "ok" : "fail")};
}

Outcome criterion9() {
    const auto cfg = wireless::default_wireless_config();
    const SnsMdp m = wireless::build_wireless_mdp(cfg);
    std::size_t rows = 0, bad_sum = 0, bad_diag = 0;
    for (std::size_t e = 0; e < 4; ++e)
        for (std::size_t a = 0; a < 11; ++a)
            for (Eigen::Index s = 0; s < 11; ++s) {
                ++rows;
                if (std::abs(m.trans[e][a].row(s).sum() - 1.0) > 1e-12) ++bad_sum;
                if (m.trans[e][a](s, s) != cfg.p_success[a](s, static_cast<Eigen::Index>(e))) ++bad_diag;
            }
    const double r1 = wireless::wireless_reward(cfg, wireless::BPSK, wireless::Excellent);
    const double r2 = wireless::wireless_reward(cfg, wireless::BPSK, wireless::Poor);
    const double r3 = wireless::wireless_reward(cfg, wireless::QAM2048, wireless::Poor);
    const bool rewards_ok = std::abs(r1 - 97.02) < 1e-12 && std::abs(r2 - 29.4) < 1e-12 && std::abs(r3 - 329.4) < 1e-12;
    return {rows == 484 && bad_sum == 0 && bad_diag == 0 && rewards_ok,
            fmt("%zu rows, %zu bad sums, %zu diagonal mismatches, rewards %.17g / %.17g / %.17g", rows, bad_sum,
                bad_diag, r1, r2, r3)};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Outcome criterion10() {
    const fs::path root = fs::temp_directory_path() / "sns_acceptance_determinism";
    fs::remove_all(root);
    std::ostringstream log;
    std::size_t compared = 0, differing = 0;
    for (const std::string command : {"evaluate", "qlearn"}) {
        experiment::RunConfig cfg;
        cfg.command = command;
        cfg.seeds = {1, 2, 3, 4};
        cfg.steps = 200000;
        cfg.out_dir = root / (command + "_1");
        experiment::run(cfg, log);
        experiment::RunConfig replay = experiment::read_manifest(cfg.out_dir / "manifest.json");
        replay.out_dir = root / (command + "_2");
        experiment::run(replay, log);
        for (const auto& entry : fs::directory_iterator(cfg.out_dir)) {
            if (entry.path().extension() != ".csv") continue;
            ++compared;
            if (slurp(entry.path()) != slurp(replay.out_dir / entry.path().filename())) ++differing;
        }
    }
    fs::remove_all(root);
    return {compared == 10 && differing == 0, fmt("%zu trace CSVs compared across manifest reruns, %zu differ", compared, differing)};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double limit_s;  // 0 = no runtime limit
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "closed form vs joint-chain oracle", 5, criterion1},
        {2, "fixed-point residual", 0, criterion2},
        {3, "wireless environment stationary distribution", 0, criterion3},
        {4, "TD(0) convergence", 10, criterion4},
        {5, "policy iteration", 30, criterion5},
        {6, "Q-learning convergence", 60, criterion6},
        {7, "single-environment reduction", 0, criterion7},
        {8, "wireless reproduction", 300, criterion8},
        {9, "wireless builder validity", 0, criterion9},
        {10, "determinism", 0, criterion10},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = c.limit_s == 0 || secs < c.limit_s;
        const bool pass = out.pass && in_time;
        failures += pass ? 0 : 1;
        std::printf("%s criterion %d (%s): %s [%.2fs%s]\n", pass ? "PASS" : "FAIL", c.id, c.name, out.detail.c_str(), secs,
                    in_time ? "" : fmt(", limit %.0fs exceeded", c.limit_s).c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
