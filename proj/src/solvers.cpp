#include "sns/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sns/error.hpp"
#include "sns/kernels.hpp"
#include "sns/markov.hpp"

namespace sns {

namespace {

using Index = Eigen::Index;

Index idx(std::size_t i) { return static_cast<Index>(i); }

void require_policy_shape(const SnsMdp& model, const Policy& policy) {
    if (policy.n_states() != model.n_states || policy.n_actions() != model.n_actions) {
        throw ValidationError("policy is " + std::to_string(policy.n_states()) + "x" +
                              std::to_string(policy.n_actions()) + " but the model has " +
                              std::to_string(model.n_states) + " states and " + std::to_string(model.n_actions) +
                              " actions");
    }
}

// Policy-independent averages r_bar_sa and p_bar_sa.
void fill_action_averages(const SnsMdp& model, const Distribution& pi_env, AveragedDynamics& avg) {
    avg.r_bar_sa = kernels::weighted_sum(model.rewards, pi_env);
    avg.p_bar_sa.clear();
    avg.p_bar_sa.reserve(model.n_actions);
    std::vector<Matrix> per_env(model.n_envs());
    for (std::size_t a = 0; a < model.n_actions; ++a) {
        for (std::size_t e = 0; e < model.n_envs(); ++e) per_env[e] = model.trans[e][a];
        avg.p_bar_sa.push_back(kernels::weighted_sum(per_env, pi_env));
    }
}

void require_pi_env(const Distribution& pi_env, std::size_t n_envs) {
    if (static_cast<std::size_t>(pi_env.size()) != n_envs) {
        throw ValidationError("environment distribution has " + std::to_string(pi_env.size()) +
                              " entries, expected " + std::to_string(n_envs));
    }
}

std::size_t improvement_guard(std::size_t n_actions, std::size_t n_states) {
    // |A|^|S| with saturation.
    std::size_t guard = 1;
    for (std::size_t s = 0; s < n_states; ++s) {
        if (guard > std::numeric_limits<std::size_t>::max() / std::max<std::size_t>(n_actions, 1)) {
            return std::numeric_limits<std::size_t>::max();
        }
        guard *= n_actions;
    }
    return guard;
}

}  // namespace

bool AssumptionReport::all_ok() const {
    if (!env_ok) return false;
    for (const auto& row : chain_ok)
        for (bool ok : row)
            if (!ok) return false;
    return true;
}

std::vector<std::string> AssumptionReport::failures() const {
    std::vector<std::string> out;
    if (!env_ok) out.emplace_back("environment chain is not irreducible and aperiodic");
    for (std::size_t e = 0; e < chain_ok.size(); ++e) {
        for (std::size_t a = 0; a < chain_ok[e].size(); ++a) {
            if (chain_ok[e][a]) continue;
            const std::string where =
                per_action ? "(e=" + std::to_string(e) + ",a=" + std::to_string(a) + ")" : "(e=" + std::to_string(e) + ")";
            out.push_back("state chain " + where + " is not irreducible and aperiodic");
        }
    }
    return out;
}

AssumptionReport check_assumption(const SnsMdp& model) {
    AssumptionReport report;
    report.per_action = true;
    report.env_ok = check_irreducible_aperiodic(model.env.q);
    report.chain_ok.resize(model.n_envs());
    for (std::size_t e = 0; e < model.n_envs(); ++e) {
        for (std::size_t a = 0; a < model.n_actions; ++a) {
            report.chain_ok[e].push_back(check_irreducible_aperiodic(model.trans[e][a]));
        }
    }
    return report;
}

AssumptionReport check_assumption(const SnsMrp& mrp) {
    AssumptionReport report;
    report.env_ok = check_irreducible_aperiodic(mrp.env.q);
    report.chain_ok.resize(mrp.n_envs());
    for (std::size_t e = 0; e < mrp.n_envs(); ++e) {
        report.chain_ok[e].push_back(check_irreducible_aperiodic(mrp.P[e]));
    }
    return report;
}

Distribution env_stationary(const EnvChain& env) {
    if (!check_irreducible_aperiodic(env.q)) {
        throw AssumptionError("environment chain is not irreducible and aperiodic");
    }
    return stationary_distribution(env.q);
}

SnsMrp induce_mrp(const SnsMdp& model, const Policy& policy) {
    require_policy_shape(model, policy);
    SnsMrp mrp;
    mrp.n_states = model.n_states;
    mrp.gamma = model.gamma;
    mrp.env = model.env;
    mrp.P.reserve(model.n_envs());
    mrp.R.resize(idx(model.n_states), idx(model.n_envs()));
    for (std::size_t e = 0; e < model.n_envs(); ++e) {
        mrp.P.push_back(kernels::policy_transition(model.trans[e], policy.mu()));
        mrp.R.col(idx(e)) = kernels::policy_reward(model.rewards[e], policy.mu());
    }
    return mrp;
}

AveragedDynamics averaged_dynamics(const SnsMdp& model, const Policy& policy, const Distribution& pi_env) {
    require_policy_shape(model, policy);
    require_pi_env(pi_env, model.n_envs());
    AveragedDynamics avg;
    fill_action_averages(model, pi_env, avg);
    avg.p_bar = kernels::policy_transition(avg.p_bar_sa, policy.mu());
    avg.r_bar = kernels::policy_reward(avg.r_bar_sa, policy.mu());
    return avg;
}

Vector solve_discounted(const Matrix& P, const Vector& r, double gamma) {
    const Index n = P.rows();
    const Matrix A = Matrix::Identity(n, n) - gamma * P;
    Eigen::PartialPivLU<Matrix> lu(A);
    const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
    if (!(min_pivot >= kSingularPivot)) {
        throw NumericalError("singular discounted system (pivot " + std::to_string(min_pivot) + ")");
    }
    Vector x = lu.solve(r);
    const double residual = (A * x - r).lpNorm<Eigen::Infinity>();
    const double scale = std::max(1.0, x.lpNorm<Eigen::Infinity>());
    if (!x.allFinite() || !(residual < 1e-10 * scale)) {
        throw NumericalError("discounted solve residual " + std::to_string(residual) + " above tolerance");
    }
    return x;
}

ValueVector sns_value_closed_form(const SnsMrp& mrp, AssumptionMode mode) {
    require_valid(mrp);
    const Distribution pi_env = env_stationary(mrp.env);
    if (mode == AssumptionMode::Enforce) {
        for (std::size_t e = 0; e < mrp.n_envs(); ++e) {
            if (!check_irreducible_aperiodic(mrp.P[e])) {
                throw AssumptionError("state chain for environment " + std::to_string(e) +
                                      " is not irreducible and aperiodic");
            }
        }
    }
    const Matrix p_bar = kernels::weighted_sum(mrp.P, pi_env);
    const Vector r_bar = mrp.R * pi_env;
    return solve_discounted(p_bar, r_bar, mrp.gamma);
}

double sns_fixed_point_residual(const SnsMrp& mrp, const ValueVector& v) {
    const Distribution pi_env = stationary_distribution(mrp.env.q);
    const Matrix p_bar = kernels::weighted_sum(mrp.P, pi_env);
    return (mrp.R * pi_env + mrp.gamma * p_bar * v - v).lpNorm<Eigen::Infinity>();
}

JointValue joint_value_oracle(const SnsMrp& mrp) {
    require_valid(mrp);
    const Index n_states = idx(mrp.n_states);
    const Index n_envs = idx(mrp.n_envs());
    const Matrix H = kernels::joint_transition(mrp.P, mrp.env.q);
    Vector r(n_states * n_envs);
    for (Index e = 0; e < n_envs; ++e) r.segment(e * n_states, n_states) = mrp.R.col(e);
    const Vector v = solve_discounted(H, r, mrp.gamma);
    JointValue joint(n_states, n_envs);
    for (Index e = 0; e < n_envs; ++e) joint.col(e) = v.segment(e * n_states, n_states);
    return joint;
}

ValueVector marginalize(const JointValue& joint, const Distribution& pi_env) {
    require_pi_env(pi_env, static_cast<std::size_t>(joint.cols()));
    return joint * pi_env;
}

QTable sns_q_from_value(const AveragedDynamics& avg, const ValueVector& v, double gamma) {
    const Index n_states = avg.r_bar_sa.rows();
    const Index n_actions = avg.r_bar_sa.cols();
    if (v.size() != n_states || static_cast<Index>(avg.p_bar_sa.size()) != n_actions) {
        throw ValidationError("sns_q_from_value: dimension mismatch");
    }
    QTable q(n_states, n_actions);
    for (Index a = 0; a < n_actions; ++a) {
        q.col(a) = avg.r_bar_sa.col(a) + gamma * (avg.p_bar_sa[static_cast<std::size_t>(a)] * v);
    }
    return q;
}

namespace {

Policy greedy_impl(const QTable& q, const std::vector<std::size_t>* incumbent) {
    if (!q.allFinite()) throw ValidationError("greedy_policy: non-finite Q entries");
    std::vector<std::size_t> actions(static_cast<std::size_t>(q.rows()));
    for (Index s = 0; s < q.rows(); ++s) {
        Index best = 0;
        const double best_value = q.row(s).maxCoeff(&best);  // first maximizer
        std::size_t chosen = static_cast<std::size_t>(best);
        if (incumbent) {
            const std::size_t held = (*incumbent)[static_cast<std::size_t>(s)];
            const double tol = 1e-12 * std::max(1.0, std::abs(best_value));
            if (q(s, idx(held)) >= best_value - tol) chosen = held;
        }
        actions[static_cast<std::size_t>(s)] = chosen;
    }
    return Policy::deterministic(actions, static_cast<std::size_t>(q.cols()));
}

}  // namespace

Policy greedy_policy(const QTable& q) { return greedy_impl(q, nullptr); }

Policy greedy_policy(const QTable& q, const Policy& incumbent) {
    if (incumbent.n_states() != static_cast<std::size_t>(q.rows()) ||
        incumbent.n_actions() != static_cast<std::size_t>(q.cols())) {
        throw ValidationError("greedy_policy: incumbent shape does not match Q");
    }
    const auto held = incumbent.actions();
    return greedy_impl(q, &held);
}

QTable apply_optimality_operator(const AveragedDynamics& avg, const QTable& q, double gamma) {
    return kernels::bellman_optimality(avg.r_bar_sa, avg.p_bar_sa, q, gamma);
}

double bellman_optimality_residual(const AveragedDynamics& avg, const ValueVector& v, double gamma) {
    const QTable q = sns_q_from_value(avg, v, gamma);
    return (v - q.rowwise().maxCoeff()).lpNorm<Eigen::Infinity>();
}

PolicyIterationResult policy_iteration(const SnsMdp& model, PolicyIterationOptions options) {
    require_valid(model);
    PolicyIterationResult result;
    result.assumptions = check_assumption(model);
    if (!result.assumptions.env_ok) {
        throw AssumptionError("environment chain is not irreducible and aperiodic");
    }
    if (options.assumptions == AssumptionMode::Enforce && !result.assumptions.all_ok()) {
        throw AssumptionError("assumption check failed: " + result.assumptions.failures().front());
    }
    const Distribution pi_env = stationary_distribution(model.env.q);
    const std::size_t guard = improvement_guard(model.n_actions, model.n_states);

    Policy current = Policy::constant_action(model.n_states, model.n_actions, 0);
    while (true) {
        const SnsMrp mrp = induce_mrp(model, current);
        const ValueVector v = sns_value_closed_form(mrp, AssumptionMode::Report);
        result.trace.push_back(v);
        result.policies.push_back(current);

        const AveragedDynamics avg = averaged_dynamics(model, current, pi_env);
        Policy next = greedy_policy(sns_q_from_value(avg, v, model.gamma), current);
        ++result.improvement_steps;
        if (next == current) {
            result.policy = std::move(current);
            result.value = v;
            result.bellman_residual = bellman_optimality_residual(avg, v, model.gamma);
            break;
        }
        if (result.improvement_steps >= guard) {
            throw NumericalError("policy iteration did not terminate within |A|^|S| = " + std::to_string(guard) +
                                 " improvement steps");
        }
        current = std::move(next);
    }
    const double scale = std::max(1.0, result.value.lpNorm<Eigen::Infinity>());
    if (!(result.bellman_residual < 1e-8 * scale)) {
        throw NumericalError("policy iteration: Bellman optimality residual " +
                             std::to_string(result.bellman_residual) + " above tolerance");
    }
    return result;
}

ValueIterationResult optimal_q_value_iteration(const SnsMdp& model, double tol, std::size_t max_iters) {
    if (!(tol > 0.0)) throw ValidationError("value iteration tolerance must be positive");
    require_valid(model);
    const Distribution pi_env = env_stationary(model.env);
    AveragedDynamics avg;
    fill_action_averages(model, pi_env, avg);

    const double gamma = model.gamma;
    const double target = gamma > 0.0 ? tol * (1.0 - gamma) / gamma : std::numeric_limits<double>::infinity();
    ValueIterationResult result;
    result.q = QTable::Zero(idx(model.n_states), idx(model.n_actions));
    for (std::size_t it = 1; it <= max_iters; ++it) {
        QTable next = apply_optimality_operator(avg, result.q, gamma);
        result.last_change = (next - result.q).lpNorm<Eigen::Infinity>();
        result.q = std::move(next);
        result.iterations = it;
        const double floor = 16.0 * std::numeric_limits<double>::epsilon() * result.q.lpNorm<Eigen::Infinity>();
        if (result.last_change < std::max(target, floor) || result.last_change == 0.0) {
            result.error_bound = gamma > 0.0 ? result.last_change * gamma / (1.0 - gamma) : 0.0;
            return result;
        }
    }
    throw NumericalError("value iteration hit max_iters = " + std::to_string(max_iters) + " with change " +
                         std::to_string(result.last_change));
}

}  // namespace sns
