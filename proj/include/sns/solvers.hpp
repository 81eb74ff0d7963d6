#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "sns/model.hpp"

namespace sns {

/// What a solver does when a per-environment chain fails the irreducible /
/// aperiodic check. The environmental chain itself is always enforced since
/// its stationary distribution is needed.
enum class AssumptionMode { Enforce, Report };

struct AssumptionReport {
    bool env_ok = false;
    /// For an MDP: verdict per (e, a) matrix. For an MRP: one column, per e.
    std::vector<std::vector<bool>> chain_ok;
    bool per_action = false;

    bool all_ok() const;
    /// Human-readable list of failing chains, empty when all_ok().
    std::vector<std::string> failures() const;
};

AssumptionReport check_assumption(const SnsMdp& model);
AssumptionReport check_assumption(const SnsMrp& mrp);

/// Stationary distribution of the environmental chain; throws AssumptionError
/// when that chain is not irreducible and aperiodic.
Distribution env_stationary(const EnvChain& env);

/// P_e^mu(s, s') = sum_a p_e(s'|s,a) mu(a|s);  R^mu(s, e) = sum_a r_e(s,a) mu(a|s).
SnsMrp induce_mrp(const SnsMdp& model, const Policy& policy);

/// Environment-averaged quantities under the stationary environment weights.
struct AveragedDynamics {
    Matrix p_bar;                   ///< sum_e pi(e) P_e^mu
    Vector r_bar;                   ///< R^mu pi
    Matrix r_bar_sa;                ///< sum_e pi(e) r_e(s, a)
    std::vector<Matrix> p_bar_sa;   ///< [a]: sum_e pi(e) p_e(.|., a)
};

AveragedDynamics averaged_dynamics(const SnsMdp& model, const Policy& policy, const Distribution& pi_env);

/// v = (I - gamma * sum_e pi(e) P_e)^{-1} R pi, by LU with partial pivoting.
ValueVector sns_value_closed_form(const SnsMrp& mrp, AssumptionMode mode = AssumptionMode::Enforce);

/// ||R pi + gamma * P_bar v - v||_inf for the SNS fixed-point relation.
double sns_fixed_point_residual(const SnsMrp& mrp, const ValueVector& v);

/// Solves v(s,e) = R(s,e) + gamma * sum_{s',e'} p_e(s'|s) q(e'|e) v(s',e') on the
/// joint (state, environment) chain. Independent check of the closed form.
JointValue joint_value_oracle(const SnsMrp& mrp);

/// sum_e pi(e) v(s, e)
ValueVector marginalize(const JointValue& joint, const Distribution& pi_env);

/// Q(s,a) = r_bar_sa(s,a) + gamma * sum_s' p_bar_sa[a](s,s') v(s')
QTable sns_q_from_value(const AveragedDynamics& avg, const ValueVector& v, double gamma);

/// One-hot argmax per row. A state keeps the incumbent's action when it is
/// within 1e-12 (relative to max(1, |row max|)) of the row maximum; otherwise
/// the lowest maximizing index wins.
Policy greedy_policy(const QTable& q);
Policy greedy_policy(const QTable& q, const Policy& incumbent);

/// (TQ)(s,a) = r_bar_sa(s,a) + gamma * sum_s' p_bar_sa[a](s,s') max_a' Q(s',a')
QTable apply_optimality_operator(const AveragedDynamics& avg, const QTable& q, double gamma);

/// ||v - max_a [r_bar_sa(., a) + gamma * p_bar_sa[a] v]||_inf
double bellman_optimality_residual(const AveragedDynamics& avg, const ValueVector& v, double gamma);

struct PolicyIterationOptions {
    AssumptionMode assumptions = AssumptionMode::Enforce;
};

struct PolicyIterationResult {
    Policy policy;
    ValueVector value;
    /// v^{SNS, mu^n} for every evaluated policy, starting with mu^0.
    std::vector<ValueVector> trace;
    /// Policies in evaluation order (same length as trace).
    std::vector<Policy> policies;
    std::size_t improvement_steps = 0;
    double bellman_residual = 0.0;
    AssumptionReport assumptions;
};

/// Evaluate / improve from the all-action-0 policy until the policy repeats.
/// Throws NumericalError if |A|^|S| improvement steps pass without a repeat.
PolicyIterationResult policy_iteration(const SnsMdp& model, PolicyIterationOptions options = {});

struct ValueIterationResult {
    QTable q;
    std::size_t iterations = 0;
    double last_change = 0.0;
    /// Guaranteed bound on ||q - Q*||_inf: last_change * gamma / (1 - gamma).
    double error_bound = 0.0;
};

/// Iterates the optimality operator from Q = 0 until the sup-norm change is below
/// tol * (1 - gamma) / gamma. The threshold is floored at 16 ulps of ||Q||_inf
/// because tighter changes are not representable; error_bound reports what was
/// actually certified. Throws NumericalError after max_iters.
ValueIterationResult optimal_q_value_iteration(const SnsMdp& model, double tol = 1e-12,
                                               std::size_t max_iters = 1'000'000);

/// Dense solve of (I - gamma * P) x = r with a pivot and residual check.
Vector solve_discounted(const Matrix& P, const Vector& r, double gamma);

}  // namespace sns
