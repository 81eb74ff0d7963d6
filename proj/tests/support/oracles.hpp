#pragma once

// Test-only helpers: random instance generators and brute-force oracles that
// deliberately avoid the library's solver paths (own loops, QR instead of LU).

#include <cstdint>
#include <random>
#include <vector>

#include "sns/model.hpp"

namespace sns::testing {

using Rng64 = std::mt19937_64;

/// Row-stochastic n x n matrix; each entry is zeroed with probability `zero_prob`
/// (at least one entry per row stays positive).
Matrix random_stochastic(Rng64& rng, std::size_t rows, std::size_t cols, double zero_prob);

SnsMdp random_mdp(Rng64& rng, std::size_t n_states, std::size_t n_actions, std::size_t n_envs, double gamma,
                  double zero_prob = 0.3);
SnsMrp random_mrp(Rng64& rng, std::size_t n_states, std::size_t n_envs, double gamma, double zero_prob = 0.3);

/// Env chain and every per-(e, a) chain irreducible and aperiodic.
bool passes_assumption(const SnsMdp& model);
bool passes_assumption(const SnsMrp& mrp);

/// Rejection-samples random_mdp / random_mrp until passes_assumption holds.
SnsMdp random_valid_mdp(Rng64& rng, std::size_t n_states, std::size_t n_actions, std::size_t n_envs, double gamma);
SnsMrp random_valid_mrp(Rng64& rng, std::size_t n_states, std::size_t n_envs, double gamma);

/// Left eigenvector for eigenvalue 1 via QR least squares on [P^T - I; 1^T].
Vector oracle_stationary(const Matrix& P);

/// Classical stationary MRP value (I - gamma P)^{-1} r by Householder QR.
Vector oracle_mrp_value(const Matrix& P, const Vector& r, double gamma);

/// sum_e w(e) mats[e] with plain loops.
Matrix oracle_weighted_sum(const std::vector<Matrix>& mats, const Vector& w);

/// SNS value of a deterministic policy, assembled entry by entry.
Vector oracle_policy_value(const SnsMdp& model, const std::vector<std::size_t>& actions);

struct EnumerationResult {
    Vector best_value;                       ///< elementwise max over all deterministic policies
    std::vector<std::size_t> best_actions;   ///< a policy attaining it (lowest index order)
    std::size_t policies = 0;
};

/// Evaluates all |A|^|S| deterministic policies.
EnumerationResult enumerate_policies(const SnsMdp& model);

/// Classical value iteration on a stationary MDP (p[a](s, s'), r(s, a)) to a
/// sup-norm change of 1e-14 relative to max(1, ||Q||).
Matrix oracle_stationary_optimal_q(const std::vector<Matrix>& p, const Matrix& r, double gamma);

/// Stationary law rho(s, e) of the joint chain (S_k, E_k) under a policy.
Matrix joint_stationary(const SnsMdp& model, const Matrix& mu);

/// Exact limit of TD(0) along the observable trajectory: each state weighs the
/// environments by rho(e | s) instead of the stationary pi(e).
Vector td_limit(const SnsMdp& model, const Matrix& mu);

/// Exact Q-learning limit under a behavior policy (rho(e | s) weighting).
Matrix q_learning_limit(const SnsMdp& model, const Matrix& behavior);

double sup_norm(const Matrix& m);

}  // namespace sns::testing
