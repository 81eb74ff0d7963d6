#pragma once

#include <vector>

#include "sns/model.hpp"

// Dense inner loops used by the solvers. Every kernel exists twice: the
// OpenMP version in sns::kernels and a plain loop in sns::kernels::serial.
// Both accumulate each output entry in the same index order, so results are
// bit-identical and the serial one doubles as the test reference.

namespace sns::kernels {

/// sum_e w(e) * mats[e]
Matrix weighted_sum(const std::vector<Matrix>& mats, const Vector& weights);

/// P^mu(s, s') = sum_a mu(a|s) * per_action[a](s, s')
Matrix policy_transition(const std::vector<Matrix>& per_action, const Matrix& mu);

/// r^mu(s) = sum_a mu(a|s) * rewards(s, a)
Vector policy_reward(const Matrix& rewards, const Matrix& mu);

/// (TQ)(s, a) = r(s, a) + gamma * sum_s' p[a](s, s') * max_a' Q(s', a')
Matrix bellman_optimality(const Matrix& r_sa, const std::vector<Matrix>& p_sa, const Matrix& q, double gamma);

/// H((e, s), (e', s')) = P[e](s, s') * q(e, e'), joint index e * n_states + s.
Matrix joint_transition(const std::vector<Matrix>& P, const Matrix& q);

namespace serial {

Matrix weighted_sum(const std::vector<Matrix>& mats, const Vector& weights);
Matrix policy_transition(const std::vector<Matrix>& per_action, const Matrix& mu);
Vector policy_reward(const Matrix& rewards, const Matrix& mu);
Matrix bellman_optimality(const Matrix& r_sa, const std::vector<Matrix>& p_sa, const Matrix& q, double gamma);
Matrix joint_transition(const std::vector<Matrix>& P, const Matrix& q);

}  // namespace serial

/// Threads OpenMP would use for the parallel kernels (1 when built without OpenMP).
int max_threads();

}  // namespace sns::kernels
