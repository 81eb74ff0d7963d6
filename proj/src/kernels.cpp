#include "sns/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sns/error.hpp"

namespace sns::kernels {

namespace {

using Index = Eigen::Index;

void require_same_shape(const std::vector<Matrix>& mats, const char* what) {
    if (mats.empty()) throw ValidationError(std::string(what) + ": empty input");
    for (const auto& m : mats) {
        if (m.rows() != mats.front().rows() || m.cols() != mats.front().cols()) {
            throw ValidationError(std::string(what) + ": inconsistent matrix shapes");
        }
    }
}

// Row bodies shared by the serial and parallel drivers.

void weighted_sum_row(const std::vector<Matrix>& mats, const Vector& w, Matrix& out, Index i) {
    for (Index j = 0; j < out.cols(); ++j) {
        double acc = 0.0;
        for (std::size_t e = 0; e < mats.size(); ++e) acc += w(static_cast<Index>(e)) * mats[e](i, j);
        out(i, j) = acc;
    }
}

void policy_transition_row(const std::vector<Matrix>& per_action, const Matrix& mu, Matrix& out, Index s) {
    for (Index t = 0; t < out.cols(); ++t) {
        double acc = 0.0;
        for (std::size_t a = 0; a < per_action.size(); ++a) acc += mu(s, static_cast<Index>(a)) * per_action[a](s, t);
        out(s, t) = acc;
    }
}

double policy_reward_entry(const Matrix& rewards, const Matrix& mu, Index s) {
    double acc = 0.0;
    for (Index a = 0; a < rewards.cols(); ++a) acc += mu(s, a) * rewards(s, a);
    return acc;
}

void bellman_row(const Matrix& r_sa, const std::vector<Matrix>& p_sa, const Vector& best, double gamma, Matrix& out,
                 Index s) {
    for (Index a = 0; a < r_sa.cols(); ++a) {
        const Matrix& p = p_sa[static_cast<std::size_t>(a)];
        double acc = 0.0;
        for (Index t = 0; t < p.cols(); ++t) acc += p(s, t) * best(t);
        out(s, a) = r_sa(s, a) + gamma * acc;
    }
}

void joint_row(const std::vector<Matrix>& P, const Matrix& q, Matrix& out, Index row) {
    const Index n_states = P.front().rows();
    const Index e = row / n_states;
    const Index s = row % n_states;
    const Matrix& Pe = P[static_cast<std::size_t>(e)];
    for (Index e2 = 0; e2 < q.cols(); ++e2) {
        const double qe = q(e, e2);
        for (Index s2 = 0; s2 < n_states; ++s2) out(row, e2 * n_states + s2) = Pe(s, s2) * qe;
    }
}

void check_weighted_sum(const std::vector<Matrix>& mats, const Vector& weights) {
    require_same_shape(mats, "weighted_sum");
    if (static_cast<std::size_t>(weights.size()) != mats.size()) {
        throw ValidationError("weighted_sum: weight count does not match matrix count");
    }
}

void check_policy_transition(const std::vector<Matrix>& per_action, const Matrix& mu) {
    require_same_shape(per_action, "policy_transition");
    if (static_cast<std::size_t>(mu.cols()) != per_action.size() || mu.rows() != per_action.front().rows()) {
        throw ValidationError("policy_transition: policy shape does not match the model");
    }
}

void check_bellman(const Matrix& r_sa, const std::vector<Matrix>& p_sa, const Matrix& q) {
    require_same_shape(p_sa, "bellman_optimality");
    if (static_cast<std::size_t>(r_sa.cols()) != p_sa.size() || r_sa.rows() != p_sa.front().rows() ||
        q.rows() != r_sa.rows() || q.cols() != r_sa.cols()) {
        throw ValidationError("bellman_optimality: dimension mismatch");
    }
}

void check_joint(const std::vector<Matrix>& P, const Matrix& q) {
    require_same_shape(P, "joint_transition");
    if (q.rows() != q.cols() || static_cast<std::size_t>(q.rows()) != P.size()) {
        throw ValidationError("joint_transition: env chain does not match the number of environments");
    }
}

}  // namespace

Matrix weighted_sum(const std::vector<Matrix>& mats, const Vector& weights) {
    check_weighted_sum(mats, weights);
    Matrix out(mats.front().rows(), mats.front().cols());
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < out.rows(); ++i) weighted_sum_row(mats, weights, out, i);
    return out;
}

Matrix policy_transition(const std::vector<Matrix>& per_action, const Matrix& mu) {
    check_policy_transition(per_action, mu);
    Matrix out(per_action.front().rows(), per_action.front().cols());
#pragma omp parallel for schedule(static)
    for (Index s = 0; s < out.rows(); ++s) policy_transition_row(per_action, mu, out, s);
    return out;
}

Vector policy_reward(const Matrix& rewards, const Matrix& mu) {
    if (rewards.rows() != mu.rows() || rewards.cols() != mu.cols()) {
        throw ValidationError("policy_reward: policy shape does not match the reward table");
    }
    Vector out(rewards.rows());
#pragma omp parallel for schedule(static)
    for (Index s = 0; s < out.size(); ++s) out(s) = policy_reward_entry(rewards, mu, s);
    return out;
}

Matrix bellman_optimality(const Matrix& r_sa, const std::vector<Matrix>& p_sa, const Matrix& q, double gamma) {
    check_bellman(r_sa, p_sa, q);
    Vector best(q.rows());
    Matrix out(r_sa.rows(), r_sa.cols());
#pragma omp parallel
    {
#pragma omp for schedule(static)
        for (Index s = 0; s < q.rows(); ++s) best(s) = q.row(s).maxCoeff();
#pragma omp for schedule(static)
        for (Index s = 0; s < out.rows(); ++s) bellman_row(r_sa, p_sa, best, gamma, out, s);
    }
    return out;
}

Matrix joint_transition(const std::vector<Matrix>& P, const Matrix& q) {
    check_joint(P, q);
    const Index n = P.front().rows() * q.rows();
    Matrix out(n, n);
#pragma omp parallel for schedule(static)
    for (Index row = 0; row < n; ++row) joint_row(P, q, out, row);
    return out;
}

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

namespace serial {

Matrix weighted_sum(const std::vector<Matrix>& mats, const Vector& weights) {
    check_weighted_sum(mats, weights);
    Matrix out(mats.front().rows(), mats.front().cols());
    for (Index i = 0; i < out.rows(); ++i) weighted_sum_row(mats, weights, out, i);
    return out;
}

Matrix policy_transition(const std::vector<Matrix>& per_action, const Matrix& mu) {
    check_policy_transition(per_action, mu);
    Matrix out(per_action.front().rows(), per_action.front().cols());
    for (Index s = 0; s < out.rows(); ++s) policy_transition_row(per_action, mu, out, s);
    return out;
}

Vector policy_reward(const Matrix& rewards, const Matrix& mu) {
    if (rewards.rows() != mu.rows() || rewards.cols() != mu.cols()) {
        throw ValidationError("policy_reward: policy shape does not match the reward table");
    }
    Vector out(rewards.rows());
    for (Index s = 0; s < out.size(); ++s) out(s) = policy_reward_entry(rewards, mu, s);
    return out;
}

Matrix bellman_optimality(const Matrix& r_sa, const std::vector<Matrix>& p_sa, const Matrix& q, double gamma) {
    check_bellman(r_sa, p_sa, q);
    Vector best(q.rows());
    for (Index s = 0; s < q.rows(); ++s) best(s) = q.row(s).maxCoeff();
    Matrix out(r_sa.rows(), r_sa.cols());
    for (Index s = 0; s < out.rows(); ++s) bellman_row(r_sa, p_sa, best, gamma, out, s);
    return out;
}

Matrix joint_transition(const std::vector<Matrix>& P, const Matrix& q) {
    check_joint(P, q);
    const Index n = P.front().rows() * q.rows();
    Matrix out(n, n);
    for (Index row = 0; row < n; ++row) joint_row(P, q, out, row);
    return out;
}

}  // namespace serial

}  // namespace sns::kernels
