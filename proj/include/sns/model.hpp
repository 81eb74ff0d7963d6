#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sns {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Absolute tolerance on every probability row sum.
inline constexpr double kProbabilityTolerance = 1e-12;

/// v(s), one entry per observable state.
using ValueVector = Vector;
/// Q(s, a), states by actions.
using QTable = Matrix;
/// v(s, e), states by environments.
using JointValue = Matrix;
/// Probability vector over a finite set.
using Distribution = Vector;

/// Environmental Markov chain; q(e, e') = q(e' | e), rows indexed by the current environment.
struct EnvChain {
    Matrix q;

    std::size_t n_envs() const { return static_cast<std::size_t>(q.rows()); }
};

/// Switching non-stationary MDP. One transition tensor and one reward table per
/// environment; the active environment is chosen by `env` and hidden from the agent.
struct SnsMdp {
    std::size_t n_states = 0;
    std::size_t n_actions = 0;
    double gamma = 0.0;
    /// trans[e][a](s, s') = p_e(s' | s, a)
    std::vector<std::vector<Matrix>> trans;
    /// rewards[e](s, a) = r_e(s, a)
    std::vector<Matrix> rewards;
    EnvChain env;

    std::size_t n_envs() const { return env.n_envs(); }
};

/// Reward-process form: the SNS-MDP with the policy folded in.
struct SnsMrp {
    std::size_t n_states = 0;
    /// P[e](s, s') = p_e(s' | s)
    std::vector<Matrix> P;
    /// R(s, e) = r_e(s)
    Matrix R;
    double gamma = 0.0;
    EnvChain env;

    std::size_t n_envs() const { return env.n_envs(); }
};

/// Stationary Markov policy mu(a | s) over observable states only.
class Policy {
public:
    Policy() = default;
    /// Throws ValidationError unless every row is a probability distribution.
    explicit Policy(Matrix mu);

    static Policy deterministic(const std::vector<std::size_t>& actions, std::size_t n_actions);
    static Policy uniform(std::size_t n_states, std::size_t n_actions);
    static Policy constant_action(std::size_t n_states, std::size_t n_actions, std::size_t action);

    const Matrix& mu() const { return mu_; }
    double operator()(std::size_t s, std::size_t a) const { return mu_(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(a)); }
    std::size_t n_states() const { return static_cast<std::size_t>(mu_.rows()); }
    std::size_t n_actions() const { return static_cast<std::size_t>(mu_.cols()); }

    bool is_deterministic() const;
    /// Selected action per state; throws if the policy is not deterministic.
    std::vector<std::size_t> actions() const;

    friend bool operator==(const Policy& lhs, const Policy& rhs) { return lhs.mu_ == rhs.mu_; }

private:
    Matrix mu_;
};

struct ValidationReport {
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
    std::string to_string() const;
};

ValidationReport validate_env_chain(const EnvChain& env);
ValidationReport validate_mdp(const SnsMdp& model);
ValidationReport validate_mrp(const SnsMrp& mrp);

/// Throws ValidationError carrying the report when the model is invalid.
void require_valid(const SnsMdp& model);
void require_valid(const SnsMrp& mrp);

bool all_finite(const Matrix& m);

}  // namespace sns
