#include "sns/model.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "sns/error.hpp"

namespace sns {

namespace {

std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return buf;
}

// Appends a violation for every broken property of a probability row.
void check_row(const Eigen::Ref<const Eigen::RowVectorXd>& row, const std::string& where,
               std::vector<std::string>& out) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < row.size(); ++j) {
        const double p = row(j);
        if (!std::isfinite(p)) {
            out.push_back("non-finite probability at " + where + " column " + std::to_string(j));
            return;
        }
        if (p < 0.0) {
            out.push_back("negative probability " + format_number(p) + " at " + where + " column " +
                          std::to_string(j));
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > kProbabilityTolerance) {
        out.push_back("row sum " + format_number(sum) + " at " + where);
    }
}

void check_gamma(double gamma, std::vector<std::string>& out) {
    if (!std::isfinite(gamma) || gamma < 0.0) {
        out.push_back("discount must be in [0, 1), got " + format_number(gamma));
    } else if (gamma >= 1.0) {
        out.push_back("discount must be < 1");
    }
}

bool has_shape(const Matrix& m, std::size_t rows, std::size_t cols) {
    return static_cast<std::size_t>(m.rows()) == rows && static_cast<std::size_t>(m.cols()) == cols;
}

}  // namespace

Policy::Policy(Matrix mu) : mu_(std::move(mu)) {
    std::vector<std::string> violations;
    for (Eigen::Index s = 0; s < mu_.rows(); ++s) {
        check_row(mu_.row(s), "(s=" + std::to_string(s) + ")", violations);
    }
    if (!violations.empty()) {
        throw ValidationError("invalid policy", std::move(violations));
    }
}

Policy Policy::deterministic(const std::vector<std::size_t>& actions, std::size_t n_actions) {
    Matrix mu = Matrix::Zero(static_cast<Eigen::Index>(actions.size()), static_cast<Eigen::Index>(n_actions));
    for (std::size_t s = 0; s < actions.size(); ++s) {
        if (actions[s] >= n_actions) {
            throw ValidationError("action " + std::to_string(actions[s]) + " out of range at state " +
                                  std::to_string(s));
        }
        mu(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(actions[s])) = 1.0;
    }
    return Policy(std::move(mu));
}

Policy Policy::uniform(std::size_t n_states, std::size_t n_actions) {
    if (n_actions == 0) throw ValidationError("uniform policy needs at least one action");
    return Policy(Matrix::Constant(static_cast<Eigen::Index>(n_states), static_cast<Eigen::Index>(n_actions),
                                   1.0 / static_cast<double>(n_actions)));
}

Policy Policy::constant_action(std::size_t n_states, std::size_t n_actions, std::size_t action) {
    return deterministic(std::vector<std::size_t>(n_states, action), n_actions);
}

bool Policy::is_deterministic() const {
    for (Eigen::Index s = 0; s < mu_.rows(); ++s) {
        int ones = 0;
        for (Eigen::Index a = 0; a < mu_.cols(); ++a) {
            const double p = mu_(s, a);
            if (p == 1.0) {
                ++ones;
            } else if (p != 0.0) {
                return false;
            }
        }
        if (ones != 1) return false;
    }
    return true;
}

std::vector<std::size_t> Policy::actions() const {
    if (!is_deterministic()) throw ValidationError("policy is not deterministic");
    std::vector<std::size_t> out(static_cast<std::size_t>(mu_.rows()));
    for (Eigen::Index s = 0; s < mu_.rows(); ++s) {
        Eigen::Index a = 0;
        mu_.row(s).maxCoeff(&a);
        out[static_cast<std::size_t>(s)] = static_cast<std::size_t>(a);
    }
    return out;
}

std::string ValidationReport::to_string() const {
    if (ok()) return "ok";
    std::ostringstream os;
    for (std::size_t i = 0; i < violations.size(); ++i) {
        if (i) os << '\n';
        os << violations[i];
    }
    return os.str();
}

ValidationReport validate_env_chain(const EnvChain& env) {
    ValidationReport report;
    const std::size_t n = env.n_envs();
    if (n == 0) {
        report.violations.emplace_back("env_chain must have at least one environment");
        return report;
    }
    if (!has_shape(env.q, n, n)) {
        report.violations.emplace_back("env_chain must be square, got " + std::to_string(env.q.rows()) + "x" +
                                       std::to_string(env.q.cols()));
        return report;
    }
    for (std::size_t e = 0; e < n; ++e) {
        check_row(env.q.row(static_cast<Eigen::Index>(e)), "env_chain (e=" + std::to_string(e) + ")",
                  report.violations);
    }
    return report;
}

ValidationReport validate_mdp(const SnsMdp& model) {
    ValidationReport report = validate_env_chain(model.env);
    auto& out = report.violations;
    if (model.n_states == 0) out.emplace_back("n_states must be positive");
    if (model.n_actions == 0) out.emplace_back("n_actions must be positive");
    check_gamma(model.gamma, out);
    if (!out.empty() && (model.n_states == 0 || model.n_actions == 0)) return report;

    const std::size_t n_envs = model.n_envs();
    if (model.trans.size() != n_envs) {
        out.push_back("transitions has " + std::to_string(model.trans.size()) + " environments, expected " +
                      std::to_string(n_envs));
    }
    if (model.rewards.size() != n_envs) {
        out.push_back("rewards has " + std::to_string(model.rewards.size()) + " environments, expected " +
                      std::to_string(n_envs));
    }
    for (std::size_t e = 0; e < model.trans.size(); ++e) {
        if (model.trans[e].size() != model.n_actions) {
            out.push_back("transitions[e=" + std::to_string(e) + "] has " + std::to_string(model.trans[e].size()) +
                          " actions, expected " + std::to_string(model.n_actions));
            continue;
        }
        for (std::size_t a = 0; a < model.n_actions; ++a) {
            const Matrix& p = model.trans[e][a];
            if (!has_shape(p, model.n_states, model.n_states)) {
                out.push_back("transition matrix (e=" + std::to_string(e) + ",a=" + std::to_string(a) +
                              ") has wrong shape");
                continue;
            }
            for (std::size_t s = 0; s < model.n_states; ++s) {
                check_row(p.row(static_cast<Eigen::Index>(s)),
                          "(e=" + std::to_string(e) + ",a=" + std::to_string(a) + ",s=" + std::to_string(s) + ")",
                          out);
            }
        }
    }
    for (std::size_t e = 0; e < model.rewards.size(); ++e) {
        if (!has_shape(model.rewards[e], model.n_states, model.n_actions)) {
            out.push_back("rewards[e=" + std::to_string(e) + "] has wrong shape");
        } else if (!all_finite(model.rewards[e])) {
            out.push_back("rewards[e=" + std::to_string(e) + "] contains non-finite values");
        }
    }
    return report;
}

ValidationReport validate_mrp(const SnsMrp& mrp) {
    ValidationReport report = validate_env_chain(mrp.env);
    auto& out = report.violations;
    if (mrp.n_states == 0) out.emplace_back("n_states must be positive");
    check_gamma(mrp.gamma, out);
    const std::size_t n_envs = mrp.n_envs();
    if (mrp.P.size() != n_envs) {
        out.push_back("P has " + std::to_string(mrp.P.size()) + " environments, expected " + std::to_string(n_envs));
    }
    for (std::size_t e = 0; e < mrp.P.size(); ++e) {
        if (!has_shape(mrp.P[e], mrp.n_states, mrp.n_states)) {
            out.push_back("P[e=" + std::to_string(e) + "] has wrong shape");
            continue;
        }
        for (std::size_t s = 0; s < mrp.n_states; ++s) {
            check_row(mrp.P[e].row(static_cast<Eigen::Index>(s)),
                      "(e=" + std::to_string(e) + ",s=" + std::to_string(s) + ")", out);
        }
    }
    if (!has_shape(mrp.R, mrp.n_states, n_envs)) {
        out.emplace_back("reward matrix R must be n_states x n_envs");
    } else if (!all_finite(mrp.R)) {
        out.emplace_back("reward matrix R contains non-finite values");
    }
    return report;
}

void require_valid(const SnsMdp& model) {
    auto report = validate_mdp(model);
    if (!report.ok()) throw ValidationError("invalid SNS-MDP:\n" + report.to_string(), report.violations);
}

void require_valid(const SnsMrp& mrp) {
    auto report = validate_mrp(mrp);
    if (!report.ok()) throw ValidationError("invalid SNS-MRP:\n" + report.to_string(), report.violations);
}

bool all_finite(const Matrix& m) { return m.allFinite(); }

}  // namespace sns
