#include "sns/learners.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "sns/error.hpp"

namespace sns {

namespace {

using Index = Eigen::Index;

Index idx(std::size_t i) { return static_cast<Index>(i); }

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool is_checkpoint(std::size_t k, std::size_t n_steps) { return (k & (k - 1)) == 0 || k == n_steps; }

Checkpoint make_checkpoint(std::size_t k, const Matrix& estimate, const std::optional<Matrix>& reference) {
    if (!reference) return {k, kNaN, kNaN};
    const Matrix diff = estimate - *reference;
    return {k, diff.lpNorm<Eigen::Infinity>(), diff.norm()};
}

void td_update(ValueVector& v, const Observation& obs, double alpha, double gamma) {
    const Index s = idx(obs.s);
    v(s) += alpha * (obs.r + gamma * v(idx(obs.s_next)) - v(s));
}

void q_update(QTable& q, const Observation& obs, double alpha, double gamma) {
    const Index s = idx(obs.s);
    const Index a = idx(obs.a);
    const double target = obs.r + gamma * q.row(idx(obs.s_next)).maxCoeff();
    q(s, a) = (1.0 - alpha) * q(s, a) + alpha * target;
}

}  // namespace

StepSchedule StepSchedule::robbins_monro(double c, double t0) {
    if (!(c > 0.0) || !(t0 > 0.0) || !(c / t0 <= 1.0)) {
        throw ValidationError("Robbins-Monro schedule needs c > 0, t0 > 0 and c / t0 <= 1");
    }
    return StepSchedule(Kind::RobbinsMonro, c, t0, 0.0);
}

StepSchedule StepSchedule::constant(double alpha) {
    if (!(alpha > 0.0) || !(alpha <= 1.0)) throw ValidationError("constant step size must lie in (0, 1]");
    return StepSchedule(Kind::Constant, 0.0, 0.0, alpha);
}

void write_trace_csv(std::ostream& os, const std::vector<Checkpoint>& checkpoints) {
    os << "k,err_sup,err_l2\n";
    char buf[96];
    for (const auto& c : checkpoints) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", c.k, c.err_sup, c.err_l2);
        os << buf;
    }
}

ValueVector td_step(const ValueVector& v, const Observation& obs, double alpha, double gamma) {
    if (obs.s >= static_cast<std::size_t>(v.size()) || obs.s_next >= static_cast<std::size_t>(v.size())) {
        throw ValidationError("td_step: state index out of range");
    }
    ValueVector out = v;
    td_update(out, obs, alpha, gamma);
    return out;
}

QTable q_step(const QTable& q, const Observation& obs, double alpha, double gamma) {
    if (obs.s >= static_cast<std::size_t>(q.rows()) || obs.s_next >= static_cast<std::size_t>(q.rows()) ||
        obs.a >= static_cast<std::size_t>(q.cols())) {
        throw ValidationError("q_step: index out of range");
    }
    QTable out = q;
    q_update(out, obs, alpha, gamma);
    return out;
}

TdResult td_evaluate(const SnsMdp& model, const Policy& policy, const TdOptions& options) {
    if (options.n_steps == 0) throw ValidationError("td_evaluate needs at least one step");
    const double gamma = options.gamma_override.value_or(model.gamma);
    if (!(gamma >= 0.0 && gamma < 1.0)) throw ValidationError("discount must be in [0, 1)");
    if (options.reference && static_cast<std::size_t>(options.reference->size()) != model.n_states) {
        throw ValidationError("reference value vector has the wrong length");
    }
    std::optional<Matrix> reference;
    if (options.reference) reference = Matrix(*options.reference);

    Simulator sim(model, options.s0, options.e0, options.seed);
    TdResult result;
    result.v = ValueVector::Zero(idx(model.n_states));
    std::vector<std::size_t> visits(model.n_states, 0);

    for (std::size_t k = 1; k <= options.n_steps; ++k) {
        const TransitionSample sample = sim.step(sim.sample_action(policy));
        const Observation obs = sample.observation();
        const std::size_t n = options.clock == StepClock::PerEntry ? visits[obs.s]++ : k - 1;
        td_update(result.v, obs, options.schedule(n), gamma);
        if (is_checkpoint(k, options.n_steps)) {
            result.trace.checkpoints.push_back(make_checkpoint(k, result.v, reference));
            result.trace.max_abs_estimate =
                std::max(result.trace.max_abs_estimate, result.v.lpNorm<Eigen::Infinity>());
        }
    }
    return result;
}

QLearnResult q_learn(const SnsMdp& model, const Policy& behavior, const QLearnOptions& options) {
    if (options.n_steps == 0) throw ValidationError("q_learn needs at least one step");
    if (behavior.n_states() != model.n_states || behavior.n_actions() != model.n_actions) {
        throw ValidationError("behavior policy shape does not match the model");
    }
    if ((behavior.mu().array() <= 0.0).any()) {
        throw ValidationError("behavior policy must give every action positive probability in every state");
    }
    if (options.reference && (static_cast<std::size_t>(options.reference->rows()) != model.n_states ||
                              static_cast<std::size_t>(options.reference->cols()) != model.n_actions)) {
        throw ValidationError("reference Q-table has the wrong shape");
    }
    double max_reward = 0.0;
    for (const auto& r : model.rewards) max_reward = std::max(max_reward, r.cwiseAbs().maxCoeff());
    const double bound = max_reward / (1.0 - model.gamma);

    Simulator sim(model, options.s0, options.e0, options.seed);
    QLearnResult result;
    result.q = QTable::Zero(idx(model.n_states), idx(model.n_actions));
    std::vector<std::size_t> visits(model.n_states * model.n_actions, 0);

    for (std::size_t k = 1; k <= options.n_steps; ++k) {
        const TransitionSample sample = sim.step(sim.sample_action(behavior));
        const Observation obs = sample.observation();
        const std::size_t n =
            options.clock == StepClock::PerEntry ? visits[obs.s * model.n_actions + obs.a]++ : k - 1;
        q_update(result.q, obs, options.schedule(n), model.gamma);
        if (is_checkpoint(k, options.n_steps)) {
            result.trace.checkpoints.push_back(make_checkpoint(k, result.q, options.reference));
            const double norm = result.q.lpNorm<Eigen::Infinity>();
            result.trace.max_abs_estimate = std::max(result.trace.max_abs_estimate, norm);
            if (norm > bound * (1.0 + 1e-12)) result.trace.bound_ok = false;
        }
    }
    return result;
}

}  // namespace sns
