#include "sns/simulator.hpp"

#include <cstdio>

#include "sns/error.hpp"
#include "sns/solvers.hpp"

namespace sns {

Simulator::Simulator(const SnsMdp& model, std::size_t s0, std::optional<std::size_t> e0, std::uint64_t seed)
    : model_(&model), s_(s0), e_(0), rng_(seed) {
    if (s0 >= model.n_states) {
        throw ValidationError("initial state " + std::to_string(s0) + " out of range");
    }
    if (e0) {
        if (*e0 >= model.n_envs()) {
            throw ValidationError("initial environment " + std::to_string(*e0) + " out of range");
        }
        e_ = *e0;
    } else {
        const Distribution pi_env = env_stationary(model.env);
        e_ = sample_index(pi_env, rng_.uniform());
    }
}

TransitionSample Simulator::step(std::size_t a) {
    if (a >= model_->n_actions) throw ValidationError("action " + std::to_string(a) + " out of range");
    TransitionSample sample;
    sample.k = k_;
    sample.s = s_;
    sample.a = a;
    sample.e_hidden = e_;
    sample.r = model_->rewards[e_](static_cast<Eigen::Index>(s_), static_cast<Eigen::Index>(a));
    sample.s_next = sample_index(model_->trans[e_][a].row(static_cast<Eigen::Index>(s_)), rng_.uniform());
    const std::size_t e_next = sample_index(model_->env.q.row(static_cast<Eigen::Index>(e_)), rng_.uniform());
    s_ = sample.s_next;
    e_ = e_next;
    ++k_;
    return sample;
}

std::size_t Simulator::sample_action(const Policy& policy) {
    if (policy.n_states() != model_->n_states || policy.n_actions() != model_->n_actions) {
        throw ValidationError("policy shape does not match the simulated model");
    }
    return sample_index(policy.mu().row(static_cast<Eigen::Index>(s_)), rng_.uniform());
}

Simulator new_simulator(const SnsMdp& model, std::size_t s0, std::optional<std::size_t> e0, std::uint64_t seed) {
    return Simulator(model, s0, e0, seed);
}

std::vector<TransitionSample> rollout(Simulator& sim, const Policy& policy, std::size_t n_steps) {
    std::vector<TransitionSample> out;
    out.reserve(n_steps);
    for (std::size_t i = 0; i < n_steps; ++i) {
        const std::size_t a = sim.sample_action(policy);
        out.push_back(sim.step(a));
    }
    return out;
}

void write_trajectory_csv(std::ostream& os, const std::vector<TransitionSample>& samples) {
    os << "k,s,a,r,s_next,e_hidden\n";
    char buf[32];
    for (const auto& t : samples) {
        std::snprintf(buf, sizeof buf, "%.17g", t.r);
        os << t.k << ',' << t.s << ',' << t.a << ',' << buf << ',' << t.s_next << ',' << t.e_hidden << '\n';
    }
}

}  // namespace sns
