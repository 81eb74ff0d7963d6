#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "sns/model.hpp"
#include "sns/rng.hpp"

namespace sns {

/// What a learner is allowed to see of one step.
struct Observation {
    std::size_t k = 0;
    std::size_t s = 0;
    std::size_t a = 0;
    double r = 0.0;
    std::size_t s_next = 0;
};

/// One simulated step including the hidden environment (diagnostics only).
struct TransitionSample {
    std::size_t k = 0;
    std::size_t s = 0;
    std::size_t a = 0;
    double r = 0.0;
    std::size_t s_next = 0;
    std::size_t e_hidden = 0;

    Observation observation() const { return {k, s, a, r, s_next}; }

    friend bool operator==(const TransitionSample&, const TransitionSample&) = default;
};

/// Seeded simulator of an SNS-MDP. Holds a reference to the model, which must
/// outlive it. Not thread-safe; give each thread its own instance.
///
/// Draw order per step is fixed: s_next from p_e(.|s,a), then e_next from
/// q(.|e). When the initial environment is sampled, that draw comes first.
class Simulator {
public:
    /// `e0 == std::nullopt` samples the initial environment from the stationary
    /// distribution of the environmental chain.
    Simulator(const SnsMdp& model, std::size_t s0, std::optional<std::size_t> e0, std::uint64_t seed);

    TransitionSample step(std::size_t a);
    /// Draws an action from mu(.|s) at the current state using the simulator's generator.
    std::size_t sample_action(const Policy& policy);

    std::size_t state() const { return s_; }
    std::size_t hidden_env() const { return e_; }
    std::size_t step_count() const { return k_; }
    const SnsMdp& model() const { return *model_; }

    friend bool operator==(const Simulator& lhs, const Simulator& rhs) {
        return lhs.model_ == rhs.model_ && lhs.s_ == rhs.s_ && lhs.e_ == rhs.e_ && lhs.k_ == rhs.k_ &&
               lhs.rng_ == rhs.rng_;
    }

private:
    const SnsMdp* model_;
    std::size_t s_;
    std::size_t e_;
    std::size_t k_ = 0;
    Rng rng_;
};

Simulator new_simulator(const SnsMdp& model, std::size_t s0, std::optional<std::size_t> e0, std::uint64_t seed);

/// n_steps of on-policy interaction; per step the draws are a, s_next, e_next.
std::vector<TransitionSample> rollout(Simulator& sim, const Policy& policy, std::size_t n_steps);

/// CSV with header `k,s,a,r,s_next,e_hidden`.
void write_trajectory_csv(std::ostream& os, const std::vector<TransitionSample>& samples);

}  // namespace sns
