#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "sns/model.hpp"
#include "sns/simulator.hpp"

namespace sns {

/// Step sizes alpha_n. RobbinsMonro gives c / (n + t0), which has a divergent
/// sum and a convergent sum of squares. Constant does not, so iterates only
/// settle into a noise ball around the fixed point.
class StepSchedule {
public:
    enum class Kind { RobbinsMonro, Constant };

    /// Requires c > 0, t0 > 0 and c / t0 <= 1.
    static StepSchedule robbins_monro(double c, double t0);
    /// Requires alpha in (0, 1].
    static StepSchedule constant(double alpha);

    double operator()(std::size_t n) const { return kind_ == Kind::Constant ? alpha_ : c_ / (static_cast<double>(n) + t0_); }

    Kind kind() const { return kind_; }
    double c() const { return c_; }
    double t0() const { return t0_; }
    double alpha() const { return alpha_; }
    bool satisfies_robbins_monro() const { return kind_ == Kind::RobbinsMonro; }

private:
    StepSchedule(Kind kind, double c, double t0, double alpha) : kind_(kind), c_(c), t0_(t0), alpha_(alpha) {}

    Kind kind_;
    double c_ = 0.0;
    double t0_ = 0.0;
    double alpha_ = 0.0;
};

/// Which counter indexes the schedule. PerEntry uses how often the updated
/// entry (state, or state-action pair) has been updated before; Global uses
/// the simulation step k.
enum class StepClock { PerEntry, Global };

struct Checkpoint {
    std::size_t k = 0;   ///< number of updates applied
    double err_sup = 0;  ///< ||estimate - reference||_inf, NaN without a reference
    double err_l2 = 0;   ///< ||estimate - reference||_2, NaN without a reference
};

struct LearnerTrace {
    /// At k = 1, 2, 4, 8, ... and at the final step.
    std::vector<Checkpoint> checkpoints;
    /// Largest ||estimate||_inf seen at a checkpoint.
    double max_abs_estimate = 0.0;
    /// Q-learning only: every checkpoint satisfied ||Q||_inf <= max|r| / (1 - gamma).
    bool bound_ok = true;
};

/// CSV with header `k,err_sup,err_l2`.
void write_trace_csv(std::ostream& os, const std::vector<Checkpoint>& checkpoints);

/// v(s) += alpha * (r + gamma * v(s') - v(s)) at s = obs.s; nothing else moves.
ValueVector td_step(const ValueVector& v, const Observation& obs, double alpha, double gamma);

/// Q(s,a) = (1 - alpha) Q(s,a) + alpha * (r + gamma * max_a' Q(s',a')) at the visited pair only.
QTable q_step(const QTable& q, const Observation& obs, double alpha, double gamma);

struct TdOptions {
    StepSchedule schedule = StepSchedule::constant(0.01);
    StepClock clock = StepClock::PerEntry;
    /// Discount used by the update; the model's gamma when empty.
    std::optional<double> gamma_override;
    std::size_t n_steps = 0;
    std::uint64_t seed = 0;
    std::size_t s0 = 0;
    /// Initial environment; sampled from the stationary distribution when empty.
    std::optional<std::size_t> e0;
    std::optional<ValueVector> reference;
};

struct TdResult {
    ValueVector v;
    LearnerTrace trace;
};

/// TD(0) from v = 0 along a single on-policy trajectory.
TdResult td_evaluate(const SnsMdp& model, const Policy& policy, const TdOptions& options);

struct QLearnOptions {
    StepSchedule schedule = StepSchedule::constant(0.01);
    StepClock clock = StepClock::PerEntry;
    std::size_t n_steps = 0;
    std::uint64_t seed = 0;
    std::size_t s0 = 0;
    std::optional<std::size_t> e0;
    std::optional<QTable> reference;
};

struct QLearnResult {
    QTable q;
    LearnerTrace trace;
};

/// Q-learning from Q = 0 under a fixed behavior policy. Throws ValidationError
/// unless the behavior policy puts positive mass on every action in every state.
QLearnResult q_learn(const SnsMdp& model, const Policy& behavior, const QLearnOptions& options);

}  // namespace sns
