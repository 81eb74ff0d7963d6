#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "sns/model.hpp"

namespace sns {

/// Identifier written to run manifests so trajectories can be re-derived elsewhere.
inline constexpr std::string_view kGeneratorId = "mt19937_64-u53";

/// std::mt19937_64 seeded with the 64-bit seed; each uniform is the top 53
/// bits of one engine output scaled by 2^-53, so u is in [0, 1).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    friend bool operator==(const Rng& lhs, const Rng& rhs) { return lhs.engine_ == rhs.engine_; }

private:
    std::mt19937_64 engine_;
};

/// Inverse-CDF draw from a probability row with a single uniform u. Cumulative
/// sums run left to right; if round-off leaves u past the total, the last
/// index with positive probability absorbs it.
template <typename Row>
std::size_t sample_index(const Row& probs, double u) {
    double cumulative = 0.0;
    std::size_t last_positive = 0;
    const auto n = static_cast<std::size_t>(probs.size());
    for (std::size_t i = 0; i < n; ++i) {
        const double p = probs(static_cast<Eigen::Index>(i));
        if (p <= 0.0) continue;
        cumulative += p;
        last_positive = i;
        if (u < cumulative) return i;
    }
    return last_positive;
}

}  // namespace sns
