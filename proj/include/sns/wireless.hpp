#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

#include "sns/model.hpp"

namespace sns::wireless {

// Adaptive-modulation link model: observable states are modulation schemes,
// actions are frequency bands, hidden environments are channel conditions.

inline constexpr std::size_t kSchemes = 11;
inline constexpr std::size_t kBands = 11;
inline constexpr std::size_t kConditions = 4;

inline constexpr std::array<std::string_view, kSchemes> kSchemeNames = {
    "BPSK", "QPSK", "8-PSK", "16-QAM", "32-QAM", "64-QAM", "128-QAM", "256-QAM", "512-QAM", "1024-QAM", "2048-QAM"};
inline constexpr std::array<std::string_view, kConditions> kConditionNames = {"Excellent", "Good", "Fair", "Poor"};

enum Scheme : std::size_t { BPSK = 0, QPSK, PSK8, QAM16, QAM32, QAM64, QAM128, QAM256, QAM512, QAM1024, QAM2048 };
enum Condition : std::size_t { Excellent = 0, Good, Fair, Poor };

struct WirelessConfig {
    /// p_success[band](scheme, condition)
    std::vector<Matrix> p_success;
    /// Data rate per scheme, strictly increasing.
    Vector rates;
    /// Decay per channel condition, strictly decreasing.
    Vector decays;
    double alpha_reward = 10.0;
    double beta_reward = 2.0;
    /// q(e' | e) over channel conditions.
    Matrix env_chain;
    double gamma = 0.97;

    std::size_t n_schemes() const { return static_cast<std::size_t>(rates.size()); }
    std::size_t n_bands() const { return p_success.size(); }
    std::size_t n_conditions() const { return static_cast<std::size_t>(decays.size()); }
};

/// The published 11-band / 11-scheme / 4-condition tables.
WirelessConfig default_wireless_config();

/// Throws ValidationError on out-of-range probabilities, non-monotone rates or
/// decays, or a non-stochastic condition chain.
void validate_config(const WirelessConfig& cfg);

/// alpha * Rate(s) * Decay(e) - beta * Decay(e). Independent of the band.
double wireless_reward(const WirelessConfig& cfg, std::size_t scheme, std::size_t condition);

/// p_e(. | s, a). The diagonal is P_success(s, e, a); the remaining mass
/// 1 - P_success is spread over the other schemes in proportion to
/// 1 / Index(s') (1-based position), renormalized to sum exactly to that mass.
Vector wireless_transition_row(const WirelessConfig& cfg, std::size_t scheme, std::size_t band,
                               std::size_t condition);

SnsMdp build_wireless_mdp(const WirelessConfig& cfg);

}  // namespace sns::wireless
