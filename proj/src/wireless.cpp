#include "sns/wireless.hpp"

#include "sns/error.hpp"

namespace sns::wireless {

namespace {

using Index = Eigen::Index;

// [band][scheme][condition], columns Excellent / Good / Fair / Poor.
using SuccessTable = std::array<std::array<std::array<double, kConditions>, kSchemes>, kBands>;

// clang-format off
constexpr SuccessTable kSuccess = {{
    // FB1
    {{
        {0.83, 0.84, 0.89, 0.86},  // BPSK
        {0.99, 0.78, 0.80, 0.79},  // QPSK
        {0.91, 0.81, 0.87, 0.81},  // 8-PSK
        {0.79, 0.78, 0.91, 0.78},  // 16-QAM
        {0.88, 0.81, 0.88, 0.75},  // 32-QAM
        {0.92, 0.85, 0.84, 0.72},  // 64-QAM
        {0.87, 0.80, 0.83, 0.74},  // 128-QAM
        {0.91, 0.82, 0.86, 0.70},  // 256-QAM
        {0.93, 0.86, 0.90, 0.68},  // 512-QAM
        {0.85, 0.79, 0.81, 0.71},  // 1024-QAM
        {0.89, 0.83, 0.84, 0.69},  // 2048-QAM
    }},
    // FB2
    {{
        {0.72, 0.84, 0.89, 0.83},  // BPSK
        {0.94, 0.87, 0.67, 0.66},  // QPSK
        {0.78, 0.79, 0.72, 0.72},  // 8-PSK
        {0.74, 0.71, 0.93, 0.73},  // 16-QAM
        {0.79, 0.75, 0.87, 0.71},  // 32-QAM
        {0.81, 0.77, 0.85, 0.70},  // 64-QAM
        {0.82, 0.78, 0.86, 0.69},  // 128-QAM
        {0.85, 0.80, 0.88, 0.68},  // 256-QAM
        {0.83, 0.81, 0.84, 0.67},  // 512-QAM
        {0.88, 0.83, 0.82, 0.65},  // 1024-QAM
        {0.86, 0.85, 0.80, 0.64},  // 2048-QAM
    }},
    // FB3
    {{
        {0.56, 0.61, 0.83, 0.68},  // BPSK
        {0.82, 0.81, 0.88, 0.65},  // QPSK
        {0.83, 0.81, 0.61, 0.61},  // 8-PSK
        {0.63, 0.86, 0.59, 0.89},  // 16-QAM
        {0.68, 0.82, 0.64, 0.71},  // 32-QAM
        {0.72, 0.83, 0.65, 0.73},  // 64-QAM
        {0.74, 0.84, 0.66, 0.75},  // 128-QAM
        {0.76, 0.85, 0.67, 0.77},  // 256-QAM
        {0.78, 0.86, 0.68, 0.79},  // 512-QAM
        {0.80, 0.87, 0.69, 0.81},  // 1024-QAM
        {0.82, 0.88, 0.70, 0.83},  // 2048-QAM
    }},
    // FB4
    {{
        {0.088, 0.088, 0.091, 0.081},  // BPSK
        {0.089, 0.094, 0.083, 0.096},  // QPSK
        {0.094, 0.091, 0.096, 0.096},  // 8-PSK
        {0.086, 0.084, 0.084, 0.085},  // 16-QAM
        {0.091, 0.087, 0.088, 0.086},  // 32-QAM
        {0.092, 0.089, 0.089, 0.087},  // 64-QAM
        {0.093, 0.090, 0.090, 0.088},  // 128-QAM
        {0.094, 0.091, 0.091, 0.089},  // 256-QAM
        {0.095, 0.092, 0.092, 0.090},  // 512-QAM
        {0.096, 0.093, 0.093, 0.091},  // 1024-QAM
        {0.097, 0.094, 0.094, 0.092},  // 2048-QAM
    }},
    // FB5
    {{
        {0.0070, 0.0070, 0.0060, 0.0010},  // BPSK
        {0.0075, 0.0073, 0.0065, 0.0020},  // QPSK
        {0.0080, 0.0079, 0.0067, 0.0040},  // 8-PSK
        {0.0082, 0.0081, 0.0076, 0.0064},  // 16-QAM
        {0.0089, 0.0082, 0.0078, 0.0063},  // 32-QAM
        {0.0091, 0.0084, 0.0080, 0.0062},  // 64-QAM
        {0.0090, 0.0086, 0.0082, 0.0061},  // 128-QAM
        {0.0093, 0.0088, 0.0083, 0.0060},  // 256-QAM
        {0.0092, 0.0087, 0.0084, 0.0059},  // 512-QAM
        {0.0095, 0.0089, 0.0085, 0.0058},  // 1024-QAM
        {0.0096, 0.0091, 0.0086, 0.0057},  // 2048-QAM
    }},
    // FB6
    {{
        {0.79, 0.81, 0.76, 0.67},  // BPSK
        {0.88, 0.82, 0.78, 0.66},  // QPSK
        {0.85, 0.84, 0.79, 0.65},  // 8-PSK
        {0.90, 0.85, 0.80, 0.64},  // 16-QAM
        {0.92, 0.87, 0.81, 0.63},  // 32-QAM
        {0.93, 0.88, 0.82, 0.62},  // 64-QAM
        {0.95, 0.89, 0.83, 0.61},  // 128-QAM
        {0.94, 0.90, 0.84, 0.60},  // 256-QAM
        {0.96, 0.91, 0.85, 0.59},  // 512-QAM
        {0.97, 0.92, 0.86, 0.58},  // 1024-QAM
        {0.98, 0.93, 0.87, 0.57},  // 2048-QAM
    }},
    // FB7
    {{
        {0.82, 0.80, 0.74, 0.066},  // BPSK
        {0.87, 0.82, 0.76, 0.065},  // QPSK
        {0.89, 0.84, 0.77, 0.064},  // 8-PSK
        {0.91, 0.85, 0.78, 0.063},  // 16-QAM
        {0.93, 0.87, 0.79, 0.062},  // 32-QAM
        {0.94, 0.88, 0.80, 0.061},  // 64-QAM
        {0.95, 0.89, 0.81, 0.060},  // 128-QAM
        {0.96, 0.90, 0.82, 0.059},  // 256-QAM
        {0.97, 0.91, 0.83, 0.058},  // 512-QAM
        {0.98, 0.92, 0.84, 0.057},  // 1024-QAM
        {0.99, 0.93, 0.85, 0.0056},  // 2048-QAM
    }},
    // FB8
    {{
        {0.85, 0.82, 0.78, 0.65},  // BPSK
        {0.89, 0.84, 0.79, 0.64},  // QPSK
        {0.92, 0.86, 0.80, 0.63},  // 8-PSK
        {0.93, 0.87, 0.81, 0.62},  // 16-QAM
        {0.94, 0.88, 0.82, 0.61},  // 32-QAM
        {0.95, 0.89, 0.83, 0.60},  // 64-QAM
        {0.96, 0.90, 0.84, 0.59},  // 128-QAM
        {0.97, 0.91, 0.85, 0.58},  // 256-QAM
        {0.98, 0.92, 0.86, 0.57},  // 512-QAM
        {0.99, 0.93, 0.87, 0.56},  // 1024-QAM
        {1.00, 0.94, 0.88, 0.55},  // 2048-QAM
    }},
    // FB9
    {{
        {0.88, 0.84, 0.80, 0.64},  // BPSK
        {0.92, 0.85, 0.81, 0.63},  // QPSK
        {0.93, 0.86, 0.82, 0.62},  // 8-PSK
        {0.95, 0.87, 0.83, 0.61},  // 16-QAM
        {0.96, 0.88, 0.84, 0.60},  // 32-QAM
        {0.97, 0.89, 0.85, 0.59},  // 64-QAM
        {0.98, 0.90, 0.86, 0.58},  // 128-QAM
        {0.99, 0.91, 0.87, 0.57},  // 256-QAM
        {1.00, 0.92, 0.88, 0.56},  // 512-QAM
        {0.99, 0.93, 0.89, 0.55},  // 1024-QAM
        {0.98, 0.94, 0.90, 0.54},  // 2048-QAM
    }},
    // FB10
    {{
        {0.90, 0.85, 0.82, 0.63},  // BPSK
        {0.93, 0.86, 0.83, 0.62},  // QPSK
        {0.94, 0.87, 0.84, 0.61},  // 8-PSK
        {0.96, 0.88, 0.85, 0.60},  // 16-QAM
        {0.97, 0.89, 0.86, 0.59},  // 32-QAM
        {0.98, 0.90, 0.87, 0.58},  // 64-QAM
        {0.99, 0.91, 0.88, 0.57},  // 128-QAM
        {1.00, 0.92, 0.89, 0.56},  // 256-QAM
        {0.99, 0.93, 0.90, 0.55},  // 512-QAM
        {0.98, 0.94, 0.91, 0.54},  // 1024-QAM
        {0.97, 0.95, 0.92, 0.53},  // 2048-QAM
    }},
    // FB11
    {{
        {0.91, 0.87, 0.84, 0.62},  // BPSK
        {0.94, 0.88, 0.85, 0.61},  // QPSK
        {0.95, 0.89, 0.86, 0.60},  // 8-PSK
        {0.97, 0.90, 0.87, 0.59},  // 16-QAM
        {0.98, 0.91, 0.88, 0.58},  // 32-QAM
        {0.99, 0.92, 0.89, 0.57},  // 64-QAM
        {1.00, 0.93, 0.90, 0.56},  // 128-QAM
        {0.99, 0.94, 0.91, 0.55},  // 256-QAM
        {0.98, 0.95, 0.92, 0.54},  // 512-QAM
        {0.97, 0.96, 0.93, 0.53},  // 1024-QAM
        {0.96, 0.97, 0.94, 0.52},  // 2048-QAM
    }},
}};
// clang-format on

constexpr std::array<double, kSchemes> kRates = {10, 20, 30, 40, 50, 60, 70, 80, 90, 100, 110};
constexpr std::array<double, kConditions> kDecays = {0.99, 0.70, 0.50, 0.30};

constexpr std::array<std::array<double, kConditions>, kConditions> kConditionChain = {{
    {0.44, 0.11, 0.12, 0.33},
    {0.20, 0.10, 0.30, 0.40},
    {0.66, 0.11, 0.09, 0.14},
    {0.18, 0.22, 0.40, 0.20},
}};

void check_indices(const WirelessConfig& cfg, std::size_t scheme, std::size_t band, std::size_t condition) {
    if (scheme >= cfg.n_schemes() || band >= cfg.n_bands() || condition >= cfg.n_conditions()) {
        throw ValidationError("wireless index out of range");
    }
}

}  // namespace

WirelessConfig default_wireless_config() {
    WirelessConfig cfg;
    cfg.p_success.reserve(kBands);
    for (std::size_t a = 0; a < kBands; ++a) {
        Matrix m(static_cast<Index>(kSchemes), static_cast<Index>(kConditions));
        for (std::size_t s = 0; s < kSchemes; ++s)
            for (std::size_t e = 0; e < kConditions; ++e)
                m(static_cast<Index>(s), static_cast<Index>(e)) = kSuccess[a][s][e];
        cfg.p_success.push_back(std::move(m));
    }
    cfg.rates = Eigen::Map<const Vector>(kRates.data(), static_cast<Index>(kSchemes));
    cfg.decays = Eigen::Map<const Vector>(kDecays.data(), static_cast<Index>(kConditions));
    cfg.env_chain.resize(static_cast<Index>(kConditions), static_cast<Index>(kConditions));
    for (std::size_t e = 0; e < kConditions; ++e)
        for (std::size_t f = 0; f < kConditions; ++f)
            cfg.env_chain(static_cast<Index>(e), static_cast<Index>(f)) = kConditionChain[e][f];
    return cfg;
}

void validate_config(const WirelessConfig& cfg) {
    std::vector<std::string> violations;
    const Index n_schemes = cfg.rates.size();
    const Index n_conditions = cfg.decays.size();
    if (n_schemes < 2) violations.emplace_back("need at least two modulation schemes");
    if (n_conditions < 1) violations.emplace_back("need at least one channel condition");
    if (cfg.p_success.empty()) violations.emplace_back("need at least one frequency band");
    for (std::size_t a = 0; a < cfg.p_success.size(); ++a) {
        const Matrix& p = cfg.p_success[a];
        if (p.rows() != n_schemes || p.cols() != n_conditions) {
            violations.push_back("p_success table for band " + std::to_string(a) + " has the wrong shape");
        } else if (!p.allFinite() || (p.array() < 0.0).any() || (p.array() > 1.0).any()) {
            violations.push_back("p_success table for band " + std::to_string(a) + " leaves [0, 1]");
        }
    }
    for (Index s = 1; s < n_schemes; ++s)
        if (!(cfg.rates(s) > cfg.rates(s - 1))) violations.emplace_back("rates must be strictly increasing");
    for (Index e = 1; e < n_conditions; ++e)
        if (!(cfg.decays(e) < cfg.decays(e - 1))) violations.emplace_back("decays must be strictly decreasing");
    auto chain = validate_env_chain(EnvChain{cfg.env_chain});
    if (chain.ok() && cfg.env_chain.rows() != n_conditions) {
        violations.emplace_back("condition chain size does not match the decay table");
    }
    violations.insert(violations.end(), chain.violations.begin(), chain.violations.end());
    if (!(cfg.gamma >= 0.0 && cfg.gamma < 1.0)) violations.emplace_back("discount must be in [0, 1)");
    if (!violations.empty()) throw ValidationError("invalid wireless configuration", std::move(violations));
}

double wireless_reward(const WirelessConfig& cfg, std::size_t scheme, std::size_t condition) {
    if (scheme >= cfg.n_schemes() || condition >= cfg.n_conditions()) {
        throw ValidationError("wireless index out of range");
    }
    const double rate = cfg.rates(static_cast<Index>(scheme));
    const double decay = cfg.decays(static_cast<Index>(condition));
    return cfg.alpha_reward * rate * decay - cfg.beta_reward * decay;
}

Vector wireless_transition_row(const WirelessConfig& cfg, std::size_t scheme, std::size_t band,
                               std::size_t condition) {
    check_indices(cfg, scheme, band, condition);
    const Index n = static_cast<Index>(cfg.n_schemes());
    const Index s = static_cast<Index>(scheme);
    const double stay = cfg.p_success[band](s, static_cast<Index>(condition));

    double index_mass = 0.0;
    for (Index t = 0; t < n; ++t)
        if (t != s) index_mass += 1.0 / static_cast<double>(t + 1);

    Vector row(n);
    for (Index t = 0; t < n; ++t) {
        row(t) = t == s ? stay : (1.0 - stay) * (1.0 / static_cast<double>(t + 1)) / index_mass;
    }
    return row;
}

SnsMdp build_wireless_mdp(const WirelessConfig& cfg) {
    validate_config(cfg);
    const std::size_t n_states = cfg.n_schemes();
    const std::size_t n_actions = cfg.n_bands();
    const std::size_t n_envs = cfg.n_conditions();

    SnsMdp model;
    model.n_states = n_states;
    model.n_actions = n_actions;
    model.gamma = cfg.gamma;
    model.env.q = cfg.env_chain;
    model.trans.assign(n_envs, std::vector<Matrix>(n_actions));
    model.rewards.assign(n_envs, Matrix(static_cast<Index>(n_states), static_cast<Index>(n_actions)));
    for (std::size_t e = 0; e < n_envs; ++e) {
        for (std::size_t a = 0; a < n_actions; ++a) {
            Matrix& p = model.trans[e][a];
            p.resize(static_cast<Index>(n_states), static_cast<Index>(n_states));
            for (std::size_t s = 0; s < n_states; ++s) {
                p.row(static_cast<Index>(s)) = wireless_transition_row(cfg, s, a, e).transpose();
            }
        }
        for (std::size_t s = 0; s < n_states; ++s) {
            model.rewards[e].row(static_cast<Index>(s)).setConstant(wireless_reward(cfg, s, e));
        }
    }
    require_valid(model);
    return model;
}

}  // namespace sns::wireless
