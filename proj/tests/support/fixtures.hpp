#pragma once

#include <filesystem>
#include <string>

#include "sns/model.hpp"

namespace sns::testing {

inline Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
    Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
    Eigen::Index i = 0;
    for (const auto& row : rows) {
        Eigen::Index j = 0;
        for (double x : row) m(i, j++) = x;
        ++i;
    }
    return m;
}

inline Vector vec(std::initializer_list<double> xs) {
    Vector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v(i++) = x;
    return v;
}

/// 2 states, 2 envs, uniform env chain, P_0 = I, P_1 = swap, R = I.
inline SnsMrp symmetric_mrp(double gamma = 0.5) {
    SnsMrp m;
    m.n_states = 2;
    m.gamma = gamma;
    m.env.q = mat({{0.5, 0.5}, {0.5, 0.5}});
    m.P = {mat({{1, 0}, {0, 1}}), mat({{0, 1}, {1, 0}})};
    m.R = mat({{1, 0}, {0, 1}});
    return m;
}

/// The symmetric instance as a single-action MDP.
inline SnsMdp symmetric_mdp(double gamma = 0.5) {
    const SnsMrp mrp = symmetric_mrp(gamma);
    SnsMdp m;
    m.n_states = 2;
    m.n_actions = 1;
    m.gamma = gamma;
    m.env = mrp.env;
    m.trans = {{mrp.P[0]}, {mrp.P[1]}};
    m.rewards = {mrp.R.col(0), mrp.R.col(1)};
    return m;
}

/// 2 states / 1 action / 1 env with every row [0.5, 0.5].
inline SnsMdp tiny_mdp() {
    SnsMdp m;
    m.n_states = 2;
    m.n_actions = 1;
    m.gamma = 0.9;
    m.env.q = mat({{1.0}});
    m.trans = {{mat({{0.5, 0.5}, {0.5, 0.5}})}};
    m.rewards = {mat({{1.0}, {0.0}})};
    return m;
}

/// Wireless environment table (Excellent, Good, Fair, Poor).
inline Matrix wireless_env_table() {
    return mat({{0.44, 0.11, 0.12, 0.33}, {0.20, 0.10, 0.30, 0.40}, {0.66, 0.11, 0.09, 0.14}, {0.18, 0.22, 0.40, 0.20}});
}

/// Its stationary law, exactly (235740, 84381, 130210, 162220) / 612551,
/// from a rational left-eigenvector solve.
inline Vector wireless_env_stationary() {
    return vec({235740.0 / 612551.0, 84381.0 / 612551.0, 130210.0 / 612551.0, 162220.0 / 612551.0});
}

inline std::filesystem::path temp_dir(const std::string& name) {
#ifdef SNS_TEST_TMP
    const std::filesystem::path root = SNS_TEST_TMP;
#else
    const std::filesystem::path root = std::filesystem::temp_directory_path() / "sns_tests";
#endif
    const auto dir = root / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace sns::testing
