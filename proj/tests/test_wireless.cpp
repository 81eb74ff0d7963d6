#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "sns/error.hpp"
#include "sns/markov.hpp"
#include "sns/wireless.hpp"

using namespace sns;
using namespace sns::testing;
using namespace sns::wireless;

namespace {

constexpr std::size_t FB1 = 0, FB5 = 4, FB8 = 7;

}  // namespace

TEST(WirelessConfigTables, PublishedValues) {
    const WirelessConfig cfg = default_wireless_config();
    EXPECT_EQ(cfg.n_bands(), 11u);
    EXPECT_EQ(cfg.n_schemes(), 11u);
    EXPECT_EQ(cfg.n_conditions(), 4u);
    EXPECT_EQ(cfg.p_success[FB1](BPSK, Excellent), 0.83);
    EXPECT_EQ(cfg.p_success[FB5](BPSK, Poor), 0.0010);
    EXPECT_EQ(cfg.p_success[FB8](QAM2048, Excellent), 1.00);
    EXPECT_EQ(cfg.rates(QAM2048), 110.0);
    EXPECT_EQ(cfg.rates(BPSK), 10.0);
    EXPECT_EQ(cfg.decays(Poor), 0.30);
    EXPECT_EQ(cfg.decays(Excellent), 0.99);
    EXPECT_EQ(cfg.alpha_reward, 10.0);
    EXPECT_EQ(cfg.beta_reward, 2.0);
    EXPECT_EQ(cfg.gamma, 0.97);
    EXPECT_EQ(cfg.env_chain, wireless_env_table());
    EXPECT_NO_THROW(validate_config(cfg));
}

TEST(WirelessConfigTables, ValidationCatchesBadTables) {
    WirelessConfig cfg = default_wireless_config();
    cfg.p_success[0](0, 0) = 1.2;
    EXPECT_THROW(validate_config(cfg), ValidationError);
    cfg = default_wireless_config();
    cfg.rates(3) = cfg.rates(2);
    EXPECT_THROW(validate_config(cfg), ValidationError);
    cfg = default_wireless_config();
    cfg.decays(1) = 0.995;
    EXPECT_THROW(validate_config(cfg), ValidationError);
}

TEST(WirelessReward, SpotChecks) {
    const WirelessConfig cfg = default_wireless_config();
    EXPECT_NEAR(wireless_reward(cfg, BPSK, Excellent), 97.02, 1e-12);
    EXPECT_NEAR(wireless_reward(cfg, BPSK, Poor), 29.4, 1e-12);
    EXPECT_NEAR(wireless_reward(cfg, QAM2048, Poor), 329.4, 1e-12);
}

TEST(WirelessReward, IncreasingInRate) {
    const WirelessConfig cfg = default_wireless_config();
    for (std::size_t e = 0; e < kConditions; ++e)
        for (std::size_t s = 1; s < kSchemes; ++s) EXPECT_GT(wireless_reward(cfg, s, e), wireless_reward(cfg, s - 1, e));
}

TEST(WirelessRow, DiagonalAndHarmonicRenormalization) {
    const WirelessConfig cfg = default_wireless_config();
    const Vector row = wireless_transition_row(cfg, BPSK, FB1, Excellent);
    EXPECT_EQ(row(BPSK), 0.83);
    EXPECT_NEAR(row(QPSK), 0.042081763140504734, 1e-15);
    EXPECT_NEAR(row.sum(), 1.0, 1e-15);
}

TEST(WirelessRow, OneHotWhenAlwaysSuccessful) {
    const WirelessConfig cfg = default_wireless_config();
    const Vector row = wireless_transition_row(cfg, QAM2048, FB8, Excellent);
    Vector expected = Vector::Zero(11);
    expected(QAM2048) = 1.0;
    EXPECT_EQ(row, expected);
}

TEST(WirelessRow, InverseIndexProfile) {
    const WirelessConfig cfg = default_wireless_config();
    for (std::size_t a = 0; a < kBands; ++a)
        for (std::size_t e = 0; e < kConditions; ++e)
            for (std::size_t s = 0; s < kSchemes; ++s) {
                const Vector row = wireless_transition_row(cfg, s, a, e);
                if (row(static_cast<Eigen::Index>(s)) == 1.0) continue;
                for (std::size_t t = 0; t < kSchemes; ++t)
                    for (std::size_t u = 0; u < kSchemes; ++u) {
                        if (t == s || u == s) continue;
                        EXPECT_NEAR(row(static_cast<Eigen::Index>(t)) / row(static_cast<Eigen::Index>(u)),
                                    static_cast<double>(u + 1) / static_cast<double>(t + 1), 1e-12);
                    }
            }
}

TEST(WirelessMdp, BuiltModelIsValid) {
    const WirelessConfig cfg = default_wireless_config();
    const SnsMdp m = build_wireless_mdp(cfg);
    EXPECT_EQ(m.n_states, 11u);
    EXPECT_EQ(m.n_actions, 11u);
    EXPECT_EQ(m.n_envs(), 4u);
    EXPECT_EQ(m.gamma, 0.97);
    EXPECT_TRUE(validate_mdp(m).ok());
    EXPECT_EQ(m.env.q.row(Fair), wireless_env_table().row(2));
    EXPECT_TRUE(check_irreducible_aperiodic(m.env.q));
    std::size_t rows = 0;
    for (std::size_t e = 0; e < 4; ++e)
        for (std::size_t a = 0; a < 11; ++a)
            for (Eigen::Index s = 0; s < 11; ++s) {
                EXPECT_NEAR(m.trans[e][a].row(s).sum(), 1.0, 1e-12);
                EXPECT_EQ(m.trans[e][a](s, s), cfg.p_success[a](s, static_cast<Eigen::Index>(e)));
                ++rows;
            }
    EXPECT_EQ(rows, 484u);
}

TEST(WirelessMdp, RewardActionIndependent) {
    const WirelessConfig cfg = default_wireless_config();
    const SnsMdp m = build_wireless_mdp(cfg);
    for (std::size_t e = 0; e < 4; ++e)
        for (std::size_t s = 0; s < 11; ++s)
            for (std::size_t a = 0; a < 11; ++a)
                EXPECT_EQ(m.rewards[e](static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(a)), wireless_reward(cfg, s, e));
}
