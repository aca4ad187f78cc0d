#include "ncia/error.hpp"
#include "ncia/harness.hpp"
#include "ncia/records.hpp"

#include <cmath>
#include <gtest/gtest.h>
#include <limits>

using namespace ncia;
using namespace ncia::harness;

TEST(RunTrial, DemoShapes) {
    const ExperimentConfig cfg;
    const auto r = run_trial(cfg, 1234, 7);
    EXPECT_EQ(r.trial, 7u);
    EXPECT_EQ(r.seed, 1234u);
    EXPECT_EQ(r.alpha.size(), 3u);
    EXPECT_EQ(r.stream_snr.size(), 3u);
    EXPECT_EQ(r.ofdma_sinr_summary.size(), 4u);
    EXPECT_EQ(r.correlations.size(), 3u);
    ASSERT_EQ(r.spectra_desired.size(), 3u);
    ASSERT_EQ(r.spectra_interfering.size(), 3u);
    EXPECT_EQ(r.spectra_desired[0].size(), 4u);
    EXPECT_GT(r.r_d, 0.0);
    EXPECT_GT(r.r_ref_max_sinr, 0.0);
    EXPECT_GE(r.r_ref_max_sinr + 1e-12, r.r_ref_round_robin);
    EXPECT_NEAR(r.gain, r.r_d / r.r_ref_max_sinr, 1e-15);
    EXPECT_EQ(r.sync_slots, 1u);
}

TEST(RunTrial, SilentInterfererFlatChannelsClosedForm) {
    ExperimentConfig cfg;
    cfg.inr_db = -std::numeric_limits<double>::infinity();
    cfg.perfect_csi = true;
    cfg.profile = {1, 0.0, 0.0};
    cfg.baseline = ofdma::Policy::round_robin;
    cfg.validate();
    const double snr = cfg.es() / cfg.noise.sigma2;
    // Every UE sees the same projected row (last trunk row), so one stream
    // survives with the full matched-filter gain of that row: |(1,-1,-1)/2|^2.
    const double r_d = std::log2(1.0 + 0.75 * snr);
    const double r_ref = 4.0 * std::log2(1.0 + snr);
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto r = run_trial(cfg, seed);
        ASSERT_EQ(r.alpha.size(), 1u);
        EXPECT_NEAR(r.alpha[0], 1.0, 1e-12);
        EXPECT_NEAR(r.r_d, r_d, 1e-9);
        EXPECT_NEAR(r.r_ref_round_robin, r_ref, 1e-9);
        EXPECT_NEAR(r.gain, r_d / r_ref, 1e-9);
        for (double c : r.correlations) {
            EXPECT_NEAR(c, 1.0, 1e-12);
        }
    }
}

TEST(RunTrial, SameSeedSameBytes) {
    const ExperimentConfig cfg;
    EXPECT_EQ(records::trial_json(run_trial(cfg, 99)), records::trial_json(run_trial(cfg, 99)));
    EXPECT_NE(records::trial_json(run_trial(cfg, 99)), records::trial_json(run_trial(cfg, 100)));
}

TEST(RunTrial, PerfectCsiStreamSnrIsAlphaTimesSinr) {
    ExperimentConfig cfg;
    cfg.perfect_csi = true;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto r = run_trial(cfg, seed);
        double rate = 0.0;
        for (double s : r.stream_snr) {
            rate += std::log2(1.0 + s);
        }
        EXPECT_NEAR(r.r_d, rate, 1e-12);
    }
}

TEST(RunTrial, GainSanityAcrossOptions) {
    for (const auto trunk : {TrunkMode::shared_hadamard, TrunkMode::random_interferer}) {
        for (const auto power : {ia::PowerConstraint::per_stream, ia::PowerConstraint::total}) {
            ExperimentConfig cfg;
            cfg.trunk = trunk;
            cfg.power = power;
            cfg.subcarriers = 8;
            cfg.free_dims = 2;
            cfg.users = 4;
            cfg.protocol.training_symbols = 2;
            for (std::uint64_t seed = 0; seed < 20; ++seed) {
                const auto r = run_trial(cfg, seed);
                EXPECT_GT(r.r_d, 0.0);
                EXPECT_GT(r.r_ref_round_robin, 0.0);
                EXPECT_TRUE(std::isfinite(r.gain));
                EXPECT_GT(r.gain, 0.0);
                EXPECT_EQ(r.correlations.size(), 6u);
                EXPECT_LE(r.alpha.size(), 6u);
            }
        }
    }
}

TEST(RunTrial, ErrorsCarryTrialAndSeed) {
    ExperimentConfig cfg;
    cfg.protocol.beacon_snr_db = 0.0;
    cfg.protocol.slot_cap = 5;
    try {
        run_trial(cfg, 77, 3);
        FAIL();
    } catch (const SyncTimeout& e) {
        EXPECT_NE(std::string(e.what()).find("trial 3"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("seed 77"), std::string::npos);
    }
    cfg = ExperimentConfig{};
    cfg.subcarriers = 6;
    EXPECT_THROW(run_trial(cfg, 1), ConfigError);
}

TEST(RunTrial, IdenticalChannelsDegradeRate) {
    ExperimentConfig iid;
    iid.perfect_csi = true;
    ExperimentConfig same = iid;
    same.correlation = CorrelationMode::identical;
    RVector a;
    RVector b;
    for (std::uint64_t i = 0; i < 200; ++i) {
        a.push_back(run_trial(same, mix_seed(5, i)).r_d);
        b.push_back(run_trial(iid, mix_seed(5, i)).r_d);
    }
    EXPECT_LT(median(a), median(b));
    const auto r = run_trial(same, 3);
    for (double c : r.correlations) {
        EXPECT_NEAR(c, 1.0, 1e-12);
    }
}

TEST(Campaign, SingleTrialRunningMean) {
    const auto c = run_campaign(ExperimentConfig{}, 1, 42);
    ASSERT_EQ(c.summary.running_mean.size(), 1u);
    EXPECT_EQ(c.summary.running_mean[0], c.records[0].gain);
    EXPECT_EQ(c.summary.ci95, 0.0);
    EXPECT_EQ(c.records[0].seed, mix_seed(42, 0));
}

TEST(Campaign, ParallelEqualsSequential) {
    const ExperimentConfig cfg;
    const auto a = run_campaign(cfg, 64, 42, 1);
    const auto b = run_campaign(cfg, 64, 42, 5);
    ASSERT_EQ(a.records.size(), b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        EXPECT_EQ(records::trial_json(a.records[i]), records::trial_json(b.records[i]));
    }
    EXPECT_EQ(a.summary.running_mean, b.summary.running_mean);
    EXPECT_EQ(a.summary.median_gain, b.summary.median_gain);
}

TEST(Campaign, SummaryStatistics) {
    const auto c = run_campaign(ExperimentConfig{}, 50, 3);
    RVector g;
    for (const auto& r : c.records) {
        g.push_back(r.gain);
    }
    EXPECT_EQ(c.summary.n_trials, 50u);
    EXPECT_EQ(c.summary.running_mean.back(), c.summary.mean_gain);
    EXPECT_NEAR(c.summary.mean_gain, mean(g), 1e-12);
    EXPECT_EQ(c.summary.min_gain, *std::min_element(g.begin(), g.end()));
    EXPECT_EQ(c.summary.max_gain, *std::max_element(g.begin(), g.end()));
    EXPECT_GT(c.summary.ci95, 0.0);
    EXPECT_THROW(run_campaign(ExperimentConfig{}, 0, 1), InvalidArgument);
}

TEST(Campaign, ErrorFromLowestTrialWins) {
    ExperimentConfig cfg;
    cfg.protocol.beacon_snr_db = 0.0;
    cfg.protocol.slot_cap = 3;
    try {
        run_campaign(cfg, 8, 1, 4);
        FAIL();
    } catch (const SyncTimeout& e) {
        EXPECT_NE(std::string(e.what()).find("trial 0 "), std::string::npos);
    }
}

TEST(Sweep, SingleValueMatchesCampaign) {
    const ExperimentConfig cfg;
    const std::vector<std::string> values{"10"};
    const auto pts = sweep(cfg, SweepAxis::inr_db, values, 20, 9);
    ASSERT_EQ(pts.size(), 1u);
    const auto c = run_campaign(cfg, 20, 9);
    EXPECT_EQ(pts[0].campaign.summary.running_mean, c.summary.running_mean);
}

TEST(Sweep, AxesApply) {
    const ExperimentConfig cfg;
    EXPECT_EQ(apply_axis(cfg, SweepAxis::snr_db, "3.5").snr_db, 3.5);
    EXPECT_EQ(apply_axis(cfg, SweepAxis::inr_db, "-10").inr_db, -10.0);
    EXPECT_EQ(apply_axis(cfg, SweepAxis::num_taps, "8").profile.num_taps, 8u);
    EXPECT_EQ(apply_axis(cfg, SweepAxis::correlation_mode, "identical").correlation,
              CorrelationMode::identical);
    EXPECT_THROW(apply_axis(cfg, SweepAxis::num_taps, "two"), ConfigError);
    EXPECT_THROW(apply_axis(cfg, SweepAxis::num_taps, "0"), ConfigError);
    EXPECT_EQ(parse_axis("num_taps"), SweepAxis::num_taps);
    EXPECT_EQ(to_string(SweepAxis::correlation_mode), "correlation_mode");
    EXPECT_THROW(parse_axis("distance"), ConfigError);
    EXPECT_THROW(sweep(cfg, SweepAxis::snr_db, std::vector<std::string>{}, 5, 1), ConfigError);
}

TEST(Statistics, MeanMedian) {
    EXPECT_EQ(mean(RVector{1, 2, 3, 6}), 3.0);
    EXPECT_EQ(median(RVector{5, 1, 3}), 3.0);
    EXPECT_EQ(median(RVector{4, 1, 3, 2}), 2.5);
    EXPECT_THROW(median(RVector{}), InvalidArgument);
}

TEST(Statistics, BootstrapCoversMedian) {
    RVector x;
    Rng rng(1);
    std::normal_distribution<double> n(5.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        x.push_back(n(rng));
    }
    const auto ci = bootstrap_median_ci(x, 2000, 0.95, 7);
    EXPECT_LT(ci.lower, median(x));
    EXPECT_GT(ci.upper, median(x));
    EXPECT_LT(ci.upper - ci.lower, 0.5);
    const auto again = bootstrap_median_ci(x, 2000, 0.95, 7);
    EXPECT_EQ(ci.lower, again.lower);
    EXPECT_THROW(bootstrap_median_ci(x, 100, 1.0, 1), InvalidArgument);
}

TEST(Statistics, Spearman) {
    EXPECT_NEAR(spearman(RVector{1, 2, 3, 4}, RVector{10, 20, 30, 45}), 1.0, 1e-15);
    EXPECT_NEAR(spearman(RVector{1, 2, 3, 4}, RVector{4, 3, 2, 1}), -1.0, 1e-15);
    // ties: ranks (1, 2.5, 2.5, 4) against (1, 2, 3, 4)
    EXPECT_NEAR(spearman(RVector{1, 2, 2, 4}, RVector{1, 2, 3, 4}), 0.9486832980505138, 1e-12);
    EXPECT_THROW(spearman(RVector{1}, RVector{1}), InvalidArgument);
}
