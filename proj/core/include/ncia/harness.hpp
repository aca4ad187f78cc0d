#pragma once

#include "ncia/config.hpp"
#include "ncia/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ncia::harness {

using num::RVector;

/// Outcome of one channel realisation.
struct TrialRecord {
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    double r_d = 0.0;
    double r_ref_max_sinr = 0.0;
    double r_ref_round_robin = 0.0;
    double gain = 0.0; ///< r_d over the configured baseline's rate
    RVector alpha;
    RVector stream_snr;             ///< SINR each IA stream actually gets, linear
    RVector ofdma_sinr_summary;     ///< rho of each subcarrier's owner, baseline policy
    RVector correlations;           ///< desired-channel correlation per UE pair (0,1),(0,2)..
    std::vector<RVector> spectra_desired;     ///< |h_q| per UE
    std::vector<RVector> spectra_interfering; ///< |h_q| per UE
    std::uint64_t sync_slots = 0;
};

/// Runs one trial end to end. Deterministic in (cfg, seed). Module errors
/// are rethrown with the trial index and seed prepended, keeping their type
/// family (NumericalFailure, SyncTimeout, ConfigError, Error).
TrialRecord run_trial(const ExperimentConfig& cfg, std::uint64_t seed, std::size_t trial = 0);

struct CampaignSummary {
    std::size_t n_trials = 0;
    double mean_gain = 0.0;
    double median_gain = 0.0;
    double min_gain = 0.0;
    double max_gain = 0.0;
    double ci95 = 0.0; ///< normal-approximation half-width of the mean
    RVector running_mean;
};

CampaignSummary summarize(std::span<const TrialRecord> records);

struct Campaign {
    std::vector<TrialRecord> records; ///< ordered by trial index
    CampaignSummary summary;
};

/// n_trials independent trials; trial i uses mix_seed(base_seed, i). Runs on
/// `threads` workers (cfg.threads when 0); results do not depend on it.
Campaign run_campaign(const ExperimentConfig& cfg, std::size_t n_trials, std::uint64_t base_seed,
                      std::size_t threads = 0);

enum class SweepAxis { snr_db, inr_db, num_taps, correlation_mode };

SweepAxis parse_axis(std::string_view name);
std::string_view to_string(SweepAxis axis);

/// Copy of `cfg` with the swept parameter set from its textual value.
ExperimentConfig apply_axis(const ExperimentConfig& cfg, SweepAxis axis, std::string_view value);

struct SweepPoint {
    std::string value;
    Campaign campaign;
};

/// One campaign per value, all from the same base seed.
std::vector<SweepPoint> sweep(const ExperimentConfig& cfg, SweepAxis axis,
                              std::span<const std::string> values, std::size_t n_trials,
                              std::uint64_t base_seed, std::size_t threads = 0);

double mean(std::span<const double> x);
double median(std::span<const double> x);

struct Interval {
    double lower;
    double upper;
};

/// Percentile-bootstrap confidence interval for the median.
Interval bootstrap_median_ci(std::span<const double> x, std::size_t resamples, double level,
                             std::uint64_t seed);

/// Spearman rank correlation (average ranks for ties).
double spearman(std::span<const double> x, std::span<const double> y);

} // namespace ncia::harness
