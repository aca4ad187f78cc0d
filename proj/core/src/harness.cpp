#include "ncia/harness.hpp"

#include "ncia/error.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fmt/format.h>
#include <numeric>
#include <thread>

namespace ncia::harness {

namespace {

using channel::FrequencyResponse;
using num::ComplexMatrix;
using num::CVector;

// Stream id for the protocol generator, so that protocol settings never
// perturb the channel draws of a trial.
constexpr std::uint64_t kProtocolStream = 0x70726f746f636f6cULL;

FrequencyResponse estimate(Rng& rng, const FrequencyResponse& h, double energy, double sigma2,
                           std::size_t symbols) {
    const std::size_t k = h.size();
    FrequencyResponse avg{CVector(k)};
    const channel::NoiseModel noise{sigma2};
    for (std::size_t n = 0; n < symbols; ++n) {
        const CVector pilots = channel::qpsk_symbols(rng, k, std::sqrt(energy));
        CVector clean(k);
        for (std::size_t q = 0; q < k; ++q) {
            clean[q] = h[q] * pilots[q];
        }
        const FrequencyResponse est = channel::ls_estimate(channel::awgn(rng, clean, noise), pilots);
        for (std::size_t q = 0; q < k; ++q) {
            avg.h[q] += est[q];
        }
    }
    for (auto& z : avg.h) {
        z /= static_cast<double>(symbols);
    }
    return avg;
}

// First n_s left singular vectors of a complex Gaussian K x K matrix.
ComplexMatrix random_trunk(Rng& rng, std::size_t k, std::size_t n_s) {
    ComplexMatrix g(k, k);
    for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t c = 0; c < k; ++c) {
            g(r, c) = channel::complex_gaussian(rng, 1.0);
        }
    }
    return num::svd(g).u.leading_columns(n_s);
}

RVector magnitudes(const FrequencyResponse& h) {
    RVector out(h.size());
    std::transform(h.h.begin(), h.h.end(), out.begin(), [](const num::Complex& z) { return std::abs(z); });
    return out;
}

TrialRecord run_trial_impl(const ExperimentConfig& cfg, std::uint64_t seed, std::size_t trial) {
    cfg.validate();
    const ia::SystemConfig sys = cfg.system();
    const std::size_t k = sys.subcarriers;
    const std::size_t n_s = sys.usable_dims();
    const std::size_t n_u = sys.users;
    const double es = sys.es;
    const double es_i = cfg.es_interferer();
    const double sigma2 = sys.sigma2;

    Rng rng(seed);

    std::vector<FrequencyResponse> h_d(n_u);
    std::vector<FrequencyResponse> h_i(n_u);
    for (std::size_t u = 0; u < n_u; ++u) {
        if (cfg.correlation == CorrelationMode::identical && u > 0) {
            h_d[u] = h_d[0];
            h_i[u] = h_i[0];
            continue;
        }
        h_d[u] = channel::frequency_response(channel::draw_channel(rng, cfg.profile), k);
        h_i[u] = channel::frequency_response(channel::draw_channel(rng, cfg.profile), k);
    }

    const ComplexMatrix m_main = num::hadamard_trunk(k, n_s);
    const ComplexMatrix m_int =
        cfg.trunk == TrunkMode::random_interferer ? random_trunk(rng, k, n_s) : m_main;

    // A silent interferer leaves nothing to measure: its effective channel is zero.
    auto effective_interferer = [&](const FrequencyResponse& h) {
        return es_i > 0.0 ? h : FrequencyResponse{CVector(k)};
    };

    std::vector<FrequencyResponse> hd_est(n_u);
    std::vector<FrequencyResponse> hi_est(n_u);
    for (std::size_t u = 0; u < n_u; ++u) {
        if (cfg.perfect_csi) {
            hd_est[u] = h_d[u];
            hi_est[u] = effective_interferer(h_i[u]);
        } else {
            const std::size_t symbols = cfg.protocol.training_symbols;
            hd_est[u] = estimate(rng, h_d[u], es, sigma2, symbols);
            hi_est[u] = estimate(rng, h_i[u], es_i, sigma2, symbols);
        }
    }

    std::vector<ia::UeChannels> ues_true;
    ues_true.reserve(n_u);
    protocol::FeedbackBundle bundle(n_u);
    for (std::size_t u = 0; u < n_u; ++u) {
        const ia::ReducedChannel g_md_est = ia::reduced_channel(hd_est[u], m_main);
        const ia::ReducedChannel g_mi_est = ia::reduced_channel(hi_est[u], m_int);
        ia::NullProjection proj = ia::interference_null_space(g_mi_est);
        bundle.add(u, ia::ue_candidates(u, ia::equivalent_channel(proj, g_md_est)));
        ues_true.push_back({ia::reduced_channel(h_d[u], m_main),
                            ia::reduced_channel(effective_interferer(h_i[u]), m_int),
                            std::move(proj)});
    }

    Rng proto_rng(mix_seed(seed, kProtocolStream));
    const protocol::SyncTrace sync = protocol::run_sync(cfg.protocol_config(), proto_rng);

    const std::vector<ia::Candidate> candidates = protocol::collect_feedback(bundle);
    const ia::Selection sel = ia::schedule(candidates, sys);

    TrialRecord rec;
    rec.trial = trial;
    rec.seed = seed;
    rec.alpha = sel.alpha;
    rec.stream_snr = cfg.perfect_csi
                         ? sel.stream_snr
                         : ia::realized_stream_sinr(sel, candidates, ues_true, sys, es_i);
    for (const double x : rec.stream_snr) {
        rec.r_d += std::log2(1.0 + x);
    }

    // OFDMA: ownership decided on the estimates, rate paid on the true channels.
    const double interferer_scale = std::sqrt(es_i / es);
    ofdma::SinrTable rho_true(k, n_u);
    ofdma::SinrTable rho_est(k, n_u);
    for (std::size_t q = 0; q < k; ++q) {
        for (std::size_t u = 0; u < n_u; ++u) {
            rho_true(q, u) = ofdma::ofdma_sinr(h_d[u][q], interferer_scale * h_i[u][q], sigma2, es);
            rho_est(q, u) = ofdma::ofdma_sinr(hd_est[u][q], interferer_scale * hi_est[u][q], sigma2, es);
        }
    }
    const auto by_max = ofdma::ofdma_schedule(rho_est, ofdma::Policy::max_sinr);
    const auto by_rr = ofdma::ofdma_schedule(rho_est, ofdma::Policy::round_robin);
    rec.r_ref_max_sinr = ofdma::ofdma_rate(by_max, rho_true);
    rec.r_ref_round_robin = ofdma::ofdma_rate(by_rr, rho_true);
    const auto& base = cfg.baseline == ofdma::Policy::max_sinr ? by_max : by_rr;
    const double r_ref =
        cfg.baseline == ofdma::Policy::max_sinr ? rec.r_ref_max_sinr : rec.r_ref_round_robin;
    rec.gain = rec.r_d / r_ref;
    for (std::size_t q = 0; q < k; ++q) {
        rec.ofdma_sinr_summary.push_back(rho_true(q, base.owner[q]));
    }

    for (std::size_t a = 0; a < n_u; ++a) {
        for (std::size_t b = a + 1; b < n_u; ++b) {
            rec.correlations.push_back(channel::correlation(h_d[a], h_d[b]));
        }
    }
    for (std::size_t u = 0; u < n_u; ++u) {
        rec.spectra_desired.push_back(magnitudes(h_d[u]));
        rec.spectra_interfering.push_back(magnitudes(h_i[u]));
    }
    rec.sync_slots = sync.slots_to_detect;
    return rec;
}

} // namespace

TrialRecord run_trial(const ExperimentConfig& cfg, std::uint64_t seed, std::size_t trial) {
    auto tag = [&](const std::exception& e) {
        return fmt::format("trial {} (seed {}): {}", trial, seed, e.what());
    };
    try {
        return run_trial_impl(cfg, seed, trial);
    } catch (const ConfigError& e) {
        throw ConfigError(tag(e));
    } catch (const SyncTimeout& e) {
        throw SyncTimeout(tag(e));
    } catch (const NumericalFailure& e) {
        throw NumericalFailure(tag(e), e.iterations());
    } catch (const InvalidArgument& e) {
        throw ConfigError(tag(e));
    } catch (const Error& e) {
        throw Error(tag(e));
    }
}

double mean(std::span<const double> x) {
    if (x.empty()) {
        throw InvalidArgument("mean of an empty sample");
    }
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double median(std::span<const double> x) {
    if (x.empty()) {
        throw InvalidArgument("median of an empty sample");
    }
    std::vector<double> v(x.begin(), x.end());
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

CampaignSummary summarize(std::span<const TrialRecord> records) {
    if (records.empty()) {
        throw InvalidArgument("cannot summarise zero trials");
    }
    std::vector<const TrialRecord*> sorted;
    sorted.reserve(records.size());
    for (const auto& r : records) {
        sorted.push_back(&r);
    }
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const TrialRecord* a, const TrialRecord* b) { return a->trial < b->trial; });

    CampaignSummary s;
    s.n_trials = sorted.size();
    RVector gains;
    gains.reserve(sorted.size());
    double acc = 0.0;
    for (const auto* r : sorted) {
        gains.push_back(r->gain);
        acc += r->gain;
        s.running_mean.push_back(acc / static_cast<double>(gains.size()));
    }
    s.mean_gain = s.running_mean.back();
    s.median_gain = median(gains);
    const auto [lo, hi] = std::minmax_element(gains.begin(), gains.end());
    s.min_gain = *lo;
    s.max_gain = *hi;
    if (gains.size() > 1) {
        double ss = 0.0;
        for (const double g : gains) {
            ss += (g - s.mean_gain) * (g - s.mean_gain);
        }
        const double sd = std::sqrt(ss / static_cast<double>(gains.size() - 1));
        s.ci95 = 1.96 * sd / std::sqrt(static_cast<double>(gains.size()));
    }
    return s;
}

Campaign run_campaign(const ExperimentConfig& cfg, std::size_t n_trials, std::uint64_t base_seed,
                      std::size_t threads) {
    if (n_trials == 0) {
        throw InvalidArgument("a campaign needs at least one trial");
    }
    cfg.validate();
    const std::size_t workers = std::min(threads == 0 ? cfg.threads : threads, n_trials);

    std::vector<TrialRecord> records(n_trials);
    std::vector<std::exception_ptr> errors(n_trials);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < n_trials; i = next++) {
            try {
                records[i] = run_trial(cfg, mix_seed(base_seed, i), i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    Campaign c;
    c.summary = summarize(records);
    c.records = std::move(records);
    return c;
}

SweepAxis parse_axis(std::string_view name) {
    if (name == "snr_db") {
        return SweepAxis::snr_db;
    }
    if (name == "inr_db") {
        return SweepAxis::inr_db;
    }
    if (name == "num_taps") {
        return SweepAxis::num_taps;
    }
    if (name == "correlation_mode") {
        return SweepAxis::correlation_mode;
    }
    throw ConfigError(fmt::format(
        "unknown sweep axis '{}' (expected snr_db|inr_db|num_taps|correlation_mode)", name));
}

std::string_view to_string(SweepAxis axis) {
    switch (axis) {
    case SweepAxis::snr_db:
        return "snr_db";
    case SweepAxis::inr_db:
        return "inr_db";
    case SweepAxis::num_taps:
        return "num_taps";
    case SweepAxis::correlation_mode:
        return "correlation_mode";
    }
    return "?";
}

ExperimentConfig apply_axis(const ExperimentConfig& cfg, SweepAxis axis, std::string_view value) {
    ExperimentConfig out = cfg;
    auto number = [&]<class T>(T& target) {
        const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), target);
        if (ec != std::errc{} || ptr != value.data() + value.size()) {
            throw ConfigError(fmt::format("bad {} sweep value '{}'", to_string(axis), value));
        }
    };
    switch (axis) {
    case SweepAxis::snr_db:
        number(out.snr_db);
        break;
    case SweepAxis::inr_db:
        number(out.inr_db);
        break;
    case SweepAxis::num_taps:
        number(out.profile.num_taps);
        break;
    case SweepAxis::correlation_mode:
        out.correlation = parse_correlation_mode(value);
        break;
    }
    out.validate();
    return out;
}

std::vector<SweepPoint> sweep(const ExperimentConfig& cfg, SweepAxis axis,
                              std::span<const std::string> values, std::size_t n_trials,
                              std::uint64_t base_seed, std::size_t threads) {
    if (values.empty()) {
        throw ConfigError("sweep needs at least one value");
    }
    std::vector<SweepPoint> out;
    out.reserve(values.size());
    for (const auto& v : values) {
        out.push_back({v, run_campaign(apply_axis(cfg, axis, v), n_trials, base_seed, threads)});
    }
    return out;
}

Interval bootstrap_median_ci(std::span<const double> x, std::size_t resamples, double level,
                             std::uint64_t seed) {
    if (x.empty() || resamples == 0 || !(level > 0.0 && level < 1.0)) {
        throw InvalidArgument("bootstrap needs data, resamples > 0 and level in (0, 1)");
    }
    Rng rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, x.size() - 1);
    std::vector<double> medians(resamples);
    std::vector<double> sample(x.size());
    for (auto& m : medians) {
        for (auto& s : sample) {
            s = x[pick(rng)];
        }
        m = median(sample);
    }
    std::sort(medians.begin(), medians.end());
    const auto at = [&](double p) {
        const double pos = p * static_cast<double>(resamples - 1);
        return medians[static_cast<std::size_t>(std::floor(pos))];
    };
    return {at((1.0 - level) / 2.0), at((1.0 + level) / 2.0)};
}

namespace {

RVector average_ranks(std::span<const double> x) {
    std::vector<std::size_t> idx(x.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    RVector rank(x.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) {
            ++j;
        }
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t t = i; t <= j; ++t) {
            rank[idx[t]] = r;
        }
        i = j + 1;
    }
    return rank;
}

} // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw InvalidArgument("spearman needs two equal-length samples of size >= 2");
    }
    const RVector rx = average_ranks(x);
    const RVector ry = average_ranks(y);
    const double mx = mean(rx);
    const double my = mean(ry);
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) {
        return 0.0;
    }
    return sxy / std::sqrt(sxx * syy);
}

} // namespace ncia::harness
