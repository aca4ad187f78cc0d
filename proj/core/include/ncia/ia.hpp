#pragma once

#include "ncia/channel.hpp"
#include "ncia/numerics.hpp"
#include "ncia/rng.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

/// Non-classic interference alignment for a downlink cell with one dominant
/// interfering BS. Each BS transmits in an N_s-dimensional subspace of the K
/// subcarriers (a Hadamard trunk), leaving N_f = K - N_s dimensions free; a
/// UE projects onto the left null space of its interferer's reduced channel
/// and feeds back the resulting equivalent-channel rows as precoders.
namespace ncia::ia {

using num::Complex;
using num::ComplexMatrix;
using num::CVector;
using num::RVector;

enum class PowerConstraint {
    per_stream, ///< every ZF column normalised, energy es per stream
    total,      ///< whole ZF matrix scaled to total energy es * L
};

struct SystemConfig {
    std::size_t subcarriers = 4; ///< K
    std::size_t free_dims = 1;   ///< N_f
    std::size_t users = 3;       ///< N_u
    double es = 10.0;            ///< per-stream transmit symbol energy
    double sigma2 = 1.0;         ///< noise variance
    PowerConstraint power = PowerConstraint::per_stream;

    /// N_s = K - N_f.
    std::size_t usable_dims() const noexcept { return subcarriers - free_dims; }
    /// t = N_u * N_f.
    std::size_t candidate_count() const noexcept { return users * free_dims; }
    void validate() const;
};

/// G_mb = diag(h) * M_H, K x N_s.
struct ReducedChannel {
    ComplexMatrix g;
};

/// N_f x K projection onto the interference-free subspace.
struct NullProjection {
    ComplexMatrix v_perp;
    /// Interferer channel was rank deficient, so the null space is larger
    /// than N_f and the returned rows are one arbitrary choice within it.
    bool ambiguous = false;
};

/// A fed-back precoding vector c = g_row^H and its origin.
struct Candidate {
    std::size_t user = 0;
    std::size_t stream = 0;
    CVector c;
    CVector g_row;
    bool zero_gain = false;
};

struct ZfSolution {
    ComplexMatrix zf; ///< N_s x L right inverse of the stacked g_rows
    RVector alpha;    ///< per-stream ZF penalties
};

struct Selection {
    std::vector<std::size_t> chosen; ///< indices into the candidate list, ascending
    ComplexMatrix p;                 ///< N_s x L, columns are the chosen c vectors
    ComplexMatrix zf;
    RVector alpha;
    RVector sinr;       ///< matched-filter SNR es * |g_row|^2 / sigma2
    RVector stream_snr; ///< post-ZF SNR under the configured power constraint
    double rate = 0.0;  ///< R_d in bits per channel use
};

/// Reduced-space and transmitted vectors of one BS for one symbol period.
struct StreamSymbols {
    CVector s;  ///< data streams
    CVector x;  ///< precoded reduced-space vector, length N_s
    CVector tx; ///< M_H * x, length K
};

/// Channels seen by one UE of the main cell.
struct UeChannels {
    ReducedChannel desired;
    ReducedChannel interfering;
    NullProjection projection;
};

/// Subsets whose stacked equivalent channel has condition number at or above
/// this are treated as infeasible by the scheduler.
inline constexpr double kInfeasibleCondition = 1e10;

ReducedChannel reduced_channel(const channel::FrequencyResponse& h, const ComplexMatrix& m_h);

/// Last N_f = K - N_s left singular vectors of g_mi, conjugate-transposed.
NullProjection interference_null_space(const ReducedChannel& g_mi);

/// G^perp = V^perp * G_md, N_f x N_s.
ComplexMatrix equivalent_channel(const NullProjection& v_perp, const ReducedChannel& g_md);

/// One candidate per row of g_perp, in row order.
std::vector<Candidate> ue_candidates(std::size_t user, const ComplexMatrix& g_perp);

/// ZF transmit filter and penalties for an L x N_s stacked equivalent
/// channel. Throws InfeasibleSubset when the condition number reaches
/// kInfeasibleCondition or L exceeds N_s.
ZfSolution zf_and_alpha(const ComplexMatrix& g_eff);
ZfSolution zf_and_alpha(std::span<const Candidate> chosen);

/// sum_l log2(1 + alpha_l * sinr_l).
double ia_rate(std::span<const double> alpha, std::span<const double> sinr);

/// es * |g_row|^2 / sigma2 for each candidate.
RVector matched_filter_snr(std::span<const Candidate> chosen, const SystemConfig& cfg);

/// Post-ZF per-stream SNR. Under per_stream power this is alpha_l * sinr_l;
/// under total power every stream gets es * L / (sigma2 * |zf|_F^2).
RVector post_zf_snr(const ZfSolution& zf, std::span<const double> sinr, const SystemConfig& cfg);

/// N_s x L transmit precoder: the ZF columns scaled per the power constraint,
/// so that stream l leaves the BS as precoder column l times s_l.
ComplexMatrix transmit_precoder(const ComplexMatrix& zf, const SystemConfig& cfg);

/// Exhaustive-search scheduler. With t <= N_s every candidate is used;
/// otherwise every size-N_s subset is scored and the best kept (ties go to
/// the lexicographically smallest index tuple). If no subset of the target
/// size is feasible the size is reduced one step at a time.
Selection schedule(std::span<const Candidate> candidates, const SystemConfig& cfg);

/// Selection for a fixed candidate subset (indices ascending).
Selection evaluate_subset(std::span<const Candidate> candidates,
                          std::span<const std::size_t> subset, const SystemConfig& cfg);

/// s, x = precoder * s, and tx = m_h * x.
StreamSymbols precode(const ComplexMatrix& precoder, const ComplexMatrix& m_h,
                      std::span<const Complex> s);

/// Per-stream SINR of a selection computed on a (possibly different) set of
/// channels: each stream's owner projects with its own `projection` row and
/// sees intra-cell leakage, residual inter-cell power from an interferer that
/// sends i.i.d. energy-es_interferer symbols on each of its N_s dimensions,
/// and noise.
RVector realized_stream_sinr(const Selection& selection, std::span<const Candidate> candidates,
                             std::span<const UeChannels> ues, const SystemConfig& cfg,
                             double es_interferer);

struct OracleOptions {
    bool noise = true;
    bool interferer = true;
    double es_interferer = 1.0;
    /// Reduced-space interferer vector to repeat every symbol instead of
    /// random QPSK streams.
    std::optional<CVector> fixed_interferer;
};

struct OracleMeasurement {
    RVector sinr;             ///< desired / (intra + inter + noise), all measured
    RVector desired_power;    ///< per stream, after projection
    RVector intra_power;      ///< leakage from the other selected streams
    RVector inter_power;      ///< interferer power after projection
    RVector inter_power_raw;  ///< interferer power at the UE before projection
    RVector noise_power;
};

/// Symbol-level simulation of a run of downlink symbols: unit-energy QPSK
/// streams through the selection's precoder and each UE's reduced channel
/// (trunk included), one interfering BS, AWGN, and per-UE null-space
/// projection. Requires n_symbols >= 10^4.
OracleMeasurement symbol_oracle(Rng& rng, const Selection& selection,
                                std::span<const Candidate> candidates,
                                std::span<const UeChannels> ues, const SystemConfig& cfg, std::size_t n_symbols,
                                const OracleOptions& options = {});

} // namespace ncia::ia
