#pragma once

#include "ncia/numerics.hpp"
#include "ncia/rng.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace ncia::channel {

using num::Complex;
using num::CVector;

struct Tap {
    Complex gain;
    double delay; ///< in sample periods
};

struct MultipathChannel {
    std::vector<Tap> taps;
};

/// Per-subcarrier complex gains h_0 .. h_{K-1}.
struct FrequencyResponse {
    CVector h;

    std::size_t size() const noexcept { return h.size(); }
    const Complex& operator[](std::size_t q) const { return h[q]; }
};

/// Tapped-delay-line parameters. Tap p carries power proportional to
/// exp(-power_decay * p), normalised so the taps sum to unit power.
struct ChannelProfile {
    std::size_t num_taps = 4;
    double max_delay = 3.0;
    double power_decay = 0.0;

    void validate() const;
    /// Normalised per-tap powers.
    std::vector<double> tap_powers() const;
};

struct NoiseModel {
    double sigma2 = 1.0; ///< complex variance, both quadratures together

    void validate() const;
};

/// Draws a multipath channel: uniform delays in [0, max_delay], uniform
/// phases, profile powers.
MultipathChannel draw_channel(Rng& rng, const ChannelProfile& profile);

/// h_q = sum_p gain_p exp(-j 2 pi q delay_p / K).
FrequencyResponse frequency_response(const MultipathChannel& ch, std::size_t k);

/// |h1^H h2| / (|h1| |h2|). Throws UndefinedCorrelation for a zero-norm input.
double correlation(const FrequencyResponse& h1, const FrequencyResponse& h2);

/// Circularly-symmetric complex Gaussian sample of the given variance.
Complex complex_gaussian(Rng& rng, double variance);

/// x plus i.i.d. CN(0, sigma2) noise.
CVector awgn(Rng& rng, std::span<const Complex> x, const NoiseModel& noise);

/// Random unit-modulus QPSK symbols scaled by `amplitude`.
CVector qpsk_symbols(Rng& rng, std::size_t n, double amplitude = 1.0);

/// Least-squares estimate rx_q / pilot_q. Throws InvalidPilot on a zero pilot.
FrequencyResponse ls_estimate(std::span<const Complex> rx, std::span<const Complex> pilots);

} // namespace ncia::channel
