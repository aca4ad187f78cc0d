#include "ncia/channel.hpp"

#include "ncia/error.hpp"

#include <cmath>
#include <fmt/format.h>
#include <numbers>

namespace ncia::channel {

void ChannelProfile::validate() const {
    if (num_taps == 0) {
        throw InvalidArgument("channel profile needs at least one tap");
    }
    if (!(max_delay >= 0.0) || !std::isfinite(max_delay)) {
        throw InvalidArgument(fmt::format("max_delay must be finite and >= 0, got {}", max_delay));
    }
    if (!(power_decay >= 0.0) || !std::isfinite(power_decay)) {
        throw InvalidArgument(fmt::format("power_decay must be finite and >= 0, got {}", power_decay));
    }
}

std::vector<double> ChannelProfile::tap_powers() const {
    std::vector<double> p(num_taps);
    double total = 0.0;
    for (std::size_t i = 0; i < num_taps; ++i) {
        p[i] = std::exp(-power_decay * static_cast<double>(i));
        total += p[i];
    }
    for (auto& x : p) {
        x /= total;
    }
    return p;
}

void NoiseModel::validate() const {
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
        throw InvalidArgument(fmt::format("noise variance must be > 0, got {}", sigma2));
    }
}

MultipathChannel draw_channel(Rng& rng, const ChannelProfile& profile) {
    profile.validate();
    const auto powers = profile.tap_powers();
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    MultipathChannel ch;
    ch.taps.reserve(profile.num_taps);
    for (const double p : powers) {
        const double delay = profile.max_delay * unit(rng);
        const double phase = 2.0 * std::numbers::pi * unit(rng);
        ch.taps.push_back(Tap{std::polar(std::sqrt(p), phase), delay});
    }
    return ch;
}

FrequencyResponse frequency_response(const MultipathChannel& ch, std::size_t k) {
    if (k == 0) {
        throw InvalidArgument("frequency response needs at least one subcarrier");
    }
    FrequencyResponse out{CVector(k)};
    for (std::size_t q = 0; q < k; ++q) {
        Complex acc{};
        for (const auto& tap : ch.taps) {
            const double angle = -2.0 * std::numbers::pi * static_cast<double>(q) * tap.delay /
                                 static_cast<double>(k);
            acc += tap.gain * std::polar(1.0, angle);
        }
        out.h[q] = acc;
    }
    return out;
}

double correlation(const FrequencyResponse& h1, const FrequencyResponse& h2) {
    if (h1.size() != h2.size()) {
        throw DimensionError(
            fmt::format("correlation of responses of length {} and {}", h1.size(), h2.size()));
    }
    const double n1 = num::norm(h1.h);
    const double n2 = num::norm(h2.h);
    if (n1 == 0.0 || n2 == 0.0) {
        throw UndefinedCorrelation("correlation is undefined for a zero-norm response");
    }
    return std::min(1.0, std::abs(num::inner(h1.h, h2.h)) / (n1 * n2));
}

Complex complex_gaussian(Rng& rng, double variance) {
    std::normal_distribution<double> gauss(0.0, std::sqrt(variance / 2.0));
    const double re = gauss(rng);
    const double im = gauss(rng);
    return {re, im};
}

CVector awgn(Rng& rng, std::span<const Complex> x, const NoiseModel& noise) {
    noise.validate();
    std::normal_distribution<double> gauss(0.0, std::sqrt(noise.sigma2 / 2.0));
    CVector y(x.begin(), x.end());
    for (auto& z : y) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        z += Complex{re, im};
    }
    return y;
}

CVector qpsk_symbols(Rng& rng, std::size_t n, double amplitude) {
    std::uniform_int_distribution<int> quadrant(0, 3);
    const double a = amplitude / std::numbers::sqrt2;
    CVector out(n);
    for (auto& z : out) {
        const int b = quadrant(rng);
        z = Complex{(b & 1) ? -a : a, (b & 2) ? -a : a};
    }
    return out;
}

FrequencyResponse ls_estimate(std::span<const Complex> rx, std::span<const Complex> pilots) {
    if (rx.size() != pilots.size()) {
        throw DimensionError(
            fmt::format("ls_estimate: {} received samples for {} pilots", rx.size(), pilots.size()));
    }
    FrequencyResponse out{CVector(rx.size())};
    for (std::size_t q = 0; q < rx.size(); ++q) {
        if (std::abs(pilots[q]) == 0.0) {
            throw InvalidPilot(fmt::format("pilot on subcarrier {} is zero", q));
        }
        out.h[q] = rx[q] / pilots[q];
    }
    return out;
}

} // namespace ncia::channel
