#pragma once

#include "ncia/channel.hpp"
#include "ncia/ia.hpp"
#include "ncia/ofdma.hpp"
#include "ncia/protocol.hpp"

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>

namespace ncia {

enum class CorrelationMode {
    iid,       ///< independent channels per UE
    identical, ///< every UE sees the same desired and interfering channel
};

enum class TrunkMode {
    shared_hadamard,   ///< both BSs use the Sylvester trunk
    random_interferer, ///< interferer draws a random unitary trunk per trial
};

CorrelationMode parse_correlation_mode(std::string_view s);
std::string_view to_string(CorrelationMode m);
ia::PowerConstraint parse_power_constraint(std::string_view s);
std::string_view to_string(ia::PowerConstraint p);
TrunkMode parse_trunk_mode(std::string_view s);
std::string_view to_string(TrunkMode t);

/// Everything one experiment needs. Loaded from an INI-style document with
/// sections [system], [channel], [noise], [policies] and [protocol]; every
/// key is optional and defaults to the values below.
struct ExperimentConfig {
    // [system]
    std::size_t subcarriers = 4;
    std::size_t free_dims = 1;
    std::size_t users = 3;
    double snr_db = 10.0; ///< es / sigma2
    double inr_db = 10.0; ///< es_interferer / sigma2; -inf silences the interferer

    // [channel]
    channel::ChannelProfile profile{};
    CorrelationMode correlation = CorrelationMode::iid;
    bool perfect_csi = false;

    // [noise]
    channel::NoiseModel noise{};

    // [policies]
    ofdma::Policy baseline = ofdma::Policy::max_sinr;
    ia::PowerConstraint power = ia::PowerConstraint::per_stream;
    TrunkMode trunk = TrunkMode::shared_hadamard;
    std::size_t threads = 1;

    // [protocol]
    protocol::ProtocolConfig protocol{};

    double es() const;
    double es_interferer() const;
    ia::SystemConfig system() const;
    /// Protocol settings with the UE count taken from [system].
    protocol::ProtocolConfig protocol_config() const;

    /// Throws ConfigError describing the first invalid setting.
    void validate() const;
};

/// Parses the INI text. Unknown sections or keys, malformed values and
/// duplicate keys raise ConfigError.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical INI rendering; parse_config(render_config(c)) reproduces c.
std::string render_config(const ExperimentConfig& cfg);

} // namespace ncia
