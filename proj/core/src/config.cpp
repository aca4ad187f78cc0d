#include "ncia/config.hpp"

#include "ncia/error.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace ncia {

CorrelationMode parse_correlation_mode(std::string_view s) {
    if (s == "iid") {
        return CorrelationMode::iid;
    }
    if (s == "identical") {
        return CorrelationMode::identical;
    }
    throw ConfigError(fmt::format("unknown correlation_mode '{}' (expected iid|identical)", s));
}

std::string_view to_string(CorrelationMode m) {
    return m == CorrelationMode::iid ? "iid" : "identical";
}

ia::PowerConstraint parse_power_constraint(std::string_view s) {
    if (s == "per_stream") {
        return ia::PowerConstraint::per_stream;
    }
    if (s == "total") {
        return ia::PowerConstraint::total;
    }
    throw ConfigError(fmt::format("unknown power_constraint '{}' (expected per_stream|total)", s));
}

std::string_view to_string(ia::PowerConstraint p) {
    return p == ia::PowerConstraint::per_stream ? "per_stream" : "total";
}

TrunkMode parse_trunk_mode(std::string_view s) {
    if (s == "shared_hadamard") {
        return TrunkMode::shared_hadamard;
    }
    if (s == "random_interferer") {
        return TrunkMode::random_interferer;
    }
    throw ConfigError(
        fmt::format("unknown trunk '{}' (expected shared_hadamard|random_interferer)", s));
}

std::string_view to_string(TrunkMode t) {
    return t == TrunkMode::shared_hadamard ? "shared_hadamard" : "random_interferer";
}

double ExperimentConfig::es() const {
    return noise.sigma2 * std::pow(10.0, snr_db / 10.0);
}

double ExperimentConfig::es_interferer() const {
    return noise.sigma2 * std::pow(10.0, inr_db / 10.0);
}

ia::SystemConfig ExperimentConfig::system() const {
    ia::SystemConfig s;
    s.subcarriers = subcarriers;
    s.free_dims = free_dims;
    s.users = users;
    s.es = es();
    s.sigma2 = noise.sigma2;
    s.power = power;
    return s;
}

protocol::ProtocolConfig ExperimentConfig::protocol_config() const {
    protocol::ProtocolConfig p = protocol;
    p.users = users;
    return p;
}

void ExperimentConfig::validate() const {
    try {
        noise.validate();
        if (!std::isfinite(snr_db)) {
            throw InvalidArgument(fmt::format("snr_db must be finite, got {}", snr_db));
        }
        if (std::isnan(inr_db) || inr_db == HUGE_VAL) {
            throw InvalidArgument(fmt::format("inr_db must be finite or -inf, got {}", inr_db));
        }
        system().validate();
        profile.validate();
        protocol_config().validate();
        if (!perfect_csi && es_interferer() == 0.0) {
            throw InvalidArgument("a silent interferer (inr_db = -inf) cannot be estimated; "
                                  "set perfect_csi = true");
        }
        if (threads == 0) {
            throw InvalidArgument("threads must be >= 1");
        }
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }
}

namespace {

namespace pt = boost::property_tree;

std::size_t to_size(const std::string& key, const std::string& v) {
    std::size_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
        throw ConfigError(fmt::format("{}: expected a non-negative integer, got '{}'", key, v));
    }
    return out;
}

int to_int(const std::string& key, const std::string& v) {
    int out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
        throw ConfigError(fmt::format("{}: expected an integer, got '{}'", key, v));
    }
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
        throw ConfigError(fmt::format("{}: expected a number, got '{}'", key, v));
    }
    return out;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "yes" || v == "1") {
        return true;
    }
    if (v == "false" || v == "no" || v == "0") {
        return false;
    }
    throw ConfigError(fmt::format("{}: expected true or false, got '{}'", key, v));
}

using Setter = std::function<void(ExperimentConfig&, const std::string& key, const std::string&)>;

const std::map<std::string, std::map<std::string, Setter>>& schema() {
    static const std::map<std::string, std::map<std::string, Setter>> s = {
        {"system",
         {
             {"subcarriers", [](auto& c, auto& k, auto& v) { c.subcarriers = to_size(k, v); }},
             {"free_dims", [](auto& c, auto& k, auto& v) { c.free_dims = to_size(k, v); }},
             {"users", [](auto& c, auto& k, auto& v) { c.users = to_size(k, v); }},
             {"snr_db", [](auto& c, auto& k, auto& v) { c.snr_db = to_double(k, v); }},
             {"inr_db", [](auto& c, auto& k, auto& v) { c.inr_db = to_double(k, v); }},
         }},
        {"channel",
         {
             {"num_taps", [](auto& c, auto& k, auto& v) { c.profile.num_taps = to_size(k, v); }},
             {"max_delay", [](auto& c, auto& k, auto& v) { c.profile.max_delay = to_double(k, v); }},
             {"power_decay",
              [](auto& c, auto& k, auto& v) { c.profile.power_decay = to_double(k, v); }},
             {"correlation_mode",
              [](auto& c, auto&, auto& v) { c.correlation = parse_correlation_mode(v); }},
             {"perfect_csi", [](auto& c, auto& k, auto& v) { c.perfect_csi = to_bool(k, v); }},
         }},
        {"noise",
         {
             {"sigma2", [](auto& c, auto& k, auto& v) { c.noise.sigma2 = to_double(k, v); }},
         }},
        {"policies",
         {
             {"baseline",
              [](auto& c, auto&, auto& v) {
                  try {
                      c.baseline = ofdma::parse_policy(v);
                  } catch (const InvalidArgument& e) {
                      throw ConfigError(e.what());
                  }
              }},
             {"power_constraint",
              [](auto& c, auto&, auto& v) { c.power = parse_power_constraint(v); }},
             {"trunk", [](auto& c, auto&, auto& v) { c.trunk = parse_trunk_mode(v); }},
             {"threads", [](auto& c, auto& k, auto& v) { c.threads = to_size(k, v); }},
         }},
        {"protocol",
         {
             {"interferer_id",
              [](auto& c, auto& k, auto& v) { c.protocol.interferer_id = to_int(k, v); }},
             {"training_symbols",
              [](auto& c, auto& k, auto& v) { c.protocol.training_symbols = to_size(k, v); }},
             {"slot_cap", [](auto& c, auto& k, auto& v) { c.protocol.slot_cap = to_size(k, v); }},
             {"decode_threshold_db",
              [](auto& c, auto& k, auto& v) { c.protocol.decode_threshold_db = to_double(k, v); }},
             {"beacon_snr_db",
              [](auto& c, auto& k, auto& v) { c.protocol.beacon_snr_db = to_double(k, v); }},
             {"miss_probability",
              [](auto& c, auto& k, auto& v) { c.protocol.miss_probability = to_double(k, v); }},
         }},
    };
    return s;
}

} // namespace

ExperimentConfig parse_config(std::string_view text) {
    pt::ptree tree;
    try {
        std::istringstream in{std::string(text)};
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(fmt::format("config line {}: {}", e.line(), e.message()));
    }
    ExperimentConfig cfg;
    const auto& sections = schema();
    for (const auto& [section, body] : tree) {
        const auto sit = sections.find(section);
        if (sit == sections.end()) {
            if (body.empty()) {
                throw ConfigError(fmt::format("key '{}' outside any section", section));
            }
            throw ConfigError(fmt::format("unknown section [{}]", section));
        }
        for (const auto& [key, node] : body) {
            const auto kit = sit->second.find(key);
            if (kit == sit->second.end()) {
                throw ConfigError(fmt::format("unknown key '{}' in [{}]", key, section));
            }
            kit->second(cfg, section + "." + key, node.get_value<std::string>());
        }
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(fmt::format("cannot open config file '{}'", path.string()));
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config(buf.str());
    } catch (const ConfigError& e) {
        throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
    }
}

std::string render_config(const ExperimentConfig& c) {
    return fmt::format(
        "[system]\n"
        "subcarriers = {}\nfree_dims = {}\nusers = {}\nsnr_db = {:.17g}\ninr_db = {:.17g}\n\n"
        "[channel]\n"
        "num_taps = {}\nmax_delay = {:.17g}\npower_decay = {:.17g}\ncorrelation_mode = {}\n"
        "perfect_csi = {}\n\n"
        "[noise]\n"
        "sigma2 = {:.17g}\n\n"
        "[policies]\n"
        "baseline = {}\npower_constraint = {}\ntrunk = {}\nthreads = {}\n\n"
        "[protocol]\n"
        "interferer_id = {}\ntraining_symbols = {}\nslot_cap = {}\ndecode_threshold_db = {:.17g}\n"
        "beacon_snr_db = {:.17g}\nmiss_probability = {:.17g}\n",
        c.subcarriers, c.free_dims, c.users, c.snr_db, c.inr_db, c.profile.num_taps,
        c.profile.max_delay, c.profile.power_decay, to_string(c.correlation),
        c.perfect_csi ? "true" : "false", c.noise.sigma2, ofdma::to_string(c.baseline),
        to_string(c.power), to_string(c.trunk), c.threads, c.protocol.interferer_id,
        c.protocol.training_symbols, c.protocol.slot_cap, c.protocol.decode_threshold_db,
        c.protocol.beacon_snr_db, c.protocol.miss_probability);
}

} // namespace ncia
