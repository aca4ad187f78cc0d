// ncia: command-line front end for trials, campaigns, sweeps and protocol runs.

#include "ncia/config.hpp"
#include "ncia/error.hpp"
#include "ncia/harness.hpp"
#include "ncia/records.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fmt/format.h>
#include <fmt/ranges.h>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace ncia;

namespace {

enum Exit { ok = 0, failure = 1, config_error = 2, numerical_failure = 3, sync_timeout = 4 };

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(fmt::format("cannot write '{}'", path.string()));
    }
    return out;
}

void prepare_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw Error(fmt::format("cannot create '{}': {}", dir.string(), ec.message()));
    }
}

void write_campaign(const fs::path& dir, std::string_view label, const harness::Campaign& c) {
    prepare_dir(dir);
    auto trials = open_out(dir / "trials.jsonl");
    records::write_trials(trials, c.records);
    auto summary = open_out(dir / "summary.csv");
    summary << records::kSummaryHeader << '\n' << records::summary_row(label, c.summary) << '\n';
}

void print_verbose(const ExperimentConfig& cfg, const harness::TrialRecord& r) {
    std::cerr << fmt::format("seed {}  K={} N_f={} N_u={}  SNR {} dB  INR {} dB  csi {}\n", r.seed,
                             cfg.subcarriers, cfg.free_dims, cfg.users, cfg.snr_db, cfg.inr_db,
                             cfg.perfect_csi ? "perfect" : "ls");
    for (std::size_t l = 0; l < r.stream_snr.size(); ++l) {
        std::cerr << fmt::format("  IA stream {}: alpha {:.4f}  snr {:.2f} dB\n", l, r.alpha[l],
                                 10.0 * std::log10(r.stream_snr[l]));
    }
    for (std::size_t q = 0; q < r.ofdma_sinr_summary.size(); ++q) {
        std::cerr << fmt::format("  OFDMA subcarrier {}: sinr {:.2f} dB\n", q,
                                 10.0 * std::log10(r.ofdma_sinr_summary[q]));
    }
    std::cerr << fmt::format("  R_d {:.4f}  R_ref max_sinr {:.4f}  round_robin {:.4f}  gain {:.4f}\n",
                             r.r_d, r.r_ref_max_sinr, r.r_ref_round_robin, r.gain);
    std::cerr << fmt::format("  correlations [{:.3f}]  sync slots {}\n", fmt::join(r.correlations, ", "), r.sync_slots);
}

std::vector<std::string> split_values(const std::string& csv) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = csv.find(',', start);
        std::string item = csv.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        const auto first = item.find_first_not_of(" \t");
        const auto last = item.find_last_not_of(" \t");
        if (first == std::string::npos) {
            throw ConfigError(fmt::format("empty entry in value list '{}'", csv));
        }
        out.push_back(item.substr(first, last - first + 1));
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interference alignment vs OFDMA link-level simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed = 42;
    std::size_t trials = 100;
    std::size_t threads = 0;
    std::string out_dir;
    bool verbose = false;
    std::string axis_name;
    std::string values_csv;
    double miss_prob = 0.0;
    std::size_t runs = 1;

    auto* trial = app.add_subcommand("trial", "run one trial and print its record as JSON");
    trial->add_option("--config", config_path, "INI configuration file")->required()->check(CLI::ExistingFile);
    trial->add_option("--seed", seed, "trial seed")->required();
    trial->add_flag("--verbose", verbose, "human-readable breakdown on stderr");

    auto* run = app.add_subcommand("run", "Monte Carlo campaign");
    run->add_option("--config", config_path)->required()->check(CLI::ExistingFile);
    run->add_option("--trials", trials)->required()->check(CLI::PositiveNumber);
    run->add_option("--seed", seed, "base seed")->required();
    run->add_option("--out", out_dir, "output directory")->required();
    run->add_option("--threads", threads, "worker threads (default: config)");

    auto* sw = app.add_subcommand("sweep", "one campaign per value of a parameter");
    sw->add_option("--config", config_path)->required()->check(CLI::ExistingFile);
    sw->add_option("--axis", axis_name, "snr_db|inr_db|num_taps|correlation_mode")->required();
    sw->add_option("--values", values_csv, "comma-separated values")->required();
    sw->add_option("--trials", trials)->required()->check(CLI::PositiveNumber);
    sw->add_option("--out", out_dir)->required();
    sw->add_option("--seed", seed, "base seed shared by every point");
    sw->add_option("--threads", threads);

    auto* proto = app.add_subcommand("protocol", "synchronisation runs of the protocol state machine");
    proto->add_option("--config", config_path)->required()->check(CLI::ExistingFile);
    proto->add_option("--miss-prob", miss_prob, "beacon miss probability")->required();
    proto->add_option("--runs", runs)->required()->check(CLI::PositiveNumber);
    proto->add_option("--seed", seed, "base seed");
    proto->add_option("--out", out_dir, "directory for trace.jsonl (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? Exit::ok : Exit::config_error;
    }

    try {
        ExperimentConfig cfg = load_config(config_path);

        if (*trial) {
            const auto rec = harness::run_trial(cfg, seed);
            if (verbose) {
                print_verbose(cfg, rec);
            }
            std::cout << records::trial_json(rec) << '\n';
        } else if (*run) {
            const auto campaign = harness::run_campaign(cfg, trials, seed, threads);
            write_campaign(out_dir, "run", campaign);
            std::cout << fmt::format("{} trials: mean gain {:.4f} (+/- {:.4f}), median {:.4f}\n",
                                     campaign.summary.n_trials, campaign.summary.mean_gain,
                                     campaign.summary.ci95, campaign.summary.median_gain);
        } else if (*sw) {
            const auto axis = harness::parse_axis(axis_name);
            const auto values = split_values(values_csv);
            const auto points = harness::sweep(cfg, axis, values, trials, seed, threads);
            prepare_dir(out_dir);
            auto summary = open_out(fs::path(out_dir) / "summary.csv");
            summary << records::kSummaryHeader << '\n';
            for (const auto& p : points) {
                const fs::path dir = fs::path(out_dir) / fmt::format("{}={}", axis_name, p.value);
                prepare_dir(dir);
                auto out = open_out(dir / "trials.jsonl");
                records::write_trials(out, p.campaign.records);
                summary << records::summary_row(p.value, p.campaign.summary) << '\n';
                std::cout << fmt::format("{} = {}: mean gain {:.4f}, median {:.4f}\n", axis_name,
                                         p.value, p.campaign.summary.mean_gain,
                                         p.campaign.summary.median_gain);
            }
        } else if (*proto) {
            cfg.protocol.miss_probability = miss_prob;
            cfg.validate();
            const auto pcfg = cfg.protocol_config();
            std::ofstream file;
            if (!out_dir.empty()) {
                prepare_dir(out_dir);
                file = open_out(fs::path(out_dir) / "trace.jsonl");
            }
            std::ostream& out = out_dir.empty() ? std::cout : file;
            double total = 0.0;
            for (std::size_t r = 0; r < runs; ++r) {
                Rng rng(mix_seed(seed, r));
                const auto trace = protocol::run_sync(pcfg, rng);
                records::write_trace(out, r, trace);
                total += static_cast<double>(trace.slots_to_detect);
            }
            std::cerr << fmt::format("{} runs: mean slots to detect {:.4f}\n", runs,
                                     total / static_cast<double>(runs));
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return Exit::config_error;
    } catch (const InvalidArgument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return Exit::config_error;
    } catch (const NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return Exit::numerical_failure;
    } catch (const SyncTimeout& e) {
        std::cerr << "sync timeout: " << e.what() << '\n';
        return Exit::sync_timeout;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return Exit::failure;
    }
    return Exit::ok;
}
