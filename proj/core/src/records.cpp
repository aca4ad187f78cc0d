#include "ncia/records.hpp"

#include <cmath>
#include <fmt/format.h>
#include <iterator>

namespace ncia::records {

namespace {

void append_vector(std::string& out, std::span<const double> v) {
    out += '[';
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        out += format_real(v[i]);
    }
    out += ']';
}

void append_matrix(std::string& out, const std::vector<num::RVector>& m) {
    out += '[';
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        append_vector(out, m[i]);
    }
    out += ']';
}

std::string json_string(std::string_view s) {
    std::string out = "\"";
    for (const char c : s) {
        switch (c) {
        case '"':
            out += "\\\"";
            break;
        case '\\':
            out += "\\\\";
            break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                out += fmt::format("\\u{:04x}", static_cast<unsigned>(c));
            } else {
                out += c;
            }
        }
    }
    return out + '"';
}

} // namespace

std::string format_real(double x) {
    if (!std::isfinite(x)) {
        return "null";
    }
    return fmt::format("{:.12g}", x);
}

std::string trial_json(const harness::TrialRecord& r) {
    std::string out;
    out.reserve(512);
    auto it = std::back_inserter(out);
    fmt::format_to(it, "{{\"trial\":{},\"seed\":{},\"r_d\":{},\"r_ref_max_sinr\":{},"
                       "\"r_ref_round_robin\":{},\"gain\":{},\"alpha\":",
                   r.trial, r.seed, format_real(r.r_d), format_real(r.r_ref_max_sinr),
                   format_real(r.r_ref_round_robin), format_real(r.gain));
    append_vector(out, r.alpha);
    out += ",\"stream_snr\":";
    append_vector(out, r.stream_snr);
    out += ",\"ofdma_sinr_summary\":";
    append_vector(out, r.ofdma_sinr_summary);
    out += ",\"correlations\":";
    append_vector(out, r.correlations);
    out += ",\"spectra\":{\"desired\":";
    append_matrix(out, r.spectra_desired);
    out += ",\"interfering\":";
    append_matrix(out, r.spectra_interfering);
    fmt::format_to(it, "}},\"sync_slots\":{}}}", r.sync_slots);
    return out;
}

void write_trials(std::ostream& out, std::span<const harness::TrialRecord> records) {
    for (const auto& r : records) {
        out << trial_json(r) << '\n';
    }
}

std::string summary_row(std::string_view axis_value, const harness::CampaignSummary& s) {
    return fmt::format("{},{},{},{},{},{}", axis_value, format_real(s.mean_gain),
                       format_real(s.median_gain), format_real(s.min_gain), format_real(s.max_gain),
                       format_real(s.ci95));
}

void write_trace(std::ostream& out, std::size_t run, const protocol::SyncTrace& trace) {
    for (const auto& e : trace.entries) {
        out << fmt::format("{{\"run\":{},\"slot\":{},\"phase\":{},\"event\":{}}}\n", run, e.slot,
                           json_string(protocol::to_string(e.phase)), json_string(e.event));
    }
}

} // namespace ncia::records
