#pragma once

#include "ncia/harness.hpp"
#include "ncia/protocol.hpp"

#include <ostream>
#include <span>
#include <string>
#include <string_view>

namespace ncia::records {

/// Reals are printed with 12 significant digits; non-finite values as null.
std::string format_real(double x);

/// One TrialRecord as a single-line JSON object, fields in declaration order.
/// `spectra` is an object {"desired": [[..]..], "interfering": [[..]..]}.
std::string trial_json(const harness::TrialRecord& r);
void write_trials(std::ostream& out, std::span<const harness::TrialRecord> records);

inline constexpr std::string_view kSummaryHeader = "axis,mean_gain,median_gain,min_gain,max_gain,ci95";
std::string summary_row(std::string_view axis_value, const harness::CampaignSummary& s);

/// One {run, slot, phase, event} line per trace entry.
void write_trace(std::ostream& out, std::size_t run, const protocol::SyncTrace& trace);

} // namespace ncia::records
