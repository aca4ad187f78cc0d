#pragma once

#include "ncia/ia.hpp"
#include "ncia/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

/// Over-the-air synchronisation and feedback sequence: the interfering BS
/// beacons its ID, the main BS waits until it decodes that ID, both BSs send
/// training symbols in turn, every UE feeds back its candidates over a
/// lossless wire, and the main BS schedules.
namespace ncia::protocol {

enum class Role { main_bs, interfering_bs, ue };

struct NodeRole {
    Role role;
    int id;
};

/// Throws InvalidArgument if two nodes share an ID.
void validate_roles(std::span<const NodeRole> nodes);

enum class Phase { listen, train_interferer, train_main, feedback, schedule, done };

std::string_view to_string(Phase p);

namespace event {
struct Beacon {
    int id;
    double snr_db;
};
struct PilotInterfererDone {};
struct PilotMainDone {};
struct Feedback {
    std::size_t user;
};
struct Tick {};
} // namespace event

using Event = std::variant<event::Beacon, event::PilotInterfererDone, event::PilotMainDone,
                           event::Feedback, event::Tick>;

std::string event_name(const Event& e);

struct ProtocolConfig {
    int interferer_id = 7;
    std::size_t users = 3;
    std::size_t training_symbols = 1; ///< OFDM training symbols per BS
    std::size_t slot_cap = 10'000;
    double decode_threshold_db = 3.0;
    double beacon_snr_db = 10.0;
    double miss_probability = 0.0;

    void validate() const;
};

struct ProtocolState {
    Phase phase = Phase::listen;
    std::uint64_t slot = 0;
    std::optional<int> decoded_id;
    std::size_t pilots_seen = 0;
    std::vector<bool> feedback_received;
};

ProtocolState initial_state(const ProtocolConfig& cfg);

/// One transition. Every accepted event advances the slot counter; an event
/// the current phase does not accept raises ProtocolViolation.
ProtocolState step(const ProtocolState& state, const Event& ev, const ProtocolConfig& cfg);

struct TraceEntry {
    std::uint64_t slot;
    Phase phase;
    std::string event;
};

struct SyncTrace {
    std::vector<TraceEntry> entries;
    std::uint64_t slots_to_detect = 0; ///< slot at which TRAIN_INTERFERER was entered
};

/// Drives the state machine from LISTEN to SCHEDULE. Each slot in LISTEN the
/// interferer beacons at cfg.beacon_snr_db; an above-threshold beacon is still
/// missed with cfg.miss_probability. Throws SyncTimeout past cfg.slot_cap.
SyncTrace run_sync(const ProtocolConfig& cfg, Rng& rng);

/// Per-UE candidate lists gathered over the feedback wire.
class FeedbackBundle {
public:
    explicit FeedbackBundle(std::size_t users) : users_(users) {}

    void add(std::size_t user, std::vector<ia::Candidate> candidates);
    std::size_t users() const noexcept { return users_; }
    bool complete() const noexcept { return entries_.size() == users_; }
    std::vector<std::size_t> missing() const;
    const std::map<std::size_t, std::vector<ia::Candidate>>& entries() const noexcept {
        return entries_;
    }

private:
    std::size_t users_;
    std::map<std::size_t, std::vector<ia::Candidate>> entries_;
};

/// Flattened user-major candidate list. Throws MissingFeedback naming the
/// absent users if the bundle is incomplete.
std::vector<ia::Candidate> collect_feedback(const FeedbackBundle& bundle);

} // namespace ncia::protocol
