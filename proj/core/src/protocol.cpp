#include "ncia/protocol.hpp"

#include "ncia/error.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <fmt/ranges.h>
#include <set>

namespace ncia::protocol {

void validate_roles(std::span<const NodeRole> nodes) {
    std::set<int> seen;
    for (const auto& n : nodes) {
        if (!seen.insert(n.id).second) {
            throw InvalidArgument(fmt::format("node id {} is not unique", n.id));
        }
    }
}

std::string_view to_string(Phase p) {
    switch (p) {
    case Phase::listen:
        return "LISTEN";
    case Phase::train_interferer:
        return "TRAIN_INTERFERER";
    case Phase::train_main:
        return "TRAIN_MAIN";
    case Phase::feedback:
        return "FEEDBACK";
    case Phase::schedule:
        return "SCHEDULE";
    case Phase::done:
        return "DONE";
    }
    return "?";
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

} // namespace

std::string event_name(const Event& e) {
    return std::visit(
        overloaded{
            [](const event::Beacon& b) { return fmt::format("beacon(id={},snr_db={:.12g})", b.id, b.snr_db); },
            [](const event::PilotInterfererDone&) { return std::string("pilot_i_done"); },
            [](const event::PilotMainDone&) { return std::string("pilot_m_done"); },
            [](const event::Feedback& f) { return fmt::format("feedback(user={})", f.user); },
            [](const event::Tick&) { return std::string("tick"); },
        },
        e);
}

void ProtocolConfig::validate() const {
    if (users == 0) {
        throw InvalidArgument("protocol needs at least one UE");
    }
    if (training_symbols == 0) {
        throw InvalidArgument("each BS must send at least one training symbol");
    }
    if (slot_cap == 0) {
        throw InvalidArgument("slot cap must be positive");
    }
    if (!(miss_probability >= 0.0 && miss_probability < 1.0)) {
        throw InvalidArgument(fmt::format("miss probability must lie in [0, 1), got {}", miss_probability));
    }
}

ProtocolState initial_state(const ProtocolConfig& cfg) {
    ProtocolState s;
    s.feedback_received.assign(cfg.users, false);
    return s;
}

namespace {

[[noreturn]] void violation(const ProtocolState& s, const Event& ev) {
    throw ProtocolViolation(fmt::format("event {} not allowed in phase {} (slot {})", event_name(ev),
                                        to_string(s.phase), s.slot));
}

} // namespace

ProtocolState step(const ProtocolState& state, const Event& ev, const ProtocolConfig& cfg) {
    ProtocolState next = state;
    if (next.feedback_received.size() != cfg.users) {
        next.feedback_received.assign(cfg.users, false);
    }
    const bool is_tick = std::holds_alternative<event::Tick>(ev);

    switch (state.phase) {
    case Phase::listen:
        if (const auto* b = std::get_if<event::Beacon>(&ev)) {
            if (b->id == cfg.interferer_id && b->snr_db >= cfg.decode_threshold_db) {
                next.decoded_id = b->id;
                next.phase = Phase::train_interferer;
                next.pilots_seen = 0;
            }
        } else if (!is_tick) {
            violation(state, ev);
        }
        break;
    case Phase::train_interferer:
        if (std::holds_alternative<event::PilotInterfererDone>(ev)) {
            if (++next.pilots_seen == cfg.training_symbols) {
                next.phase = Phase::train_main;
                next.pilots_seen = 0;
            }
        } else if (!is_tick) {
            violation(state, ev);
        }
        break;
    case Phase::train_main:
        if (std::holds_alternative<event::PilotMainDone>(ev)) {
            if (++next.pilots_seen == cfg.training_symbols) {
                next.phase = Phase::feedback;
                next.pilots_seen = 0;
            }
        } else if (!is_tick) {
            violation(state, ev);
        }
        break;
    case Phase::feedback:
        if (const auto* f = std::get_if<event::Feedback>(&ev)) {
            if (f->user >= cfg.users || next.feedback_received[f->user]) {
                violation(state, ev);
            }
            next.feedback_received[f->user] = true;
            if (std::all_of(next.feedback_received.begin(), next.feedback_received.end(),
                            [](bool b) { return b; })) {
                next.phase = Phase::schedule;
            }
        } else if (!is_tick) {
            violation(state, ev);
        }
        break;
    case Phase::schedule:
        if (!is_tick) {
            violation(state, ev);
        }
        next.phase = Phase::done;
        break;
    case Phase::done:
        violation(state, ev);
    }
    ++next.slot;
    return next;
}

SyncTrace run_sync(const ProtocolConfig& cfg, Rng& rng) {
    cfg.validate();
    std::bernoulli_distribution missed(cfg.miss_probability);
    SyncTrace trace;
    ProtocolState s = initial_state(cfg);

    auto apply = [&](const Event& ev) {
        s = step(s, ev, cfg);
        trace.entries.push_back({s.slot, s.phase, event_name(ev)});
    };

    while (s.phase == Phase::listen) {
        if (s.slot >= cfg.slot_cap) {
            throw SyncTimeout(fmt::format("interferer ID not decoded within {} slots", cfg.slot_cap));
        }
        const bool decodable = cfg.beacon_snr_db >= cfg.decode_threshold_db;
        if (decodable && !missed(rng)) {
            apply(event::Beacon{cfg.interferer_id, cfg.beacon_snr_db});
        } else {
            apply(event::Tick{});
        }
    }
    trace.slots_to_detect = s.slot;
    for (std::size_t i = 0; i < cfg.training_symbols; ++i) {
        apply(event::PilotInterfererDone{});
    }
    for (std::size_t i = 0; i < cfg.training_symbols; ++i) {
        apply(event::PilotMainDone{});
    }
    for (std::size_t u = 0; u < cfg.users; ++u) {
        apply(event::Feedback{u});
    }
    return trace;
}

void FeedbackBundle::add(std::size_t user, std::vector<ia::Candidate> candidates) {
    if (user >= users_) {
        throw InvalidArgument(fmt::format("feedback from user {} but only {} UEs", user, users_));
    }
    entries_[user] = std::move(candidates);
}

std::vector<std::size_t> FeedbackBundle::missing() const {
    std::vector<std::size_t> out;
    for (std::size_t u = 0; u < users_; ++u) {
        if (!entries_.contains(u)) {
            out.push_back(u);
        }
    }
    return out;
}

std::vector<ia::Candidate> collect_feedback(const FeedbackBundle& bundle) {
    if (!bundle.complete()) {
        const auto absent = bundle.missing();
        throw MissingFeedback(fmt::format("missing feedback from users {}", absent), absent);
    }
    std::vector<ia::Candidate> out;
    for (const auto& [user, list] : bundle.entries()) {
        auto sorted = list;
        std::stable_sort(sorted.begin(), sorted.end(),
                         [](const ia::Candidate& a, const ia::Candidate& b) { return a.stream < b.stream; });
        out.insert(out.end(), sorted.begin(), sorted.end());
    }
    return out;
}

} // namespace ncia::protocol
