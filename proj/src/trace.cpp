// Copyright 2026 the cerberus-sim developers. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#include "cerberus/trace.hpp"

#include <ostream>

#include "json.hpp"

namespace cerberus {

const char* event_kind_name(EventKind kind) {
    switch (kind) {
        case EventKind::delivery: return "delivery";
        case EventKind::adversary: return "adversary";
        case EventKind::discard: return "discard";
        case EventKind::decision: return "decision";
        case EventKind::view_change: return "view_change";
        case EventKind::new_view: return "new_view";
        case EventKind::accept_m: return "accept_m";
        case EventKind::commit_phase: return "commit_phase";
        case EventKind::confirm: return "confirm";
        case EventKind::phase: return "phase";
    }
    return "unknown";
}

void Trace::write_jsonl(std::ostream& os) const {
    nlohmann::json header = {{"trace_format", kFormatVersion}};
    os << header.dump() << '\n';
    for (const auto& ev : events) {
        nlohmann::json j = {
            {"time", ev.time},       {"seq", ev.seq},
            {"kind", event_kind_name(ev.kind)},
            {"sender", ev.sender},   {"receiver", ev.receiver},
            {"msg_type", ev.msg_type},
            {"shard", ev.shard},     {"round", ev.round},
            {"view", ev.view},       {"txn_id", ev.txn},
            {"decision", ev.decision},
        };
        os << j.dump() << '\n';
    }
}

}  // namespace cerberus
