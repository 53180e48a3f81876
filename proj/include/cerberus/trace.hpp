// Copyright 2026 the cerberus-sim developers. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cerberus/ids.hpp"

namespace cerberus {

enum class EventKind : uint8_t {
    delivery,      // a message handed to its receiver
    adversary,     // a message dropped or delayed by the adversary script
    discard,       // a replica discarded an invalid/uninvolved request
    decision,      // a replica decided commit/abort for a transaction
    view_change,   // a replica initiated a view change / recovery request
    new_view,      // a replica installed a new view
    accept_m,      // a replica accepted a global preprepare certificate
    commit_phase,  // a replica entered the global commit phase for an M
    confirm,       // a client assembled matching confirmations for all shards
    phase,         // protocol phase boundary annotation
};

const char* event_kind_name(EventKind kind);

struct SimEvent {
    Tick time = 0;
    uint64_t seq = 0;
    EventKind kind = EventKind::delivery;
    std::string sender;    // node label, empty when not applicable
    std::string receiver;  // node label of the acting node
    std::string msg_type;
    ShardId shard = -1;
    Round round = -1;
    View view = 0;
    TxnId txn = 0;
    // decision events: "Commit" / "Abort"; accept_m & commit_phase: M digest hex
    std::string decision;
};

struct Trace {
    // version header for persisted traces
    static constexpr int kFormatVersion = 1;

    std::vector<SimEvent> events;
    bool record_deliveries = false;

    void add(SimEvent ev) {
        ev.seq = events.size();
        events.push_back(std::move(ev));
    }
    void write_jsonl(std::ostream& os) const;
};

}  // namespace cerberus
