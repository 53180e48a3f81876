// Copyright 2026 the cerberus-sim developers. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include "cerberus/client.hpp"
#include "cerberus/scenario.hpp"

namespace cerberus {

// Frozen end-of-run state of one replica.
struct ReplicaSnapshot {
    ReplicaId id;
    bool corrupted = false;
    std::map<ObjectId, ObjectRecord> ledger;
    std::vector<TxnOutcome> outcomes;
};

// Everything the checkers need: the trace plus final replica, client and
// schedule state. Immutable once returned.
struct RunResult {
    std::string protocol;
    ProtocolParams params;
    Tick delta = 10;
    Tick end_tick = 0;
    bool quiesced = false;
    Tick reliable_from = 0;   // first tick with unimpeded good-sender traffic
    Tick liveness_window = 0; // scenario-declared requirement, 0 = unchecked
    std::vector<Scenario::Submission> submissions;
    std::vector<ObjectRecord> genesis;
    std::set<ReplicaId> corrupted;
    std::vector<ReplicaSnapshot> replicas;
    std::map<ClientId, std::vector<ClientActor::Confirmation>> confirmations;
    Trace trace;

    const ReplicaSnapshot* replica(ReplicaId id) const;
};

RunResult run_scenario(const Scenario& scenario, bool record_deliveries = false);

}  // namespace cerberus
