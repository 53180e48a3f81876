// Copyright 2026 the cerberus-sim developers. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include "cerberus/runner.hpp"

namespace cerberus {

// Precedence over committed transactions: tau precedes tau' when an output
// of tau is an input of tau'. Acyclic on correct runs; a topological order
// is a serial execution.
struct PrecedenceGraph {
    std::set<TxnId> nodes;
    std::map<TxnId, std::set<TxnId>> edges;  // tau -> consumers of its outputs
};

struct SerializabilityReport {
    bool acyclic = true;
    bool replay_ok = true;
    std::vector<TxnId> order;  // a valid serial execution when ok()
    std::vector<TxnId> cycle;  // witness when !acyclic
    std::vector<std::string> issues;

    bool ok() const { return acyclic && replay_ok; }
};

struct Requirement {
    bool ok = true;
    std::vector<std::string> issues;
};

// R1 validity, R2 involvement, R3 applicability, R4 uniform decisions,
// R5 service and R6 confirmation (the latter two scoped to runs that end in
// a declared reliability window).
struct RequirementReport {
    Requirement r1, r2, r3, r4, r5, r6;
    bool liveness_checked = false;

    bool ok() const {
        return r1.ok && r2.ok && r3.ok && r4.ok && r5.ok && r6.ok;
    }
};

// Aggregate verdict over one finished run.
struct CheckReport {
    RequirementReport requirements;
    SerializabilityReport serializability;
    Requirement non_divergence;  // one accepted certificate per slot (ocb)
    Requirement conservation;    // object bookkeeping balances per replica

    bool ok() const {
        return requirements.ok() && serializability.ok() && non_divergence.ok &&
               conservation.ok;
    }
    std::vector<std::string> issues() const;
};

// Measured cost of one committed transaction, in the units of the static
// comparison table.
struct CostMetrics {
    int consensus_slots = 0;  // rounds consumed across affected shards
    int exchanges = 0;        // distinct cross-shard message kinds
    Tick phases = 0;          // message delays from request arrival to decision
};

// Owners that supported two different transactions on the same object; only
// the adversary's owners can do that.
std::set<ClientId> derive_malicious_owners(const RunResult& run);

// Transactions every good replica decided commit for (requires R4 to hold
// for the answer to be canonical).
std::set<TxnId> committed_txns(const RunResult& run);

PrecedenceGraph build_precedence(const RunResult& run);
SerializabilityReport check_serializable(const RunResult& run);
RequirementReport check_requirements(const RunResult& run);
Requirement check_non_divergence(const RunResult& run);  // ocb traces
Requirement check_conservation(const RunResult& run);
CheckReport check_all(const RunResult& run);

CostMetrics measure_cost(const RunResult& run, TxnId txn);

// Brute-force oracle for small instances: tries every permutation of the
// committed transactions and returns those that replay cleanly.
std::vector<std::vector<TxnId>> oracle_serial_orders(const RunResult& run);

// Replays `order` over the genesis state; true iff every input exists at
// consumption time.
bool replay_order(const RunResult& run, const std::vector<TxnId>& order,
                  std::string* error = nullptr);

}  // namespace cerberus
