// Copyright 2026 the cerberus-sim developers. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <iosfwd>

#include "cerberus/network.hpp"
#include "cerberus/protocol.hpp"

namespace cerberus {

// Configuration errors carry the offending line of the scenario file.
class ScenarioError : public std::runtime_error {
  public:
    ScenarioError(int line, const std::string& msg)
        : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : "") + msg),
          line(line) {}
    int line = 0;
};

// A self-contained simulation setup: topology, genesis objects, transaction
// schedule, and the adversary script.
//
// File format: TOML-style sections over scalar and array values.
//   top level        protocol, shards, n, f, seed, delta, max_ticks,
//                    view_timeout, max_attempts, liveness_window, name
//   [[object]]       id "t:i", owner, shard (optional placement override)
//   [[txn]]          id, client, submit_at, inputs ["t:i"],
//                    outputs ["t:i@s" or "t:i"], no_support ["t:i"]
//   [[corrupt]]      replica "s.i", silence_from, silence_to
//   [[rule]]         action drop|delay, delay, from, to, msg_type, txn,
//                    sender_shard, senders ["s.i"], receivers ["s.i"|"s.*"]
struct Scenario {
    struct Submission {
        TransactionPtr txn;
        Tick at = 0;
    };

    std::string name;
    std::string protocol = "ccb";  // ccb | ocb | pcb
    ProtocolParams params;
    uint64_t seed = 1;
    Tick delta = 10;
    Tick max_ticks = 1000000;
    Tick liveness_window = 0;  // > 0: the run must end in a reliability window
    std::vector<ObjectRecord> genesis;
    std::vector<Submission> txns;
    AdversaryScript adversary;

    // Topology, reference, and bound checks. Throws ScenarioError.
    void check() const;
};

Scenario parse_scenario(std::istream& in, const std::string& name);
Scenario load_scenario(const std::string& path);

}  // namespace cerberus
