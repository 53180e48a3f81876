// Copyright 2026 the cerberus-sim developers. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <optional>

#include "cerberus/analysis.hpp"

namespace cerberus {

struct FuzzOptions {
    std::string protocol = "pcb";
    int shards = 4;
    int n = 7;
    int f = 2;
    int max_txns = 50;
};

struct FuzzResult {
    uint64_t seed = 0;
    bool ok = true;
    std::vector<std::string> issues;
};

struct FuzzSummary {
    int runs = 0;
    int failures = 0;
    std::optional<uint64_t> first_failing_seed;
    std::vector<std::string> first_issues;
};

// Deterministic random scenario: random placements, schedules, dependencies,
// conflicts through double-supported inputs, and adversary scripts bounded
// by f corrupted replicas per shard. Interference ends before the final
// reliability window.
Scenario generate_scenario(const FuzzOptions& opt, uint64_t seed);

// Runs one generated scenario and the full invariant suite over it.
FuzzResult fuzz_one(const FuzzOptions& opt, uint64_t seed);

FuzzSummary run_fuzz(const FuzzOptions& opt, uint64_t first_seed, int count);

}  // namespace cerberus
