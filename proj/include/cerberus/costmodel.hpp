// Copyright 2026 the cerberus-sim developers. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace cerberus {

// Expected total consensus steps for N transactions of k uniformly placed
// objects over s shards: each transaction involves a shard with probability
// 1 - (1 - 1/s)^k, and every involved shard runs one step.
double expected_steps(int k, int64_t s, uint64_t n);

// Seeded Monte-Carlo estimator of the same quantity.
double monte_carlo_steps(int k, int64_t s, uint64_t n, uint64_t seed);

struct CostModelRow {
    int k = 0;
    int64_t s = 0;
    double steps = 0;            // total consensus steps for n transactions
    double steps_avg_shard = 0;  // steps / s
};

std::vector<CostModelRow> sweep(const std::vector<int>& ks,
                                const std::vector<int64_t>& ss, uint64_t n,
                                uint64_t seed, bool monte_carlo);

// Column names follow the source data tables.
void write_sweep_csv(std::ostream& os, const std::vector<CostModelRow>& rows);

// Static per-protocol cost table: consensus steps per affected shard,
// cross-shard exchanges, and message-delay phases for a fault-free
// multi-shard commit.
struct ProtocolCost {
    std::string protocol;
    int consensus_per_shard = 0;  // s slots for factor 1, 2s for factor 2
    int exchanges = 0;
    int phases = 0;
};

std::vector<ProtocolCost> comparison_table();

}  // namespace cerberus
