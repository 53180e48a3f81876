// Copyright 2026 the cerberus-sim developers. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#include "cerberus/costmodel.hpp"

#include <cmath>
#include <ostream>


namespace cerberus {

namespace {

// splitmix64: tiny, fast, and good enough for placement sampling.
struct SplitMix64 {
    uint64_t state;
    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
};

}  // namespace

double expected_steps(int k, int64_t s, uint64_t n) {
    if (k < 1 || s < 1) return 0;
    double miss = std::pow(1.0 - 1.0 / double(s), double(k));
    return double(n) * double(s) * (1.0 - miss);
}

double monte_carlo_steps(int k, int64_t s, uint64_t n, uint64_t seed) {
    if (k < 1 || s < 1) return 0;
    if (s == 1) return double(n);  // every transaction involves the one shard
    SplitMix64 rng{seed ^ (uint64_t(k) << 32) ^ uint64_t(s)};
    uint64_t total = 0;
    // Epoch-stamped scratch array: counting distinct shards is O(k) per
    // transaction without clearing between transactions.
    std::vector<uint64_t> stamp(size_t(s), 0);
    for (uint64_t i = 0; i < n; ++i) {
        uint64_t epoch = i + 1;
        for (int j = 0; j < k; ++j) {
            // multiply-shift maps a uniform 64-bit draw onto [0, s)
            uint64_t shard =
                uint64_t((unsigned __int128)rng.next() * uint64_t(s) >> 64);
            if (stamp[shard] != epoch) {
                stamp[shard] = epoch;
                ++total;
            }
        }
    }
    return double(total);
}

std::vector<CostModelRow> sweep(const std::vector<int>& ks,
                                const std::vector<int64_t>& ss, uint64_t n,
                                uint64_t seed, bool monte_carlo) {
    std::vector<CostModelRow> rows;
    for (int k : ks)
        for (int64_t s : ss) {
            double steps =
                monte_carlo ? monte_carlo_steps(k, s, n, seed) : expected_steps(k, s, n);
            rows.push_back(CostModelRow{k, s, steps, steps / double(s)});
        }
    return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<CostModelRow>& rows) {
    os << "num_values_per_txn,num_shards,num_shard_steps,num_shard_steps_avg_shard\n";
    for (const auto& r : rows)
        os << r.k << "," << r.s << "," << uint64_t(std::llround(r.steps)) << ","
           << uint64_t(std::llround(r.steps_avg_shard)) << "\n";
}

std::vector<ProtocolCost> comparison_table() {
    return {
        ProtocolCost{"ccb", 1, 1, 4},
        ProtocolCost{"ocb", 1, 3, 3},
        ProtocolCost{"pcb", 2, 1, 7},
    };
}

}  // namespace cerberus
