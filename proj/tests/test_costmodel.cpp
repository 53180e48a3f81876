// Copyright 2026 the cerberus-sim developers. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "cerberus/costmodel.hpp"

using namespace cerberus;

namespace {
constexpr uint64_t kN = 1ull << 24;
double rel_err(double a, double b) { return std::abs(a - b) / b; }
}  // namespace

TEST_CASE("one shard always takes exactly one step per transaction") {
    for (int k : {1, 2, 4, 16, 64}) CHECK(expected_steps(k, 1, kN) == double(kN));
    CHECK(monte_carlo_steps(3, 1, kN, 7) == double(kN));
}

TEST_CASE("closed form: N * s * (1 - (1 - 1/s)^k) at a few exact points") {
    // k=2, s=2: 2^24 * 2 * 3/4
    CHECK(expected_steps(2, 2, kN) == doctest::Approx(25165824.0));
    // k=2, s=4: 2^24 * 4 * 7/16
    CHECK(expected_steps(2, 4, kN) == doctest::Approx(29360128.0));
    // many shards, few values: approaches k steps per transaction
    CHECK(rel_err(expected_steps(2, 16384, kN), 2.0 * kN) < 1e-3);
    // monotone in k and in s
    CHECK(expected_steps(4, 8, kN) > expected_steps(2, 8, kN));
    CHECK(expected_steps(4, 16, kN) > expected_steps(4, 8, kN));
}

TEST_CASE("Monte-Carlo estimates converge to the closed form") {
    uint64_t n = 1ull << 18;
    for (int k : {2, 8, 32})
        for (int64_t s : {2, 7, 128}) {
            double mc = monte_carlo_steps(k, s, n, /*seed=*/1);
            CHECK(rel_err(mc, expected_steps(k, s, n)) < 0.01);
        }
    // deterministic per seed
    CHECK(monte_carlo_steps(8, 7, n, 3) == monte_carlo_steps(8, 7, n, 3));
    CHECK(monte_carlo_steps(8, 7, n, 3) != monte_carlo_steps(8, 7, n, 4));
}

TEST_CASE("sweep emits one CSV row per (k, s) cell") {
    auto rows = sweep({2, 4}, {1, 2, 4}, 1 << 16, 1, /*monte_carlo=*/false);
    REQUIRE(rows.size() == 6);
    CHECK(rows[0].k == 2);
    CHECK(rows[0].s == 1);
    CHECK(rows[0].steps == double(1 << 16));
    for (const auto& r : rows)
        CHECK(r.steps_avg_shard == doctest::Approx(r.steps / double(r.s)));

    std::ostringstream os;
    write_sweep_csv(os, rows);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "num_values_per_txn,num_shards,num_shard_steps,num_shard_steps_avg_shard");
    std::getline(in, line);
    CHECK(line == "2,1,65536,65536");
    int data_rows = 1;
    while (std::getline(in, line)) ++data_rows;
    CHECK(data_rows == 6);
}

TEST_CASE("per-transaction protocol cost table") {
    auto table = comparison_table();
    REQUIRE(table.size() == 3);
    CHECK(table[0].protocol == "ccb");
    CHECK(table[0].consensus_per_shard == 1);
    CHECK(table[0].exchanges == 1);
    CHECK(table[0].phases == 4);
    CHECK(table[1].protocol == "ocb");
    CHECK(table[1].consensus_per_shard == 1);
    CHECK(table[1].exchanges == 3);
    CHECK(table[1].phases == 3);
    CHECK(table[2].protocol == "pcb");
    CHECK(table[2].consensus_per_shard == 2);
    CHECK(table[2].exchanges == 1);
    CHECK(table[2].phases == 7);
}
