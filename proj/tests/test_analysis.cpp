// Copyright 2026 the cerberus-sim developers. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#include "doctest.h"

#include <sstream>

#include "cerberus/analysis.hpp"

using namespace cerberus;

namespace {

Scenario parse(const std::string& text) {
    std::istringstream in(text);
    return parse_scenario(in, "test");
}

// Fault-free two-shard commit for any protocol.
RunResult commit_run(const std::string& protocol, bool record_deliveries = false) {
    Scenario sc = parse("protocol = \"" + protocol + R"("
shards = 2
n = 4
f = 1
liveness_window = 500

[[object]]
id = "0:0"
owner = 1
shard = 0

[[object]]
id = "0:1"
owner = 1
shard = 1

[[txn]]
id = 1
client = 1
submit_at = 0
inputs = ["0:0", "0:1"]
outputs = ["1:0@0", "1:1@1"]
)");
    return run_scenario(sc, record_deliveries);
}

// A hand-built run: one shard, two committed transactions spending each
// other's outputs (impossible in a real trace, but exactly what the cycle
// detector must catch).
RunResult cyclic_run() {
    RunResult run;
    run.protocol = "pcb";
    run.params.assign.num_shards = 1;
    run.params.n = 4;
    run.params.f = 1;

    auto a = std::make_shared<Transaction>();
    a->id = 1;
    a->client = 1;
    a->inputs = {ObjectId{2, 0}};
    a->outputs = {OutputSpec{ObjectId{1, 0}, 1}};
    auto b = std::make_shared<Transaction>();
    b->id = 2;
    b->client = 1;
    b->inputs = {ObjectId{1, 0}};
    b->outputs = {OutputSpec{ObjectId{2, 0}, 1}};
    run.submissions = {{a, 0}, {b, 0}};
    for (int i = 0; i < 4; ++i) {
        ReplicaSnapshot rep;
        rep.id = ReplicaId{0, i};
        rep.outcomes = {TxnOutcome{a, 0, true, 0, -1, 10},
                        TxnOutcome{b, 0, true, 1, -1, 20}};
        run.replicas.push_back(rep);
    }
    return run;
}

}  // namespace

TEST_CASE("a clean committed run satisfies every checker") {
    for (const std::string p : {"ccb", "ocb", "pcb"}) {
        RunResult run = commit_run(p);
        CheckReport rep = check_all(run);
        CHECK(rep.ok());
        CHECK(rep.requirements.liveness_checked);
        CHECK(committed_txns(run) == std::set<TxnId>{1});
        CHECK(rep.serializability.order == std::vector<TxnId>{1});
        auto orders = oracle_serial_orders(run);
        REQUIRE(orders.size() == 1);
        CHECK(orders[0] == rep.serializability.order);
    }
}

TEST_CASE("R4 catches one replica deciding differently from the rest") {
    RunResult run = commit_run("pcb");
    for (auto& rep : run.replicas)
        if (rep.id == ReplicaId{1, 2})
            for (auto& o : rep.outcomes) o.commit = false;
    CheckReport rep = check_all(run);
    CHECK(!rep.requirements.r4.ok);
    CHECK(!rep.ok());
}

TEST_CASE("R4 catches a replica deciding the same transaction twice") {
    RunResult run = commit_run("pcb");
    for (auto& rep : run.replicas)
        if (rep.id == ReplicaId{0, 0}) rep.outcomes.push_back(rep.outcomes.front());
    CHECK(!check_all(run).requirements.r4.ok);
}

TEST_CASE("corrupted replicas are exempt from the uniform-decision rule") {
    RunResult run = commit_run("pcb");
    run.corrupted.insert(ReplicaId{1, 2});
    for (auto& rep : run.replicas)
        if (rep.id == ReplicaId{1, 2}) {
            rep.corrupted = true;
            for (auto& o : rep.outcomes) o.commit = false;
        }
    CHECK(check_all(run).requirements.r4.ok);
}

TEST_CASE("the precedence cycle detector names a witness") {
    RunResult run = cyclic_run();
    SerializabilityReport rep = check_serializable(run);
    CHECK(!rep.acyclic);
    CHECK(!rep.ok());
    CHECK(rep.cycle.size() >= 2);
    CHECK(oracle_serial_orders(run).empty());
}

TEST_CASE("R3 catches two committed transactions consuming the same object") {
    RunResult run = commit_run("pcb");
    // Clone the committed transaction under a new id: same inputs, both
    // committed everywhere.
    auto dup = std::make_shared<Transaction>(*run.submissions[0].txn);
    dup->id = 9;
    dup->outputs = {OutputSpec{ObjectId{9, 0}, 1}};
    run.submissions.push_back({dup, 0});
    for (auto& rep : run.replicas) {
        TxnOutcome o = rep.outcomes.front();
        o.txn = dup;
        rep.outcomes.push_back(o);
    }
    CheckReport rep = check_all(run);
    CHECK(!rep.requirements.r3.ok);
    CHECK(!rep.serializability.replay_ok);
}

TEST_CASE("double-supported inputs expose their owner as malicious") {
    RunResult run = commit_run("pcb");
    CHECK(derive_malicious_owners(run).empty());
    auto rival = std::make_shared<Transaction>(*run.submissions[0].txn);
    rival->id = 9;
    rival->outputs = {OutputSpec{ObjectId{9, 0}, 1}};
    for (auto& [in, tok] : rival->support) tok.txn = 9;
    run.submissions.push_back({rival, 0});
    CHECK(derive_malicious_owners(run) == std::set<ClientId>{1});
}

TEST_CASE("abort conservation catches a destructed input of an aborted txn") {
    RunResult run = commit_run("pcb");
    // Pretend the txn aborted everywhere but shard 0 forgot the rollback.
    for (auto& rep : run.replicas) {
        for (auto& o : rep.outcomes) o.commit = false;
        rep.ledger.clear();
        ObjectId own = rep.id.shard == 0 ? ObjectId{0, 0} : ObjectId{0, 1};
        ObjectStatus st =
            rep.id.shard == 0 ? ObjectStatus::destructed : ObjectStatus::constructed;
        rep.ledger[own] = ObjectRecord{own, 1, st, -1};
    }
    Requirement cons = check_conservation(run);
    CHECK(!cons.ok);
}

TEST_CASE("non-divergence catches two good replicas in the same commit phase slot "
          "with different transactions") {
    RunResult run = commit_run("ocb");
    CHECK(check_non_divergence(run).ok);
    SimEvent ev;
    ev.kind = EventKind::commit_phase;
    ev.receiver = "r0.1";
    ev.shard = 0;
    ev.view = 0;
    ev.round = 0;
    ev.txn = 99;
    run.trace.add(ev);
    CHECK(!check_non_divergence(run).ok);
}

TEST_CASE("liveness is only judged inside a declared reliability window") {
    RunResult run = commit_run("pcb");
    // Remove every decision: R5 must fail while the window is declared...
    for (auto& rep : run.replicas) rep.outcomes.clear();
    run.confirmations.clear();
    CheckReport rep = check_all(run);
    CHECK(rep.requirements.liveness_checked);
    CHECK(!rep.requirements.r5.ok);
    CHECK(!rep.requirements.r6.ok);
    // ...and the same trace passes when no window is declared.
    run.liveness_window = 0;
    rep = check_all(run);
    CHECK(!rep.requirements.liveness_checked);
    CHECK(rep.requirements.r5.ok);
    CHECK(rep.requirements.r6.ok);
}

TEST_CASE("measured cost of a fault-free two-shard commit per protocol") {
    struct Want {
        const char* protocol;
        int slots, exchanges;
        Tick phases;
    };
    for (const Want w : {Want{"ccb", 2, 1, 4}, Want{"ocb", 2, 3, 3}, Want{"pcb", 4, 1, 7}}) {
        RunResult run = commit_run(w.protocol, /*record_deliveries=*/true);
        CostMetrics cost = measure_cost(run, 1);
        CHECK(cost.consensus_slots == w.slots);
        CHECK(cost.exchanges == w.exchanges);
        CHECK(cost.phases == w.phases);
    }
}
