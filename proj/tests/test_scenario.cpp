// Copyright 2026 the cerberus-sim developers. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#include "doctest.h"

#include <sstream>

#include "cerberus/scenario.hpp"

using namespace cerberus;

namespace {

Scenario parse(const std::string& text) {
    std::istringstream in(text);
    return parse_scenario(in, "test");
}

// The line the parser blames for a given broken input.
int error_line(const std::string& text) {
    try {
        parse(text);
    } catch (const ScenarioError& e) {
        return e.line;
    }
    FAIL("expected a ScenarioError");
    return -1;
}

}  // namespace

TEST_CASE("a full scenario file round-trips into its parts") {
    Scenario sc = parse(R"(
# comment lines and blanks are ignored
name = "demo"          # trailing comments too
protocol = "ocb"
shards = 2
n = 7
f = 2
seed = 42
delta = 5
max_ticks = 9000
view_timeout = 99
max_attempts = 3
liveness_window = 500

[[object]]
id = "0:0"
owner = 2
shard = 1

[[txn]]
id = 4
client = 2
submit_at = 30
inputs = ["0:0"]
outputs = ["4:0@0", "4:1"]

[[txn]]
id = 5
client = 1
inputs = ["4:0"]
no_support = ["4:0"]

[[corrupt]]
replica = "1.3"
silence_from = 10
silence_to = 60

[[rule]]
action = "delay"
delay = 20
from = 1
to = 50
msg_type = "GPrepare"
txn = 4
sender_shard = 1
senders = ["1.3"]
receivers = ["0.*", "c2"]
)");

    CHECK(sc.name == "demo");
    CHECK(sc.protocol == "ocb");
    CHECK(sc.params.assign.num_shards == 2);
    CHECK(sc.params.n == 7);
    CHECK(sc.params.f == 2);
    CHECK(sc.seed == 42);
    CHECK(sc.delta == 5);
    CHECK(sc.max_ticks == 9000);
    CHECK(sc.params.view_timeout == 99);
    CHECK(sc.params.max_attempts == 3);
    CHECK(sc.liveness_window == 500);

    REQUIRE(sc.genesis.size() == 1);
    CHECK(sc.genesis[0].id == ObjectId{kGenesisTxn, 0});
    CHECK(sc.genesis[0].owner == 2);
    CHECK(sc.params.assign.placement(ObjectId{kGenesisTxn, 0}) == 1);

    REQUIRE(sc.txns.size() == 2);
    const auto& t4 = *sc.txns[0].txn;
    CHECK(sc.txns[0].at == 30);
    CHECK(t4.client == 2);
    REQUIRE(t4.outputs.size() == 2);
    CHECK(t4.outputs[0].owner == 2);
    CHECK(sc.params.assign.placement(ObjectId{4, 0}) == 0);
    // the minted input carries the declaring owner's token
    REQUIRE(t4.support.count(ObjectId{kGenesisTxn, 0}));
    CHECK(t4.support.at(ObjectId{kGenesisTxn, 0}).owner == 2);
    // t5 spends t4's output but explicitly skips the support token
    const auto& t5 = *sc.txns[1].txn;
    CHECK(t5.inputs == std::vector<ObjectId>{ObjectId{4, 0}});
    CHECK(t5.support.empty());

    REQUIRE(sc.adversary.corrupted.count(ReplicaId{1, 3}));
    CHECK(sc.adversary.silenced.at(ReplicaId{1, 3}) == std::pair<Tick, Tick>{10, 60});
    REQUIRE(sc.adversary.rules.size() == 1);
    const auto& rule = sc.adversary.rules[0];
    CHECK(rule.action == AdversaryRule::Action::delay);
    CHECK(rule.extra_delay == 20);
    CHECK(rule.msg_type == "GPrepare");
    CHECK(rule.txn == 4);
    CHECK(rule.sender_shard == 1);
    CHECK(rule.senders == std::set<NodeId>{NodeId::of(ReplicaId{1, 3})});
    CHECK(rule.receivers.size() == 8);  // 0.* expands to n replicas, plus c2
    CHECK(rule.receivers.count(NodeId::of_client(2)));
}

TEST_CASE("parse errors carry the offending line number") {
    CHECK(error_line("protocol = \"ccb\"\nshards =") == 2);
    CHECK(error_line("shards = \"two\"") == 1);
    CHECK(error_line("n = 4\nn = 5") == 2);
    CHECK(error_line("bogus_key = 1") == 1);
    CHECK(error_line("[[bogus]]\nid = 1") == 1);
    CHECK(error_line("just a line") == 1);
    CHECK(error_line("s = \"unterminated") == 1);
}

TEST_CASE("reference and bound violations are rejected") {
    // input never declared
    CHECK_THROWS_AS(parse("[[txn]]\nid = 1\ninputs = [\"0:0\"]"), ScenarioError);
    // outputs must be minted under the transaction's own id
    CHECK_THROWS_AS(parse("[[object]]\nid = \"0:0\"\n"
                          "[[txn]]\nid = 1\ninputs = [\"0:0\"]\noutputs = [\"2:0\"]"),
                    ScenarioError);
    // same object declared twice
    CHECK_THROWS_AS(parse("[[object]]\nid = \"0:0\"\n[[object]]\nid = \"0:0\""),
                    ScenarioError);
    // n must exceed 3f
    CHECK_THROWS_AS(parse("n = 6\nf = 2"), ScenarioError);
    // more than f corrupted replicas in one shard
    CHECK_THROWS_AS(parse("[[corrupt]]\nreplica = \"0.0\"\n"
                          "[[corrupt]]\nreplica = \"0.1\""),
                    ScenarioError);
    // corrupted replica outside the topology
    CHECK_THROWS_AS(parse("[[corrupt]]\nreplica = \"3.0\""), ScenarioError);
    // placement override outside the shard range
    CHECK_THROWS_AS(parse("[[object]]\nid = \"0:0\"\nshard = 9"), ScenarioError);
}

TEST_CASE("loading a missing scenario file fails cleanly") {
    CHECK_THROWS_AS(load_scenario("/nonexistent/path.scenario"), std::exception);
}
