// Copyright 2026 the cerberus-sim developers. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#include "doctest.h"

#include "cerberus/object_model.hpp"

using namespace cerberus;

namespace {

Transaction make_txn(TxnId id, ClientId client, std::vector<ObjectId> inputs,
                     int num_outputs) {
    Transaction t;
    t.id = id;
    t.client = client;
    t.inputs = std::move(inputs);
    for (int i = 0; i < num_outputs; ++i)
        t.outputs.push_back(OutputSpec{ObjectId{id, uint32_t(i)}, client});
    return t;
}

}  // namespace

TEST_CASE("well-formedness rejects malformed transactions") {
    Transaction t = make_txn(7, 1, {{1, 0}, {2, 0}}, 2);
    CHECK(t.well_formed());

    Transaction no_inputs = t;
    no_inputs.inputs.clear();
    CHECK(!no_inputs.well_formed());

    Transaction unsorted = t;
    std::swap(unsorted.inputs[0], unsorted.inputs[1]);
    CHECK(!unsorted.well_formed());

    Transaction dup = t;
    dup.inputs = {{1, 0}, {1, 0}};
    CHECK(!dup.well_formed());

    // Outputs must be minted under the transaction's own id: recreation of
    // an existing object is structurally impossible.
    Transaction stale_output = t;
    stale_output.outputs[0].id = ObjectId{3, 0};
    CHECK(!stale_output.well_formed());
}

TEST_CASE("placement respects overrides and stays in range") {
    ShardAssignment assign;
    assign.num_shards = 4;
    for (TxnId t = 0; t < 50; ++t)
        for (uint32_t i = 0; i < 3; ++i) {
            ShardId s = assign.placement(ObjectId{t, i});
            CHECK(s >= 0);
            CHECK(s < 4);
            // deterministic
            CHECK(assign.placement(ObjectId{t, i}) == s);
        }
    assign.overrides[ObjectId{5, 0}] = 2;
    CHECK(assign.placement(ObjectId{5, 0}) == 2);
}

TEST_CASE("shards_of unions input and output placements") {
    ShardAssignment assign;
    assign.num_shards = 3;
    assign.overrides[ObjectId{1, 0}] = 0;
    assign.overrides[ObjectId{2, 0}] = 1;
    assign.overrides[ObjectId{9, 0}] = 2;
    Transaction t = make_txn(9, 1, {{1, 0}, {2, 0}}, 1);
    CHECK(shards_of(t, assign) == std::set<ShardId>{0, 1, 2});
}

TEST_CASE("validity follows the support-token rule") {
    std::map<ObjectId, ClientId> owner_of;
    owner_of[{1, 0}] = 10;
    owner_of[{2, 0}] = 11;

    Transaction t = make_txn(9, 10, {{1, 0}, {2, 0}}, 1);
    t.support[{1, 0}] = SupportToken{10, 9};
    t.support[{2, 0}] = SupportToken{11, 9};
    CHECK(validate(t, owner_of, {}).valid);

    SUBCASE("missing token from a well-behaved owner invalidates") {
        t.support.erase({2, 0});
        auto report = validate(t, owner_of, {});
        CHECK(!report.valid);
        CHECK(report.missing_support == std::vector<ObjectId>{{2, 0}});
    }
    SUBCASE("token naming the wrong owner invalidates") {
        t.support[{2, 0}] = SupportToken{10, 9};
        auto report = validate(t, owner_of, {});
        CHECK(!report.valid);
        CHECK(report.forged_support == std::vector<ObjectId>{{2, 0}});
    }
    SUBCASE("a malicious owner's objects never invalidate") {
        t.support.erase({2, 0});
        CHECK(validate(t, owner_of, {11}).valid);
    }
    SUBCASE("a token bound to another transaction id is a forgery") {
        t.support[{2, 0}] = SupportToken{11, 8};
        CHECK(!validate(t, owner_of, {}).valid);
    }
}

TEST_CASE("local_inputs splits required from available") {
    ShardAssignment assign;
    assign.num_shards = 2;
    assign.overrides[ObjectId{1, 0}] = 0;
    assign.overrides[ObjectId{2, 0}] = 0;
    assign.overrides[ObjectId{3, 0}] = 1;
    assign.overrides[ObjectId{9, 0}] = 0;

    std::map<ObjectId, ObjectRecord> ledger;
    ledger[{1, 0}] = ObjectRecord{{1, 0}, 10, ObjectStatus::constructed, -1};
    ledger[{2, 0}] = ObjectRecord{{2, 0}, 10, ObjectStatus::pledged, -1};

    Transaction t = make_txn(9, 10, {{1, 0}, {2, 0}, {3, 0}}, 1);

    LocalInputs li = local_inputs(t, 0, assign, ledger);
    CHECK(li.required == std::vector<ObjectId>{{1, 0}, {2, 0}});
    // pledged objects are required but not available
    CHECK(li.available == std::vector<ObjectId>{{1, 0}});

    std::map<ObjectId, ObjectRecord> empty;
    LocalInputs li1 = local_inputs(t, 1, assign, empty);
    CHECK(li1.required == std::vector<ObjectId>{{3, 0}});
    CHECK(li1.available.empty());

    // shard 1 is involved only through outputs when inputs live elsewhere
    Transaction out_only = make_txn(9, 10, {{1, 0}}, 1);
    ShardAssignment a2 = assign;
    a2.overrides[ObjectId{9, 0}] = 1;
    LocalInputs li2 = local_inputs(out_only, 1, a2, empty);
    CHECK(li2.required.empty());

    CHECK_THROWS_AS(local_inputs(out_only, 1, assign, empty), ShardInvolvementError);
}
