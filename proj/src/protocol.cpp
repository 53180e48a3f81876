// Copyright 2026 the cerberus-sim developers. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#include "cerberus/protocol.hpp"

namespace cerberus {

ProtocolReplica::ProtocolReplica(ReplicaId self, ProtocolParams params)
    : self_(self), params_(std::move(params)),
      cfg_{self.shard, params_.n, params_.f} {}

void ProtocolReplica::seed_object(const ObjectRecord& rec) {
    ledger_[rec.id] = rec;
    owner_of_[rec.id] = rec.owner;
}

std::set<ShardId> ProtocolReplica::shards_of_txn(const Transaction& txn) const {
    return shards_of(txn, params_.assign);
}

bool ProtocolReplica::admissible(const TransactionPtr& txn, Context& ctx) {
    const char* why = nullptr;
    if (!txn || !txn->well_formed()) {
        why = "malformed";
    } else if (!shards_of_txn(*txn).count(self_.shard)) {
        why = "uninvolved";
    } else if (!validate(*txn, owner_of_, {}).valid) {
        why = "invalid";
    }
    if (why) {
        ctx.note(SimEvent{0, 0, EventKind::discard, "", to_string(self_), why, self_.shard,
                          -1, 0, txn ? txn->id : 0, ""});
        return false;
    }
    return true;
}

void ProtocolReplica::construct_local_outputs(const Transaction& txn, Round round) {
    for (const auto& out : txn.outputs) {
        if (params_.assign.placement(out.id) != self_.shard) continue;
        ledger_[out.id] = ObjectRecord{out.id, out.owner, ObjectStatus::constructed, round};
        owner_of_[out.id] = out.owner;
    }
}

void ProtocolReplica::record_outcome(const TransactionPtr& txn, bool commit,
                                     Round pledge_round, Round outcome_round, Context& ctx) {
    outcomes_.push_back(
        TxnOutcome{txn, self_.shard, commit, pledge_round, outcome_round, ctx.now()});
    ctx.note(SimEvent{0, 0, EventKind::decision, "", to_string(self_), "", self_.shard,
                      pledge_round, 0, txn->id, commit ? "Commit" : "Abort"});
    ctx.send(NodeId::of_client(txn->client), Inform{txn->id, self_.shard, commit});
}

const Pledge* ClusterVotes::offer(const Pledge& pledge, ReplicaId from, int threshold) {
    Digest key = pledge.content_key();
    payloads.emplace(key, pledge);
    auto& voters = votes[key];
    voters.insert(from);
    if (int(voters.size()) == threshold) return &payloads.at(key);
    return nullptr;
}

}  // namespace cerberus
