// Copyright 2026 the cerberus-sim developers. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include "cerberus/consensus.hpp"

namespace cerberus {

struct ProtocolParams {
    ShardAssignment assign;
    int n = 4;
    int f = 1;
    Tick view_timeout = 50;
    int window = 16;
    // Per-transaction proposal attempts before a shard gives up (globalized
    // protocol only; retrying forever can livelock two racing transactions).
    int max_attempts = 2;
};

struct TxnOutcome {
    TransactionPtr txn;
    ShardId shard = -1;
    bool commit = false;
    Round pledge_round = -1;
    Round outcome_round = -1;  // -1 when the outcome has no dedicated round
    Tick decided_at = 0;
};

// State and behaviour shared by all three protocol replicas: the shard
// ledger, request admission, and outcome reporting.
class ProtocolReplica : public Actor {
  public:
    ProtocolReplica(ReplicaId self, ProtocolParams params);

    // Runner-side setup of genesis objects placed on this replica's shard.
    void seed_object(const ObjectRecord& rec);

    const std::map<ObjectId, ObjectRecord>& ledger() const { return ledger_; }
    const std::vector<TxnOutcome>& outcomes() const { return outcomes_; }
    ReplicaId id() const { return self_; }

  protected:
    // Admission: well-formed, this shard involved, support tokens check out
    // against the objects this shard knows. Traces a discard on failure.
    bool admissible(const TransactionPtr& txn, Context& ctx);
    std::set<ShardId> shards_of_txn(const Transaction& txn) const;
    void record_outcome(const TransactionPtr& txn, bool commit, Round pledge_round,
                        Round outcome_round, Context& ctx);
    void construct_local_outputs(const Transaction& txn, Round round);

    ReplicaId self_;
    ProtocolParams params_;
    ShardConfig cfg_;
    std::map<ObjectId, ObjectRecord> ledger_;
    std::map<ObjectId, ClientId> owner_of_;
    std::vector<TxnOutcome> outcomes_;
};

// Cluster-sending receiver state for one peer shard: copies are accepted
// once f+1 replicas of the sending shard delivered identical content.
struct ClusterVotes {
    std::map<Digest, std::set<ReplicaId>> votes;
    std::map<Digest, Pledge> payloads;

    // Returns the pledge on the copy that reached acceptance, else null.
    const Pledge* offer(const Pledge& pledge, ReplicaId from, int threshold);
};

}  // namespace cerberus
