// Copyright 2026 the cerberus-sim developers. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include "cerberus/protocol.hpp"

namespace cerberus {

// Single-step protocol with first-come-first-pledged semantics: one local
// consensus round pledges the available inputs, one cluster-sending exchange
// shares the pledges, and every shard decides commit exactly when all
// pledges are full. Aborts leave pledged objects pledged for good.
class CcbReplica final : public ProtocolReplica, public PbftListener {
  public:
    CcbReplica(ReplicaId self, ProtocolParams params);

    void on_message(const Envelope& env, Context& ctx) override;
    void pbft_decide(Round round, View view, const Proposal& proposal, Context& ctx) override;

  private:
    struct TxnState {
        TransactionPtr txn;
        std::set<ShardId> shards;
        std::optional<Pledge> own;
        std::map<ShardId, Pledge> remote;        // accepted cluster-sent pledges
        std::map<ShardId, ClusterVotes> inbox;   // per sending shard
        bool resolved = false;
    };

    void on_request(const ClientRequest& rq, Context& ctx);
    void on_cluster_send(const ClusterSend& cs, ReplicaId from, Context& ctx);
    // Applies decided rounds strictly in round order; stops at a round whose
    // transaction spends a still-unresolved earlier round's output, since
    // its availability set is not yet determined.
    void apply_ready(Context& ctx);
    bool blocked(const Transaction& txn) const;
    void apply_pledge(Round round, View view, const TransactionPtr& txn, Context& ctx);
    void maybe_resolve(TxnId id, Context& ctx);

    LocalPbft pbft_;
    std::map<Round, Proposal> decided_;  // decided, not yet applied
    Round next_apply_ = 0;
    std::map<TxnId, TxnState> txns_;
    std::map<Round, TxnId> unresolved_rounds_;  // pledged, awaiting outcome
};

}  // namespace cerberus
