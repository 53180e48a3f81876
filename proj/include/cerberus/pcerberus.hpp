// Copyright 2026 the cerberus-sim developers. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include "cerberus/protocol.hpp"

namespace cerberus {

// Two-step protocol with pledge-by-destruction: the first consensus round
// destroys the available inputs, a cluster-sending exchange shares the
// pledges, and a second consensus round fixes the position at which the
// outcome takes effect. Aborts reconstruct the destroyed objects there, so
// every ledger effect lands at a consensus round and replicas never block.
class PcbReplica final : public ProtocolReplica, public PbftListener {
  public:
    PcbReplica(ReplicaId self, ProtocolParams params);

    void on_message(const Envelope& env, Context& ctx) override;
    void pbft_decide(Round round, View view, const Proposal& proposal, Context& ctx) override;
    bool pbft_ready(const Proposal& proposal) override;

  private:
    struct TxnState {
        TransactionPtr txn;
        std::set<ShardId> shards;
        std::optional<Pledge> own;
        std::vector<ObjectRecord> destroyed;  // reconstruction data for abort
        std::map<ShardId, Pledge> remote;
        std::map<ShardId, ClusterVotes> inbox;
        bool have_all = false;
        bool resolved = false;
    };

    void on_request(const ClientRequest& rq, Context& ctx);
    void on_cluster_send(const ClusterSend& cs, ReplicaId from, Context& ctx);
    void apply_ready(Context& ctx);
    void apply_pledge(Round round, View view, const TransactionPtr& txn, Context& ctx);
    void apply_outcome(Round round, const TransactionPtr& txn, bool commit, Context& ctx);
    void maybe_have_all(TxnId id, Context& ctx);
    bool global_commit(const TxnState& st) const;

    LocalPbft pbft_;
    std::map<Round, Proposal> decided_;
    Round next_apply_ = 0;
    std::map<TxnId, TxnState> txns_;
};

}  // namespace cerberus
