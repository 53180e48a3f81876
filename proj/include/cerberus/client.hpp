// Copyright 2026 the cerberus-sim developers. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include "cerberus/protocol.hpp"

namespace cerberus {

// A client broadcasts its request to every replica of every affected shard,
// retries on a timer until confirmed, and confirms once each shard delivers
// n - 2f matching outcome notifications (f may be forged, another f of the
// well-behaved ones may be slow).
class ClientActor final : public Actor {
  public:
    struct Plan {
        TransactionPtr txn;
        Tick submit_at = 0;
    };
    struct Confirmation {
        TransactionPtr txn;
        bool commit = false;
        Tick at = 0;
    };

    ClientActor(ClientId id, ProtocolParams params, int max_retries = 5,
                Tick retry_timeout = 400);

    // Registers a submission; the runner posts the kick-off timer.
    int add_plan(TransactionPtr txn, Tick at);

    void on_message(const Envelope& env, Context& ctx) override;

    const std::vector<Confirmation>& confirmations() const { return confirmations_; }
    bool confirmed(TxnId id) const;

  private:
    struct Pending {
        TransactionPtr txn;
        std::set<ShardId> shards;
        // per shard, per outcome: distinct informing replicas
        std::map<ShardId, std::map<bool, std::set<ReplicaId>>> informs;
        int attempts = 0;
        bool done = false;
    };

    void submit(Pending& p, Context& ctx);
    void on_inform(const Inform& inform, ReplicaId from, Context& ctx);

    ClientId id_;
    ProtocolParams params_;
    int max_retries_;
    Tick retry_timeout_;
    std::vector<Plan> plans_;
    std::map<TxnId, Pending> pending_;
    std::vector<Confirmation> confirmations_;
};

}  // namespace cerberus
