// Copyright 2026 the cerberus-sim developers. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#include "cerberus/ccerberus.hpp"

#include <algorithm>

namespace cerberus {

CcbReplica::CcbReplica(ReplicaId self, ProtocolParams params)
    : ProtocolReplica(self, std::move(params)),
      pbft_(self, cfg_, this, params_.view_timeout, params_.window) {}

void CcbReplica::on_message(const Envelope& env, Context& ctx) {
    if (auto* rq = std::get_if<ClientRequest>(&env.payload)) {
        on_request(*rq, ctx);
        return;
    }
    if (auto* cs = std::get_if<ClusterSend>(&env.payload)) {
        if (env.sender.is_replica()) on_cluster_send(*cs, env.sender.replica, ctx);
        return;
    }
    pbft_.handle(env, ctx);
}

void CcbReplica::on_request(const ClientRequest& rq, Context& ctx) {
    if (!admissible(rq.txn, ctx)) return;
    Proposal p;
    p.kind = Proposal::Kind::pledge;
    p.txn = rq.txn;
    pbft_.enqueue(p, ctx);  // deduplicates retries by content
}

void CcbReplica::pbft_decide(Round round, View, const Proposal& proposal, Context& ctx) {
    decided_[round] = proposal;
    apply_ready(ctx);
}

bool CcbReplica::blocked(const Transaction& txn) const {
    // An unresolved earlier transaction whose local outputs feed this one
    // determines whether those inputs exist; availability must wait for it.
    for (const auto& [round, id] : unresolved_rounds_) {
        const TxnState& st = txns_.at(id);
        for (const auto& out : st.txn->outputs) {
            if (params_.assign.placement(out.id) != self_.shard) continue;
            if (std::binary_search(txn.inputs.begin(), txn.inputs.end(), out.id)) return true;
        }
    }
    return false;
}

void CcbReplica::apply_ready(Context& ctx) {
    while (true) {
        auto it = decided_.find(next_apply_);
        if (it == decided_.end()) return;
        const Proposal& p = it->second;
        if (p.kind == Proposal::Kind::pledge && p.txn) {
            if (blocked(*p.txn)) return;  // resumed when the round resolves
            Round round = next_apply_;
            Proposal copy = p;
            decided_.erase(it);
            ++next_apply_;
            apply_pledge(round, pbft_.view(), copy.txn, ctx);
        } else {
            decided_.erase(it);
            ++next_apply_;
        }
    }
}

void CcbReplica::apply_pledge(Round round, View view, const TransactionPtr& txn,
                              Context& ctx) {
    auto [it, fresh] = txns_.try_emplace(txn->id);
    TxnState& st = it->second;
    if (!fresh && st.own) {
        // The id was already decided in an earlier round; the first decision
        // wins everywhere because rounds are applied in consensus order.
        if (st.txn->digest() != txn->digest())
            ctx.note(SimEvent{0, 0, EventKind::discard, "", to_string(self_),
                              "duplicate-id", self_.shard, round, 0, txn->id, ""});
        return;
    }
    // A pre-existing entry without a pledge only holds remote pledges; the
    // decided payload is authoritative for this shard.
    st.txn = txn;
    st.shards = shards_of_txn(*txn);

    LocalInputs li = local_inputs(*txn, self_.shard, params_.assign, ledger_);
    for (const auto& o : li.available) ledger_[o].status = ObjectStatus::pledged;
    st.own = Pledge{txn, self_.shard, view, round, li.required, li.available};
    unresolved_rounds_[round] = txn->id;

    for (ShardId s : st.shards) {
        if (s == self_.shard) continue;
        ctx.broadcast_shard(s, ClusterSend{self_.shard, *st.own});
    }
    maybe_resolve(txn->id, ctx);
}

void CcbReplica::on_cluster_send(const ClusterSend& cs, ReplicaId from, Context& ctx) {
    // Authenticity: the claimed origin shard must match the sender's shard.
    if (from.shard != cs.from_shard || cs.from_shard == self_.shard) return;
    if (!cs.pledge.txn) return;
    auto [it, fresh] = txns_.try_emplace(cs.pledge.txn->id);
    TxnState& st = it->second;
    if (fresh) {
        st.txn = cs.pledge.txn;
        st.shards = shards_of_txn(*st.txn);
    }
    if (!st.shards.count(cs.from_shard)) return;
    const Pledge* accepted =
        st.inbox[cs.from_shard].offer(cs.pledge, from, params_.f + 1);
    if (accepted && !st.remote.count(cs.from_shard)) {
        st.remote.emplace(cs.from_shard, *accepted);
        maybe_resolve(st.txn->id, ctx);
    }
}

void CcbReplica::maybe_resolve(TxnId id, Context& ctx) {
    TxnState& st = txns_.at(id);
    if (st.resolved || !st.own) return;
    for (ShardId s : st.shards)
        if (s != self_.shard && !st.remote.count(s)) return;
    // Cross-check: remote pledges must describe the same payload.
    for (const auto& [s, pledge] : st.remote)
        if (pledge.txn->digest() != st.txn->digest()) return;

    st.resolved = true;
    bool commit = st.own->full();
    for (const auto& [s, pledge] : st.remote) commit = commit && pledge.full();

    if (commit) {
        for (const auto& o : st.own->required) ledger_[o].status = ObjectStatus::destructed;
        construct_local_outputs(*st.txn, st.own->round);
    }
    // On abort the pledged inputs stay pledged: this protocol never unlocks.
    record_outcome(st.txn, commit, st.own->round, -1, ctx);
    unresolved_rounds_.erase(st.own->round);
    apply_ready(ctx);
}

}  // namespace cerberus
