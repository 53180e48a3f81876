// Copyright 2026 the cerberus-sim developers. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#include "cerberus/pcerberus.hpp"

namespace cerberus {

PcbReplica::PcbReplica(ReplicaId self, ProtocolParams params)
    : ProtocolReplica(self, std::move(params)),
      pbft_(self, cfg_, this, params_.view_timeout, params_.window) {}

void PcbReplica::on_message(const Envelope& env, Context& ctx) {
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

void PcbReplica::on_request(const ClientRequest& rq, Context& ctx) {
    if (!admissible(rq.txn, ctx)) return;
    Proposal p;
    p.kind = Proposal::Kind::pledge;
    p.txn = rq.txn;
    pbft_.enqueue(p, ctx);
}

bool PcbReplica::global_commit(const TxnState& st) const {
    bool commit = st.own->full();
    for (const auto& [s, pledge] : st.remote) commit = commit && pledge.full();
    return commit;
}

bool PcbReplica::pbft_ready(const Proposal& proposal) {
    if (proposal.kind != Proposal::Kind::outcome) return true;
    // Only vote for an outcome this replica can verify against the pledges
    // it has accepted itself; the flag is globally determined, so every
    // well-behaved replica converges on the same verdict.
    if (!proposal.txn) return false;
    auto it = txns_.find(proposal.txn->id);
    if (it == txns_.end() || !it->second.have_all) return false;
    return proposal.commit == global_commit(it->second);
}

void PcbReplica::pbft_decide(Round round, View, const Proposal& proposal, Context& ctx) {
    decided_[round] = proposal;
    apply_ready(ctx);
}

void PcbReplica::apply_ready(Context& ctx) {
    while (true) {
        auto it = decided_.find(next_apply_);
        if (it == decided_.end()) return;
        Proposal p = it->second;
        Round round = next_apply_;
        decided_.erase(it);
        ++next_apply_;
        if (p.kind == Proposal::Kind::pledge && p.txn)
            apply_pledge(round, pbft_.view(), p.txn, ctx);
        else if (p.kind == Proposal::Kind::outcome && p.txn)
            apply_outcome(round, p.txn, p.commit, ctx);
    }
}

void PcbReplica::apply_pledge(Round round, View view, const TransactionPtr& txn,
                              Context& ctx) {
    auto [it, fresh] = txns_.try_emplace(txn->id);
    TxnState& st = it->second;
    if (!fresh && st.own) {
        if (st.txn->digest() != txn->digest())
            ctx.note(SimEvent{0, 0, EventKind::discard, "", to_string(self_),
                              "duplicate-id", self_.shard, round, 0, txn->id, ""});
        return;
    }
    st.txn = txn;
    st.shards = shards_of_txn(*txn);

    LocalInputs li = local_inputs(*txn, self_.shard, params_.assign, ledger_);
    // Pledge by destruction: the available inputs cease to exist here and
    // are reconstructed at the outcome round if the transaction aborts.
    for (const auto& o : li.available) {
        st.destroyed.push_back(ledger_.at(o));
        ledger_[o].status = ObjectStatus::destructed;
    }
    st.own = Pledge{txn, self_.shard, view, round, li.required, li.available};

    if (st.shards.size() == 1) {
        // Single-shard transactions need no exchange and no second round:
        // the local pledge already decides the outcome.
        st.have_all = true;
        apply_outcome(round, txn, st.own->full(), ctx);
        return;
    }
    if (!st.own->full()) {
        // The outcome is already fixed as abort; reconstruct right away and
        // let the exchanged pledge carry the verdict to the other shards.
        for (ShardId s : st.shards) {
            if (s == self_.shard) continue;
            ctx.broadcast_shard(s, ClusterSend{self_.shard, *st.own});
        }
        apply_outcome(round, txn, false, ctx);
        return;
    }
    for (ShardId s : st.shards) {
        if (s == self_.shard) continue;
        ctx.broadcast_shard(s, ClusterSend{self_.shard, *st.own});
    }
    maybe_have_all(txn->id, ctx);
}

void PcbReplica::on_cluster_send(const ClusterSend& cs, ReplicaId from, Context& ctx) {
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
        maybe_have_all(st.txn->id, ctx);
    }
}

void PcbReplica::maybe_have_all(TxnId id, Context& ctx) {
    TxnState& st = txns_.at(id);
    if (st.have_all || !st.own) return;
    if (st.resolved) {  // already aborted locally at the pledge round
        st.have_all = true;
        return;
    }
    for (ShardId s : st.shards)
        if (s != self_.shard && !st.remote.count(s)) return;
    for (const auto& [s, pledge] : st.remote)
        if (pledge.txn->digest() != st.txn->digest()) return;
    st.have_all = true;
    // Every replica queues the outcome round; whoever is primary proposes
    // it, and the stall timer covers a primary that will not.
    Proposal p;
    p.kind = Proposal::Kind::outcome;
    p.txn = st.txn;
    p.commit = global_commit(st);
    pbft_.enqueue(p, ctx);
    pbft_.poke(ctx);  // an outcome proposal may be waiting for this verdict
}

void PcbReplica::apply_outcome(Round round, const TransactionPtr& txn, bool commit,
                               Context& ctx) {
    auto it = txns_.find(txn->id);
    if (it == txns_.end() || !it->second.own) return;
    TxnState& st = it->second;
    if (st.resolved) return;
    if (st.txn->digest() != txn->digest()) return;
    st.resolved = true;
    if (commit) {
        construct_local_outputs(*st.txn, round);
    } else {
        for (const auto& rec : st.destroyed) {
            ledger_[rec.id] = rec;
            ledger_[rec.id].status = ObjectStatus::constructed;
            ledger_[rec.id].constructed_in_round = round;
        }
    }
    record_outcome(st.txn, commit, st.own->round, round, ctx);
}

}  // namespace cerberus
