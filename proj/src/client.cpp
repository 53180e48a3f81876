// Copyright 2026 the cerberus-sim developers. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#include "cerberus/client.hpp"

namespace cerberus {

namespace {
enum TimerKind { kSubmit = 100, kRetry = 101 };
}

ClientActor::ClientActor(ClientId id, ProtocolParams params, int max_retries,
                         Tick retry_timeout)
    : id_(id), params_(std::move(params)), max_retries_(max_retries),
      retry_timeout_(retry_timeout) {}

int ClientActor::add_plan(TransactionPtr txn, Tick at) {
    plans_.push_back(Plan{std::move(txn), at});
    return int(plans_.size()) - 1;
}

bool ClientActor::confirmed(TxnId id) const {
    auto it = pending_.find(id);
    return it != pending_.end() && it->second.done;
}

void ClientActor::on_message(const Envelope& env, Context& ctx) {
    if (auto* t = std::get_if<TimerFire>(&env.payload)) {
        if (t->kind == kSubmit) {
            const Plan& plan = plans_.at(size_t(t->generation));
            auto [it, fresh] = pending_.try_emplace(plan.txn->id);
            if (!fresh) return;
            it->second.txn = plan.txn;
            it->second.shards = shards_of(*plan.txn, params_.assign);
            submit(it->second, ctx);
        } else if (t->kind == kRetry) {
            auto it = pending_.find(t->txn);
            if (it == pending_.end() || it->second.done) return;
            if (it->second.attempts > max_retries_) return;
            submit(it->second, ctx);
        }
        return;
    }
    if (auto* inform = std::get_if<Inform>(&env.payload)) {
        if (env.sender.is_replica()) on_inform(*inform, env.sender.replica, ctx);
    }
}

void ClientActor::submit(Pending& p, Context& ctx) {
    ++p.attempts;
    for (ShardId s : p.shards) ctx.broadcast_shard(s, ClientRequest{p.txn});
    ctx.schedule_timer(retry_timeout_, TimerFire{kRetry, 0, -1, p.txn->id});
}

void ClientActor::on_inform(const Inform& inform, ReplicaId from, Context& ctx) {
    auto it = pending_.find(inform.txn);
    if (it == pending_.end() || it->second.done) return;
    Pending& p = it->second;
    if (!p.shards.count(inform.shard) || from.shard != inform.shard) return;
    p.informs[inform.shard][inform.commit].insert(from);

    const int needed = params_.n - 2 * params_.f;
    bool commit = true;
    for (ShardId s : p.shards) {
        auto sit = p.informs.find(s);
        if (sit == p.informs.end()) return;
        bool have = false;
        for (const auto& [b, voters] : sit->second) {
            if (int(voters.size()) >= needed) {
                have = true;
                commit = commit && b;
            }
        }
        if (!have) return;
    }
    p.done = true;
    confirmations_.push_back(Confirmation{p.txn, commit, ctx.now()});
    ctx.note(SimEvent{0, 0, EventKind::confirm, "", "c" + std::to_string(id_), "", -1, -1,
                      0, p.txn->id, commit ? "Commit" : "Abort"});
}

}  // namespace cerberus
