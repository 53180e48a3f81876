// Copyright 2026 the cerberus-sim developers. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#include "cerberus/network.hpp"

#include <cassert>
#include <stdexcept>

namespace cerberus {

bool AdversaryRule::matches(const Envelope& env, Tick now) const {
    if (now < from_time || now >= to_time) return false;
    if (!msg_type.empty() && msg_type != msg_type_name(env.payload)) return false;
    if (sender_shard >= 0 &&
        (!env.sender.is_replica() || env.sender.replica.shard != sender_shard))
        return false;
    if (!senders.empty() && !senders.count(env.sender)) return false;
    if (!receivers.empty() && !receivers.count(env.receiver)) return false;
    if (txn != 0 && msg_txn(env.payload) != txn) return false;
    return true;
}

Tick AdversaryScript::reliable_from() const {
    Tick t = 0;
    for (const auto& [r, window] : silenced) t = std::max(t, window.second);
    for (const auto& rule : rules)
        if (rule.to_time != INT64_MAX) t = std::max(t, rule.to_time);
        else throw std::runtime_error("adversary rule without an end time");
    for (const auto& inj : injections) t = std::max(t, inj.time + 1);
    return t;
}

void Context::send(NodeId to, Message msg) {
    sim_.dispatch(Envelope{self_, to, now_, std::move(msg)}, now_);
}

void Context::broadcast_shard(ShardId shard, Message msg, bool include_self) {
    for (int i = 0; i < sim_.replicas_per_shard(); ++i) {
        NodeId to = NodeId::of(ReplicaId{shard, i});
        if (!include_self && to == self_) continue;
        send(to, msg);
    }
}

void Context::schedule_timer(Tick delay, TimerFire timer) {
    sim_.enqueue(now_ + delay, Envelope{self_, self_, now_, timer});
}

void Context::note(SimEvent ev) {
    ev.time = now_;
    sim_.trace_.add(std::move(ev));
}

Trace& Context::trace() { return sim_.trace_; }

Simulation::Simulation(int num_shards, int replicas_per_shard, Tick delta)
    : num_shards_(num_shards), replicas_per_shard_(replicas_per_shard), delta_(delta) {}

void Simulation::set_adversary(AdversaryScript script) {
    adversary_ = std::move(script);
    for (const auto& inj : adversary_.injections) {
        if (!inj.envelope.sender.is_replica() ||
            !adversary_.corrupted.count(inj.envelope.sender.replica))
            throw std::runtime_error("injected message from a non-corrupted sender");
        enqueue(inj.time, inj.envelope);
    }
}

void Simulation::add_actor(NodeId id, std::unique_ptr<Actor> actor) {
    actors_[id] = std::move(actor);
}

Actor* Simulation::actor(NodeId id) {
    auto it = actors_.find(id);
    return it == actors_.end() ? nullptr : it->second.get();
}

void Simulation::post(Tick at, Envelope env) { enqueue(at, std::move(env)); }

void Simulation::enqueue(Tick at, Envelope env) {
    queue_.push(QueuedEnvelope{at, next_seq_++, std::move(env)});
}

void Simulation::dispatch(Envelope env, Tick send_time) {
    // Timers go through enqueue directly, never through dispatch.
    assert(!std::holds_alternative<TimerFire>(env.payload));
    Tick delay = delta_;
    if (env.sender.is_replica()) {
        auto sil = adversary_.silenced.find(env.sender.replica);
        if (sil != adversary_.silenced.end() && send_time >= sil->second.first &&
            send_time < sil->second.second) {
            trace_.add(SimEvent{send_time, 0, EventKind::adversary, to_string(env.sender),
                                to_string(env.receiver), msg_type_name(env.payload), -1, -1, 0,
                                msg_txn(env.payload), "silenced"});
            return;
        }
    }
    for (const auto& rule : adversary_.rules) {
        if (!rule.matches(env, send_time)) continue;
        if (rule.action == AdversaryRule::Action::drop) {
            trace_.add(SimEvent{send_time, 0, EventKind::adversary, to_string(env.sender),
                                to_string(env.receiver), msg_type_name(env.payload), -1, -1, 0,
                                msg_txn(env.payload), "dropped"});
            return;
        }
        delay += rule.extra_delay;
    }
    enqueue(send_time + delay, std::move(env));
}

Tick Simulation::run(Tick max_ticks) {
    while (!queue_.empty()) {
        QueuedEnvelope top = queue_.top();
        queue_.pop();
        now_ = top.at;
        if (now_ > max_ticks) break;
        auto it = actors_.find(top.env.receiver);
        if (it == actors_.end()) continue;
        if (trace_.record_deliveries &&
            !std::holds_alternative<TimerFire>(top.env.payload)) {
            trace_.add(SimEvent{now_, 0, EventKind::delivery, to_string(top.env.sender),
                                to_string(top.env.receiver), msg_type_name(top.env.payload),
                                -1, -1, 0, msg_txn(top.env.payload), ""});
        }
        Context ctx(*this, now_);
        ctx.self_ = top.env.receiver;
        it->second->on_message(top.env, ctx);
    }
    return now_;
}

}  // namespace cerberus
