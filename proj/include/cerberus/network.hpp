// Copyright 2026 the cerberus-sim developers. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <map>
#include <memory>
#include <queue>
#include <set>

#include "cerberus/messages.hpp"
#include "cerberus/trace.hpp"

namespace cerberus {

struct Envelope {
    NodeId sender;
    NodeId receiver;
    Tick sent_at = 0;
    Message payload;
};

// Scripted Byzantine adversary. Rules shape the delivery of matched
// messages; corruption and injection are bounded by f per shard (validated
// at scenario load). Drop/delay rules may also target good senders, which
// models unreliable network periods.
struct AdversaryRule {
    enum class Action : uint8_t { drop, delay };
    Action action = Action::drop;
    Tick extra_delay = 0;      // delay only
    Tick from_time = 0;
    Tick to_time = INT64_MAX;  // exclusive
    std::string msg_type;      // empty = any
    ShardId sender_shard = -1; // -1 = any
    std::set<NodeId> senders;   // empty = any
    std::set<NodeId> receivers; // empty = any
    TxnId txn = 0;             // 0 = any

    bool matches(const Envelope& env, Tick now) const;
};

struct Injection {
    Tick time = 0;
    Envelope envelope;  // sender must be a corrupted replica
};

struct AdversaryScript {
    std::set<ReplicaId> corrupted;
    // Silenced intervals per corrupted replica: all outgoing messages dropped.
    std::map<ReplicaId, std::pair<Tick, Tick>> silenced;
    std::vector<AdversaryRule> rules;
    std::vector<Injection> injections;

    // First tick from which no rule or silence affects good-sender traffic.
    Tick reliable_from() const;
};

class Simulation;

// Context handed to actors while they process one event.
class Context {
  public:
    Context(Simulation& sim, Tick now) : sim_(sim), now_(now) {}

    Tick now() const { return now_; }
    void send(NodeId to, Message msg);
    void broadcast_shard(ShardId shard, Message msg, bool include_self = true);
    // Self-addressed, exempt from the delay model and the adversary.
    void schedule_timer(Tick delay, TimerFire timer);
    void note(SimEvent ev);
    Trace& trace();
    NodeId self() const { return self_; }

  private:
    friend class Simulation;
    Simulation& sim_;
    Tick now_;
    NodeId self_;
};

class Actor {
  public:
    virtual ~Actor() = default;
    virtual void on_message(const Envelope& env, Context& ctx) = 0;
};

class Simulation {
  public:
    Simulation(int num_shards, int replicas_per_shard, Tick delta);

    void set_adversary(AdversaryScript script);
    void add_actor(NodeId id, std::unique_ptr<Actor> actor);
    Actor* actor(NodeId id);

    // External kick-off (client request schedules etc.).
    void post(Tick at, Envelope env);

    // Runs to quiescence (empty queue). Returns the final tick.
    Tick run(Tick max_ticks = INT64_MAX);

    Tick now() const { return now_; }
    Trace& trace() { return trace_; }
    int num_shards() const { return num_shards_; }
    int replicas_per_shard() const { return replicas_per_shard_; }
    Tick delta() const { return delta_; }
    const AdversaryScript& adversary() const { return adversary_; }
    bool is_corrupted(ReplicaId r) const { return adversary_.corrupted.count(r) > 0; }

  private:
    friend class Context;
    struct QueuedEnvelope {
        Tick at;
        uint64_t seq;
        Envelope env;
        bool operator>(const QueuedEnvelope& other) const {
            return std::tie(at, seq) > std::tie(other.at, other.seq);
        }
    };

    void dispatch(Envelope env, Tick send_time);
    void enqueue(Tick at, Envelope env);

    int num_shards_;
    int replicas_per_shard_;
    Tick delta_;
    Tick now_ = 0;
    uint64_t next_seq_ = 0;
    std::priority_queue<QueuedEnvelope, std::vector<QueuedEnvelope>, std::greater<>> queue_;
    std::map<NodeId, std::unique_ptr<Actor>> actors_;
    AdversaryScript adversary_;
    Trace trace_;
};

}  // namespace cerberus
