// Copyright 2026 the cerberus-sim developers. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <deque>
#include <map>
#include <set>

#include "cerberus/network.hpp"

namespace cerberus {

struct ShardConfig {
    ShardId shard_id = -1;
    int n = 4;
    int f = 1;

    int nf() const { return n - f; }
    // Primary rotation: replica (v mod n) leads view v.
    int primary_index(View v) const { return int(((v % n) + n) % n); }
    bool valid() const { return n > 3 * f && f >= 0; }
};

class PbftListener {
  public:
    virtual ~PbftListener() = default;
    // Called exactly once per decided round, possibly out of round order.
    virtual void pbft_decide(Round round, View view, const Proposal& proposal,
                             Context& ctx) = 0;
    virtual void pbft_view_installed(View view, Context& ctx) { (void)view, (void)ctx; }
    // Vote gate: a replica only sends its Prepare for a proposal it can
    // verify. Return false to defer the vote; call LocalPbft::poke once the
    // missing information arrives.
    virtual bool pbft_ready(const Proposal& proposal) { (void)proposal; return true; }
};

// One shard-local PBFT instance with out-of-order rounds inside a proposal
// window, view changes on stall or primary equivocation, and vote-replay
// catch-up for replicas that missed a decided round.
class LocalPbft {
  public:
    LocalPbft(ReplicaId self, ShardConfig cfg, PbftListener* listener, Tick view_timeout,
              int window);

    // Force consensus on a proposal: the primary proposes it, everyone else
    // arms the stall timer so an ignoring primary gets replaced.
    void enqueue(const Proposal& proposal, Context& ctx);

    // Returns true if the message belonged to this engine.
    bool handle(const Envelope& env, Context& ctx);

    // Re-attempts Prepare votes deferred by pbft_ready.
    void poke(Context& ctx);

    View view() const { return view_; }
    bool is_primary() const { return cfg_.primary_index(view_) == self_.index; }
    Round max_known_round() const { return max_known_round_; }
    bool decided(Round r) const;
    bool idle() const;

  private:
    struct Slot {
        View proposal_view = -1;
        std::optional<Proposal> proposal;
        std::map<Digest, std::set<ReplicaId>> prepares;
        std::map<Digest, std::set<ReplicaId>> commits;
        View prepared_in_view = -1;  // last view this replica sent a prepare for
        View committed_in_view = -1;
        bool decided = false;
        Proposal decided_proposal;
    };

    void propose_pending(Context& ctx);
    void start_round(Round round, const Proposal& proposal, Context& ctx);
    void on_preprepare(const PrePrepare& msg, ReplicaId from, Context& ctx);
    void on_prepare(const Prepare& msg, ReplicaId from, Context& ctx);
    void on_commit(const Commit& msg, ReplicaId from, Context& ctx);
    void on_view_change(const ViewChange& msg, ReplicaId from, Context& ctx);
    void on_new_view(const NewView& msg, ReplicaId from, Context& ctx);
    void on_timer(const TimerFire& timer, Context& ctx);
    void maybe_prepare(Round round, Context& ctx);
    void maybe_commit(Round round, Context& ctx);
    void maybe_decide(Round round, Context& ctx);
    void decide(Round round, Slot& slot, Context& ctx);
    void replay_decided(Round round, ReplicaId to, Context& ctx);
    void start_view_change(View target, Context& ctx);
    void install_view(View view, Context& ctx);
    void arm_timer(Context& ctx);
    bool has_pending_work() const;
    std::vector<Round> undecided_rounds() const;
    Slot& slot(Round r) { return slots_[r]; }

    ReplicaId self_;
    ShardConfig cfg_;
    PbftListener* listener_;
    Tick view_timeout_;
    int window_;

    View view_ = 0;
    Round next_propose_round_ = 0;
    Round lowest_undecided_ = 0;
    Round max_known_round_ = -1;
    std::map<Round, Slot> slots_;
    std::deque<Proposal> queue_;
    std::set<Digest> queued_or_proposed_;
    // View-change bookkeeping: votes per target view.
    std::map<View, std::map<ReplicaId, ViewChange>> vc_votes_;
    // decided rounds already replayed to a peer, to bound catch-up traffic
    std::set<std::pair<Round, ReplicaId>> replayed_;
    View vc_announced_ = 0;  // highest view this replica sent a ViewChange for
    uint64_t timer_generation_ = 0;
    bool timer_armed_ = false;
};

}  // namespace cerberus
