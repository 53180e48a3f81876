// Copyright 2026 the cerberus-sim developers. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#include "cerberus/consensus.hpp"

#include <algorithm>
#include <cassert>

namespace cerberus {

namespace {
enum TimerKind { kProgress = 1 };
}

LocalPbft::LocalPbft(ReplicaId self, ShardConfig cfg, PbftListener* listener,
                     Tick view_timeout, int window)
    : self_(self), cfg_(cfg), listener_(listener), view_timeout_(view_timeout),
      window_(window) {
    assert(cfg_.valid());
}

bool LocalPbft::decided(Round r) const {
    auto it = slots_.find(r);
    return it != slots_.end() && it->second.decided;
}

bool LocalPbft::idle() const { return !has_pending_work(); }

bool LocalPbft::has_pending_work() const {
    if (!queue_.empty()) return true;
    for (Round r = lowest_undecided_; r <= max_known_round_; ++r) {
        auto it = slots_.find(r);
        if (it == slots_.end() || !it->second.decided) return true;
    }
    return false;
}

std::vector<Round> LocalPbft::undecided_rounds() const {
    std::vector<Round> rounds;
    for (Round r = lowest_undecided_; r <= max_known_round_; ++r)
        if (!decided(r)) rounds.push_back(r);
    return rounds;
}

void LocalPbft::arm_timer(Context& ctx) {
    if (!has_pending_work()) return;
    ++timer_generation_;
    timer_armed_ = true;
    ctx.schedule_timer(view_timeout_, TimerFire{kProgress, timer_generation_, -1, 0});
}

void LocalPbft::enqueue(const Proposal& proposal, Context& ctx) {
    Digest d = proposal.digest();
    if (queued_or_proposed_.count(d)) return;
    queued_or_proposed_.insert(d);
    queue_.push_back(proposal);
    propose_pending(ctx);
    if (!timer_armed_) arm_timer(ctx);
}

void LocalPbft::propose_pending(Context& ctx) {
    if (!is_primary()) return;
    while (!queue_.empty() && next_propose_round_ < lowest_undecided_ + window_) {
        Proposal p = queue_.front();
        queue_.pop_front();
        start_round(next_propose_round_++, p, ctx);
    }
}

void LocalPbft::start_round(Round round, const Proposal& proposal, Context& ctx) {
    ctx.broadcast_shard(cfg_.shard_id, PrePrepare{view_, round, proposal});
}

bool LocalPbft::handle(const Envelope& env, Context& ctx) {
    if (!env.sender.is_replica() && !std::holds_alternative<TimerFire>(env.payload))
        return false;
    ReplicaId from = env.sender.replica;
    if (auto* m = std::get_if<PrePrepare>(&env.payload)) return on_preprepare(*m, from, ctx), true;
    if (auto* m = std::get_if<Prepare>(&env.payload)) return on_prepare(*m, from, ctx), true;
    if (auto* m = std::get_if<Commit>(&env.payload)) return on_commit(*m, from, ctx), true;
    if (auto* m = std::get_if<ViewChange>(&env.payload)) return on_view_change(*m, from, ctx), true;
    if (auto* m = std::get_if<NewView>(&env.payload)) return on_new_view(*m, from, ctx), true;
    if (auto* m = std::get_if<TimerFire>(&env.payload)) {
        if (m->kind != kProgress) return false;
        on_timer(*m, ctx);
        return true;
    }
    return false;
}

void LocalPbft::on_preprepare(const PrePrepare& msg, ReplicaId from, Context& ctx) {
    if (msg.view != view_) return;
    if (from.index != cfg_.primary_index(msg.view)) return;
    max_known_round_ = std::max(max_known_round_, msg.round);
    Slot& s = slot(msg.round);
    if (s.decided) return;
    Digest d = msg.proposal.digest();
    if (s.proposal && s.proposal_view == msg.view && s.proposal->digest() != d) {
        // Equivocating primary: two proposals for one (view, round).
        ctx.note(SimEvent{0, 0, EventKind::view_change, "", to_string(self_), "equivocation",
                          cfg_.shard_id, msg.round, view_, msg.proposal.txn_id(), ""});
        start_view_change(view_ + 1, ctx);
        return;
    }
    s.proposal = msg.proposal;
    s.proposal_view = msg.view;
    queued_or_proposed_.insert(d);
    // Drop a now-proposed payload from the local queue.
    std::erase_if(queue_, [&](const Proposal& p) { return p.digest() == d; });
    maybe_prepare(msg.round, ctx);
    if (!timer_armed_) arm_timer(ctx);
}

void LocalPbft::on_prepare(const Prepare& msg, ReplicaId from, Context& ctx) {
    max_known_round_ = std::max(max_known_round_, msg.round);
    Slot& s = slot(msg.round);
    if (s.decided) {
        replay_decided(msg.round, from, ctx);
        return;
    }
    s.prepares[msg.digest].insert(from);
    maybe_commit(msg.round, ctx);
    if (!timer_armed_) arm_timer(ctx);
}

void LocalPbft::maybe_prepare(Round round, Context& ctx) {
    Slot& s = slot(round);
    if (!s.proposal || s.decided) return;
    if (s.prepared_in_view >= view_) return;
    if (!listener_->pbft_ready(*s.proposal)) return;
    s.prepared_in_view = view_;
    ctx.broadcast_shard(cfg_.shard_id, Prepare{view_, round, s.proposal->digest()});
}

void LocalPbft::poke(Context& ctx) {
    for (auto& [r, s] : slots_) {
        maybe_prepare(r, ctx);
        maybe_commit(r, ctx);
    }
}

void LocalPbft::maybe_commit(Round round, Context& ctx) {
    Slot& s = slot(round);
    if (!s.proposal || s.decided) return;
    Digest d = s.proposal->digest();
    if (int(s.prepares[d].size()) < cfg_.nf()) return;
    if (s.committed_in_view >= view_) return;
    s.committed_in_view = view_;
    ctx.broadcast_shard(cfg_.shard_id, Commit{view_, round, d});
}

void LocalPbft::on_commit(const Commit& msg, ReplicaId from, Context& ctx) {
    max_known_round_ = std::max(max_known_round_, msg.round);
    Slot& s = slot(msg.round);
    if (s.decided) {
        replay_decided(msg.round, from, ctx);
        return;
    }
    s.commits[msg.digest].insert(from);
    maybe_commit(msg.round, ctx);
    maybe_decide(msg.round, ctx);
}

void LocalPbft::maybe_decide(Round round, Context& ctx) {
    Slot& s = slot(round);
    if (s.decided || !s.proposal) return;
    Digest d = s.proposal->digest();
    if (int(s.commits[d].size()) < cfg_.nf()) return;
    decide(round, s, ctx);
}

void LocalPbft::decide(Round round, Slot& s, Context& ctx) {
    s.decided = true;
    s.decided_proposal = *s.proposal;
    Digest d = s.decided_proposal.digest();
    queued_or_proposed_.insert(d);
    std::erase_if(queue_, [&](const Proposal& p) { return p.digest() == d; });
    while (decided(lowest_undecided_)) ++lowest_undecided_;
    listener_->pbft_decide(round, view_, s.decided_proposal, ctx);
    propose_pending(ctx);
    arm_timer(ctx);  // progress: reset the stall clock
}

void LocalPbft::replay_decided(Round round, ReplicaId to, Context& ctx) {
    // Catch-up for a replica that missed the round: hand it the decided
    // payload and this replica's commit vote. A laggard's ViewChange reaches
    // all peers, so it collects a full commit quorum from these replays.
    // Once per (round, peer), which keeps decided peers from replaying back
    // and forth at each other forever.
    if (!replayed_.insert({round, to}).second) return;
    const Slot& s = slots_.at(round);
    ctx.send(NodeId::of(to), PrePrepare{s.proposal_view, round, s.decided_proposal});
    ctx.send(NodeId::of(to), Commit{view_, round, s.decided_proposal.digest()});
}

void LocalPbft::on_timer(const TimerFire& timer, Context& ctx) {
    timer_armed_ = false;
    if (timer.generation != timer_generation_) return;
    if (!has_pending_work()) return;
    start_view_change(std::max(view_ + 1, vc_announced_ + 1), ctx);
    arm_timer(ctx);
}

void LocalPbft::start_view_change(View target, Context& ctx) {
    if (target <= vc_announced_) return;
    vc_announced_ = target;
    ViewChange vc;
    vc.new_view = target;
    vc.max_round = max_known_round_;
    vc.undecided = undecided_rounds();
    for (const auto& [r, s] : slots_)
        if (!s.decided && s.proposal && s.prepared_in_view >= 0 &&
            int(s.prepares.count(s.proposal->digest())
                    ? s.prepares.at(s.proposal->digest()).size()
                    : 0) >= cfg_.nf())
            vc.prepared.push_back({r, s.proposal_view, *s.proposal});
    ctx.note(SimEvent{0, 0, EventKind::view_change, "", to_string(self_), "ViewChange",
                      cfg_.shard_id, -1, target, 0, ""});
    ctx.broadcast_shard(cfg_.shard_id, vc);
}

void LocalPbft::on_view_change(const ViewChange& msg, ReplicaId from, Context& ctx) {
    // Replay decided rounds the sender misses, both the ones it lists as
    // undecided and any it has never heard of. This alone unblocks a single
    // laggard, which can never gather a view-change quorum around itself.
    for (Round r : msg.undecided)
        if (decided(r)) replay_decided(r, from, ctx);
    for (Round r = msg.max_round + 1; r <= max_known_round_; ++r)
        if (decided(r)) replay_decided(r, from, ctx);

    if (msg.new_view <= view_) return;
    vc_votes_[msg.new_view][from] = msg;
    max_known_round_ = std::max(max_known_round_, msg.max_round);

    // Join rule: f+1 replicas announcing views above ours means at least one
    // good replica detected a stall.
    std::set<ReplicaId> announcers;
    View min_target = msg.new_view;
    for (const auto& [v, votes] : vc_votes_) {
        if (v <= view_) continue;
        for (const auto& [r, vc] : votes) announcers.insert(r);
        min_target = std::min(min_target, v);
    }
    if (int(announcers.size()) >= cfg_.f + 1) start_view_change(min_target, ctx);

    auto& votes = vc_votes_[msg.new_view];
    if (int(votes.size()) >= cfg_.nf() &&
        cfg_.primary_index(msg.new_view) == self_.index) {
        // Assemble the new view: per unresolved round take the prepared
        // payload with the highest view, else this replica's own knowledge.
        NewView nv;
        nv.view = msg.new_view;
        Round max_round = max_known_round_;
        for (const auto& [r, vc] : votes) max_round = std::max(max_round, vc.max_round);
        for (Round round = 0; round <= max_round; ++round) {
            const Slot* s = slots_.count(round) ? &slots_.at(round) : nullptr;
            PreparedEntry best{round, -1, Proposal{}};
            for (const auto& [r, vc] : votes)
                for (const auto& entry : vc.prepared)
                    if (entry.round == round && entry.view > best.view) best = entry;
            if (s && s->decided) {
                best = {round, s->proposal_view, s->decided_proposal};
            } else if (best.view < 0 && s && s->proposal) {
                best = {round, s->proposal_view, *s->proposal};
            } else if (best.view < 0) {
                best = {round, 0, Proposal{}};  // no-op filler
            }
            nv.proposals.push_back(best);
        }
        ctx.broadcast_shard(cfg_.shard_id, nv);
    }
}

void LocalPbft::on_new_view(const NewView& msg, ReplicaId from, Context& ctx) {
    if (msg.view <= view_) return;
    if (from.index != cfg_.primary_index(msg.view)) return;
    install_view(msg.view, ctx);
    for (const auto& entry : msg.proposals) {
        max_known_round_ = std::max(max_known_round_, entry.round);
        Slot& s = slot(entry.round);
        if (s.decided) continue;
        s.proposal = entry.proposal;
        s.proposal_view = msg.view;
        maybe_prepare(entry.round, ctx);
    }
    next_propose_round_ = std::max(next_propose_round_, max_known_round_ + 1);
    propose_pending(ctx);
    arm_timer(ctx);
}

void LocalPbft::install_view(View view, Context& ctx) {
    view_ = view;
    vc_announced_ = std::max(vc_announced_, view);
    for (auto it = vc_votes_.begin(); it != vc_votes_.end();)
        it = it->first <= view ? vc_votes_.erase(it) : ++it;
    ctx.note(SimEvent{0, 0, EventKind::new_view, "", to_string(self_), "NewView",
                      cfg_.shard_id, -1, view, 0, ""});
    listener_->pbft_view_installed(view, ctx);
}

}  // namespace cerberus
