// Copyright 2026 the cerberus-sim developers. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#include "cerberus/ocerberus.hpp"

#include <algorithm>
#include <cstdio>

namespace cerberus {

namespace {

enum TimerKind { kProgressTimer = 2 };

std::string hex(Digest d) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(d.value));
    return buf;
}

}  // namespace

OcbReplica::OcbReplica(ReplicaId self, ProtocolParams params)
    : ProtocolReplica(self, std::move(params)) {}

bool OcbReplica::idle() const {
    auto it = rounds_.find(cur_round_);
    if (it != rounds_.end() && it->second.own_part && !it->second.decided) return false;
    // Queue entries that can never be proposed again do not keep the round open.
    for (const auto& t : queue_) {
        if (dead_.count(t->id)) continue;
        auto a = attempts_seen_.find(t->id);
        if (a != attempts_seen_.end() && a->second >= params_.max_attempts) continue;
        return false;
    }
    return true;
}

std::set<ShardId> OcbReplica::affected(const RoundState& rs) const {
    const TransactionPtr& txn =
        rs.own_part ? rs.own_part->txn : (rs.m ? rs.m->txn() : nullptr);
    if (!txn) return {self_.shard};
    return shards_of_txn(*txn);
}

std::set<ReplicaId> OcbReplica::quorum_votes(
    const std::map<ShardId, std::set<ReplicaId>>& votes, ShardId shard) const {
    auto it = votes.find(shard);
    if (it == votes.end() || int(it->second.size()) < cfg_.nf()) return {};
    return it->second;
}

void OcbReplica::on_message(const Envelope& env, Context& ctx) {
    const ReplicaId from = env.sender.is_replica() ? env.sender.replica : ReplicaId{-1, -1};
    if (auto* rq = std::get_if<ClientRequest>(&env.payload)) {
        on_request(*rq, ctx);
    } else if (auto* t = std::get_if<TimerFire>(&env.payload)) {
        on_timer(*t, ctx);
    } else if (!env.sender.is_replica()) {
        return;  // every other message must come from a replica
    } else if (auto* pp = std::get_if<GPrePrepare>(&env.payload)) {
        on_gpreprepare(*pp, from, ctx);
    } else if (auto* gp = std::get_if<GPrepare>(&env.payload)) {
        on_gprepare(*gp, from, ctx);
    } else if (auto* gc = std::get_if<GCommit>(&env.payload)) {
        on_gcommit(*gc, from, ctx);
    } else if (auto* scr = std::get_if<VCGlobalSCR>(&env.payload)) {
        on_global_scr(*scr, from, ctx);
    } else if (auto* rrq = std::get_if<VCRecoveryRQ>(&env.payload)) {
        if (from.shard == self_.shard) on_recovery_rq(*rrq, from, ctx);
    } else if (auto* lscr = std::get_if<VCLocalSCR>(&env.payload)) {
        if (from.shard == self_.shard) on_local_scr(*lscr, ctx);
    } else if (auto* nv = std::get_if<OcbNewView>(&env.payload)) {
        if (from.shard == self_.shard) on_new_view(*nv, from, ctx);
    } else if (auto* srq = std::get_if<VCGlobalStateRQ>(&env.payload)) {
        on_state_rq(*srq, from, ctx);
    } else if (auto* sr = std::get_if<VCGlobalStateR>(&env.payload)) {
        on_state_r(*sr, from, ctx);
    } else if (auto* nvg = std::get_if<NewViewGlobal>(&env.payload)) {
        if (from.shard == self_.shard) on_new_view_global(*nvg, from, ctx);
    }
}

void OcbReplica::on_request(const ClientRequest& rq, Context& ctx) {
    if (!admissible(rq.txn, ctx)) return;
    if (queued_.count(rq.txn->id) || dead_.count(rq.txn->id)) return;
    queued_.insert(rq.txn->id);
    queue_.push_back(rq.txn);
    progress(ctx);
}

TransactionPtr OcbReplica::next_proposable() {
    while (!queue_.empty()) {
        TransactionPtr t = queue_.front();
        if (!dead_.count(t->id) && attempts_seen_[t->id] < params_.max_attempts) return t;
        dead_.insert(t->id);
        queue_.pop_front();
    }
    return nullptr;
}

void OcbReplica::propose(Context& ctx) {
    if (cfg_.primary_index(view_) != self_.index) return;
    RoundState& rs = round(cur_round_);
    if (rs.decided || rs.awaiting_global) return;
    if (rs.own_part && rs.own_part->view >= view_) return;
    TransactionPtr t = next_proposable();
    // A round only needs a filler no-op once an attempt or a recovery touched it.
    bool contested = rs.own_part.has_value() || !rs.recovery_rqs.empty();
    if (!t && !contested) return;
    Pledge p;
    p.shard = self_.shard;
    p.view = view_;
    p.round = cur_round_;
    if (t) {
        p.txn = t;
        LocalInputs li = local_inputs(*t, self_.shard, params_.assign, ledger_);
        p.required = li.required;
        p.available = li.available;
    }
    broadcast_affected(t ? shards_of_txn(*t) : std::set<ShardId>{self_.shard},
                       GPrePrepare{p}, ctx);
}

void OcbReplica::broadcast_affected(const std::set<ShardId>& shards, const Message& msg,
                                    Context& ctx) {
    for (ShardId s : shards) ctx.broadcast_shard(s, msg);
}

bool OcbReplica::verify_own_part(const Pledge& part) {
    if (!part.txn) return part.required.empty() && part.available.empty();
    LocalInputs li = local_inputs(*part.txn, self_.shard, params_.assign, ledger_);
    return part.required == li.required && part.available == li.available;
}

void OcbReplica::on_gpreprepare(const GPrePrepare& msg, ReplicaId from, Context& ctx) {
    const Pledge& p = msg.pledge;
    if (p.shard != from.shard || p.round < 0) return;
    ShardConfig sender_cfg{p.shard, params_.n, params_.f};
    if (sender_cfg.primary_index(p.view) != from.index) return;
    if (p.txn && !p.txn->well_formed()) return;

    if (p.shard == self_.shard) {
        if (p.view != view_ || p.round < cur_round_) return;
        RoundState& rs = round(p.round);
        if (rs.in_commit_phase || rs.decided) return;
        if (rs.own_part && rs.own_part->view >= p.view) return;
        rs.own_part = p;
        rs.own_verified = false;
        if (p.txn) ++attempts_seen_[p.txn->id];
    } else {
        if (!p.txn) return;  // no-op rounds never cross shards
        auto& slot = parts_[p.txn->id];
        auto it = slot.find(p.shard);
        if (it != slot.end() && it->second.view >= p.view) return;
        slot.insert_or_assign(p.shard, p);
    }
    progress(ctx);
}

void OcbReplica::try_form_m(Round r, Context& ctx) {
    if (r != cur_round_) return;  // availability is checked against this round's state
    RoundState& rs = round(r);
    if (rs.decided || rs.in_commit_phase || !rs.own_part) return;
    if (!rs.own_verified) {
        if (!verify_own_part(*rs.own_part)) return;  // stalls into recovery
        rs.own_verified = true;
    }
    GlobalPreprepareCert m;
    m.parts.push_back(*rs.own_part);
    if (rs.own_part->txn) {
        const auto& slot = parts_[rs.own_part->txn->id];
        for (ShardId s : shards_of_txn(*rs.own_part->txn)) {
            if (s == self_.shard) continue;
            auto it = slot.find(s);
            if (it == slot.end()) return;  // incomplete: wait or recover
            m.parts.push_back(it->second);
        }
        std::sort(m.parts.begin(), m.parts.end(),
                  [](const Pledge& a, const Pledge& b) { return a.shard < b.shard; });
    }
    Digest d = m.digest();
    if (!rs.m || rs.m->digest() != d) {
        rs.m = m;
        rs.prepare_certs.clear();  // certs are per candidate digest
        ctx.note(SimEvent{0, 0, EventKind::accept_m, "", to_string(self_), "", self_.shard,
                          rs.own_part->round, rs.own_part->view, rs.own_part->txn_id(),
                          hex(d)});
    }
    if (!rs.gprepared.count(d)) {
        rs.gprepared.insert(d);
        broadcast_affected(affected(rs), GPrepare{rs.own_part->txn_id(), d}, ctx);
    }
}

void OcbReplica::on_gprepare(const GPrepare& msg, ReplicaId from, Context& ctx) {
    gprepare_votes_[msg.m_digest][from.shard].insert(from);
    progress(ctx);
}

void OcbReplica::on_gcommit(const GCommit& msg, ReplicaId from, Context& ctx) {
    bool fresh = gcommit_votes_[msg.m_digest][from.shard].insert(from).second;
    // Laggard catch-up: a decided replica answers a fresh commit vote in kind,
    // so a recovering peer can complete its commit certificate.
    if (fresh) {
        for (auto& [r, rs] : rounds_) {
            if (rs.decided && rs.in_commit_phase && rs.commit_digest == msg.m_digest) {
                ctx.send(NodeId::of(from), GCommit{msg.txn, msg.m_digest});
                break;
            }
        }
    }
    progress(ctx);
}

void OcbReplica::enter_commit_phase(Round r, const GlobalPreprepareCert& m,
                                    std::map<ShardId, LocalCert> prepare_certs,
                                    Context& ctx) {
    RoundState& rs = round(r);
    if (rs.in_commit_phase || rs.decided) return;
    bool fresh_m = !rs.m || rs.m->digest() != m.digest();
    rs.m = m;
    rs.in_commit_phase = true;
    rs.commit_digest = m.digest();
    rs.prepare_certs = std::move(prepare_certs);
    const Pledge* own = m.part_for(self_.shard);
    // Recovery paths install the certificate here without passing through
    // the normal-case assembly, so its acceptance is noted as well.
    if (fresh_m)
        ctx.note(SimEvent{0, 0, EventKind::accept_m, "", to_string(self_), "",
                          self_.shard, own ? own->round : r, own ? own->view : view_,
                          m.txn() ? m.txn()->id : 0, hex(rs.commit_digest)});
    ctx.note(SimEvent{0, 0, EventKind::commit_phase, "", to_string(self_), "", self_.shard,
                      own ? own->round : r, own ? own->view : view_,
                      m.txn() ? m.txn()->id : 0, hex(rs.commit_digest)});
    broadcast_affected(affected(rs), GCommit{m.txn() ? m.txn()->id : 0, rs.commit_digest},
                       ctx);
}

void OcbReplica::harvest_certs(Round r, Context& ctx) {
    RoundState& rs = round(r);
    if (rs.decided) return;
    std::set<ShardId> shards = affected(rs);
    if (!rs.in_commit_phase) {
        if (!rs.m) return;
        Digest d = rs.m->digest();
        for (ShardId s : shards) {
            if (rs.prepare_certs.count(s)) continue;
            auto votes = quorum_votes(gprepare_votes_[d], s);
            if (votes.empty()) continue;
            rs.prepare_certs[s] =
                LocalCert{false, s, d, {votes.begin(), votes.end()}};
        }
        if (rs.prepare_certs.size() == shards.size())
            enter_commit_phase(r, *rs.m, rs.prepare_certs, ctx);
    }
    if (rs.in_commit_phase) {
        Digest d = rs.commit_digest;
        for (ShardId s : shards) {
            if (rs.commit_certs.count(s)) continue;
            auto votes = quorum_votes(gcommit_votes_[d], s);
            if (votes.empty()) continue;
            rs.commit_certs[s] =
                LocalCert{true, s, d, {votes.begin(), votes.end()}};
        }
    }
}

void OcbReplica::maybe_decide(Round r, Context& ctx) {
    if (r != cur_round_) return;  // ledger effects land in round order
    RoundState& rs = round(r);
    if (rs.decided || !rs.in_commit_phase) return;
    std::set<ShardId> shards = affected(rs);
    for (ShardId s : shards)
        if (!rs.commit_certs.count(s)) return;

    rs.decided = true;
    const TransactionPtr txn = rs.m->txn();
    if (txn) {
        bool commit = rs.m->all_full();
        if (commit) {
            const Pledge* own = rs.m->part_for(self_.shard);
            for (const auto& o : own->required) ledger_[o].status = ObjectStatus::destructed;
            construct_local_outputs(*txn, r);
        }
        record_outcome(txn, commit, r, -1, ctx);
        dead_.insert(txn->id);
        auto it = std::find_if(queue_.begin(), queue_.end(),
                               [&](const TransactionPtr& t) { return t->id == txn->id; });
        if (it != queue_.end()) queue_.erase(it);
    }
    ++cur_round_;
    ++timer_generation_;
    timer_armed_ = false;
}

void OcbReplica::progress(Context& ctx) {
    for (;;) {
        Round r = cur_round_;
        propose(ctx);
        try_form_m(r, ctx);
        harvest_certs(r, ctx);
        maybe_decide(r, ctx);
        if (cur_round_ == r) break;
    }
    arm_timer(ctx);
}

bool OcbReplica::round_open(Round r) const {
    auto it = rounds_.find(r);
    if (it != rounds_.end() && !it->second.decided &&
        (it->second.own_part || !it->second.recovery_rqs.empty()))
        return true;
    for (const auto& t : queue_) {
        if (dead_.count(t->id)) continue;
        auto a = attempts_seen_.find(t->id);
        if (a != attempts_seen_.end() && a->second >= params_.max_attempts) continue;
        return true;
    }
    return false;
}

void OcbReplica::arm_timer(Context& ctx) {
    if (timer_armed_ || !round_open(cur_round_)) return;
    timer_armed_ = true;
    ++timer_generation_;
    ctx.schedule_timer(params_.view_timeout,
                       TimerFire{kProgressTimer, timer_generation_, cur_round_, 0});
}

void OcbReplica::on_timer(const TimerFire& timer, Context& ctx) {
    if (timer.kind != kProgressTimer || timer.generation != timer_generation_) return;
    timer_armed_ = false;
    RoundState& rs = round(cur_round_);
    if (!rs.decided && round_open(cur_round_)) {
        std::set<ShardId> shards = affected(rs);
        if (rs.in_commit_phase && !rs.commit_certs.empty() &&
            rs.commit_certs.size() < shards.size()) {
            // Global short-cut: one commit certificate fixes the outcome, so
            // push it to the shards that are still missing theirs.
            VCGlobalSCR scr;
            scr.m = *rs.m;
            for (const auto& [s, cert] : rs.prepare_certs) scr.prepare_certs.push_back(cert);
            scr.commit_cert = rs.commit_certs.begin()->second;
            for (ShardId s : shards)
                if (!rs.commit_certs.count(s)) ctx.broadcast_shard(s, scr);
        } else {
            View v = view_;
            while (rs.detected.count(v)) ++v;  // escalate past announced views
            detect_recovery(v, ctx);
        }
    }
    arm_timer(ctx);
}

RecoveryEvidence OcbReplica::gather_evidence(Round r) const {
    RecoveryEvidence ev;
    auto it = rounds_.find(r);
    if (it == rounds_.end()) return ev;
    const RoundState& rs = it->second;
    ev.m = rs.m;
    for (const auto& [s, cert] : rs.prepare_certs) ev.prepare_certs.push_back(cert);
    for (const auto& [s, cert] : rs.commit_certs) ev.commit_certs.push_back(cert);
    return ev;
}

void OcbReplica::detect_recovery(View view, Context& ctx) {
    RoundState& rs = round(cur_round_);
    if (rs.detected.count(view)) return;
    rs.detected.insert(view);
    ctx.note(SimEvent{0, 0, EventKind::view_change, "", to_string(self_), "", self_.shard,
                      cur_round_, view, 0, ""});
    ctx.broadcast_shard(self_.shard,
                        VCRecoveryRQ{view, cur_round_, gather_evidence(cur_round_)});
}

void OcbReplica::on_recovery_rq(const VCRecoveryRQ& msg, ReplicaId from, Context& ctx) {
    if (msg.round < 0) return;
    RoundState& rs = round(msg.round);

    // Genuine certificates carried as evidence feed the global tallies.
    for (const auto& cert : msg.evidence.prepare_certs)
        for (const auto& v : cert.voters) gprepare_votes_[cert.m_digest][cert.shard].insert(v);
    for (const auto& cert : msg.evidence.commit_certs)
        for (const auto& v : cert.voters) gcommit_votes_[cert.m_digest][cert.shard].insert(v);

    // Short-cut reply: this replica already holds a guaranteed outcome.
    if (rs.in_commit_phase && !rs.commit_certs.empty()) {
        VCLocalSCR scr;
        scr.m = *rs.m;
        for (const auto& [s, cert] : rs.prepare_certs) scr.prepare_certs.push_back(cert);
        scr.commit_cert = rs.commit_certs.begin()->second;
        ctx.send(NodeId::of(from), scr);
    }

    auto stored = rs.recovery_rqs.find(from);
    if (stored != rs.recovery_rqs.end() && stored->second.view >= msg.view) return;
    rs.recovery_rqs[from] = msg;

    if (msg.round == cur_round_ && !rs.decided &&
        int(rs.recovery_rqs.size()) >= params_.f + 1) {
        View minv = rs.recovery_rqs.begin()->second.view;
        for (const auto& [p, rq] : rs.recovery_rqs) minv = std::min(minv, rq.view);
        detect_recovery(std::max(minv, view_), ctx);
    }

    // nf matching announcements for view v make (v + 1)'s primary act.
    std::map<View, int> by_view;
    for (const auto& [p, rq] : rs.recovery_rqs) ++by_view[rq.view];
    for (const auto& [v, cnt] : by_view) {
        if (cnt < cfg_.nf()) continue;
        if (cfg_.primary_index(v + 1) != self_.index) continue;
        if (rs.new_views_sent.count(v + 1)) continue;
        rs.new_views_sent.insert(v + 1);
        OcbNewView nv;
        nv.view = v + 1;
        nv.round = msg.round;
        for (const auto& [p, rq] : rs.recovery_rqs)
            if (rq.view == v) nv.collected.push_back(rq);
        ctx.broadcast_shard(self_.shard, nv);
    }
    progress(ctx);
}

void OcbReplica::adopt(Round r, const GlobalPreprepareCert& m,
                       const std::vector<LocalCert>& prepare_certs, Context& ctx) {
    const Pledge* own = m.part_for(self_.shard);
    if (!own) return;
    RoundState& rs = round(r);
    if (rs.decided) return;
    if (!rs.own_part || rs.own_part->view <= own->view) {
        rs.own_part = *own;
        rs.own_verified = true;  // forced by the certificates, not re-derived
    }
    std::map<ShardId, LocalCert> certs;
    Digest d = m.digest();
    for (const auto& cert : prepare_certs) {
        if (cert.m_digest != d) continue;
        certs[cert.shard] = cert;
        for (const auto& v : cert.voters) gprepare_votes_[d][cert.shard].insert(v);
    }
    std::set<ShardId> shards =
        m.txn() ? shards_of_txn(*m.txn()) : std::set<ShardId>{self_.shard};
    if (certs.size() == shards.size()) enter_commit_phase(r, m, std::move(certs), ctx);
    progress(ctx);
}

void OcbReplica::on_global_scr(const VCGlobalSCR& msg, ReplicaId from, Context& ctx) {
    const Pledge* own = msg.m.part_for(self_.shard);
    if (!own) return;
    Digest d = msg.m.digest();
    for (const auto& v : msg.commit_cert.voters)
        gcommit_votes_[d][msg.commit_cert.shard].insert(v);
    RoundState& rs = round(own->round);
    if (rs.in_commit_phase && rs.commit_digest == d) {
        ctx.send(NodeId::of(from), GCommit{msg.m.txn() ? msg.m.txn()->id : 0, d});
        progress(ctx);
        return;
    }
    adopt(own->round, msg.m, msg.prepare_certs, ctx);
}

void OcbReplica::on_local_scr(const VCLocalSCR& msg, Context& ctx) {
    const Pledge* own = msg.m.part_for(self_.shard);
    if (!own) return;
    Digest d = msg.m.digest();
    for (const auto& v : msg.commit_cert.voters)
        gcommit_votes_[d][msg.commit_cert.shard].insert(v);
    adopt(own->round, msg.m, msg.prepare_certs, ctx);
}

void OcbReplica::on_new_view(const OcbNewView& msg, ReplicaId from, Context& ctx) {
    if (msg.view <= view_ || msg.round < 0) return;
    if (cfg_.primary_index(msg.view) != from.index) return;
    if (int(msg.collected.size()) < cfg_.nf()) return;
    view_ = msg.view;
    ++timer_generation_;
    timer_armed_ = false;
    ctx.note(SimEvent{0, 0, EventKind::new_view, "", to_string(self_), "", self_.shard,
                      msg.round, view_, 0, ""});

    RoundState& rs = round(msg.round);
    // Select the strongest evidence: the certificate whose own-shard part has
    // the most recent view. A commit certificate anywhere fixes the outcome.
    const RecoveryEvidence* best = nullptr;
    View best_view = -1;
    for (const auto& rq : msg.collected) {
        if (!rq.evidence.m) continue;
        const Pledge* own = rq.evidence.m->part_for(self_.shard);
        if (!own || own->round != msg.round) continue;
        if (own->view > best_view) {
            best_view = own->view;
            best = &rq.evidence;
        }
    }
    if (best) {
        std::set<ShardId> shards = best->m->txn() ? shards_of_txn(*best->m->txn())
                                                  : std::set<ShardId>{self_.shard};
        bool has_commit = false;
        Digest d = best->m->digest();
        for (const auto& rq : msg.collected)
            for (const auto& cert : rq.evidence.commit_certs)
                if (cert.m_digest == d) has_commit = true;
        if (has_commit && best->has_global_prepare_cert(shards.size())) {
            adopt(msg.round, *best->m, best->prepare_certs, ctx);
        } else {
            // Some replica may have reached the commit phase: ask the other
            // affected shards before anything new is proposed for the round.
            rs.awaiting_global = true;
            if (cfg_.primary_index(view_) == self_.index)
                start_global_state_recovery(msg.round, *best->m, ctx);
        }
    }
    progress(ctx);
}

void OcbReplica::start_global_state_recovery(Round r, const GlobalPreprepareCert& m,
                                             Context& ctx) {
    RoundState& rs = round(r);
    if (rs.state_requested) return;
    rs.state_requested = true;
    std::set<ShardId> shards =
        m.txn() ? shards_of_txn(*m.txn()) : std::set<ShardId>{self_.shard};
    for (ShardId s : shards) {
        if (s == self_.shard) continue;
        rs.state_targets.insert(s);
        ctx.broadcast_shard(s, VCGlobalStateRQ{view_, r, self_.shard});
    }
}

void OcbReplica::on_state_rq(const VCGlobalStateRQ& msg, ReplicaId from, Context& ctx) {
    VCGlobalStateR reply;
    reply.view = msg.view;
    reply.round = msg.round;
    reply.shard = self_.shard;
    // Answer with (M, P) iff this replica reached the commit phase for an M
    // whose part for the recovering shard sits in the recovered round.
    for (const auto& [r, rs] : rounds_) {
        if (!rs.in_commit_phase || !rs.m) continue;
        const Pledge* part = rs.m->part_for(msg.shard);
        if (!part || part->round != msg.round) continue;
        reply.m = rs.m;
        for (const auto& [s, cert] : rs.prepare_certs) reply.prepare_certs.push_back(cert);
        break;
    }
    ctx.send(NodeId::of(from), reply);
}

void OcbReplica::on_state_r(const VCGlobalStateR& msg, ReplicaId from, Context& ctx) {
    RoundState& rs = round(msg.round);
    if (!rs.state_requested || rs.global_new_view_sent || rs.decided) return;
    if (!rs.state_targets.count(from.shard)) return;
    rs.state_responses[from.shard][from] = msg;
    // nf responses per queried shard guarantee overlap with any good replica
    // that reached the commit phase there.
    for (ShardId s : rs.state_targets) {
        auto it = rs.state_responses.find(s);
        if (it == rs.state_responses.end() || int(it->second.size()) < cfg_.nf()) return;
    }
    rs.global_new_view_sent = true;
    NewViewGlobal nvg;
    nvg.view = view_;
    nvg.round = msg.round;
    for (const auto& [s, by_replica] : rs.state_responses)
        for (const auto& [p, r] : by_replica) nvg.responses.push_back(r);
    ctx.broadcast_shard(self_.shard, nvg);
}

void OcbReplica::on_new_view_global(const NewViewGlobal& msg, ReplicaId from, Context& ctx) {
    if (msg.view != view_ || cfg_.primary_index(msg.view) != from.index) return;
    RoundState& rs = round(msg.round);
    rs.awaiting_global = false;
    // Pick the (M, P) whose own-shard part has the most recent view; if no
    // responder reached the commit phase, the round is free to re-propose.
    const VCGlobalStateR* best = nullptr;
    View best_view = -1;
    for (const auto& r : msg.responses) {
        if (!r.m) continue;
        const Pledge* own = r.m->part_for(self_.shard);
        if (!own || own->round != msg.round) continue;
        if (own->view > best_view) {
            best_view = own->view;
            best = &r;
        }
    }
    if (best) {
        adopt(msg.round, *best->m, best->prepare_certs, ctx);
    } else {
        progress(ctx);  // the new primary proposes afresh
    }
}

}  // namespace cerberus
