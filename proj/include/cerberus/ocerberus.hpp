// Copyright 2026 the cerberus-sim developers. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <deque>

#include "cerberus/protocol.hpp"

namespace cerberus {

// Globalized consensus: one local round per shard runs the three phases of
// the consensus protocol across all affected shards at once. A replica
// first assembles the global preprepare certificate M (one primary proposal
// per affected shard), then collects prepare and commit certificates from
// every affected shard. The outcome is a pure function of M.
//
// Rounds are strictly serial per shard: the primary proposes round r + 1
// only after r resolved, so the availability sets in a proposal are
// deterministic. Recovery runs in three paths: a global short-cut when a
// commit certificate already guarantees the outcome, a local short-cut when
// a same-shard peer holds that guarantee, and a full view change that may
// pull the decisive state from the other affected shards.
class OcbReplica final : public ProtocolReplica {
  public:
    OcbReplica(ReplicaId self, ProtocolParams params);

    void on_message(const Envelope& env, Context& ctx) override;

    View view() const { return view_; }
    Round current_round() const { return cur_round_; }
    bool idle() const;

  private:
    struct RoundState {
        std::optional<Pledge> own_part;  // highest-view own-shard proposal
        bool own_verified = false;
        std::optional<GlobalPreprepareCert> m;
        std::set<Digest> gprepared;  // M digests this replica voted for
        bool in_commit_phase = false;
        Digest commit_digest;
        std::map<ShardId, LocalCert> prepare_certs;  // for commit_digest
        std::map<ShardId, LocalCert> commit_certs;
        bool decided = false;
        // recovery
        std::map<ReplicaId, VCRecoveryRQ> recovery_rqs;
        std::set<View> detected;       // views this replica announced for
        std::set<View> new_views_sent; // as new primary
        bool awaiting_global = false;
        std::map<ShardId, std::map<ReplicaId, VCGlobalStateR>> state_responses;
        std::set<ShardId> state_targets;
        bool state_requested = false;
        bool global_new_view_sent = false;
    };

    RoundState& round(Round r) { return rounds_[r]; }
    std::set<ShardId> affected(const RoundState& rs) const;
    std::set<ReplicaId> quorum_votes(const std::map<ShardId, std::set<ReplicaId>>& votes,
                                     ShardId shard) const;

    void on_request(const ClientRequest& rq, Context& ctx);
    void on_gpreprepare(const GPrePrepare& msg, ReplicaId from, Context& ctx);
    void on_gprepare(const GPrepare& msg, ReplicaId from, Context& ctx);
    void on_gcommit(const GCommit& msg, ReplicaId from, Context& ctx);
    void on_timer(const TimerFire& timer, Context& ctx);
    void on_global_scr(const VCGlobalSCR& msg, ReplicaId from, Context& ctx);
    void on_recovery_rq(const VCRecoveryRQ& msg, ReplicaId from, Context& ctx);
    void on_local_scr(const VCLocalSCR& msg, Context& ctx);
    void on_new_view(const OcbNewView& msg, ReplicaId from, Context& ctx);
    void on_state_rq(const VCGlobalStateRQ& msg, ReplicaId from, Context& ctx);
    void on_state_r(const VCGlobalStateR& msg, ReplicaId from, Context& ctx);
    void on_new_view_global(const NewViewGlobal& msg, ReplicaId from, Context& ctx);

    // Drives the current round as far as the collected messages allow.
    void progress(Context& ctx);
    void propose(Context& ctx);
    void broadcast_affected(const std::set<ShardId>& shards, const Message& msg,
                            Context& ctx);
    bool verify_own_part(const Pledge& part);
    void try_form_m(Round r, Context& ctx);
    void enter_commit_phase(Round r, const GlobalPreprepareCert& m,
                            std::map<ShardId, LocalCert> prepare_certs, Context& ctx);
    void harvest_certs(Round r, Context& ctx);
    void maybe_decide(Round r, Context& ctx);
    void detect_recovery(View view, Context& ctx);
    void start_global_state_recovery(Round r, const GlobalPreprepareCert& m, Context& ctx);
    RecoveryEvidence gather_evidence(Round r) const;
    void adopt(Round r, const GlobalPreprepareCert& m,
               const std::vector<LocalCert>& prepare_certs, Context& ctx);
    bool round_open(Round r) const;
    void arm_timer(Context& ctx);
    TransactionPtr next_proposable();

    View view_ = 0;
    Round cur_round_ = 0;
    std::map<Round, RoundState> rounds_;
    // parts proposed by other shards' primaries, latest view per shard
    std::map<TxnId, std::map<ShardId, Pledge>> parts_;
    // global vote tallies keyed by M digest (digests embed view and round)
    std::map<Digest, std::map<ShardId, std::set<ReplicaId>>> gprepare_votes_;
    std::map<Digest, std::map<ShardId, std::set<ReplicaId>>> gcommit_votes_;
    std::deque<TransactionPtr> queue_;
    std::set<TxnId> queued_;
    std::map<TxnId, int> attempts_seen_;
    std::set<TxnId> dead_;  // decided, or dropped after the retry budget ran out
    uint64_t timer_generation_ = 0;
    bool timer_armed_ = false;
};

}  // namespace cerberus
