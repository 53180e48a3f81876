// Copyright 2026 the cerberus-sim developers. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "cerberus/object_model.hpp"

namespace cerberus {

// ---------------------------------------------------------------------------
// Shared payloads
// ---------------------------------------------------------------------------

// A shard's statement of required vs. available local inputs for one
// transaction: m(S, txn) = (request, I, D).
struct Pledge {
    TransactionPtr txn;  // null for a no-op round
    ShardId shard = -1;
    View view = 0;
    Round round = -1;
    std::vector<ObjectId> required;   // I
    std::vector<ObjectId> available;  // the available subset of I

    bool full() const { return required == available; }
    TxnId txn_id() const { return txn ? txn->id : 0; }

    // Identity of the pledge content, ignoring view/round, used for the
    // f+1-matching acceptance rule of cluster-sending.
    Digest content_key() const;
    // Full identity including (view, round), used inside preprepare certs.
    Digest slot_key() const;
};

// Consensus payload for the protocols that run plain per-shard rounds.
struct Proposal {
    enum class Kind : uint8_t { noop, pledge, outcome };
    Kind kind = Kind::noop;
    TransactionPtr txn;
    bool commit = false;  // outcome proposals only

    Digest digest() const;
    TxnId txn_id() const { return txn ? txn->id : 0; }
};

// ---------------------------------------------------------------------------
// Client <-> replica
// ---------------------------------------------------------------------------

struct ClientRequest {
    TransactionPtr txn;
};

struct Inform {
    TxnId txn = 0;
    ShardId shard = -1;
    bool commit = false;
};

// ---------------------------------------------------------------------------
// Per-shard consensus (used by the single-step protocols)
// ---------------------------------------------------------------------------

struct PrePrepare {
    View view = 0;
    Round round = -1;
    Proposal proposal;
};

struct Prepare {
    View view = 0;
    Round round = -1;
    Digest digest;
};

struct Commit {
    View view = 0;
    Round round = -1;
    Digest digest;
};

struct PreparedEntry {
    Round round = -1;
    View view = 0;
    Proposal proposal;
};

struct ViewChange {
    View new_view = 0;
    Round max_round = -1;                 // highest round the sender has seen
    std::vector<PreparedEntry> prepared;  // rounds the sender prepared
    std::vector<Round> undecided;         // rounds the sender still misses
};

struct NewView {
    View view = 0;
    std::vector<PreparedEntry> proposals;  // one per unresolved round
};

struct ClusterSend {
    ShardId from_shard = -1;
    Pledge pledge;
};

// ---------------------------------------------------------------------------
// Globalized consensus (optimistic protocol)
// ---------------------------------------------------------------------------

struct GlobalPreprepareCert {
    std::vector<Pledge> parts;  // one per affected shard, sorted by shard

    Digest digest() const;
    TransactionPtr txn() const { return parts.empty() ? nullptr : parts.front().txn; }
    const Pledge* part_for(ShardId shard) const;
    bool all_full() const;
};

struct LocalCert {
    bool commit_kind = false;  // false: prepare cert, true: commit cert
    ShardId shard = -1;
    Digest m_digest;
    std::vector<ReplicaId> voters;  // nf(shard) distinct replicas
};

struct GPrePrepare {
    Pledge pledge;
};

struct GPrepare {
    TxnId txn = 0;
    Digest m_digest;
};

struct GCommit {
    TxnId txn = 0;
    Digest m_digest;
};

// Evidence a replica attaches to its recovery request: the latest global
// preprepare certificate it accepted for the round plus all prepare/commit
// certificates collected for it.
struct RecoveryEvidence {
    std::optional<GlobalPreprepareCert> m;
    std::vector<LocalCert> prepare_certs;
    std::vector<LocalCert> commit_certs;

    bool has_global_prepare_cert(size_t num_shards) const {
        return m && prepare_certs.size() == num_shards;
    }
};

struct VCGlobalSCR {
    GlobalPreprepareCert m;
    std::vector<LocalCert> prepare_certs;  // global prepare certificate
    LocalCert commit_cert;                 // some C(S'')
};

struct VCRecoveryRQ {
    View view = 0;
    Round round = -1;
    RecoveryEvidence evidence;
};

struct VCLocalSCR {
    GlobalPreprepareCert m;
    std::vector<LocalCert> prepare_certs;
    LocalCert commit_cert;
};

struct OcbNewView {  // wire tag "NewView"
    View view = 0;
    Round round = -1;
    std::vector<VCRecoveryRQ> collected;
};

struct VCGlobalStateRQ {
    View view = 0;
    Round round = -1;
    ShardId shard = -1;  // the recovering shard
};

struct VCGlobalStateR {
    View view = 0;
    Round round = -1;
    ShardId shard = -1;
    std::optional<GlobalPreprepareCert> m;  // set iff responder reached commit phase
    std::vector<LocalCert> prepare_certs;
};

struct NewViewGlobal {
    View view = 0;
    Round round = -1;
    std::vector<VCGlobalStateR> responses;
};

// ---------------------------------------------------------------------------
// Timers (self-addressed, exempt from the delay model)
// ---------------------------------------------------------------------------

struct TimerFire {
    int kind = 0;
    uint64_t generation = 0;
    Round round = -1;
    TxnId txn = 0;
};

using Message =
    std::variant<ClientRequest, Inform, PrePrepare, Prepare, Commit, ViewChange, NewView,
                 ClusterSend, GPrePrepare, GPrepare, GCommit, VCGlobalSCR, VCRecoveryRQ,
                 VCLocalSCR, OcbNewView, VCGlobalStateRQ, VCGlobalStateR, NewViewGlobal,
                 TimerFire>;

// Exact wire tag, as recorded in traces.
const char* msg_type_name(const Message& msg);

// Transaction id the message concerns, if any (used by routing and the
// adversary's match rules).
TxnId msg_txn(const Message& msg);

}  // namespace cerberus
