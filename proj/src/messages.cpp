// Copyright 2026 the cerberus-sim developers. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#include "cerberus/messages.hpp"

#include <algorithm>

namespace cerberus {

Digest Pledge::content_key() const {
    Digest d;
    d.mix(txn_id()).mix(uint64_t(shard));
    for (const auto& o : required) d.mix(o);
    d.mix(0xD1Dull);
    for (const auto& o : available) d.mix(o);
    return d;
}

Digest Pledge::slot_key() const {
    Digest d = content_key();
    d.mix(uint64_t(view)).mix(uint64_t(round));
    return d;
}

Digest Proposal::digest() const {
    Digest d;
    d.mix(uint64_t(kind)).mix(txn_id()).mix(uint64_t(commit));
    return d;
}

Digest GlobalPreprepareCert::digest() const {
    Digest d;
    for (const auto& p : parts) d.mix(p.slot_key().value);
    return d;
}

const Pledge* GlobalPreprepareCert::part_for(ShardId shard) const {
    for (const auto& p : parts)
        if (p.shard == shard) return &p;
    return nullptr;
}

bool GlobalPreprepareCert::all_full() const {
    return std::all_of(parts.begin(), parts.end(), [](const Pledge& p) { return p.full(); });
}

const char* msg_type_name(const Message& msg) {
    struct Visitor {
        const char* operator()(const ClientRequest&) { return "ClientRequest"; }
        const char* operator()(const Inform&) { return "Inform"; }
        const char* operator()(const PrePrepare&) { return "PrePrepare"; }
        const char* operator()(const Prepare&) { return "Prepare"; }
        const char* operator()(const Commit&) { return "Commit"; }
        const char* operator()(const ViewChange&) { return "ViewChange"; }
        const char* operator()(const NewView&) { return "NewView"; }
        const char* operator()(const ClusterSend&) { return "ClusterSend"; }
        const char* operator()(const GPrePrepare&) { return "GPrePrepare"; }
        const char* operator()(const GPrepare&) { return "GPrepare"; }
        const char* operator()(const GCommit&) { return "GCommit"; }
        const char* operator()(const VCGlobalSCR&) { return "VCGlobalSCR"; }
        const char* operator()(const VCRecoveryRQ&) { return "VCRecoveryRQ"; }
        const char* operator()(const VCLocalSCR&) { return "VCLocalSCR"; }
        const char* operator()(const OcbNewView&) { return "NewView"; }
        const char* operator()(const VCGlobalStateRQ&) { return "VCGlobalStateRQ"; }
        const char* operator()(const VCGlobalStateR&) { return "VCGlobalStateR"; }
        const char* operator()(const NewViewGlobal&) { return "NewViewGlobal"; }
        const char* operator()(const TimerFire&) { return "TimerFire"; }
    };
    return std::visit(Visitor{}, msg);
}

TxnId msg_txn(const Message& msg) {
    struct Visitor {
        TxnId operator()(const ClientRequest& m) { return m.txn ? m.txn->id : 0; }
        TxnId operator()(const Inform& m) { return m.txn; }
        TxnId operator()(const PrePrepare& m) { return m.proposal.txn_id(); }
        TxnId operator()(const Prepare&) { return 0; }
        TxnId operator()(const Commit&) { return 0; }
        TxnId operator()(const ViewChange&) { return 0; }
        TxnId operator()(const NewView&) { return 0; }
        TxnId operator()(const ClusterSend& m) { return m.pledge.txn_id(); }
        TxnId operator()(const GPrePrepare& m) { return m.pledge.txn_id(); }
        TxnId operator()(const GPrepare& m) { return m.txn; }
        TxnId operator()(const GCommit& m) { return m.txn; }
        TxnId operator()(const VCGlobalSCR& m) {
            return m.m.txn() ? m.m.txn()->id : 0;
        }
        TxnId operator()(const VCRecoveryRQ&) { return 0; }
        TxnId operator()(const VCLocalSCR& m) { return m.m.txn() ? m.m.txn()->id : 0; }
        TxnId operator()(const OcbNewView&) { return 0; }
        TxnId operator()(const VCGlobalStateRQ&) { return 0; }
        TxnId operator()(const VCGlobalStateR&) { return 0; }
        TxnId operator()(const NewViewGlobal&) { return 0; }
        TxnId operator()(const TimerFire& m) { return m.txn; }
    };
    return std::visit(Visitor{}, msg);
}

}  // namespace cerberus
