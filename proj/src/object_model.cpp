// Copyright 2026 the cerberus-sim developers. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#include "cerberus/object_model.hpp"

#include <algorithm>

namespace cerberus {

std::string to_string(ObjectId id) {
    return "o(" + std::to_string(id.txn) + ":" + std::to_string(id.index) + ")";
}

std::string to_string(ReplicaId id) {
    return "r" + std::to_string(id.shard) + "." + std::to_string(id.index);
}

std::string to_string(NodeId id) {
    return id.is_replica() ? to_string(id.replica) : "c" + std::to_string(id.client);
}

bool Transaction::well_formed() const {
    if (inputs.empty()) return false;
    if (!std::is_sorted(inputs.begin(), inputs.end())) return false;
    if (std::adjacent_find(inputs.begin(), inputs.end()) != inputs.end()) return false;
    for (const auto& out : outputs) {
        // output ids are fresh: minted under this transaction's id
        if (out.id.txn != id) return false;
        if (std::binary_search(inputs.begin(), inputs.end(), out.id)) return false;
    }
    return true;
}

Digest Transaction::digest() const {
    Digest d;
    d.mix(id).mix(uint64_t(client));
    for (const auto& in : inputs) d.mix(in);
    for (const auto& out : outputs) d.mix(out.id).mix(uint64_t(out.owner));
    for (const auto& [obj, tok] : support) d.mix(obj).mix(uint64_t(tok.owner)).mix(tok.txn);
    return d;
}

ShardId ShardAssignment::placement(ObjectId o) const {
    if (auto it = overrides.find(o); it != overrides.end()) return it->second;
    Digest d;
    d.mix(o);
    return ShardId(d.value % uint64_t(num_shards));
}

std::set<ShardId> shards_of(const Transaction& txn, const ShardAssignment& assign) {
    std::set<ShardId> result;
    for (const auto& in : txn.inputs) result.insert(assign.placement(in));
    for (const auto& out : txn.outputs) result.insert(assign.placement(out.id));
    return result;
}

ValidityReport validate(const Transaction& txn,
                        const std::map<ObjectId, ClientId>& owner_of,
                        const std::set<ClientId>& malicious_owners) {
    ValidityReport report;
    for (const auto& in : txn.inputs) {
        auto owner_it = owner_of.find(in);
        // Unknown objects are judged by shard-applicability, not validity.
        if (owner_it == owner_of.end()) continue;
        ClientId owner = owner_it->second;
        if (malicious_owners.count(owner)) continue;  // binds only well-behaved owners
        auto tok_it = txn.support.find(in);
        if (tok_it == txn.support.end()) {
            report.missing_support.push_back(in);
        } else if (tok_it->second.owner != owner || tok_it->second.txn != txn.id) {
            report.forged_support.push_back(in);
        }
    }
    report.valid = report.missing_support.empty() && report.forged_support.empty();
    return report;
}

LocalInputs local_inputs(const Transaction& txn, ShardId shard,
                         const ShardAssignment& assign,
                         const std::map<ObjectId, ObjectRecord>& ledger) {
    bool involved = false;
    LocalInputs result;
    for (const auto& in : txn.inputs) {
        if (assign.placement(in) != shard) continue;
        involved = true;
        result.required.push_back(in);
        auto it = ledger.find(in);
        if (it != ledger.end() && it->second.status == ObjectStatus::constructed)
            result.available.push_back(in);
    }
    for (const auto& out : txn.outputs)
        if (assign.placement(out.id) == shard) involved = true;
    if (!involved)
        throw ShardInvolvementError("shard " + std::to_string(shard) +
                                    " is not affected by txn " + std::to_string(txn.id));
    return result;
}

}  // namespace cerberus
