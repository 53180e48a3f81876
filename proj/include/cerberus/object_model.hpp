// Copyright 2026 the cerberus-sim developers. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "cerberus/ids.hpp"

namespace cerberus {

enum class ObjectStatus : uint8_t { constructed, pledged, destructed };

struct ObjectRecord {
    ObjectId id;
    ClientId owner = -1;
    ObjectStatus status = ObjectStatus::constructed;
    Round constructed_in_round = 0;
};

// An owner's support token for one (owner, txn) pair. Stands in for a
// signature: everyone can check it, and the adversary can only mint tokens
// for owners it controls.
struct SupportToken {
    ClientId owner = -1;
    TxnId txn = 0;

    auto operator<=>(const SupportToken&) const = default;
};

struct OutputSpec {
    ObjectId id;        // fresh: (this txn id, output index)
    ClientId owner = -1;
};

struct Transaction {
    TxnId id = 0;
    ClientId client = -1;
    std::vector<ObjectId> inputs;             // sorted, nonempty
    std::vector<OutputSpec> outputs;          // sorted by id
    std::map<ObjectId, SupportToken> support; // per-input owner support

    bool well_formed() const;
    Digest digest() const;
};

using TransactionPtr = std::shared_ptr<const Transaction>;

// Placement of objects onto shards: a stable hash by default, with explicit
// per-object overrides so scenario files can pin placements.
struct ShardAssignment {
    int num_shards = 1;
    std::map<ObjectId, ShardId> overrides;

    ShardId placement(ObjectId o) const;
};

std::set<ShardId> shards_of(const Transaction& txn, const ShardAssignment& assign);

struct ValidityReport {
    bool valid = true;
    std::vector<ObjectId> missing_support;  // inputs of well-behaved owners lacking support
    std::vector<ObjectId> forged_support;   // tokens naming the wrong owner
};

// Validity per the support-token rule: every input whose owner is
// well-behaved must carry that owner's token. `owner_of` gives the
// authoritative ownership map; `malicious_owner` marks owners the adversary
// controls (their tokens may be minted at will, so they never invalidate).
ValidityReport validate(const Transaction& txn,
                        const std::map<ObjectId, ClientId>& owner_of,
                        const std::set<ClientId>& malicious_owners);

struct LocalInputs {
    std::vector<ObjectId> required;   // I(S, txn): inputs placed on the shard
    std::vector<ObjectId> available;  // D(S, txn): the constructed, unpledged subset of I
};

class ShardInvolvementError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// I and D for one shard, given that shard's ledger. Throws
// ShardInvolvementError if the shard is not affected by the transaction.
LocalInputs local_inputs(const Transaction& txn, ShardId shard,
                         const ShardAssignment& assign,
                         const std::map<ObjectId, ObjectRecord>& ledger);

}  // namespace cerberus
