// Copyright 2026 the cerberus-sim developers. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <string>

namespace cerberus {

using ShardId = int32_t;
using ClientId = int32_t;
using TxnId = uint64_t;
using View = int64_t;
using Round = int64_t;
using Tick = int64_t;

// Reserved creating-transaction id for genesis objects.
inline constexpr TxnId kGenesisTxn = 0;

// Objects are identified by (creating txn, output index), which makes
// recreation structurally impossible: a new construction always happens
// under a fresh transaction id.
struct ObjectId {
    TxnId txn = kGenesisTxn;
    uint32_t index = 0;

    auto operator<=>(const ObjectId&) const = default;
};

struct ReplicaId {
    ShardId shard = -1;
    int32_t index = -1;

    auto operator<=>(const ReplicaId&) const = default;
    bool valid() const { return shard >= 0 && index >= 0; }
};

// A node in the simulation is either a replica or a client.
struct NodeId {
    enum class Kind : uint8_t { replica, client };
    Kind kind = Kind::replica;
    ReplicaId replica{};
    ClientId client = -1;

    static NodeId of(ReplicaId r) { return NodeId{Kind::replica, r, -1}; }
    static NodeId of_client(ClientId c) { return NodeId{Kind::client, {}, c}; }
    bool is_replica() const { return kind == Kind::replica; }
    auto operator<=>(const NodeId&) const = default;
};

std::string to_string(ObjectId id);
std::string to_string(ReplicaId id);
std::string to_string(NodeId id);

// FNV-1a over arbitrary field streams; used for message digests and the
// default object placement. Not cryptographic: the simulator enforces
// authentication separately.
struct Digest {
    uint64_t value = 14695981039346656037ull;

    Digest& mix(uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            value ^= (v >> (8 * i)) & 0xff;
            value *= 1099511628211ull;
        }
        return *this;
    }
    Digest& mix(ObjectId o) { return mix(o.txn), mix(o.index); }
    auto operator<=>(const Digest&) const = default;
};

}  // namespace cerberus

template <>
struct std::hash<cerberus::ObjectId> {
    size_t operator()(const cerberus::ObjectId& o) const {
        return std::hash<uint64_t>()(o.txn * 1000003u + o.index);
    }
};

template <>
struct std::hash<cerberus::ReplicaId> {
    size_t operator()(const cerberus::ReplicaId& r) const {
        return std::hash<int64_t>()((int64_t(r.shard) << 32) | uint32_t(r.index));
    }
};
