// Copyright 2026 the cerberus-sim developers. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#include "cerberus/fuzz.hpp"

#include <algorithm>

namespace cerberus {
namespace {

struct SplitMix64 {
    uint64_t state;
    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    // Uniform enough for scenario shaping; bound is always small here.
    uint64_t below(uint64_t bound) { return next() % bound; }
};

// The shady owner: the only one whose objects may be double-supported.
constexpr ClientId kShadyOwner = 4;

}  // namespace

Scenario generate_scenario(const FuzzOptions& opt, uint64_t seed) {
    SplitMix64 rng{seed * 0x9e3779b97f4a7c15ull + std::hash<std::string>{}(opt.protocol)};

    Scenario sc;
    sc.name = opt.protocol + "-fuzz-" + std::to_string(seed);
    sc.protocol = opt.protocol;
    sc.seed = seed;
    sc.delta = 10;
    sc.max_ticks = 200000;
    sc.liveness_window = 500;
    sc.params.assign.num_shards = opt.shards;
    sc.params.n = opt.n;
    sc.params.f = opt.f;
    // Generous retry budget: serial rounds can make a shard slow to reach a
    // queued transaction, and every re-proposal burns an attempt.
    if (opt.protocol == "ocb") {
        sc.params.view_timeout = 200;
        sc.params.max_attempts = 50;
    }

    // Genesis objects, pinned placements, owners 1..4.
    std::map<ObjectId, ClientId> owner_of;
    int num_genesis = 12 + static_cast<int>(rng.below(8));
    for (int i = 0; i < num_genesis; ++i) {
        ObjectRecord rec;
        rec.id = ObjectId{kGenesisTxn, static_cast<uint32_t>(i)};
        rec.owner = 1 + static_cast<ClientId>(rng.below(4));
        sc.genesis.push_back(rec);
        sc.params.assign.overrides[rec.id] = static_cast<ShardId>(rng.below(opt.shards));
        owner_of[rec.id] = rec.owner;
    }

    std::vector<ObjectId> pool;
    for (const auto& rec : sc.genesis) pool.push_back(rec.id);
    std::vector<ObjectId> conflictable;  // consumed shady-owner objects

    int num_txns = 10 + static_cast<int>(rng.below(
                            static_cast<uint64_t>(std::max(1, opt.max_txns - 9))));
    for (int i = 0; i < num_txns && !pool.empty(); ++i) {
        auto txn = std::make_shared<Transaction>();
        txn->id = 1000 + static_cast<TxnId>(i);
        txn->client = 1 + static_cast<ClientId>(rng.below(3));

        std::vector<ObjectId> inputs;
        // Conflict: re-spend an already consumed shady-owner object. Both
        // consumers carry correct tokens, so validity holds everywhere and
        // the owner is derivably malicious.
        if (!conflictable.empty() && rng.below(6) == 0) {
            size_t j = rng.below(conflictable.size());
            inputs.push_back(conflictable[j]);
            conflictable.erase(conflictable.begin() + static_cast<long>(j));
        }
        size_t want = 1 + rng.below(3);
        while (inputs.size() < want && !pool.empty()) {
            size_t j = rng.below(pool.size());
            inputs.push_back(pool[j]);
            pool[j] = pool.back();
            pool.pop_back();
            if (owner_of[inputs.back()] == kShadyOwner) conflictable.push_back(inputs.back());
        }
        if (inputs.empty()) break;
        std::sort(inputs.begin(), inputs.end());
        inputs.erase(std::unique(inputs.begin(), inputs.end()), inputs.end());
        txn->inputs = inputs;
        for (const auto& in : inputs)
            txn->support[in] = SupportToken{owner_of[in], txn->id};

        int num_out = 1 + static_cast<int>(rng.below(2));
        for (int j = 0; j < num_out; ++j) {
            OutputSpec out;
            out.id = ObjectId{txn->id, static_cast<uint32_t>(j)};
            out.owner = 1 + static_cast<ClientId>(rng.below(4));
            txn->outputs.push_back(out);
            sc.params.assign.overrides[out.id] = static_cast<ShardId>(rng.below(opt.shards));
            owner_of[out.id] = out.owner;
        }

        // Outputs rejoin the pool; under the core protocol only when the
        // parent is single-shard, so a pledge round never waits on a remote
        // exchange that itself waits on this shard.
        bool reusable = opt.protocol != "ccb" ||
                        shards_of(*txn, sc.params.assign).size() == 1;
        if (reusable)
            for (const auto& out : txn->outputs) pool.push_back(out.id);

        sc.txns.push_back({txn, static_cast<Tick>(rng.below(600))});
    }

    // Adversary: up to f corrupted replicas per shard; every drop and delay
    // has a corrupted sender and ends before tick 900, so good-sender
    // traffic is never impeded and the run tail is a reliability window.
    std::vector<ReplicaId> corrupted;
    for (ShardId s = 0; s < opt.shards; ++s) {
        int c = std::min<int>(opt.f, static_cast<int>(rng.below(4)) - 1);
        std::set<int> picked;
        while (static_cast<int>(picked.size()) < c)
            picked.insert(static_cast<int>(rng.below(opt.n)));
        for (int idx : picked) {
            ReplicaId r{s, idx};
            sc.adversary.corrupted.insert(r);
            corrupted.push_back(r);
            if (rng.below(2) == 0) {
                Tick a = static_cast<Tick>(rng.below(300));
                sc.adversary.silenced[r] = {a, a + 100 + static_cast<Tick>(rng.below(400))};
            }
        }
    }
    if (!corrupted.empty()) {
        std::vector<std::string> types =
            opt.protocol == "ocb"
                ? std::vector<std::string>{"", "", "", "GPrePrepare", "GPrepare", "GCommit"}
                : std::vector<std::string>{"", "", "", "Prepare", "Commit", "ClusterSend"};
        int num_rules = static_cast<int>(rng.below(5));
        for (int j = 0; j < num_rules; ++j) {
            AdversaryRule rule;
            rule.action = rng.below(3) == 0 ? AdversaryRule::Action::delay
                                            : AdversaryRule::Action::drop;
            rule.extra_delay = 10 + 10 * static_cast<Tick>(rng.below(3));
            rule.from_time = static_cast<Tick>(rng.below(400));
            rule.to_time = rule.from_time + 100 + static_cast<Tick>(rng.below(400));
            rule.msg_type = types[rng.below(types.size())];
            rule.senders.insert(NodeId::of(corrupted[rng.below(corrupted.size())]));
            if (rng.below(2) == 0) {
                ShardId s = static_cast<ShardId>(rng.below(opt.shards));
                for (int idx = 0; idx < opt.n; ++idx)
                    rule.receivers.insert(NodeId::of(ReplicaId{s, idx}));
            }
            sc.adversary.rules.push_back(rule);
        }
    }

    sc.check();
    return sc;
}

FuzzResult fuzz_one(const FuzzOptions& opt, uint64_t seed) {
    FuzzResult res;
    res.seed = seed;
    Scenario sc = generate_scenario(opt, seed);
    RunResult run = run_scenario(sc);
    CheckReport rep = check_all(run);
    if (!rep.ok()) {
        res.ok = false;
        res.issues = rep.issues();
    }
    // Cross-check the serial order against the brute-force oracle when the
    // committed set is small enough to enumerate.
    auto committed = committed_txns(run);
    if (rep.serializability.ok() && committed.size() >= 1 && committed.size() <= 6) {
        auto orders = oracle_serial_orders(run);
        bool found = false;
        for (const auto& o : orders) found |= o == rep.serializability.order;
        if (!found) {
            res.ok = false;
            res.issues.push_back("serial order not confirmed by exhaustive oracle");
        }
    }
    return res;
}

FuzzSummary run_fuzz(const FuzzOptions& opt, uint64_t first_seed, int count) {
    FuzzSummary sum;
    for (int i = 0; i < count; ++i) {
        FuzzResult r = fuzz_one(opt, first_seed + static_cast<uint64_t>(i));
        ++sum.runs;
        if (!r.ok) {
            ++sum.failures;
            if (!sum.first_failing_seed) {
                sum.first_failing_seed = r.seed;
                sum.first_issues = r.issues;
            }
        }
    }
    return sum;
}

}  // namespace cerberus
