// Copyright 2026 the cerberus-sim developers. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#include "cerberus/analysis.hpp"

#include <algorithm>

namespace cerberus {

namespace {

std::map<TxnId, TransactionPtr> submitted(const RunResult& run) {
    std::map<TxnId, TransactionPtr> out;
    for (const auto& sub : run.submissions) out[sub.txn->id] = sub.txn;
    return out;
}

// Authoritative ownership over every object that can exist in the run.
std::map<ObjectId, ClientId> owner_map(const RunResult& run) {
    std::map<ObjectId, ClientId> owners;
    for (const auto& rec : run.genesis) owners[rec.id] = rec.owner;
    for (const auto& sub : run.submissions)
        for (const auto& out : sub.txn->outputs) owners[out.id] = out.owner;
    return owners;
}

bool is_good(const RunResult& run, ReplicaId id) { return !run.corrupted.count(id); }

std::optional<ReplicaId> parse_replica_label(const std::string& s) {
    if (s.size() < 4 || s[0] != 'r') return std::nullopt;
    size_t dot = s.find('.');
    if (dot == std::string::npos) return std::nullopt;
    try {
        return ReplicaId{ShardId(std::stoi(s.substr(1, dot - 1))),
                         int(std::stoi(s.substr(dot + 1)))};
    } catch (...) {
        return std::nullopt;
    }
}

// Strict validity: every input is a known object carrying its true owner's
// token for this transaction.
bool strictly_valid(const Transaction& txn, const std::map<ObjectId, ClientId>& owners) {
    if (!txn.well_formed()) return false;
    for (const auto& in : txn.inputs) {
        auto owner = owners.find(in);
        if (owner == owners.end()) return false;
        auto tok = txn.support.find(in);
        if (tok == txn.support.end()) return false;
        if (tok->second.owner != owner->second || tok->second.txn != txn.id) return false;
    }
    return true;
}

void fail(Requirement& r, std::string msg) {
    r.ok = false;
    r.issues.push_back(std::move(msg));
}

}  // namespace

std::set<ClientId> derive_malicious_owners(const RunResult& run) {
    std::map<ObjectId, std::set<TxnId>> supported_to;
    for (const auto& sub : run.submissions)
        for (const auto& [obj, tok] : sub.txn->support)
            if (tok.txn == sub.txn->id) supported_to[obj].insert(sub.txn->id);
    std::map<ObjectId, ClientId> owners = owner_map(run);
    std::set<ClientId> malicious;
    for (const auto& [obj, txns] : supported_to) {
        if (txns.size() < 2) continue;
        auto it = owners.find(obj);
        if (it != owners.end()) malicious.insert(it->second);
    }
    return malicious;
}

std::set<TxnId> committed_txns(const RunResult& run) {
    std::set<TxnId> out;
    for (const auto& rep : run.replicas) {
        if (!is_good(run, rep.id)) continue;
        for (const auto& o : rep.outcomes)
            if (o.commit) out.insert(o.txn->id);
    }
    return out;
}

PrecedenceGraph build_precedence(const RunResult& run) {
    PrecedenceGraph g;
    g.nodes = committed_txns(run);
    auto txns = submitted(run);
    std::map<ObjectId, TxnId> minted_by;
    for (TxnId id : g.nodes)
        for (const auto& out : txns.at(id)->outputs) minted_by[out.id] = id;
    for (TxnId id : g.nodes)
        for (const auto& in : txns.at(id)->inputs) {
            auto it = minted_by.find(in);
            if (it != minted_by.end() && it->second != id) g.edges[it->second].insert(id);
        }
    return g;
}

bool replay_order(const RunResult& run, const std::vector<TxnId>& order,
                  std::string* error) {
    auto txns = submitted(run);
    std::set<ObjectId> existing;
    for (const auto& rec : run.genesis) existing.insert(rec.id);
    for (TxnId id : order) {
        const auto& txn = *txns.at(id);
        for (const auto& in : txn.inputs) {
            if (!existing.erase(in)) {
                if (error)
                    *error = "txn " + std::to_string(id) + " consumes missing object " +
                             to_string(in);
                return false;
            }
        }
        for (const auto& out : txn.outputs) existing.insert(out.id);
    }
    return true;
}

SerializabilityReport check_serializable(const RunResult& run) {
    SerializabilityReport rep;
    PrecedenceGraph g = build_precedence(run);

    std::map<TxnId, int> indegree;
    for (TxnId id : g.nodes) indegree[id] = 0;
    for (const auto& [from, tos] : g.edges)
        for (TxnId to : tos) ++indegree[to];

    std::set<TxnId> ready;
    for (const auto& [id, deg] : indegree)
        if (deg == 0) ready.insert(id);
    while (!ready.empty()) {
        TxnId id = *ready.begin();
        ready.erase(ready.begin());
        rep.order.push_back(id);
        auto it = g.edges.find(id);
        if (it == g.edges.end()) continue;
        for (TxnId to : it->second)
            if (--indegree[to] == 0) ready.insert(to);
    }
    if (rep.order.size() != g.nodes.size()) {
        rep.acyclic = false;
        // Cycle witness: walk forward inside the unresolved set until a node
        // repeats.
        std::set<TxnId> left;
        for (const auto& [id, deg] : indegree)
            if (deg > 0 && std::find(rep.order.begin(), rep.order.end(), id) ==
                               rep.order.end())
                left.insert(id);
        if (!left.empty()) {
            std::vector<TxnId> path;
            std::set<TxnId> seen;
            TxnId cur = *left.begin();
            while (!seen.count(cur)) {
                seen.insert(cur);
                path.push_back(cur);
                TxnId next = cur;
                for (TxnId to : g.edges[cur])
                    if (left.count(to)) {
                        next = to;
                        break;
                    }
                cur = next;
            }
            auto start = std::find(path.begin(), path.end(), cur);
            rep.cycle.assign(start, path.end());
            rep.issues.push_back("precedence cycle over committed transactions");
        }
        return rep;
    }
    std::string err;
    rep.replay_ok = replay_order(run, rep.order, &err);
    if (!rep.replay_ok) rep.issues.push_back("replay failed: " + err);
    return rep;
}

RequirementReport check_requirements(const RunResult& run) {
    RequirementReport rep;
    auto txns = submitted(run);
    auto owners = owner_map(run);
    auto malicious = derive_malicious_owners(run);
    std::set<TxnId> committed = committed_txns(run);

    // R1 validity: committed transactions carry every well-behaved owner's
    // support.
    for (TxnId id : committed) {
        const auto& txn = *txns.at(id);
        ValidityReport v = validate(txn, owners, malicious);
        if (!v.valid)
            fail(rep.r1, "committed txn " + std::to_string(id) +
                             " lacks well-behaved-owner support");
    }

    // R2 involvement: replicas only decide transactions of their shard.
    for (const auto& replica : run.replicas) {
        if (!is_good(run, replica.id)) continue;
        for (const auto& o : replica.outcomes)
            if (!shards_of(*o.txn, run.params.assign).count(replica.id.shard))
                fail(rep.r2, to_string(replica.id) + " decided uninvolved txn " +
                                 std::to_string(o.txn->id));
    }

    // R3 applicability: committed transactions consume only objects that
    // exist; no object is consumed twice.
    {
        std::map<ObjectId, TxnId> minted_by;
        for (const auto& rec : run.genesis) minted_by[rec.id] = kGenesisTxn;
        for (TxnId id : committed)
            for (const auto& out : txns.at(id)->outputs) minted_by[out.id] = id;
        std::map<ObjectId, TxnId> consumed_by;
        for (TxnId id : committed)
            for (const auto& in : txns.at(id)->inputs) {
                if (!minted_by.count(in) ||
                    (minted_by[in] != kGenesisTxn && !committed.count(minted_by[in])))
                    fail(rep.r3, "txn " + std::to_string(id) +
                                     " consumed never-constructed object " + to_string(in));
                auto [it, fresh] = consumed_by.emplace(in, id);
                if (!fresh)
                    fail(rep.r3, "object " + to_string(in) + " consumed by txns " +
                                     std::to_string(it->second) + " and " +
                                     std::to_string(id));
            }
    }

    // R4 uniform decisions: good replicas never disagree, and decide at most
    // once per transaction.
    {
        std::map<TxnId, std::set<bool>> decisions;
        for (const auto& replica : run.replicas) {
            if (!is_good(run, replica.id)) continue;
            std::set<TxnId> seen;
            for (const auto& o : replica.outcomes) {
                if (!seen.insert(o.txn->id).second)
                    fail(rep.r4, to_string(replica.id) + " decided txn " +
                                     std::to_string(o.txn->id) + " twice");
                decisions[o.txn->id].insert(o.commit);
            }
        }
        for (const auto& [id, ds] : decisions)
            if (ds.size() > 1)
                fail(rep.r4, "divergent decisions for txn " + std::to_string(id));
    }

    // R5 service / R6 confirmation, scoped to runs whose final segment is a
    // declared reliability window.
    rep.liveness_checked = run.liveness_window > 0;
    if (rep.liveness_checked) {
        if (!run.quiesced) fail(rep.r5, "run did not quiesce");

        // Eligibility per protocol scope. Strict validity throughout; the
        // core protocol additionally needs well-behaved owners, and the
        // optimistic protocol conflict-free schedules over live objects.
        std::set<TxnId> eligible;
        std::map<ObjectId, int> input_uses;
        for (const auto& sub : run.submissions)
            for (const auto& in : sub.txn->inputs) ++input_uses[in];
        bool grown = true;
        std::set<ObjectId> live;
        for (const auto& rec : run.genesis) live.insert(rec.id);
        while (grown) {
            grown = false;
            for (const auto& sub : run.submissions) {
                TxnId id = sub.txn->id;
                if (eligible.count(id) || !strictly_valid(*sub.txn, owners)) continue;
                bool ok = true;
                if (run.protocol == "ccb")
                    for (const auto& in : sub.txn->inputs)
                        if (malicious.count(owners.at(in))) ok = false;
                if (run.protocol == "ocb")
                    for (const auto& in : sub.txn->inputs)
                        if (input_uses[in] > 1 || !live.count(in)) ok = false;
                if (!ok) continue;
                eligible.insert(id);
                if (run.protocol == "ocb") {
                    for (const auto& out : sub.txn->outputs) live.insert(out.id);
                    grown = true;
                }
            }
            if (run.protocol != "ocb") break;
        }

        for (TxnId id : eligible) {
            const auto& txn = *txns.at(id);
            for (const auto& replica : run.replicas) {
                if (!is_good(run, replica.id)) continue;
                if (!shards_of(txn, run.params.assign).count(replica.id.shard)) continue;
                bool decided = false;
                for (const auto& o : replica.outcomes) decided |= o.txn->id == id;
                if (!decided)
                    fail(rep.r5, to_string(replica.id) + " never decided eligible txn " +
                                     std::to_string(id));
            }
            auto conf = run.confirmations.find(txn.client);
            bool confirmed = false;
            if (conf != run.confirmations.end())
                for (const auto& c : conf->second) confirmed |= c.txn->id == id;
            if (!confirmed)
                fail(rep.r6,
                     "client " + std::to_string(txn.client) +
                         " holds no confirmation for eligible txn " + std::to_string(id));
        }
    }
    return rep;
}

Requirement check_non_divergence(const RunResult& run) {
    Requirement req;
    if (run.protocol != "ocb") return req;
    // One accepted certificate per (shard, view, round) across good replicas
    // that reached the commit phase.
    std::map<std::tuple<ShardId, View, Round>, std::pair<TxnId, std::string>> accepted;
    for (const auto& ev : run.trace.events) {
        if (ev.kind != EventKind::commit_phase) continue;
        auto rep = parse_replica_label(ev.receiver);
        if (!rep || run.corrupted.count(*rep)) continue;
        auto key = std::make_tuple(ev.shard, ev.view, ev.round);
        auto [it, fresh] = accepted.emplace(key, std::make_pair(ev.txn, ev.receiver));
        if (!fresh && it->second.first != ev.txn)
            fail(req, "slot (shard " + std::to_string(ev.shard) + ", view " +
                          std::to_string(ev.view) + ", round " + std::to_string(ev.round) +
                          ") reached the commit phase for txns " +
                          std::to_string(it->second.first) + " and " +
                          std::to_string(ev.txn));
    }
    return req;
}

Requirement check_conservation(const RunResult& run) {
    Requirement req;
    auto txns = submitted(run);
    for (const auto& replica : run.replicas) {
        if (!is_good(run, replica.id)) continue;
        // Objects this replica committed away, and inputs of its local
        // aborts (which may legitimately stay pledged in the core protocol).
        std::set<ObjectId> committed_away;
        std::set<ObjectId> abort_touched;
        std::set<TxnId> local_committed;
        for (const auto& o : replica.outcomes) {
            for (const auto& in : o.txn->inputs) {
                if (run.params.assign.placement(in) != replica.id.shard) continue;
                (o.commit ? committed_away : abort_touched).insert(in);
            }
            if (o.commit) local_committed.insert(o.txn->id);
        }
        std::set<ObjectId> pending_touched;  // inputs of undecided submissions
        for (const auto& sub : run.submissions) {
            if (local_committed.count(sub.txn->id)) continue;
            bool decided = false;
            for (const auto& o : replica.outcomes) decided |= o.txn->id == sub.txn->id;
            if (decided) continue;
            for (const auto& in : sub.txn->inputs)
                if (run.params.assign.placement(in) == replica.id.shard)
                    pending_touched.insert(in);
        }
        for (const auto& [id, rec] : replica.ledger) {
            const char* expect = nullptr;
            if (committed_away.count(id)) {
                if (rec.status != ObjectStatus::destructed) expect = "destructed";
            } else if (rec.status == ObjectStatus::destructed) {
                expect = "not destructed";
            } else if (rec.status == ObjectStatus::pledged) {
                // Only the core protocol pledges durably, and only for
                // inputs an abort or an undecided transaction touched.
                if (run.protocol != "ccb" ||
                    (!abort_touched.count(id) && !pending_touched.count(id)))
                    expect = "constructed";
            }
            if (expect)
                fail(req, to_string(replica.id) + ": object " + to_string(id) +
                              " should be " + expect);
        }
        // Committed local outputs must exist as constructed objects.
        for (TxnId id : local_committed)
            for (const auto& out : txns.at(id)->outputs) {
                if (run.params.assign.placement(out.id) != replica.id.shard) continue;
                auto it = replica.ledger.find(out.id);
                if (it == replica.ledger.end())
                    fail(req, to_string(replica.id) + ": committed output " +
                                  to_string(out.id) + " missing from the ledger");
            }
    }
    return req;
}

CheckReport check_all(const RunResult& run) {
    CheckReport rep;
    rep.requirements = check_requirements(run);
    rep.serializability = check_serializable(run);
    rep.non_divergence = check_non_divergence(run);
    rep.conservation = check_conservation(run);
    return rep;
}

std::vector<std::string> CheckReport::issues() const {
    std::vector<std::string> out;
    auto grab = [&out](const char* tag, const std::vector<std::string>& v) {
        for (const auto& s : v) out.push_back(std::string(tag) + ": " + s);
    };
    grab("R1", requirements.r1.issues);
    grab("R2", requirements.r2.issues);
    grab("R3", requirements.r3.issues);
    grab("R4", requirements.r4.issues);
    grab("R5", requirements.r5.issues);
    grab("R6", requirements.r6.issues);
    grab("serializability", serializability.issues);
    grab("non-divergence", non_divergence.issues);
    grab("conservation", conservation.issues);
    return out;
}

CostMetrics measure_cost(const RunResult& run, TxnId txn) {
    CostMetrics m;
    const Scenario::Submission* sub = nullptr;
    for (const auto& s : run.submissions)
        if (s.txn->id == txn) sub = &s;
    if (!sub) return m;
    std::set<ShardId> shards = shards_of(*sub->txn, run.params.assign);

    Tick decided = 0;
    std::set<ShardId> counted;
    for (const auto& replica : run.replicas) {
        if (!is_good(run, replica.id)) continue;
        for (const auto& o : replica.outcomes) {
            if (o.txn->id != txn) continue;
            decided = std::max(decided, o.decided_at);
            if (counted.insert(replica.id.shard).second)
                m.consensus_slots +=
                    (o.outcome_round >= 0 && o.outcome_round != o.pledge_round) ? 2 : 1;
        }
    }
    m.phases = (decided - (sub->at + run.delta)) / run.delta;

    std::set<std::string> kinds;
    for (const auto& ev : run.trace.events) {
        if (ev.kind != EventKind::delivery || ev.txn != txn) continue;
        auto from = parse_replica_label(ev.sender);
        auto to = parse_replica_label(ev.receiver);
        if (from && to && from->shard != to->shard) kinds.insert(ev.msg_type);
    }
    m.exchanges = int(kinds.size());
    return m;
}

std::vector<std::vector<TxnId>> oracle_serial_orders(const RunResult& run) {
    std::set<TxnId> committed = committed_txns(run);
    std::vector<TxnId> ids(committed.begin(), committed.end());
    std::vector<std::vector<TxnId>> valid;
    if (ids.size() > 8) return valid;  // guard: factorial blow-up
    std::sort(ids.begin(), ids.end());
    do {
        if (replay_order(run, ids)) valid.push_back(ids);
    } while (std::next_permutation(ids.begin(), ids.end()));
    return valid;
}

}  // namespace cerberus
