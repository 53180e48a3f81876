// Copyright 2026 the cerberus-sim developers. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#include "cerberus/runner.hpp"

#include "cerberus/ccerberus.hpp"
#include "cerberus/ocerberus.hpp"
#include "cerberus/pcerberus.hpp"

namespace cerberus {

namespace {

template <class R>
std::vector<ProtocolReplica*> build_replicas(Simulation& sim, const Scenario& sc) {
    std::vector<ProtocolReplica*> out;
    for (int s = 0; s < sc.params.assign.num_shards; ++s)
        for (int i = 0; i < sc.params.n; ++i) {
            auto r = std::make_unique<R>(ReplicaId{s, i}, sc.params);
            for (const auto& rec : sc.genesis)
                if (sc.params.assign.placement(rec.id) == s) r->seed_object(rec);
            out.push_back(r.get());
            sim.add_actor(NodeId::of(ReplicaId{s, i}), std::move(r));
        }
    return out;
}

}  // namespace

const ReplicaSnapshot* RunResult::replica(ReplicaId id) const {
    for (const auto& r : replicas)
        if (r.id == id) return &r;
    return nullptr;
}

RunResult run_scenario(const Scenario& sc, bool record_deliveries) {
    sc.check();
    Simulation sim(sc.params.assign.num_shards, sc.params.n, sc.delta);
    sim.trace().record_deliveries = record_deliveries;

    std::vector<ProtocolReplica*> replicas;
    if (sc.protocol == "ccb")
        replicas = build_replicas<CcbReplica>(sim, sc);
    else if (sc.protocol == "ocb")
        replicas = build_replicas<OcbReplica>(sim, sc);
    else
        replicas = build_replicas<PcbReplica>(sim, sc);

    std::map<ClientId, ClientActor*> clients;
    for (const auto& sub : sc.txns) {
        ClientId c = sub.txn->client;
        if (!clients.count(c)) {
            auto actor = std::make_unique<ClientActor>(c, sc.params);
            clients[c] = actor.get();
            sim.add_actor(NodeId::of_client(c), std::move(actor));
        }
        int idx = clients[c]->add_plan(sub.txn, sub.at);
        sim.post(sub.at, Envelope{NodeId::of_client(c), NodeId::of_client(c), sub.at,
                                  TimerFire{100, uint64_t(idx), -1, 0}});
    }
    sim.set_adversary(sc.adversary);

    Tick end = sim.run(sc.max_ticks);

    RunResult res;
    res.protocol = sc.protocol;
    res.params = sc.params;
    res.delta = sc.delta;
    res.end_tick = end;
    res.quiesced = end < sc.max_ticks;
    res.liveness_window = sc.liveness_window;
    res.reliable_from = sc.liveness_window > 0 ? sc.adversary.reliable_from() : 0;
    res.submissions = sc.txns;
    res.genesis = sc.genesis;
    res.corrupted = sc.adversary.corrupted;
    for (ProtocolReplica* r : replicas)
        res.replicas.push_back(ReplicaSnapshot{r->id(), sim.is_corrupted(r->id()),
                                               r->ledger(), r->outcomes()});
    for (const auto& [id, c] : clients) res.confirmations[id] = c->confirmations();
    res.trace = std::move(sim.trace());
    return res;
}

}  // namespace cerberus
