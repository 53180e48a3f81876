// Copyright 2026 the cerberus-sim developers. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#include "cerberus/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <variant>

namespace cerberus {

namespace {

struct Value {
    std::variant<int64_t, std::string, bool, std::vector<std::string>> v;
    int line = 0;
};

struct Table {
    std::string name;  // "" for top-level keys
    int line = 0;
    std::map<std::string, Value> kv;
};

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// Strips a trailing comment that is not inside a quoted string.
std::string strip_comment(const std::string& s) {
    bool quoted = false;
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') quoted = !quoted;
        if (s[i] == '#' && !quoted) return s.substr(0, i);
    }
    return s;
}

int64_t parse_int(const std::string& s, int line) {
    int64_t out = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc() || p != s.data() + s.size())
        throw ScenarioError(line, "expected an integer, got '" + s + "'");
    return out;
}

Value parse_value(const std::string& raw, int line) {
    std::string s = trim(raw);
    if (s.empty()) throw ScenarioError(line, "missing value");
    if (s.front() == '"') {
        if (s.size() < 2 || s.back() != '"')
            throw ScenarioError(line, "unterminated string");
        return Value{s.substr(1, s.size() - 2), line};
    }
    if (s == "true") return Value{true, line};
    if (s == "false") return Value{false, line};
    if (s.front() == '[') {
        if (s.back() != ']') throw ScenarioError(line, "unterminated array");
        std::vector<std::string> items;
        std::string body = s.substr(1, s.size() - 2);
        size_t pos = 0;
        while (pos < body.size()) {
            size_t comma = body.find(',', pos);
            std::string item = trim(body.substr(pos, comma - pos));
            if (!item.empty()) {
                if (item.front() == '"' && item.back() == '"' && item.size() >= 2)
                    item = item.substr(1, item.size() - 2);
                items.push_back(item);
            }
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        return Value{std::move(items), line};
    }
    return Value{parse_int(s, line), line};
}

std::vector<Table> parse_tables(std::istream& in) {
    std::vector<Table> tables;
    tables.push_back(Table{"", 0, {}});
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = trim(strip_comment(raw));
        if (s.empty()) continue;
        if (s.front() == '[') {
            bool array = s.rfind("[[", 0) == 0;
            std::string close = array ? "]]" : "]";
            if (s.substr(s.size() - close.size()) != close)
                throw ScenarioError(line, "malformed section header");
            std::string name =
                trim(s.substr(array ? 2 : 1, s.size() - 2 * (array ? 2 : 1)));
            if (name.empty()) throw ScenarioError(line, "empty section name");
            tables.push_back(Table{name, line, {}});
            continue;
        }
        size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw ScenarioError(line, "expected 'key = value'");
        std::string key = trim(s.substr(0, eq));
        if (key.empty()) throw ScenarioError(line, "empty key");
        if (tables.back().kv.count(key))
            throw ScenarioError(line, "duplicate key '" + key + "'");
        tables.back().kv[key] = parse_value(s.substr(eq + 1), line);
    }
    return tables;
}

class Reader {
  public:
    explicit Reader(const Table& t) : t_(t) {}

    bool has(const std::string& key) const { return t_.kv.count(key) > 0; }

    int64_t num(const std::string& key, int64_t dflt) const {
        auto it = t_.kv.find(key);
        if (it == t_.kv.end()) return dflt;
        if (auto* n = std::get_if<int64_t>(&it->second.v)) return *n;
        throw ScenarioError(it->second.line, "'" + key + "' must be an integer");
    }
    int64_t num(const std::string& key) const {
        require(key);
        return num(key, 0);
    }
    std::string str(const std::string& key, const std::string& dflt) const {
        auto it = t_.kv.find(key);
        if (it == t_.kv.end()) return dflt;
        if (auto* s = std::get_if<std::string>(&it->second.v)) return *s;
        throw ScenarioError(it->second.line, "'" + key + "' must be a string");
    }
    std::string str(const std::string& key) const {
        require(key);
        return str(key, "");
    }
    std::vector<std::string> list(const std::string& key) const {
        auto it = t_.kv.find(key);
        if (it == t_.kv.end()) return {};
        if (auto* l = std::get_if<std::vector<std::string>>(&it->second.v)) return *l;
        throw ScenarioError(it->second.line, "'" + key + "' must be an array");
    }
    int line(const std::string& key) const {
        auto it = t_.kv.find(key);
        return it == t_.kv.end() ? t_.line : it->second.line;
    }
    int line() const { return t_.line; }

    void check_keys(const std::set<std::string>& allowed) const {
        for (const auto& [k, v] : t_.kv)
            if (!allowed.count(k))
                throw ScenarioError(v.line, "unknown key '" + k + "'");
    }

  private:
    void require(const std::string& key) const {
        if (!has(key)) throw ScenarioError(t_.line, "missing key '" + key + "'");
    }
    const Table& t_;
};

ObjectId parse_object_id(const std::string& s, int line) {
    size_t colon = s.find(':');
    if (colon == std::string::npos)
        throw ScenarioError(line, "object id must look like 'txn:index', got '" + s + "'");
    return ObjectId{uint64_t(parse_int(s.substr(0, colon), line)),
                    uint32_t(parse_int(s.substr(colon + 1), line))};
}

ReplicaId parse_replica_id(const std::string& s, int line) {
    size_t dot = s.find('.');
    if (dot == std::string::npos)
        throw ScenarioError(line, "replica id must look like 'shard.index', got '" + s + "'");
    return ReplicaId{ShardId(parse_int(s.substr(0, dot), line)),
                     int(parse_int(s.substr(dot + 1), line))};
}

// Receiver/sender set entries: "s.i" for a replica, "s.*" for a whole
// shard, "c<id>" for a client.
void add_nodes(std::set<NodeId>& out, const std::string& s, int n, int line) {
    if (!s.empty() && s.front() == 'c') {
        out.insert(NodeId::of_client(ClientId(parse_int(s.substr(1), line))));
        return;
    }
    size_t dot = s.find('.');
    if (dot != std::string::npos && s.substr(dot + 1) == "*") {
        ShardId shard = ShardId(parse_int(s.substr(0, dot), line));
        for (int i = 0; i < n; ++i) out.insert(NodeId::of(ReplicaId{shard, i}));
        return;
    }
    out.insert(NodeId::of(parse_replica_id(s, line)));
}

}  // namespace

Scenario parse_scenario(std::istream& in, const std::string& name) {
    std::vector<Table> tables = parse_tables(in);
    Scenario sc;
    sc.name = name;
    std::map<ObjectId, ClientId> owner_of;
    std::map<ObjectId, int> minted_at;  // declaration line, for diagnostics
    std::set<TxnId> txn_ids;

    for (const Table& t : tables) {
        Reader r(t);
        if (t.name.empty()) {
            if (t.kv.empty()) continue;
            r.check_keys({"protocol", "shards", "n", "f", "seed", "delta", "max_ticks",
                          "view_timeout", "max_attempts", "liveness_window", "name"});
            sc.protocol = r.str("protocol", sc.protocol);
            sc.name = r.str("name", sc.name);
            sc.params.assign.num_shards = int(r.num("shards", 1));
            sc.params.n = int(r.num("n", sc.params.n));
            sc.params.f = int(r.num("f", sc.params.f));
            sc.params.view_timeout = r.num("view_timeout", sc.params.view_timeout);
            sc.params.max_attempts = int(r.num("max_attempts", sc.params.max_attempts));
            sc.seed = uint64_t(r.num("seed", int64_t(sc.seed)));
            sc.delta = r.num("delta", sc.delta);
            sc.max_ticks = r.num("max_ticks", sc.max_ticks);
            sc.liveness_window = r.num("liveness_window", sc.liveness_window);
            if (sc.protocol != "ccb" && sc.protocol != "ocb" && sc.protocol != "pcb")
                throw ScenarioError(r.line("protocol"), "unknown protocol '" + sc.protocol +
                                                            "' (expected ccb|ocb|pcb)");
        } else if (t.name == "object") {
            r.check_keys({"id", "owner", "shard"});
            ObjectId id = parse_object_id(r.str("id"), r.line("id"));
            if (minted_at.count(id))
                throw ScenarioError(r.line("id"), "object declared twice");
            ClientId owner = ClientId(r.num("owner", 1));
            if (r.has("shard"))
                sc.params.assign.overrides[id] = ShardId(r.num("shard"));
            sc.genesis.push_back(ObjectRecord{id, owner, ObjectStatus::constructed, -1});
            owner_of[id] = owner;
            minted_at[id] = r.line();
        } else if (t.name == "txn") {
            r.check_keys({"id", "client", "submit_at", "inputs", "outputs", "no_support"});
            auto txn = std::make_shared<Transaction>();
            txn->id = TxnId(r.num("id"));
            if (txn->id == 0 || !txn_ids.insert(txn->id).second)
                throw ScenarioError(r.line("id"), "transaction ids must be unique and nonzero");
            txn->client = ClientId(r.num("client", 1));
            std::set<ObjectId> skip;
            for (const auto& s : r.list("no_support"))
                skip.insert(parse_object_id(s, r.line("no_support")));
            for (const auto& s : r.list("inputs")) {
                ObjectId in_id = parse_object_id(s, r.line("inputs"));
                auto owner = owner_of.find(in_id);
                if (owner == owner_of.end())
                    throw ScenarioError(r.line("inputs"),
                                        "input '" + s + "' was never declared or minted");
                txn->inputs.push_back(in_id);
                if (!skip.count(in_id))
                    txn->support[in_id] = SupportToken{owner->second, txn->id};
            }
            std::sort(txn->inputs.begin(), txn->inputs.end());
            for (const auto& s : r.list("outputs")) {
                size_t at = s.find('@');
                ObjectId out_id = parse_object_id(s.substr(0, at), r.line("outputs"));
                if (out_id.txn != txn->id)
                    throw ScenarioError(r.line("outputs"),
                                        "outputs must be minted under the txn's own id");
                if (minted_at.count(out_id))
                    throw ScenarioError(r.line("outputs"), "object minted twice");
                if (at != std::string::npos)
                    sc.params.assign.overrides[out_id] =
                        ShardId(parse_int(s.substr(at + 1), r.line("outputs")));
                txn->outputs.push_back(OutputSpec{out_id, txn->client});
                owner_of[out_id] = txn->client;
                minted_at[out_id] = r.line();
            }
            std::sort(txn->outputs.begin(), txn->outputs.end(),
                      [](const OutputSpec& a, const OutputSpec& b) { return a.id < b.id; });
            sc.txns.push_back(Scenario::Submission{txn, r.num("submit_at", 0)});
        } else if (t.name == "corrupt") {
            r.check_keys({"replica", "silence_from", "silence_to"});
            ReplicaId rep = parse_replica_id(r.str("replica"), r.line("replica"));
            sc.adversary.corrupted.insert(rep);
            if (r.has("silence_from") || r.has("silence_to"))
                sc.adversary.silenced[rep] = {r.num("silence_from", 0),
                                              r.num("silence_to", INT64_MAX)};
        } else if (t.name == "rule") {
            r.check_keys({"action", "delay", "from", "to", "msg_type", "txn",
                          "sender_shard", "senders", "receivers"});
            AdversaryRule rule;
            std::string action = r.str("action", "drop");
            if (action == "drop")
                rule.action = AdversaryRule::Action::drop;
            else if (action == "delay")
                rule.action = AdversaryRule::Action::delay;
            else
                throw ScenarioError(r.line("action"), "action must be drop or delay");
            rule.extra_delay = r.num("delay", 0);
            rule.from_time = r.num("from", 0);
            rule.to_time = r.num("to", INT64_MAX);
            rule.msg_type = r.str("msg_type", "");
            rule.txn = TxnId(r.num("txn", 0));
            rule.sender_shard = ShardId(r.num("sender_shard", -1));
            for (const auto& s : r.list("senders"))
                add_nodes(rule.senders, s, sc.params.n, r.line("senders"));
            for (const auto& s : r.list("receivers"))
                add_nodes(rule.receivers, s, sc.params.n, r.line("receivers"));
            sc.adversary.rules.push_back(rule);
        } else {
            throw ScenarioError(t.line, "unknown section '" + t.name + "'");
        }
    }
    sc.check();
    return sc;
}

void Scenario::check() const {
    if (params.assign.num_shards < 1) throw ScenarioError(0, "shards must be >= 1");
    if (params.n <= 3 * params.f)
        throw ScenarioError(0, "n must exceed 3f (n=" + std::to_string(params.n) +
                                   ", f=" + std::to_string(params.f) + ")");
    for (const auto& [o, s] : params.assign.overrides)
        if (s < 0 || s >= params.assign.num_shards)
            throw ScenarioError(0, "placement override outside the shard range");
    std::map<ShardId, int> corrupted_per_shard;
    for (const auto& r : adversary.corrupted) {
        if (r.shard < 0 || r.shard >= params.assign.num_shards || r.index < 0 ||
            r.index >= params.n)
            throw ScenarioError(0, "corrupted replica outside the topology");
        if (++corrupted_per_shard[r.shard] > params.f)
            throw ScenarioError(0, "more than f corrupted replicas in shard " +
                                       std::to_string(r.shard));
    }
    for (const auto& [r, w] : adversary.silenced)
        if (!adversary.corrupted.count(r))
            throw ScenarioError(0, "silenced replica is not corrupted");
    for (const auto& sub : txns)
        if (!sub.txn->well_formed())
            throw ScenarioError(0, "transaction " + std::to_string(sub.txn->id) +
                                       " is not well-formed");
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError(0, "cannot open scenario file '" + path + "'");
    std::string name = path;
    size_t slash = name.find_last_of('/');
    if (slash != std::string::npos) name = name.substr(slash + 1);
    size_t dot = name.find_last_of('.');
    if (dot != std::string::npos) name = name.substr(0, dot);
    return parse_scenario(in, name);
}

}  // namespace cerberus
