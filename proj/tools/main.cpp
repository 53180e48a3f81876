// Copyright 2026 the cerberus-sim developers. Licensed under the
// Apache License, Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "cerberus/costmodel.hpp"
#include "cerberus/fuzz.hpp"

namespace fs = std::filesystem;
using namespace cerberus;

namespace {

std::string default_out_dir() {
    const char* env = std::getenv("CERBERUS_OUT_DIR");
    return env && *env ? env : "out";
}

nlohmann::json requirement_json(const Requirement& r) {
    return {{"ok", r.ok}, {"issues", r.issues}};
}

nlohmann::json report_json(const RunResult& run, const CheckReport& rep) {
    std::vector<std::string> order_str;
    for (TxnId id : rep.serializability.order) order_str.push_back(std::to_string(id));
    nlohmann::json j = {
        {"protocol", run.protocol},
        {"end_tick", run.end_tick},
        {"quiesced", run.quiesced},
        {"ok", rep.ok()},
        {"requirements",
         {{"r1_validity", requirement_json(rep.requirements.r1)},
          {"r2_shard_involvement", requirement_json(rep.requirements.r2)},
          {"r3_applicability", requirement_json(rep.requirements.r3)},
          {"r4_uniform_decisions", requirement_json(rep.requirements.r4)},
          {"r5_service", requirement_json(rep.requirements.r5)},
          {"r6_confirmation", requirement_json(rep.requirements.r6)},
          {"liveness_checked", rep.requirements.liveness_checked}}},
        {"serializability",
         {{"acyclic", rep.serializability.acyclic},
          {"replay_ok", rep.serializability.replay_ok},
          {"order", order_str},
          {"issues", rep.serializability.issues}}},
        {"non_divergence", requirement_json(rep.non_divergence)},
        {"abort_conservation", requirement_json(rep.conservation)},
    };
    return j;
}

int cmd_run(const std::string& path, const std::string& out_dir,
            std::optional<uint64_t> seed) {
    Scenario sc;
    try {
        sc = load_scenario(path);
    } catch (const std::exception& e) {
        std::cerr << path << ": " << e.what() << "\n";
        return 2;
    }
    if (seed) sc.seed = *seed;

    RunResult run = run_scenario(sc, /*record_deliveries=*/true);
    CheckReport rep = check_all(run);

    fs::create_directories(out_dir);
    std::string base = (fs::path(out_dir) / sc.name).string();
    {
        std::ofstream ts(base + ".trace.jsonl");
        run.trace.write_jsonl(ts);
    }
    {
        std::ofstream rs(base + ".report.json");
        rs << report_json(run, rep).dump(2) << "\n";
    }

    std::cout << sc.name << ": " << (run.quiesced ? "quiesced" : "hit the tick limit")
              << " at tick " << run.end_tick << "\n";
    for (const auto& [client, confs] : run.confirmations)
        for (const auto& c : confs)
            std::cout << "  client " << client << ": txn " << c.txn->id << " "
                      << (c.commit ? "committed" : "aborted") << " at tick " << c.at
                      << "\n";
    if (rep.ok()) {
        std::cout << "all checks passed; artifacts in " << out_dir << "\n";
        return 0;
    }
    std::cout << "CHECKS FAILED:\n";
    for (const auto& issue : rep.issues()) std::cout << "  - " << issue << "\n";
    return 1;
}

int cmd_sweep(const std::vector<int>& ks, const std::vector<int64_t>& ss, uint64_t n,
              const std::string& out_dir) {
    std::vector<int> k_list = ks;
    std::vector<int64_t> s_list = ss;
    if (k_list.empty()) k_list = {2, 4, 8, 16, 32, 64};
    if (s_list.empty())
        for (int s = 1; s <= 16384; s *= 2) s_list.push_back(s);
    auto rows = sweep(k_list, s_list, n, /*seed=*/1, /*monte_carlo=*/true);
    fs::create_directories(out_dir);
    std::string path = (fs::path(out_dir) / "sweep.csv").string();
    std::ofstream os(path);
    write_sweep_csv(os, rows);
    std::cout << rows.size() << " rows written to " << path << "\n";
    return 0;
}

int cmd_fuzz(const std::string& protocol, int seeds, uint64_t first_seed) {
    FuzzOptions opt;
    opt.protocol = protocol;
    FuzzSummary sum = run_fuzz(opt, first_seed, seeds);
    std::cout << protocol << ": " << sum.runs << " runs, " << sum.failures
              << " failures\n";
    if (sum.first_failing_seed) {
        std::cout << "first failing seed: " << *sum.first_failing_seed << "\n";
        for (const auto& issue : sum.first_issues) std::cout << "  - " << issue << "\n";
        std::cout << "replay with: cerberus-sim fuzz --protocol " << protocol
                  << " --seeds 1 --first-seed " << *sum.first_failing_seed << "\n";
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic simulation and verification kit for "
                 "multi-shard BFT transaction processing"};
    app.require_subcommand(1);

    std::string out_dir = default_out_dir();

    auto* run_cmd = app.add_subcommand("run", "run a scenario file and check it");
    std::string scenario_path;
    std::optional<uint64_t> seed;
    run_cmd->add_option("scenario", scenario_path, "scenario file")->required();
    run_cmd->add_option("--out", out_dir, "output directory");
    run_cmd->add_option("--seed", seed, "override the scenario seed");

    auto* sweep_cmd = app.add_subcommand("sweep", "emit the shard-step cost model CSV");
    std::vector<int> ks;
    std::vector<int64_t> ss;
    uint64_t n = 1ull << 24;
    sweep_cmd->add_option("--k", ks, "values per transaction (list)")->delimiter(',');
    sweep_cmd->add_option("--s", ss, "shard counts (list)")->delimiter(',');
    sweep_cmd->add_option("--n", n, "number of transactions");
    sweep_cmd->add_option("--out", out_dir, "output directory");

    auto* fuzz_cmd = app.add_subcommand("fuzz", "run randomized scenarios and checks");
    std::string protocol = "pcb";
    int seeds = 100;
    uint64_t first_seed = 1;
    fuzz_cmd->add_option("--protocol", protocol, "ccb | ocb | pcb")
        ->check(CLI::IsMember({"ccb", "ocb", "pcb"}));
    fuzz_cmd->add_option("--seeds", seeds, "number of seeds");
    fuzz_cmd->add_option("--first-seed", first_seed, "first seed");

    CLI11_PARSE(app, argc, argv);

    if (run_cmd->parsed()) return cmd_run(scenario_path, out_dir, seed);
    if (sweep_cmd->parsed()) return cmd_sweep(ks, ss, n, out_dir);
    return cmd_fuzz(protocol, seeds, first_seed);
}
