#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "si2e/encoding_tree.hpp"
#include "si2e/graph.hpp"
#include "si2e/harness.hpp"
#include "si2e/verification.hpp"

namespace {

int analyze_fixture(const std::string& path, const std::string& mode_name) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open graph fixture: " + path);
    const si2e::WeightedGraph g = si2e::WeightedGraph::load_edge_list(in);
    const si2e::OptimizeMode mode = mode_name == "matching" ? si2e::OptimizeMode::matching
                                                            : si2e::OptimizeMode::community;
    const si2e::EncodingTree flat = si2e::EncodingTree::one_layer(g);
    const si2e::EncodingTree tree = si2e::optimize_two_layer(g, mode);
    std::cout << "vertices = " << g.vertex_count() << ", edges = " << g.edges().size()
              << ", volume = " << g.volume() << '\n';
    std::cout << "one-layer entropy = " << si2e::structural_entropy(g, flat) << " bits\n";
    std::cout << "optimized (" << mode_name
              << ") entropy = " << si2e::structural_entropy(g, tree) << " bits\n";
    std::cout << "tree (depth  vertices  boundary  volume):\n" << tree.to_text();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"structural-entropy toolkit: experiment runner, verification suite, graph analysis"};
    app.require_subcommand(1);

    std::string config_path, method_override, seeds_override, out_override;
    CLI::App* run_cmd =
        app.add_subcommand("run", "train every configured (method, seed) pair and write results");
    run_cmd->add_option("--config", config_path, "experiment config file (key = value lines)")
        ->required();
    run_cmd->add_option("--method", method_override,
                        "restrict to one method: none | shannon-entropy | si2e");
    run_cmd->add_option("--seeds", seeds_override, "seed list override, e.g. 0..9 or 0,2,5");
    run_cmd->add_option("--out", out_override, "output directory override");

    si2e::VerifyOptions vopts;
    CLI::App* verify_cmd = app.add_subcommand("verify", "run the theorem/property check suite");
    verify_cmd->add_option("--only", vopts.only, "run a single check group");
    verify_cmd->add_flag("--mutate-smi-sign", vopts.mutate_smi_sign,
                         "corrupt the defining-sum sign; the suite must then fail");
    verify_cmd->add_option("--seed", vopts.seed, "base seed for randomized checks");

    std::string fixture_path, mode_name = "community";
    CLI::App* analyze_cmd =
        app.add_subcommand("analyze", "optimize an encoding tree for an edge-list fixture");
    analyze_cmd->add_option("--graph-fixture", fixture_path, "edge-list file, 'i j w' per line")
        ->required();
    analyze_cmd->add_option("--mode", mode_name, "matching | community")
        ->check(CLI::IsMember({"matching", "community"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // usage problems map to the config-error exit code
    }

    try {
        if (run_cmd->parsed()) {
            si2e::ExperimentConfig cfg = si2e::load_experiment_config(config_path);
            if (!method_override.empty()) {
                si2e::mode_from_method(method_override);  // validate the name
                cfg.methods = {method_override};
            }
            if (!seeds_override.empty()) cfg.seeds = si2e::parse_seed_list(seeds_override);
            if (!out_override.empty()) cfg.out_dir = out_override;
            si2e::run_experiment(cfg, std::cout);
            return 0;
        }
        if (verify_cmd->parsed()) return si2e::run_verify(vopts, std::cout);
        if (analyze_cmd->parsed()) return analyze_fixture(fixture_path, mode_name);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
