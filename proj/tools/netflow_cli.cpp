#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

#include "netflow/generate.hpp"
#include "netflow/hier_solver.hpp"
#include "netflow/io.hpp"

using namespace netflow;
using nlohmann::json;

namespace {

// Stable exit-code contract for scripting.
constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitNonConvergence = 3;
constexpr int kExitParseError = 4;

struct SolverFlags {
    std::string method = "hierarchical";
    int max_block_size = -1;
    double tol = 1e-8;
    int max_iter = 50;
    bool parallel = false;

    SolverOptions options() const {
        SolverOptions o;
        o.tol = tol;
        o.max_iter = max_iter;
        o.parallel = parallel;
        return o;
    }
};

void add_solver_flags(CLI::App *cmd, SolverFlags &f) {
    cmd->add_option("--method", f.method, "hierarchical | monolithic")
        ->check(CLI::IsMember({"hierarchical", "monolithic"}));
    cmd->add_option("--max-block-size", f.max_block_size,
                    "refine oversized blocks down to this vertex count");
    cmd->add_option("--tol", f.tol, "scaled residual tolerance");
    cmd->add_option("--max-iter", f.max_iter, "Newton iteration cap per block");
    cmd->add_flag("--parallel", f.parallel, "solve blocks of a level concurrently");
}

PartitionSet pick_partition(const Network &net, int max_block_size) {
    if (max_block_size < 2) return compute_blocks(net);
    SizedPartitionResult r = partition_with_max_size(net, max_block_size);
    if (auto *over = std::get_if<OversizedBlock>(&r)) {
        std::cerr << "note: a non-separable block of " << over->size
                  << " vertices exceeds --max-block-size; falling back to the full "
                     "block decomposition\n";
        return compute_blocks(net);
    }
    return std::get<PartitionSet>(std::move(r));
}

int cmd_validate(const std::string &input) {
    Network net = load_network(input);
    ValidationReport report = validate_network(net);
    if (report.valid()) {
        std::cout << "valid\n";
        return kExitOk;
    }
    for (const auto &v : report.violations) std::cout << v << "\n";
    return kExitInvalid;
}

int cmd_stats(const std::string &input, int max_block_size, bool as_json, bool verbose) {
    Network net = load_network(input);
    ValidationReport vr = validate_network(net);
    if (!vr.valid()) {
        for (const auto &v : vr.violations) std::cerr << v << "\n";
        return kExitInvalid;
    }
    StatsReport stats = compute_stats(net, input, max_block_size);
    if (as_json)
        std::cout << stats_to_json(stats).dump(2) << "\n";
    else
        std::cout << stats_table(stats);
    if (verbose && !stats.oversized) {
        PartitionSet p = max_block_size >= 2
                             ? std::get<PartitionSet>(partition_with_max_size(net, max_block_size))
                             : compute_blocks(net);
        BlockCutTree tree = build_block_cut_tree(net, p);
        json detail = partition_to_json(net, p, tree);
        TreeFlowProblem prob = agglomerate_injections(net, p, tree);
        TreeFlows flows = solve_tree_flows(prob);
        detail["tree_flows"] = json::array();
        for (size_t te = 0; te < tree.edges.size(); ++te)
            if (flows.determined[te])
                detail["tree_flows"].push_back(
                    {{"block", tree.edges[te].first},
                     {"cut", net.junctions()[tree.cut_junction_of(tree.edges[te].second)].id},
                     {"flow", flows.flow[te]}});
        std::cout << detail.dump(2) << "\n";
    }
    return kExitOk;
}

int cmd_solve(const std::string &input, const SolverFlags &flags, const std::string &output) {
    Network net = load_network(input);
    ValidationReport vr = validate_network(net);
    if (!vr.valid()) {
        for (const auto &v : vr.violations) std::cerr << v << "\n";
        return kExitInvalid;
    }
    SolveReport report;
    Solution sol;
    if (flags.method == "monolithic") {
        sol = solve_monolithic(net, flags.options(), &report);
    } else {
        PartitionSet p = pick_partition(net, flags.max_block_size);
        sol = solve_hierarchical(net, p, flags.options(), &report);
    }
    json doc = solution_to_json(sol);
    doc["report"] = report_to_json(report);
    if (output.empty()) {
        std::cout << doc.dump(2) << "\n";
    } else {
        std::ofstream out(output);
        out << doc.dump(2) << "\n";
        std::cout << "residual_inf_norm " << sol.residual_inf_norm << ", iterations "
                  << sol.iterations_total << ", written to " << output << "\n";
    }
    return kExitOk;
}

int cmd_compare(const std::string &input, const SolverFlags &flags) {
    Network net = load_network(input);
    ValidationReport vr = validate_network(net);
    if (!vr.valid()) {
        for (const auto &v : vr.violations) std::cerr << v << "\n";
        return kExitInvalid;
    }

    struct Row {
        bool ok = false;
        std::string error;
        Solution sol;
        SolveReport report;
        double seconds = 0;
    };
    auto attempt = [&](const std::string &method) {
        Row row;
        auto t0 = std::chrono::steady_clock::now();
        try {
            if (method == "monolithic") {
                row.sol = solve_monolithic(net, flags.options(), &row.report);
            } else {
                PartitionSet p = pick_partition(net, flags.max_block_size);
                row.sol = solve_hierarchical(net, p, flags.options(), &row.report);
            }
            row.ok = true;
        } catch (const NonConvergence &nc) {
            row.error = nc.what();
        }
        row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return row;
    };
    Row hier = attempt("hierarchical");
    Row mono = attempt("monolithic");

    auto line = [](const std::string &name, const Row &row) {
        std::cout << name << "  ";
        if (row.ok)
            std::cout << "converged  residual " << row.sol.residual_inf_norm << "  iterations "
                      << row.sol.iterations_total;
        else
            std::cout << "FAILED     " << row.error;
        std::cout << "  (" << row.seconds << " s)\n";
    };
    line("hierarchical", hier);
    line("monolithic  ", mono);

    if (hier.ok && mono.ok) {
        double max_rel = 0;
        for (const auto &[id, v] : hier.sol.potentials)
            max_rel = std::max(max_rel, std::abs(v - mono.sol.potentials.at(id)) /
                                            (1.0 + std::abs(mono.sol.potentials.at(id))));
        for (const auto &[id, v] : hier.sol.flows)
            max_rel = std::max(max_rel, std::abs(v - mono.sol.flows.at(id)) /
                                            (1.0 + std::abs(mono.sol.flows.at(id))));
        std::cout << "max componentwise relative difference: " << max_rel << "\n";
        return kExitOk;
    }
    return (hier.ok || mono.ok) ? kExitOk : kExitNonConvergence;
}

int cmd_generate(int nodes, int cycles, std::uint64_t seed, const std::string &output) {
    GenerateParams params;
    params.nodes = nodes;
    params.cycles = cycles;
    params.seed = seed;
    Network net = generate_network(params);
    std::string name = "random-n" + std::to_string(nodes) + "-k" + std::to_string(cycles) +
                       "-s" + std::to_string(seed);
    if (output.empty())
        std::cout << emit_network(net, name).dump(2) << "\n";
    else
        save_network(net, output, name);
    return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Hierarchical solver for potential-driven steady-state network flow"};
    app.require_subcommand(1);

    std::string input, output;
    SolverFlags flags;
    bool as_json = false, verbose = false;
    int gen_nodes = 10, gen_cycles = 0;
    std::uint64_t gen_seed = 0;

    CLI::App *validate = app.add_subcommand("validate", "check network assumptions");
    validate->add_option("input", input)->required();

    CLI::App *stats = app.add_subcommand("stats", "block-cut tree statistics");
    stats->add_option("input", input)->required();
    stats->add_option("--max-block-size", flags.max_block_size);
    stats->add_flag("--json", as_json, "machine-readable output");
    stats->add_flag("--verbose", verbose, "full partition, tree and tree-flow dump");

    CLI::App *solve = app.add_subcommand("solve", "solve the network flow system");
    solve->add_option("input", input)->required();
    add_solver_flags(solve, flags);
    solve->add_option("--output", output, "solution document path");

    CLI::App *compare = app.add_subcommand("compare", "hierarchical vs monolithic");
    compare->add_option("input", input)->required();
    add_solver_flags(compare, flags);

    CLI::App *generate = app.add_subcommand("generate", "emit a seeded random network");
    generate->add_option("--nodes", gen_nodes)->check(CLI::Range(3, 1000000));
    generate->add_option("--cycles", gen_cycles)->check(CLI::NonNegativeNumber);
    generate->add_option("--seed", gen_seed);
    generate->add_option("--output", output);

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) return cmd_validate(input);
        if (stats->parsed()) return cmd_stats(input, flags.max_block_size, as_json, verbose);
        if (solve->parsed()) return cmd_solve(input, flags, output);
        if (compare->parsed()) return cmd_compare(input, flags);
        if (generate->parsed()) return cmd_generate(gen_nodes, gen_cycles, gen_seed, output);
    } catch (const ParseError &ex) {
        std::cerr << "parse error: " << ex.what() << "\n";
        return kExitParseError;
    } catch (const NonConvergence &ex) {
        std::cerr << "non-convergence: " << ex.what();
        if (!ex.block_id.empty())
            std::cerr << " [block " << ex.block_id << ", level " << ex.level << "]";
        std::cerr << "\nresidual trace:";
        for (double r : ex.residual_trace) std::cerr << " " << r;
        std::cerr << "\n";
        return kExitNonConvergence;
    } catch (const SlacksSpanBlocks &ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitInvalid;
    } catch (const Error &ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitInvalid;
    }
    return kExitOk;
}
