#include "netflow/hier_solver.hpp"

#include <algorithm>
#include <chrono>
#include <future>
#include <map>

namespace netflow {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

LevelSchedule level_schedule(const Network &net, const PartitionSet &p,
                             const BlockCutTree &tree) {
    RootInfo root = single_root(net, p, tree);
    LevelSchedule sched;
    sched.root_tree_vertex = root.root;

    std::vector<char> block_done(tree.num_blocks, 0);
    std::vector<char> cut_known(tree.num_vertices(), 0);

    // Slack cut vertices carry a prescribed potential from the start.
    std::vector<int> initially_known_cuts;
    for (int v : root.free_tree_vertices)
        if (!tree.is_block_vertex(v)) {
            cut_known[v] = 1;
            initially_known_cuts.push_back(v);
        }

    std::vector<int> level;
    if (tree.is_block_vertex(root.root)) {
        level.push_back(root.root);
        block_done[root.root] = 1;
    }
    // Blocks adjacent to a slack cut join the first level too.
    for (int cv : initially_known_cuts)
        for (int te : tree.adj[cv]) {
            int b = tree.other_end(te, cv);
            if (!block_done[b]) {
                block_done[b] = 1;
                level.push_back(b);
            }
        }
    std::sort(level.begin(), level.end());

    while (!level.empty()) {
        sched.levels.push_back(level);
        std::vector<int> wave;  // cuts newly determined by this level
        for (int b : level)
            for (int te : tree.adj[b]) {
                int cv = tree.other_end(te, b);
                if (!cut_known[cv]) {
                    cut_known[cv] = 1;
                    wave.push_back(cv);
                }
            }
        std::sort(wave.begin(), wave.end());
        std::vector<int> next;
        for (int cv : wave)
            for (int te : tree.adj[cv]) {
                int b = tree.other_end(te, cv);
                if (!block_done[b]) {
                    block_done[b] = 1;
                    next.push_back(b);
                }
            }
        std::vector<int> wave_junctions;
        for (int cv : wave) wave_junctions.push_back(tree.cut_junction_of(cv));
        if (!wave_junctions.empty() || !next.empty())
            sched.cut_waves.push_back(wave_junctions);
        std::sort(next.begin(), next.end());
        level = std::move(next);
    }
    for (int b = 0; b < tree.num_blocks; ++b)
        if (!block_done[b])
            throw InvalidNetwork("level schedule did not reach every block");
    return sched;
}

namespace {

struct BlockOutcome {
    Solution sol;
    bool closed_form = false;
};

BlockOutcome solve_one_block(const Network &sub, const SolverOptions &opts) {
    int n_slack = 0;
    for (const Junction &j : sub.junctions()) n_slack += j.slack ? 1 : 0;
    if (sub.num_junctions() == 2 && sub.num_edges() == 1 && n_slack == 1)
        return {solve_two_node_block({sub, opts}), true};
    return {solve_block_newton({sub, opts}), false};
}

}  // namespace

Solution solve_hierarchical(const Network &net, const PartitionSet &p,
                            const SolverOptions &opts, SolveReport *report) {
    ValidationReport vr = validate_network(net);
    if (!vr.valid()) {
        std::string msg = "invalid network:";
        for (const auto &v : vr.violations) msg += " " + v;
        throw InvalidNetwork(msg);
    }

    auto t0 = std::chrono::steady_clock::now();
    AugmentedNetwork aug = build_augmented_network(net, p);
    BlockCutTree tree = build_block_cut_tree(net, p);
    LevelSchedule sched = level_schedule(net, p, tree);
    double t_partition = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    TreeFlowProblem tprob = agglomerate_injections(net, p, tree);
    TreeFlows tflows = solve_tree_flows(tprob);
    double t_tree = seconds_since(t0);

    // Tree-edge index per (block, cut junction) pair.
    std::map<std::pair<int, int>, int> tree_edge_of;
    for (int te = 0; te < static_cast<int>(tree.edges.size()); ++te) {
        auto [bv, cv] = tree.edges[te];
        tree_edge_of[{bv, tree.cut_junction_of(cv)}] = te;
    }

    std::map<int, double> cut_potential;  // cut junction index -> solved potential
    for (int c : p.cuts)
        if (net.junctions()[c].slack) cut_potential[c] = net.junctions()[c].slack_potential;

    Solution sol;
    SolveReport local_report;
    local_report.method = "hierarchical";

    t0 = std::chrono::steady_clock::now();
    for (int lvl = 0; lvl < static_cast<int>(sched.levels.size()); ++lvl) {
        // Assemble every block problem of this level before solving: blocks
        // within a level depend only on previous waves.
        std::vector<std::pair<int, Network>> problems;
        for (int b : sched.levels[lvl]) {
            std::vector<Junction> junctions;
            for (int ji : aug.block_junctions[b]) {
                Junction jn = aug.network.junctions()[ji];
                auto rep = aug.replica_map.find(jn.id);
                if (rep != aug.replica_map.end()) {
                    int cut = net.junction_index(rep->second.first);
                    auto known = cut_potential.find(cut);
                    if (known != cut_potential.end()) {
                        jn.slack = true;
                        jn.slack_potential = known->second;
                        jn.injection = 0.0;
                    } else {
                        // Unsolved cut: the tree flow leaving the block there
                        // acts as a demand at the replica.
                        int te = tree_edge_of.at({b, cut});
                        if (!tflows.determined[te])
                            throw InvalidNetwork("undetermined boundary flow for block");
                        jn.slack = false;
                        jn.injection = tflows.flow[te];
                    }
                }
                junctions.push_back(std::move(jn));
            }
            std::vector<EdgeElement> edges;
            for (int e : aug.block_edges[b]) edges.push_back(aug.network.edges()[e]);
            problems.emplace_back(b, Network(std::move(junctions), std::move(edges)));
        }

        std::vector<BlockOutcome> outcomes(problems.size());
        auto run = [&](size_t i) {
            try {
                outcomes[i] = solve_one_block(problems[i].second, opts);
            } catch (NonConvergence &nc) {
                nc.block_id = std::to_string(problems[i].first);
                nc.level = lvl + 1;
                throw;
            }
        };
        if (opts.parallel && problems.size() > 1) {
            std::vector<std::future<void>> futures;
            for (size_t i = 0; i < problems.size(); ++i)
                futures.push_back(std::async(std::launch::async, run, i));
            for (auto &fut : futures) fut.get();  // rethrows in block order
        } else {
            for (size_t i = 0; i < problems.size(); ++i) run(i);
        }

        for (size_t i = 0; i < problems.size(); ++i) {
            int b = problems[i].first;
            const Network &sub = problems[i].second;
            const Solution &bsol = outcomes[i].sol;
            for (const Junction &jn : sub.junctions()) {
                double pi = bsol.potentials.at(jn.id);
                auto rep = aug.replica_map.find(jn.id);
                if (rep == aug.replica_map.end()) {
                    sol.potentials[jn.id] = pi;
                } else {
                    int cut = net.junction_index(rep->second.first);
                    cut_potential.emplace(cut, pi);  // Eq-(4) propagation; no-op if known
                }
            }
            for (const EdgeElement &e : sub.edges()) sol.flows[e.id] = bsol.flows.at(e.id);
            sol.iterations_total += bsol.iterations_total;
            local_report.blocks.push_back({b, lvl + 1, bsol.iterations_total,
                                           bsol.residual_inf_norm, outcomes[i].closed_form});
        }
    }
    double t_blocks = seconds_since(t0);

    for (const auto &[cut, pi] : cut_potential)
        sol.potentials[net.junctions()[cut].id] = pi;

    sol.residual_inf_norm = verify_solution(net, sol, opts.tol).inf_norm;

    if (report) {
        *report = std::move(local_report);
        report->num_levels = static_cast<int>(sched.levels.size());
        report->seconds_partition = t_partition;
        report->seconds_tree_flow = t_tree;
        report->seconds_block_solves = t_blocks;
        report->global_residual = sol.residual_inf_norm;
        report->iterations_total = sol.iterations_total;
    }
    return sol;
}

Solution solve_monolithic(const Network &net, const SolverOptions &opts, SolveReport *report) {
    ValidationReport vr = validate_network(net);
    if (!vr.valid()) {
        std::string msg = "invalid network:";
        for (const auto &v : vr.violations) msg += " " + v;
        throw InvalidNetwork(msg);
    }
    auto t0 = std::chrono::steady_clock::now();
    Solution sol = solve_block_newton({net, opts});
    if (report) {
        report->method = "monolithic";
        report->num_levels = 1;
        report->blocks = {{0, 1, sol.iterations_total, sol.residual_inf_norm, false}};
        report->seconds_block_solves = seconds_since(t0);
        report->global_residual = sol.residual_inf_norm;
        report->iterations_total = sol.iterations_total;
    }
    return sol;
}

}  // namespace netflow
