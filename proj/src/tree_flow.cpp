#include "netflow/tree_flow.hpp"

#include <algorithm>
#include <deque>

namespace netflow {

RootInfo single_root(const Network &net, const PartitionSet &p, const BlockCutTree &tree) {
    std::vector<int> slack_cuts;       // cut tree vertices
    std::set<int> interior_blocks;     // block tree vertices with interior slacks
    for (int s : net.slack_indices()) {
        if (p.cuts.count(s)) {
            slack_cuts.push_back(tree.tree_vertex_of_cut(s));
        } else {
            int owner = -1;
            for (int bi = 0; bi < static_cast<int>(p.blocks.size()); ++bi)
                if (std::binary_search(p.blocks[bi].vertices.begin(),
                                       p.blocks[bi].vertices.end(), s))
                    owner = bi;
            interior_blocks.insert(owner);
        }
    }
    if (slack_cuts.empty() && interior_blocks.empty())
        throw InvalidNetwork("no slack junction");

    RootInfo info;
    if (interior_blocks.size() > 1)
        throw SlacksSpanBlocks("slack junctions are interior to more than one block");
    if (interior_blocks.empty() && slack_cuts.size() == 1) {
        info.root = slack_cuts.front();
        info.free_tree_vertices.insert(info.root);
        return info;
    }
    // Remaining cases need a single block containing every slack.
    int root_block = -1;
    if (!interior_blocks.empty()) {
        root_block = *interior_blocks.begin();
    } else {
        // Several slack cuts: find a block containing all of them.
        for (int bi = 0; bi < static_cast<int>(p.blocks.size()) && root_block == -1; ++bi) {
            bool all = true;
            for (int cv : slack_cuts) {
                int junction = tree.cut_junction_of(cv);
                if (!std::binary_search(p.blocks[bi].vertices.begin(),
                                        p.blocks[bi].vertices.end(), junction))
                    all = false;
            }
            if (all) root_block = bi;
        }
        if (root_block == -1)
            throw SlacksSpanBlocks("slack cut vertices do not share a block");
    }
    for (int cv : slack_cuts) {
        int junction = tree.cut_junction_of(cv);
        if (!std::binary_search(p.blocks[root_block].vertices.begin(),
                                p.blocks[root_block].vertices.end(), junction))
            throw SlacksSpanBlocks("slack cut vertex lies outside the slack block");
        info.free_tree_vertices.insert(cv);
    }
    info.root = root_block;
    info.free_tree_vertices.insert(root_block);
    return info;
}

TreeFlowProblem agglomerate_injections(const Network &net, const PartitionSet &p,
                                       const BlockCutTree &tree) {
    RootInfo root = single_root(net, p, tree);
    TreeFlowProblem prob;
    prob.tree = &tree;
    prob.root = root.root;
    prob.injections.assign(tree.num_vertices(), 0.0);
    prob.known.assign(tree.num_vertices(), 1);
    for (int v : root.free_tree_vertices) prob.known[v] = 0;

    for (int bi = 0; bi < tree.num_blocks; ++bi) {
        double sum = 0.0;
        for (int j : p.blocks[bi].vertices)
            if (!p.cuts.count(j) && !net.junctions()[j].slack)
                sum += net.junctions()[j].injection;
        prob.injections[bi] = sum;
    }
    for (int cv = tree.num_blocks; cv < tree.num_vertices(); ++cv) {
        const Junction &jn = net.junctions()[tree.cut_junction_of(cv)];
        prob.injections[cv] = jn.slack ? 0.0 : jn.injection;
    }
    return prob;
}

TreeFlows solve_tree_flows(const TreeFlowProblem &prob) {
    const BlockCutTree &tree = *prob.tree;
    const int n = tree.num_vertices();
    TreeFlows out;
    out.flow.assign(tree.edges.size(), 0.0);
    out.determined.assign(tree.edges.size(), 0);

    // Rooted BFS order, then resolve balances leaf-first.
    std::vector<int> order, parent_edge(n, -1);
    std::vector<char> seen(n, 0);
    std::deque<int> q{prob.root};
    seen[prob.root] = 1;
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        order.push_back(v);
        for (int te : tree.adj[v]) {
            int w = tree.other_end(te, v);
            if (seen[w]) continue;
            seen[w] = 1;
            parent_edge[w] = te;
            q.push_back(w);
        }
    }

    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int v = *it;
        if (v == prob.root) continue;
        if (!prob.known[v]) continue;  // slack cut: its upstream flow is never needed
        double subtree = prob.injections[v];
        bool ok = true;
        for (int te : tree.adj[v]) {
            if (te == parent_edge[v]) continue;
            if (!out.determined[te]) {
                ok = false;
                break;
            }
            subtree += out.flow[te];
        }
        if (ok) {
            out.flow[parent_edge[v]] = subtree;
            out.determined[parent_edge[v]] = 1;
        }
    }
    return out;
}

}  // namespace netflow
