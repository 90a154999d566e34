#ifndef NETFLOW_TREE_FLOW_HPP
#define NETFLOW_TREE_FLOW_HPP

#include <set>
#include <vector>

#include "netflow/partition.hpp"

namespace netflow {

// The designated unknown-injection tree vertex plus any slack cut vertices
// whose injections are likewise unknown. Everything in `free_tree_vertices`
// is adjacent to (or equal to) the root.
struct RootInfo {
    int root = -1;
    std::set<int> free_tree_vertices;  // includes root
};

// Single-root rule: all slack junctions lie in one block (slack cuts must
// belong to that block too), or there is exactly one slack junction and it
// is a cut vertex. Throws SlacksSpanBlocks otherwise.
RootInfo single_root(const Network &net, const PartitionSet &p, const BlockCutTree &tree);

struct TreeFlowProblem {
    const BlockCutTree *tree = nullptr;
    std::vector<double> injections;  // per tree vertex; valid iff known
    std::vector<char> known;
    int root = -1;
};

// Cut vertices carry their own injection; a block vertex carries the sum of
// injections over its interior (non-cut) junctions. Replicas contribute zero.
TreeFlowProblem agglomerate_injections(const Network &net, const PartitionSet &p,
                                       const BlockCutTree &tree);

// Flow per tree edge, oriented away from the root; positive flow moves
// toward the child side. Edges whose child vertex has unknown injection are
// left undetermined (never needed by the hierarchical solve).
struct TreeFlows {
    std::vector<double> flow;        // per tree edge
    std::vector<char> determined;
};

// Leaf peeling: repeatedly resolve the balance of degree-1 non-root
// vertices. Exact and linear-time.
TreeFlows solve_tree_flows(const TreeFlowProblem &prob);

}  // namespace netflow

#endif
