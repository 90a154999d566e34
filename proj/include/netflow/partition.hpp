#ifndef NETFLOW_PARTITION_HPP
#define NETFLOW_PARTITION_HPP

#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "netflow/network.hpp"

namespace netflow {

// A (generalized) block: a connected subgraph given by junction and edge
// indices into the owning Network. Vertex and edge lists are kept sorted.
struct Block {
    std::vector<int> vertices;
    std::vector<int> edges;
    int size() const { return static_cast<int>(vertices.size()); }
};

// Generalized block-cut set (B, C): block edge sets partition E(G) and any
// two blocks share at most one vertex, which must be a cut.
struct PartitionSet {
    std::vector<Block> blocks;
    std::set<int> cuts;  // junction indices
};

// Bipartite tree on block vertices [0, num_blocks) and cut vertices
// [num_blocks, num_vertices).
struct BlockCutTree {
    int num_blocks = 0;
    std::vector<int> cut_junctions;  // junction index per cut tree-vertex
    std::vector<std::pair<int, int>> edges;  // (block vertex, cut vertex)
    std::vector<std::vector<int>> adj;       // tree vertex -> incident tree-edge indices

    int num_vertices() const { return num_blocks + static_cast<int>(cut_junctions.size()); }
    bool is_block_vertex(int v) const { return v < num_blocks; }
    int cut_junction_of(int v) const { return cut_junctions[v - num_blocks]; }
    int tree_vertex_of_cut(int junction) const;
    int other_end(int tree_edge, int v) const {
        const auto &[a, b] = edges[tree_edge];
        return a == v ? b : a;
    }
};

// G with each cut vertex replicated once per containing block; replicas are
// tied to the original by lossless (ideal, gamma = 1) edges oriented
// original -> replica.
struct AugmentedNetwork {
    Network network;
    // replica junction id -> (original cut id, block index)
    std::unordered_map<std::string, std::pair<std::string, int>> replica_map;
    std::vector<std::string> tie_edge_ids;
    // Per block: junction / edge indices into `network` (ties excluded).
    std::vector<std::vector<int>> block_junctions;
    std::vector<std::vector<int>> block_edges;
    // Per block: original cut junction index (in G) -> replica index in `network`.
    std::vector<std::unordered_map<int, int>> replica_of;
};

struct OversizedBlock {
    Block block;
    int size = 0;
};

using SizedPartitionResult = std::variant<PartitionSet, OversizedBlock>;

std::set<int> find_articulation_points(const Network &net);

// Articulation points of a single block's subgraph.
std::set<int> block_articulation_points(const Network &net, const Block &block);

// Full biconnected decomposition; 2-vertex subgraphs count as blocks.
PartitionSet compute_blocks(const Network &net);

// The trivial partition ({G}, {}).
PartitionSet trivial_partition(const Network &net);

// Throws InvalidNetwork if (B, C) violates the partition conditions.
void check_partition(const Network &net, const PartitionSet &p);

BlockCutTree build_block_cut_tree(const Network &net, const PartitionSet &p);

// Splits blocks[block_index] at `cut` (one of its articulation points) into
// the components of block - cut, each rebuilt with the cut and its incident
// edges re-added. Strictly finer than the input partition.
PartitionSet refine_partition(const Network &net, const PartitionSet &p,
                              int block_index, int cut);

SizedPartitionResult partition_with_max_size(const Network &net, int max_vertices);

AugmentedNetwork build_augmented_network(const Network &net, const PartitionSet &p);

// Drops ties, merges replicas back; reproduces the partitioned network.
Network merge_replicas(const AugmentedNetwork &aug);

// Restricts a solution on the augmented network to the original one.
Solution project_solution(const Network &net, const AugmentedNetwork &aug,
                          const Solution &aug_sol);

}  // namespace netflow

#endif
