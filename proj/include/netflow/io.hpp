#ifndef NETFLOW_IO_HPP
#define NETFLOW_IO_HPP

#include <nlohmann/json_fwd.hpp>
#include <string>

#include "netflow/hier_solver.hpp"
#include "netflow/network.hpp"
#include "netflow/partition.hpp"

namespace netflow {

// Network document, version "1":
//   { "version": "1", "name": "...",
//     "nodes": [ {"id", "slack", "potential"?, "injection"?}, ... ],
//     "edges": [ {"id", "from", "to", "kind", "alpha"|"r"|"gamma"|"c"?}, ... ] }
// Throws ParseError with a field location on malformed input.
Network parse_network(const nlohmann::json &doc);
Network parse_network_string(const std::string &text);
Network load_network(const std::string &path);

// Stable-ordered (ids sorted) document for diff-based tooling.
nlohmann::json emit_network(const Network &net, const std::string &name = "");
void save_network(const Network &net, const std::string &path, const std::string &name = "");

nlohmann::json solution_to_json(const Solution &sol);
nlohmann::json report_to_json(const SolveReport &report);
nlohmann::json partition_to_json(const Network &net, const PartitionSet &p,
                                 const BlockCutTree &tree);

struct StatsReport {
    std::string name;
    int junctions = 0;
    int edges = 0;
    int num_blocks = 0;
    int two_node_blocks = 0;
    int max_block_size = 0;
    double max_block_pct = 0.0;  // of junction count
    int num_cuts = 0;
    int tree_depth = -1;  // block levels from the slack root; -1 if no single root
    bool oversized = false;
    int oversized_size = 0;
};

// Full block decomposition by default; a size-controlled partition when
// max_block_size >= 2 (reports the oversized outcome if refinement stalls).
StatsReport compute_stats(const Network &net, const std::string &name,
                          int max_block_size = -1);

nlohmann::json stats_to_json(const StatsReport &s);
std::string stats_table(const StatsReport &s);

}  // namespace netflow

#endif
