#ifndef NETFLOW_HIER_SOLVER_HPP
#define NETFLOW_HIER_SOLVER_HPP

#include <string>
#include <vector>

#include "netflow/block_solver.hpp"
#include "netflow/partition.hpp"
#include "netflow/tree_flow.hpp"

namespace netflow {

// Wave decomposition of the block-cut tree from the slack root: level 1 is
// the slack block (plus blocks seeded by slack cut vertices), level m+1 the
// unscheduled blocks touching a cut determined in wave m.
struct LevelSchedule {
    std::vector<std::vector<int>> levels;     // block indices per level
    std::vector<std::vector<int>> cut_waves;  // cut junction indices per wave
    int root_tree_vertex = -1;
};

LevelSchedule level_schedule(const Network &net, const PartitionSet &p,
                             const BlockCutTree &tree);

struct BlockSolveRecord {
    int block = -1;
    int level = -1;
    int iterations = 0;
    double residual = 0.0;
    bool closed_form = false;
};

struct SolveReport {
    std::string method;
    int num_levels = 0;
    std::vector<BlockSolveRecord> blocks;
    double seconds_partition = 0.0;
    double seconds_tree_flow = 0.0;
    double seconds_block_solves = 0.0;
    double global_residual = 0.0;
    int iterations_total = 0;
};

// Decomposition pipeline: augment, agglomerate, tree flows, then solve the
// blocks level by level, propagating cut potentials as slack conditions.
Solution solve_hierarchical(const Network &net, const PartitionSet &p,
                            const SolverOptions &opts, SolveReport *report = nullptr);

// Whole-network Newton; the correctness oracle for the hierarchical path.
Solution solve_monolithic(const Network &net, const SolverOptions &opts,
                          SolveReport *report = nullptr);

}  // namespace netflow

#endif
