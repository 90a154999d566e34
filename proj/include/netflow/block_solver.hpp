#ifndef NETFLOW_BLOCK_SOLVER_HPP
#define NETFLOW_BLOCK_SOLVER_HPP

#include <Eigen/Sparse>
#include <optional>
#include <vector>

#include "netflow/network.hpp"

namespace netflow {

struct SolverOptions {
    double tol = 1e-8;         // scaled residual infinity-norm
    int max_iter = 50;
    double deriv_floor = 1e-8; // lower bound on |dg/df| in the Jacobian
    double flat_flow_init = 0.0;
    int multi_start_seeds = 1;
    bool use_scaling = true;
    double damping = 1.0;      // hook; full Newton steps by default
    bool parallel = false;     // level-parallel block solves (hierarchical driver)
};

// A block with its boundary data folded in: replica slack potentials pin the
// potentials, tree flows enter as injections.
struct BlockProblem {
    Network block;
    SolverOptions options;
};

// Optional Newton initial state, in junction / edge storage order.
struct NewtonStart {
    std::vector<double> potentials;
    std::vector<double> flows;
};

// Closed-form solve for a 2-junction, 1-edge block.
Solution solve_two_node_block(const BlockProblem &prob);

// Full-step Newton with nondimensionalized variables and a derivative floor
// at f = 0. Throws NonConvergence (with residual trace) or SingularJacobian.
Solution solve_block_newton(const BlockProblem &prob,
                            const std::optional<NewtonStart> &start = std::nullopt);

// Unscaled residual/Jacobian of the block system. Row order: edge relations,
// non-slack balances, slack pins; column order: potentials, then flows, both
// in storage order.
Eigen::VectorXd assemble_residual(const BlockProblem &prob, const Solution &state);
Eigen::SparseMatrix<double> assemble_jacobian(const BlockProblem &prob, const Solution &state);

}  // namespace netflow

#endif
