#include "netflow/block_solver.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>

namespace netflow {

namespace {

double floored_g_prime(const EdgeElement &e, double f, double floor) {
    return std::max(e.g_prime(f), floor);
}

// Potential / flow scales for nondimensionalization.
struct Scales {
    double potential = 1.0;
    double flow = 1.0;
};

Scales make_scales(const Network &net, const SolverOptions &opts) {
    Scales s;
    if (!opts.use_scaling) return s;
    double pmax = 0.0;
    for (const Junction &j : net.junctions())
        if (j.slack) pmax = std::max(pmax, std::abs(j.slack_potential));
    s.potential = pmax > 0 ? pmax : 1.0;
    double qmax = 0.0;
    for (const Junction &j : net.junctions())
        if (!j.slack) qmax = std::max(qmax, std::abs(j.injection));
    s.flow = std::max(1.0, qmax);
    return s;
}

Solution state_to_solution(const Network &net, const std::vector<double> &pi,
                           const std::vector<double> &f) {
    Solution sol;
    for (int j = 0; j < net.num_junctions(); ++j) sol.potentials[net.junctions()[j].id] = pi[j];
    for (int e = 0; e < net.num_edges(); ++e) sol.flows[net.edges()[e].id] = f[e];
    return sol;
}

}  // namespace

Solution solve_two_node_block(const BlockProblem &prob) {
    const Network &net = prob.block;
    if (net.num_junctions() != 2 || net.num_edges() != 1)
        throw InvalidNetwork("closed-form solve needs exactly 2 junctions and 1 edge");
    const EdgeElement &e = net.edges()[0];
    int a = net.from_of(0), b = net.to_of(0);
    const Junction &ja = net.junctions()[a];
    const Junction &jb = net.junctions()[b];

    double pi_a = 0, pi_b = 0, f = 0;
    if (ja.slack && jb.slack) {
        pi_a = ja.slack_potential;
        pi_b = jb.slack_potential;
        double drop = e.gamma * pi_a - pi_b;
        switch (e.kind) {
            case EdgeKind::pipe:
                f = (drop >= 0 ? 1.0 : -1.0) * std::sqrt(std::abs(drop) / e.alpha);
                break;
            case EdgeKind::linear:
                f = drop / e.r;
                break;
            case EdgeKind::ideal:
            case EdgeKind::offset:
                if (std::abs(drop - e.g(0.0)) >
                    1e-9 * (1.0 + std::abs(pi_a) + std::abs(pi_b)))
                    throw InconsistentBlock(
                        "both potentials pinned contradict the lossless edge relation");
                f = 0.0;  // the edge relation leaves the flow unconstrained
                break;
        }
    } else if (ja.slack || jb.slack) {
        // Flow from the non-slack balance, then the free potential from the
        // edge relation.
        if (jb.slack) {
            f = -ja.injection;  // balance at a: -f = q_a
            pi_b = jb.slack_potential;
            pi_a = (pi_b + e.g(f)) / e.gamma;
        } else {
            f = jb.injection;  // balance at b: f = q_b
            pi_a = ja.slack_potential;
            pi_b = e.gamma * pi_a - e.g(f);
        }
    } else {
        throw InvalidNetwork("2-node block without a slack junction");
    }

    Solution sol = state_to_solution(net, {pi_a, pi_b}, {f});
    sol.iterations_total = 0;
    sol.residual_inf_norm = verify_solution(net, sol, 1.0).inf_norm;
    return sol;
}

Eigen::VectorXd assemble_residual(const BlockProblem &prob, const Solution &state) {
    const Network &net = prob.block;
    const int n = net.num_junctions(), m = net.num_edges();
    std::vector<double> pi(n), f(m);
    for (int j = 0; j < n; ++j) pi[j] = state.potentials.at(net.junctions()[j].id);
    for (int e = 0; e < m; ++e) f[e] = state.flows.at(net.edges()[e].id);

    Eigen::VectorXd r(n + m);
    int row = 0;
    for (int e = 0; e < m; ++e)
        r[row++] = edge_residual(net.edges()[e], pi[net.from_of(e)], pi[net.to_of(e)], f[e]);
    for (int j = 0; j < n; ++j) {
        const Junction &jn = net.junctions()[j];
        if (jn.slack) continue;
        double bal = -jn.injection;
        for (int e : net.incident(j)) bal += (net.to_of(e) == j) ? f[e] : -f[e];
        r[row++] = bal;
    }
    for (int j = 0; j < n; ++j)
        if (net.junctions()[j].slack) r[row++] = pi[j] - net.junctions()[j].slack_potential;
    return r;
}

Eigen::SparseMatrix<double> assemble_jacobian(const BlockProblem &prob, const Solution &state) {
    const Network &net = prob.block;
    const int n = net.num_junctions(), m = net.num_edges();
    std::vector<double> f(m);
    for (int e = 0; e < m; ++e) f[e] = state.flows.at(net.edges()[e].id);

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(3 * m + n);
    int row = 0;
    for (int e = 0; e < m; ++e) {
        const EdgeElement &ed = net.edges()[e];
        trip.emplace_back(row, net.from_of(e), ed.gamma);
        trip.emplace_back(row, net.to_of(e), -1.0);
        trip.emplace_back(row, n + e, -floored_g_prime(ed, f[e], prob.options.deriv_floor));
        ++row;
    }
    for (int j = 0; j < n; ++j) {
        if (net.junctions()[j].slack) continue;
        for (int e : net.incident(j))
            trip.emplace_back(row, n + e, (net.to_of(e) == j) ? 1.0 : -1.0);
        ++row;
    }
    for (int j = 0; j < n; ++j)
        if (net.junctions()[j].slack) trip.emplace_back(row++, j, 1.0);

    Eigen::SparseMatrix<double> jac(n + m, n + m);
    jac.setFromTriplets(trip.begin(), trip.end());
    return jac;
}

Solution solve_block_newton(const BlockProblem &prob, const std::optional<NewtonStart> &start) {
    const Network &net = prob.block;
    const SolverOptions &opts = prob.options;
    ValidationReport vr = validate_network(net);
    if (!vr.valid()) {
        std::string msg = "invalid block:";
        for (const auto &v : vr.violations) msg += " " + v;
        throw InvalidNetwork(msg);
    }

    const int n = net.num_junctions(), m = net.num_edges();
    const Scales scale = make_scales(net, opts);

    // Flat start: every potential at the dominant slack potential, flows at
    // flat_flow_init; the derivative floor keeps the first Jacobian regular.
    double pi0 = 0.0;
    for (const Junction &j : net.junctions())
        if (j.slack && std::abs(j.slack_potential) >= std::abs(pi0)) pi0 = j.slack_potential;
    std::vector<double> pi(n, pi0), f(m, opts.flat_flow_init);
    if (start) {
        if (static_cast<int>(start->potentials.size()) != n ||
            static_cast<int>(start->flows.size()) != m)
            throw DimensionMismatch("initial state does not match the block");
        pi = start->potentials;
        f = start->flows;
    }

    // Row order matches assemble_residual: edges, non-slack balances, slack pins.
    std::vector<int> balance_row(n, -1), slack_row(n, -1);
    {
        int row = m;
        for (int j = 0; j < n; ++j)
            if (!net.junctions()[j].slack) balance_row[j] = row++;
        for (int j = 0; j < n; ++j)
            if (net.junctions()[j].slack) slack_row[j] = row++;
    }

    auto scaled_residual = [&](Eigen::VectorXd &r) {
        double inf = 0.0;
        for (int e = 0; e < m; ++e) {
            const EdgeElement &ed = net.edges()[e];
            r[e] = (ed.gamma * pi[net.from_of(e)] - pi[net.to_of(e)] - ed.g(f[e])) /
                   scale.potential;
            inf = std::max(inf, std::abs(r[e]));
        }
        for (int j = 0; j < n; ++j) {
            const Junction &jn = net.junctions()[j];
            int row;
            if (jn.slack) {
                row = slack_row[j];
                r[row] = (pi[j] - jn.slack_potential) / scale.potential;
            } else {
                row = balance_row[j];
                double bal = -jn.injection;
                for (int e : net.incident(j)) bal += (net.to_of(e) == j) ? f[e] : -f[e];
                r[row] = bal / scale.flow;
            }
            inf = std::max(inf, std::abs(r[row]));
        }
        return inf;
    };

    Eigen::VectorXd r(n + m);
    std::vector<double> trace;
    int iters = 0;
    for (;; ++iters) {
        double inf = scaled_residual(r);
        trace.push_back(inf);
        if (inf < opts.tol) break;
        if (iters >= opts.max_iter)
            throw NonConvergence("Newton did not converge in " + std::to_string(opts.max_iter) +
                                     " iterations (scaled residual " + std::to_string(inf) + ")",
                                 iters, inf, trace);

        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(3 * m + n);
        for (int e = 0; e < m; ++e) {
            const EdgeElement &ed = net.edges()[e];
            trip.emplace_back(e, net.from_of(e), ed.gamma);
            trip.emplace_back(e, net.to_of(e), -1.0);
            trip.emplace_back(e, n + e,
                              -floored_g_prime(ed, f[e], opts.deriv_floor) * scale.flow /
                                  scale.potential);
        }
        for (int j = 0; j < n; ++j) {
            if (net.junctions()[j].slack) {
                trip.emplace_back(slack_row[j], j, 1.0);
            } else {
                for (int e : net.incident(j))
                    trip.emplace_back(balance_row[j], n + e, (net.to_of(e) == j) ? 1.0 : -1.0);
            }
        }
        Eigen::SparseMatrix<double> jac(n + m, n + m);
        jac.setFromTriplets(trip.begin(), trip.end());

        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(jac);
        if (lu.info() != Eigen::Success)
            throw SingularJacobian("Newton linear solve failed at iteration " +
                                   std::to_string(iters));
        Eigen::VectorXd delta = lu.solve(-r);
        if (lu.info() != Eigen::Success)
            throw SingularJacobian("Newton back-substitution failed at iteration " +
                                   std::to_string(iters));
        for (int j = 0; j < n; ++j) pi[j] += opts.damping * delta[j] * scale.potential;
        for (int e = 0; e < m; ++e) f[e] += opts.damping * delta[n + e] * scale.flow;
    }

    Solution sol = state_to_solution(net, pi, f);
    sol.iterations_total = iters;
    sol.residual_inf_norm = verify_solution(net, sol, 1.0).inf_norm;
    return sol;
}

}  // namespace netflow
