#ifndef NETFLOW_NETWORK_HPP
#define NETFLOW_NETWORK_HPP

#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "netflow/errors.hpp"

namespace netflow {

// Potential-driven steady-state flow model.
//
// Each edge relates the endpoint potentials to its flow through
//   gamma * pi_from - pi_to = g(f)
// and each non-slack junction balances flow against its injection,
//   (sum of inflows) - (sum of outflows) = injection.
//
// Sign convention: a POSITIVE injection is net inflow consumed at the
// junction (a withdrawal/demand). Many pipeline datasets use the opposite
// sign; convert on ingest.

enum class EdgeKind { pipe, linear, ideal, offset };

std::string to_string(EdgeKind k);
EdgeKind edge_kind_from_string(const std::string &s);

struct Junction {
    std::string id;
    bool slack = false;
    double injection = 0.0;        // meaningful iff !slack
    double slack_potential = 0.0;  // meaningful iff slack
};

struct EdgeElement {
    std::string id;
    std::string from;
    std::string to;
    EdgeKind kind = EdgeKind::pipe;
    double alpha = 0.0;  // pipe: g(f) = alpha * f * |f|
    double r = 0.0;      // linear: g(f) = r * f
    double gamma = 1.0;  // potential multiplier; != 1 only for ideal edges
    double c = 0.0;      // offset: g(f) = c

    double g(double f) const;
    double g_prime(double f) const;
    bool is_lossless() const { return kind == EdgeKind::ideal; }
};

// Immutable after construction; lookup tables are built once.
class Network {
  public:
    Network(std::vector<Junction> junctions, std::vector<EdgeElement> edges);

    const std::vector<Junction> &junctions() const { return junctions_; }
    const std::vector<EdgeElement> &edges() const { return edges_; }

    int num_junctions() const { return static_cast<int>(junctions_.size()); }
    int num_edges() const { return static_cast<int>(edges_.size()); }

    int junction_index(const std::string &id) const;
    int edge_index(const std::string &id) const;
    bool has_junction(const std::string &id) const;

    // Resolved endpoint indices of edge e.
    int from_of(int e) const { return ends_[e].first; }
    int to_of(int e) const { return ends_[e].second; }

    // Edge indices incident to junction j (both orientations).
    const std::vector<int> &incident(int j) const { return incident_[j]; }

    std::vector<int> slack_indices() const;
    bool is_connected() const;

  private:
    std::vector<Junction> junctions_;
    std::vector<EdgeElement> edges_;
    std::unordered_map<std::string, int> junction_index_;
    std::unordered_map<std::string, int> edge_index_;
    std::vector<std::pair<int, int>> ends_;
    std::vector<std::vector<int>> incident_;
};

struct Solution {
    std::map<std::string, double> potentials;  // junction id -> pi
    std::map<std::string, double> flows;       // edge id -> f
    double residual_inf_norm = 0.0;
    int iterations_total = 0;
};

struct ValidationReport {
    bool connected = true;
    bool a1_slack_exists = true;      // at least one slack junction
    bool a2_slacks_separated = true;  // no two slacks joined by lossless edges only
    bool a3_lossless_acyclic = true;  // lossless subgraph is a forest
    std::vector<std::string> violations;
    bool valid() const { return violations.empty(); }
};

ValidationReport validate_network(const Network &net);

// gamma * pi_from - pi_to - g(f)
double edge_residual(const EdgeElement &e, double pi_from, double pi_to, double f);

// (inflow - outflow - injection) at a non-slack junction; throws on slack.
double node_residual(const Network &net, const std::string &junction_id,
                     const std::map<std::string, double> &flows);

struct VerificationReport {
    std::map<std::string, double> edge_residuals;
    std::map<std::string, double> balance_residuals;  // non-slack junctions
    std::map<std::string, double> slack_residuals;
    double inf_norm = 0.0;
    bool pass = false;
};

VerificationReport verify_solution(const Network &net, const Solution &sol, double tol);

}  // namespace netflow

#endif
