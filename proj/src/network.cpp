#include "netflow/network.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <set>

namespace netflow {

std::string to_string(EdgeKind k) {
    switch (k) {
        case EdgeKind::pipe: return "pipe";
        case EdgeKind::linear: return "linear";
        case EdgeKind::ideal: return "ideal";
        case EdgeKind::offset: return "offset";
    }
    return "?";
}

EdgeKind edge_kind_from_string(const std::string &s) {
    if (s == "pipe") return EdgeKind::pipe;
    if (s == "linear") return EdgeKind::linear;
    if (s == "ideal") return EdgeKind::ideal;
    if (s == "offset") return EdgeKind::offset;
    throw InvalidNetwork("unknown edge kind '" + s + "'");
}

double EdgeElement::g(double f) const {
    switch (kind) {
        case EdgeKind::pipe: return alpha * f * std::abs(f);
        case EdgeKind::linear: return r * f;
        case EdgeKind::ideal: return 0.0;
        case EdgeKind::offset: return c;
    }
    return 0.0;
}

double EdgeElement::g_prime(double f) const {
    switch (kind) {
        case EdgeKind::pipe: return 2.0 * alpha * std::abs(f);
        case EdgeKind::linear: return r;
        case EdgeKind::ideal: return 0.0;
        case EdgeKind::offset: return 0.0;
    }
    return 0.0;
}

Network::Network(std::vector<Junction> junctions, std::vector<EdgeElement> edges)
    : junctions_(std::move(junctions)), edges_(std::move(edges)) {
    for (int j = 0; j < num_junctions(); ++j) {
        if (!junction_index_.emplace(junctions_[j].id, j).second)
            throw InvalidNetwork("duplicate junction id '" + junctions_[j].id + "'");
    }
    ends_.reserve(edges_.size());
    incident_.assign(junctions_.size(), {});
    for (int e = 0; e < num_edges(); ++e) {
        const EdgeElement &ed = edges_[e];
        if (!edge_index_.emplace(ed.id, e).second)
            throw InvalidNetwork("duplicate edge id '" + ed.id + "'");
        auto fi = junction_index_.find(ed.from);
        auto ti = junction_index_.find(ed.to);
        if (fi == junction_index_.end())
            throw InvalidNetwork("edge '" + ed.id + "' references unknown junction '" + ed.from + "'");
        if (ti == junction_index_.end())
            throw InvalidNetwork("edge '" + ed.id + "' references unknown junction '" + ed.to + "'");
        if (fi->second == ti->second)
            throw InvalidNetwork("edge '" + ed.id + "' is a self-loop");
        switch (ed.kind) {
            case EdgeKind::pipe:
                if (!(ed.alpha > 0)) throw InvalidNetwork("edge '" + ed.id + "': alpha must be > 0");
                break;
            case EdgeKind::linear:
                if (!(ed.r > 0)) throw InvalidNetwork("edge '" + ed.id + "': r must be > 0");
                break;
            case EdgeKind::ideal:
                if (!(ed.gamma > 0)) throw InvalidNetwork("edge '" + ed.id + "': gamma must be > 0");
                break;
            case EdgeKind::offset:
                break;
        }
        if (ed.kind != EdgeKind::ideal && ed.gamma != 1.0)
            throw InvalidNetwork("edge '" + ed.id + "': gamma != 1 only allowed on ideal edges");
        ends_.emplace_back(fi->second, ti->second);
        incident_[fi->second].push_back(e);
        incident_[ti->second].push_back(e);
    }
}

int Network::junction_index(const std::string &id) const {
    auto it = junction_index_.find(id);
    if (it == junction_index_.end())
        throw InvalidNetwork("unknown junction id '" + id + "'");
    return it->second;
}

int Network::edge_index(const std::string &id) const {
    auto it = edge_index_.find(id);
    if (it == edge_index_.end())
        throw InvalidNetwork("unknown edge id '" + id + "'");
    return it->second;
}

bool Network::has_junction(const std::string &id) const {
    return junction_index_.count(id) > 0;
}

std::vector<int> Network::slack_indices() const {
    std::vector<int> out;
    for (int j = 0; j < num_junctions(); ++j)
        if (junctions_[j].slack) out.push_back(j);
    return out;
}

bool Network::is_connected() const {
    if (num_junctions() == 0) return true;
    std::vector<char> seen(num_junctions(), 0);
    std::deque<int> queue{0};
    seen[0] = 1;
    int count = 1;
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int e : incident_[v]) {
            int w = (ends_[e].first == v) ? ends_[e].second : ends_[e].first;
            if (!seen[w]) {
                seen[w] = 1;
                ++count;
                queue.push_back(w);
            }
        }
    }
    return count == num_junctions();
}

namespace {

// Union-find over junction indices, used for the lossless-subgraph checks.
struct DisjointSets {
    explicit DisjointSets(int n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[a] = b;
        return true;
    }
    std::vector<int> parent;
};

}  // namespace

ValidationReport validate_network(const Network &net) {
    ValidationReport report;

    if (!net.is_connected()) {
        report.connected = false;
        report.violations.push_back("network is not connected");
    }

    int n_slack = static_cast<int>(net.slack_indices().size());
    if (n_slack < 1) {
        report.a1_slack_exists = false;
        report.violations.push_back("A1: no slack junction");
    }

    // A2 and A3 are checked on the subgraph of lossless (g == 0) edges:
    // A3 holds iff that subgraph is a forest, A2 iff no component of it
    // contains two slack junctions.
    DisjointSets ds(net.num_junctions());
    for (int e = 0; e < net.num_edges(); ++e) {
        if (!net.edges()[e].is_lossless()) continue;
        if (!ds.unite(net.from_of(e), net.to_of(e)) && report.a3_lossless_acyclic) {
            report.a3_lossless_acyclic = false;
            report.violations.push_back(
                "A3: cycle of lossless edges (through edge '" + net.edges()[e].id + "')");
        }
    }
    std::map<int, std::string> slack_component;
    for (int j : net.slack_indices()) {
        int root = ds.find(j);
        auto [it, fresh] = slack_component.emplace(root, net.junctions()[j].id);
        if (!fresh && report.a2_slacks_separated) {
            report.a2_slacks_separated = false;
            report.violations.push_back("A2: slack junctions '" + it->second + "' and '" +
                                        net.junctions()[j].id +
                                        "' are joined by lossless edges only");
        }
    }
    return report;
}

double edge_residual(const EdgeElement &e, double pi_from, double pi_to, double f) {
    return e.gamma * pi_from - pi_to - e.g(f);
}

double node_residual(const Network &net, const std::string &junction_id,
                     const std::map<std::string, double> &flows) {
    int j = net.junction_index(junction_id);
    const Junction &jn = net.junctions()[j];
    if (jn.slack)
        throw InvalidNetwork("junction '" + junction_id + "' is slack; it has no balance equation");
    double net_inflow = 0.0;
    for (int e : net.incident(j)) {
        auto it = flows.find(net.edges()[e].id);
        if (it == flows.end())
            throw DimensionMismatch("missing flow for edge '" + net.edges()[e].id + "'");
        net_inflow += (net.to_of(e) == j) ? it->second : -it->second;
    }
    return net_inflow - jn.injection;
}

VerificationReport verify_solution(const Network &net, const Solution &sol, double tol) {
    VerificationReport report;
    if (static_cast<int>(sol.potentials.size()) != net.num_junctions() ||
        static_cast<int>(sol.flows.size()) != net.num_edges())
        throw DimensionMismatch("solution does not cover the network");

    auto pi = [&](int j) {
        auto it = sol.potentials.find(net.junctions()[j].id);
        if (it == sol.potentials.end())
            throw DimensionMismatch("missing potential for junction '" + net.junctions()[j].id + "'");
        return it->second;
    };

    double inf = 0.0;
    for (int e = 0; e < net.num_edges(); ++e) {
        const EdgeElement &ed = net.edges()[e];
        auto it = sol.flows.find(ed.id);
        if (it == sol.flows.end())
            throw DimensionMismatch("missing flow for edge '" + ed.id + "'");
        double r = edge_residual(ed, pi(net.from_of(e)), pi(net.to_of(e)), it->second);
        report.edge_residuals[ed.id] = r;
        inf = std::max(inf, std::abs(r));
    }
    for (const Junction &jn : net.junctions()) {
        if (jn.slack) {
            double r = sol.potentials.at(jn.id) - jn.slack_potential;
            report.slack_residuals[jn.id] = r;
            inf = std::max(inf, std::abs(r));
        } else {
            double r = node_residual(net, jn.id, sol.flows);
            report.balance_residuals[jn.id] = r;
            inf = std::max(inf, std::abs(r));
        }
    }
    report.inf_norm = inf;
    report.pass = inf < tol;
    return report;
}

}  // namespace netflow
