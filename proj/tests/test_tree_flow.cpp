#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "netflow/tree_flow.hpp"
#include "test_helpers.hpp"

using namespace netflow;
using namespace netflow::testing;

namespace {

struct Decomposed {
    Network net;
    PartitionSet p;
    BlockCutTree tree;
};

Decomposed decompose(Network net) {
    PartitionSet p = compute_blocks(net);
    BlockCutTree tree = build_block_cut_tree(net, p);
    return {std::move(net), std::move(p), std::move(tree)};
}

// Star of three 2-node blocks hanging off a slack block through cut c.
Decomposed star_example() {
    Network net({slack("s", 100), demand("c", 0.0), demand("N2", 3.0), demand("N3", 1.0),
                 demand("N4", 2.0)},
                {pipe("e0", "s", "c"), pipe("t2", "c", "N2"), pipe("t3", "c", "N3"),
                 pipe("t4", "c", "N4")});
    return decompose(std::move(net));
}

// Oracle: solve the reduced incidence system A f = q with a dense LU, where
// rows are the non-free tree vertices and columns the tree edges, signed +1
// toward the vertex's parent side.
void check_against_dense_oracle(const TreeFlowProblem &prob, const TreeFlows &flows) {
    const BlockCutTree &tree = *prob.tree;
    std::vector<int> rows;
    for (int v = 0; v < tree.num_vertices(); ++v)
        if (prob.known[v]) rows.push_back(v);
    const int m = static_cast<int>(tree.edges.size());
    REQUIRE(static_cast<int>(rows.size()) >= m);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows.size(), m);
    Eigen::VectorXd q(rows.size());
    // Orient each tree edge away from the root (same convention as the
    // solver): recompute parents by BFS.
    std::vector<int> parent(tree.num_vertices(), -1);
    std::vector<char> seen(tree.num_vertices(), 0);
    std::vector<int> stack{prob.root};
    seen[prob.root] = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int te : tree.adj[v]) {
            int w = tree.other_end(te, v);
            if (!seen[w]) seen[w] = 1, parent[w] = v, stack.push_back(w);
        }
    }
    for (size_t r = 0; r < rows.size(); ++r) {
        int v = rows[r];
        q(r) = prob.injections[v];
        for (int te : tree.adj[v]) {
            int w = tree.other_end(te, v);
            a(r, te) = (parent[v] == w) ? 1.0 : -1.0;  // inflow from parent, outflow to child
        }
    }
    Eigen::VectorXd f = a.colPivHouseholderQr().solve(q);
    for (int te = 0; te < m; ++te) {
        // Only compare edges the peeling determined; the rest sit under free
        // vertices and are genuinely unconstrained.
        if (!flows.determined[te]) continue;
        CHECK(std::abs(flows.flow[te] - f(te)) < 1e-10);
        // And the balance at every known vertex holds to near machine
        // precision.
    }
    Eigen::VectorXd residual = a * f - q;
    for (size_t r = 0; r < rows.size(); ++r) CHECK(std::abs(residual(r)) < 1e-12);
}

}  // namespace

TEST_CASE("single_root: interior slack selects its block") {
    auto d = star_example();
    RootInfo info = single_root(d.net, d.p, d.tree);
    CHECK(d.tree.is_block_vertex(info.root));
    // the root block is the one containing s
    int s = d.net.junction_index("s");
    CHECK(std::binary_search(d.p.blocks[info.root].vertices.begin(),
                             d.p.blocks[info.root].vertices.end(), s));
    CHECK(info.free_tree_vertices == std::set<int>{info.root});
}

TEST_CASE("single_root: a lone slack cut roots the tree at that cut") {
    Network net({demand("a", 1), slack("b", 80), demand("c", 1)},
                {pipe("e1", "a", "b"), pipe("e2", "b", "c")});
    auto d = decompose(std::move(net));
    RootInfo info = single_root(d.net, d.p, d.tree);
    CHECK_FALSE(d.tree.is_block_vertex(info.root));
    CHECK(d.tree.cut_junction_of(info.root) == d.net.junction_index("b"));
}

TEST_CASE("single_root: slacks interior to two different blocks are rejected") {
    Network net({slack("a", 100), demand("b", 0), slack("c", 90)},
                {pipe("e1", "a", "b"), pipe("e2", "b", "c")});
    auto d = decompose(std::move(net));
    CHECK_THROWS_AS(single_root(d.net, d.p, d.tree), SlacksSpanBlocks);
}

TEST_CASE("single_root: interior slack plus a slack cut of the same block is fine") {
    // triangle a-b-c with interior slack a; b is a cut to a pendant edge and
    // also slack
    Network net({slack("a", 100), slack("b", 95), demand("c", 1), demand("d", 1)},
                {pipe("e1", "a", "b"), pipe("e2", "b", "c"), pipe("e3", "c", "a"),
                 pipe("e4", "b", "d")});
    auto d = decompose(std::move(net));
    RootInfo info = single_root(d.net, d.p, d.tree);
    CHECK(d.tree.is_block_vertex(info.root));
    CHECK(info.free_tree_vertices.size() == 2);  // root block + slack cut b
}

TEST_CASE("single_root: slack cut outside the slack block is rejected") {
    // interior slack in the a-b block, second slack at cut c of a distant block
    Network net({slack("a", 100), demand("b", 0), slack("c", 90), demand("d", 1)},
                {pipe("e1", "a", "b"), pipe("e2", "b", "c"), pipe("e3", "c", "d")});
    auto d = decompose(std::move(net));
    CHECK_THROWS_AS(single_root(d.net, d.p, d.tree), SlacksSpanBlocks);
}

TEST_CASE("agglomerated injections: star example") {
    auto d = star_example();
    TreeFlowProblem prob = agglomerate_injections(d.net, d.p, d.tree);
    // cut c carries its own (zero) injection; each leaf block carries its
    // interior demand; the root block is unknown
    int c_tv = d.tree.tree_vertex_of_cut(d.net.junction_index("c"));
    CHECK(prob.known[c_tv]);
    CHECK(prob.injections[c_tv] == 0.0);
    std::multiset<double> leaf_demands;
    for (int bi = 0; bi < d.tree.num_blocks; ++bi) {
        if (bi == prob.root) {
            CHECK_FALSE(prob.known[bi]);
        } else {
            leaf_demands.insert(prob.injections[bi]);
        }
    }
    CHECK(leaf_demands == std::multiset<double>{1.0, 2.0, 3.0});
}

TEST_CASE("tree flows: star example carries each leaf demand plus the root total") {
    auto d = star_example();
    TreeFlowProblem prob = agglomerate_injections(d.net, d.p, d.tree);
    TreeFlows flows = solve_tree_flows(prob);
    int c_tv = d.tree.tree_vertex_of_cut(d.net.junction_index("c"));
    std::multiset<double> leaf_flows;
    double root_flow = std::nan("");
    for (size_t te = 0; te < d.tree.edges.size(); ++te) {
        REQUIRE(flows.determined[te]);
        int other = d.tree.other_end(static_cast<int>(te), c_tv);
        REQUIRE((d.tree.edges[te].first == c_tv || d.tree.edges[te].second == c_tv));
        if (other == prob.root)
            root_flow = flows.flow[te];
        else
            leaf_flows.insert(flows.flow[te]);
    }
    CHECK(leaf_flows == std::multiset<double>{1.0, 2.0, 3.0});
    // flow root -> c equals the whole downstream demand
    CHECK(root_flow == doctest::Approx(6.0));
}

TEST_CASE("tree flows: zero injections give zero flows") {
    Network net({slack("a", 10), demand("b", 0), demand("c", 0), demand("d", 0)},
                {pipe("e1", "a", "b"), pipe("e2", "b", "c"), pipe("e3", "c", "d")});
    auto d = decompose(std::move(net));
    TreeFlows flows = solve_tree_flows(agglomerate_injections(d.net, d.p, d.tree));
    for (size_t te = 0; te < flows.flow.size(); ++te) {
        CHECK(flows.determined[te]);
        CHECK(flows.flow[te] == doctest::Approx(0.0));
    }
}

TEST_CASE("tree flows: two-vertex tree") {
    Network net({slack("a", 10), demand("b", 0), demand("c", 7)},
                {pipe("e1", "a", "b"), pipe("e2", "b", "c")});
    auto d = decompose(std::move(net));
    TreeFlowProblem prob = agglomerate_injections(d.net, d.p, d.tree);
    TreeFlows flows = solve_tree_flows(prob);
    // edge from root block through cut b into the c-block carries 7
    for (size_t te = 0; te < d.tree.edges.size(); ++te) {
        REQUIRE(flows.determined[te]);
        int b_tv = d.tree.tree_vertex_of_cut(d.net.junction_index("b"));
        int other = d.tree.other_end(static_cast<int>(te), b_tv);
        if (other == prob.root)
            CHECK(flows.flow[te] == doctest::Approx(7.0));
        else
            CHECK(flows.flow[te] == doctest::Approx(7.0));
    }
}

TEST_CASE("tree flows agree with a dense incidence-matrix oracle") {
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 40; ++trial) {
        int n = 8 + static_cast<int>(rng() % 43);  // up to 50 junctions
        Network base = random_connected(n, static_cast<int>(rng() % 4), rng());
        // re-house with random injections
        std::vector<Junction> js;
        for (const Junction &j : base.junctions()) {
            if (j.slack)
                js.push_back(j);
            else
                js.push_back(demand(j.id, u(rng)));
        }
        Network net(std::move(js), base.edges());
        auto d = decompose(std::move(net));
        if (d.tree.num_vertices() == 1) continue;  // biconnected: nothing to peel
        TreeFlowProblem prob = agglomerate_injections(d.net, d.p, d.tree);
        TreeFlows flows = solve_tree_flows(prob);
        check_against_dense_oracle(prob, flows);
    }
}

TEST_CASE("determined tree flows balance every known vertex") {
    std::mt19937_64 rng(73);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int trial = 0; trial < 25; ++trial) {
        int n = 6 + static_cast<int>(rng() % 30);
        Network base = random_connected(n, static_cast<int>(rng() % 3), rng());
        std::vector<Junction> js;
        for (const Junction &j : base.junctions())
            js.push_back(j.slack ? j : demand(j.id, u(rng)));
        Network net(std::move(js), base.edges());
        auto d = decompose(std::move(net));
        if (d.tree.num_vertices() == 1) continue;
        TreeFlowProblem prob = agglomerate_injections(d.net, d.p, d.tree);
        TreeFlows flows = solve_tree_flows(prob);
        // parent orientation
        std::vector<int> parent(d.tree.num_vertices(), -1);
        std::vector<char> seen(d.tree.num_vertices(), 0);
        std::vector<int> stack{prob.root};
        seen[prob.root] = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int te : d.tree.adj[v]) {
                int w = d.tree.other_end(te, v);
                if (!seen[w]) seen[w] = 1, parent[w] = v, stack.push_back(w);
            }
        }
        for (int v = 0; v < d.tree.num_vertices(); ++v) {
            if (!prob.known[v] || v == prob.root) continue;
            double balance = -prob.injections[v];
            bool all_det = true;
            for (int te : d.tree.adj[v]) {
                if (!flows.determined[te]) {
                    all_det = false;
                    break;
                }
                int w = d.tree.other_end(te, v);
                balance += (parent[v] == w) ? flows.flow[te] : -flows.flow[te];
            }
            if (all_det) CHECK(std::abs(balance) < 1e-12);
        }
    }
}
