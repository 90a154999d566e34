#include "netflow/partition.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>

namespace netflow {

int BlockCutTree::tree_vertex_of_cut(int junction) const {
    for (int i = 0; i < static_cast<int>(cut_junctions.size()); ++i)
        if (cut_junctions[i] == junction) return num_blocks + i;
    throw InvalidNetwork("junction is not a cut vertex of this tree");
}

namespace {

// A block's subgraph with local vertex/edge numbering.
struct SubgraphView {
    std::vector<int> vertex_ids;  // local -> junction index
    std::vector<int> edge_ids;    // local -> edge index
    std::vector<std::pair<int, int>> ends;                 // local endpoints
    std::vector<std::vector<std::pair<int, int>>> adj;     // v -> (local edge, other v)
    int n() const { return static_cast<int>(vertex_ids.size()); }
    int m() const { return static_cast<int>(edge_ids.size()); }
};

SubgraphView make_view(const Network &net, const std::vector<int> &vertices,
                       const std::vector<int> &edges) {
    SubgraphView g;
    g.vertex_ids = vertices;
    g.edge_ids = edges;
    std::unordered_map<int, int> local;
    local.reserve(vertices.size());
    for (int i = 0; i < static_cast<int>(vertices.size()); ++i) local[vertices[i]] = i;
    g.adj.assign(vertices.size(), {});
    for (int le = 0; le < static_cast<int>(edges.size()); ++le) {
        int a = local.at(net.from_of(edges[le]));
        int b = local.at(net.to_of(edges[le]));
        g.ends.emplace_back(a, b);
        g.adj[a].emplace_back(le, b);
        g.adj[b].emplace_back(le, a);
    }
    return g;
}

SubgraphView full_view(const Network &net) {
    std::vector<int> vs(net.num_junctions()), es(net.num_edges());
    for (int i = 0; i < net.num_junctions(); ++i) vs[i] = i;
    for (int i = 0; i < net.num_edges(); ++i) es[i] = i;
    return make_view(net, vs, es);
}

struct BicompResult {
    std::vector<std::vector<int>> component_edges;  // local edge ids
    std::set<int> articulation;                     // local vertex ids
};

// Iterative depth-first biconnected decomposition with an edge stack.
// Parallel edges are handled by skipping only the entry edge, not the
// parent vertex.
BicompResult decompose(const SubgraphView &g) {
    BicompResult out;
    const int n = g.n();
    if (n == 0) return out;
    std::vector<int> disc(n, -1), low(n, 0);
    std::vector<int> edge_stack;
    struct Frame {
        int v;
        int entry_edge;
        size_t next;
    };
    std::vector<Frame> frames;
    int timer = 0;
    int root_components = 0;

    disc[0] = low[0] = timer++;
    frames.push_back({0, -1, 0});
    while (!frames.empty()) {
        Frame &f = frames.back();
        if (f.next < g.adj[f.v].size()) {
            auto [le, w] = g.adj[f.v][f.next++];
            if (le == f.entry_edge) continue;
            if (disc[w] == -1) {
                edge_stack.push_back(le);
                disc[w] = low[w] = timer++;
                frames.push_back({w, le, 0});
            } else if (disc[w] < disc[f.v]) {  // back edge (or parallel to an ancestor)
                edge_stack.push_back(le);
                low[f.v] = std::min(low[f.v], disc[w]);
            }
        } else {
            Frame done = f;
            frames.pop_back();
            if (frames.empty()) break;
            int p = frames.back().v;
            low[p] = std::min(low[p], low[done.v]);
            if (low[done.v] >= disc[p]) {
                std::vector<int> comp;
                int le;
                do {
                    le = edge_stack.back();
                    edge_stack.pop_back();
                    comp.push_back(le);
                } while (le != done.entry_edge);
                out.component_edges.push_back(std::move(comp));
                if (p == 0)
                    ++root_components;
                else
                    out.articulation.insert(p);
            }
        }
    }
    if (timer != n)
        throw InvalidNetwork("graph is not connected");
    if (root_components >= 2) out.articulation.insert(0);
    return out;
}

std::set<int> view_articulation_points(const Network &, const SubgraphView &g) {
    auto result = decompose(g);
    std::set<int> out;
    for (int lv : result.articulation) out.insert(g.vertex_ids[lv]);
    return out;
}

Block make_block(const Network &net, const SubgraphView &g, const std::vector<int> &local_edges) {
    Block b;
    std::set<int> vs;
    for (int le : local_edges) {
        b.edges.push_back(g.edge_ids[le]);
        vs.insert(g.vertex_ids[g.ends[le].first]);
        vs.insert(g.vertex_ids[g.ends[le].second]);
    }
    b.vertices.assign(vs.begin(), vs.end());
    std::sort(b.edges.begin(), b.edges.end());
    return b;
}

void sort_blocks(std::vector<Block> &blocks) {
    std::sort(blocks.begin(), blocks.end(), [](const Block &a, const Block &b) {
        return a.vertices < b.vertices || (a.vertices == b.vertices && a.edges < b.edges);
    });
}

}  // namespace

std::set<int> find_articulation_points(const Network &net) {
    if (net.num_junctions() < 3)
        throw InvalidNetwork("articulation points need at least 3 junctions");
    return view_articulation_points(net, full_view(net));
}

std::set<int> block_articulation_points(const Network &net, const Block &block) {
    return view_articulation_points(net, make_view(net, block.vertices, block.edges));
}

PartitionSet compute_blocks(const Network &net) {
    PartitionSet p;
    if (net.num_junctions() == 1) {
        p.blocks.push_back(Block{{0}, {}});
        return p;
    }
    SubgraphView g = full_view(net);
    auto result = decompose(g);
    for (const auto &comp : result.component_edges)
        p.blocks.push_back(make_block(net, g, comp));
    sort_blocks(p.blocks);
    for (int lv : result.articulation) p.cuts.insert(g.vertex_ids[lv]);
    return p;
}

PartitionSet trivial_partition(const Network &net) {
    PartitionSet p;
    Block b;
    b.vertices.resize(net.num_junctions());
    b.edges.resize(net.num_edges());
    for (int i = 0; i < net.num_junctions(); ++i) b.vertices[i] = i;
    for (int i = 0; i < net.num_edges(); ++i) b.edges[i] = i;
    p.blocks.push_back(std::move(b));
    return p;
}

void check_partition(const Network &net, const PartitionSet &p) {
    std::vector<int> edge_owner(net.num_edges(), -1);
    std::vector<std::vector<int>> blocks_of_vertex(net.num_junctions());
    for (int bi = 0; bi < static_cast<int>(p.blocks.size()); ++bi) {
        const Block &b = p.blocks[bi];
        if (b.vertices.empty())
            throw InvalidNetwork("partition: empty block");
        for (int e : b.edges) {
            if (edge_owner[e] != -1)
                throw InvalidNetwork("partition: edge '" + net.edges()[e].id +
                                     "' appears in two blocks");
            edge_owner[e] = bi;
        }
        for (int v : b.vertices) blocks_of_vertex[v].push_back(bi);
        if (b.size() > 1) {
            SubgraphView g;
            try {
                g = make_view(net, b.vertices, b.edges);
            } catch (const std::out_of_range &) {
                throw InvalidNetwork("partition: block edge endpoint outside the block");
            }
            std::vector<char> seen(g.n(), 0);
            std::deque<int> q{0};
            seen[0] = 1;
            int cnt = 1;
            while (!q.empty()) {
                int v = q.front();
                q.pop_front();
                for (auto [le, w] : g.adj[v])
                    if (!seen[w]) {
                        seen[w] = 1;
                        ++cnt;
                        q.push_back(w);
                    }
            }
            if (cnt != g.n())
                throw InvalidNetwork("partition: block is not connected");
        }
    }
    for (int e = 0; e < net.num_edges(); ++e)
        if (edge_owner[e] == -1)
            throw InvalidNetwork("partition: edge '" + net.edges()[e].id +
                                 "' is not covered by any block");
    // Any vertex shared by two blocks must be a declared cut; two blocks may
    // share at most one vertex.
    std::map<std::pair<int, int>, int> shared_count;
    for (int v = 0; v < net.num_junctions(); ++v) {
        const auto &bs = blocks_of_vertex[v];
        if (bs.size() >= 2 && !p.cuts.count(v))
            throw InvalidNetwork("partition: junction '" + net.junctions()[v].id +
                                 "' is shared by blocks but not a cut");
        for (size_t i = 0; i < bs.size(); ++i)
            for (size_t j = i + 1; j < bs.size(); ++j)
                if (++shared_count[{bs[i], bs[j]}] > 1)
                    throw InvalidNetwork("partition: two blocks share more than one vertex");
    }
    for (int c : p.cuts)
        if (blocks_of_vertex[c].size() < 2)
            throw InvalidNetwork("partition: cut '" + net.junctions()[c].id +
                                 "' is not shared by two blocks");
}

BlockCutTree build_block_cut_tree(const Network &net, const PartitionSet &p) {
    check_partition(net, p);
    BlockCutTree t;
    t.num_blocks = static_cast<int>(p.blocks.size());
    t.cut_junctions.assign(p.cuts.begin(), p.cuts.end());
    std::unordered_map<int, int> cut_vertex;
    for (int i = 0; i < static_cast<int>(t.cut_junctions.size()); ++i)
        cut_vertex[t.cut_junctions[i]] = t.num_blocks + i;
    for (int bi = 0; bi < t.num_blocks; ++bi)
        for (int v : p.blocks[bi].vertices)
            if (p.cuts.count(v)) t.edges.emplace_back(bi, cut_vertex[v]);
    t.adj.assign(t.num_vertices(), {});
    for (int te = 0; te < static_cast<int>(t.edges.size()); ++te) {
        t.adj[t.edges[te].first].push_back(te);
        t.adj[t.edges[te].second].push_back(te);
    }
    // With the partition conditions satisfied this is a tree; verify.
    if (static_cast<int>(t.edges.size()) != t.num_vertices() - 1)
        throw InvalidNetwork("block-cut graph is not a tree");
    std::vector<char> seen(t.num_vertices(), 0);
    std::deque<int> q{0};
    seen[0] = 1;
    int cnt = 1;
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (int te : t.adj[v]) {
            int w = t.other_end(te, v);
            if (!seen[w]) {
                seen[w] = 1;
                ++cnt;
                q.push_back(w);
            }
        }
    }
    if (cnt != t.num_vertices())
        throw InvalidNetwork("block-cut graph is not connected");
    return t;
}

PartitionSet refine_partition(const Network &net, const PartitionSet &p,
                              int block_index, int cut) {
    if (block_index < 0 || block_index >= static_cast<int>(p.blocks.size()))
        throw InvalidNetwork("refine: block index out of range");
    const Block &target = p.blocks[block_index];
    auto artic = block_articulation_points(net, target);
    if (!artic.count(cut))
        throw InvalidNetwork("refine: junction '" + net.junctions()[cut].id +
                             "' is not an articulation point of the block");

    // Components of (block - cut), found over the block's edges that do not
    // touch the cut.
    std::unordered_map<int, int> comp_of;  // junction -> component id
    int n_comp = 0;
    for (int v : target.vertices) {
        if (v == cut || comp_of.count(v)) continue;
        int id = n_comp++;
        std::deque<int> q{v};
        comp_of[v] = id;
        while (!q.empty()) {
            int u = q.front();
            q.pop_front();
            for (int e : net.incident(u)) {
                int w = (net.from_of(e) == u) ? net.to_of(e) : net.from_of(e);
                if (w == cut || comp_of.count(w)) continue;
                if (!std::binary_search(target.edges.begin(), target.edges.end(), e)) continue;
                comp_of[w] = id;
                q.push_back(w);
            }
        }
    }

    std::vector<Block> pieces(n_comp);
    for (int e : target.edges) {
        int a = net.from_of(e), b = net.to_of(e);
        int comp = (a == cut) ? comp_of.at(b) : comp_of.at(a);
        pieces[comp].edges.push_back(e);
    }
    for (Block &piece : pieces) {
        std::set<int> vs;
        for (int e : piece.edges) {
            vs.insert(net.from_of(e));
            vs.insert(net.to_of(e));
        }
        piece.vertices.assign(vs.begin(), vs.end());
        std::sort(piece.edges.begin(), piece.edges.end());
    }

    PartitionSet out;
    out.cuts = p.cuts;
    out.cuts.insert(cut);
    for (int bi = 0; bi < static_cast<int>(p.blocks.size()); ++bi)
        if (bi != block_index) out.blocks.push_back(p.blocks[bi]);
    for (Block &piece : pieces) out.blocks.push_back(std::move(piece));
    sort_blocks(out.blocks);
    return out;
}

namespace {

// Size of the largest rebuilt piece if `block` is split at `cut`.
int split_score(const Network &net, const Block &block, int cut) {
    std::unordered_map<int, int> comp_of;
    std::vector<int> comp_size;
    for (int v : block.vertices) {
        if (v == cut || comp_of.count(v)) continue;
        int id = static_cast<int>(comp_size.size());
        comp_size.push_back(0);
        std::deque<int> q{v};
        comp_of[v] = id;
        while (!q.empty()) {
            int u = q.front();
            q.pop_front();
            ++comp_size[id];
            for (int e : net.incident(u)) {
                int w = (net.from_of(e) == u) ? net.to_of(e) : net.from_of(e);
                if (w == cut || comp_of.count(w)) continue;
                if (!std::binary_search(block.edges.begin(), block.edges.end(), e)) continue;
                comp_of[w] = id;
                q.push_back(w);
            }
        }
    }
    int worst = 0;
    for (int s : comp_size) worst = std::max(worst, s + 1);  // +1 for the re-added cut
    return worst;
}

}  // namespace

SizedPartitionResult partition_with_max_size(const Network &net, int max_vertices) {
    if (max_vertices < 2)
        throw InvalidNetwork("max block size must be at least 2");
    PartitionSet p = trivial_partition(net);
    for (;;) {
        int oversized = -1;
        for (int bi = 0; bi < static_cast<int>(p.blocks.size()); ++bi)
            if (p.blocks[bi].size() > max_vertices) {
                oversized = bi;
                break;
            }
        if (oversized == -1) return p;
        const Block &b = p.blocks[oversized];
        auto artic = block_articulation_points(net, b);
        if (artic.empty())
            return OversizedBlock{b, b.size()};
        // Balanced-split heuristic: minimize the largest resulting piece,
        // ties broken by smallest junction id.
        int best = -1, best_score = std::numeric_limits<int>::max();
        for (int c : artic) {
            int score = split_score(net, b, c);
            if (best == -1 || score < best_score ||
                (score == best_score && net.junctions()[c].id < net.junctions()[best].id)) {
                best_score = score;
                best = c;
            }
        }
        p = refine_partition(net, p, oversized, best);
    }
}

AugmentedNetwork build_augmented_network(const Network &net, const PartitionSet &p) {
    check_partition(net, p);
    const int n_blocks = static_cast<int>(p.blocks.size());

    std::vector<Junction> junctions = net.junctions();
    std::vector<std::unordered_map<int, int>> replica_of(n_blocks);
    std::unordered_map<std::string, std::pair<std::string, int>> replica_map;
    std::vector<std::string> tie_ids;
    std::vector<EdgeElement> ties;

    for (int bi = 0; bi < n_blocks; ++bi) {
        for (int v : p.blocks[bi].vertices) {
            if (!p.cuts.count(v)) continue;
            const Junction &orig = net.junctions()[v];
            Junction rep;
            rep.id = orig.id + "::" + std::to_string(bi);
            if (net.has_junction(rep.id) || replica_map.count(rep.id))
                throw InvalidNetwork("replica id collision for '" + rep.id + "'");
            // A slack cut propagates its fixed potential to every replica;
            // otherwise the replica carries zero injection.
            rep.slack = orig.slack;
            rep.slack_potential = orig.slack_potential;
            rep.injection = 0.0;
            replica_of[bi][v] = static_cast<int>(junctions.size());
            replica_map[rep.id] = {orig.id, bi};
            junctions.push_back(rep);

            EdgeElement tie;
            tie.id = "tie::" + rep.id;
            tie.from = orig.id;
            tie.to = rep.id;
            tie.kind = EdgeKind::ideal;
            tie.gamma = 1.0;
            tie_ids.push_back(tie.id);
            ties.push_back(std::move(tie));
        }
    }

    std::vector<int> edge_block(net.num_edges(), -1);
    for (int bi = 0; bi < n_blocks; ++bi)
        for (int e : p.blocks[bi].edges) edge_block[e] = bi;

    std::vector<EdgeElement> edges;
    edges.reserve(net.num_edges() + ties.size());
    for (int e = 0; e < net.num_edges(); ++e) {
        EdgeElement ed = net.edges()[e];
        int bi = edge_block[e];
        auto rename = [&](const std::string &end, int idx) {
            auto it = replica_of[bi].find(idx);
            return it == replica_of[bi].end() ? end : junctions[it->second].id;
        };
        ed.from = rename(ed.from, net.from_of(e));
        ed.to = rename(ed.to, net.to_of(e));
        edges.push_back(std::move(ed));
    }
    for (EdgeElement &tie : ties) edges.push_back(std::move(tie));

    AugmentedNetwork aug{Network(std::move(junctions), std::move(edges)),
                         std::move(replica_map), std::move(tie_ids),
                         {}, {}, std::move(replica_of)};

    aug.block_junctions.resize(n_blocks);
    aug.block_edges.resize(n_blocks);
    for (int bi = 0; bi < n_blocks; ++bi) {
        for (int v : p.blocks[bi].vertices)
            aug.block_junctions[bi].push_back(p.cuts.count(v) ? aug.replica_of[bi].at(v) : v);
        for (int e : p.blocks[bi].edges) aug.block_edges[bi].push_back(e);
    }
    return aug;
}

Network merge_replicas(const AugmentedNetwork &aug) {
    std::vector<Junction> junctions;
    for (const Junction &j : aug.network.junctions())
        if (!aug.replica_map.count(j.id)) junctions.push_back(j);
    std::vector<EdgeElement> edges;
    std::set<std::string> tie_set(aug.tie_edge_ids.begin(), aug.tie_edge_ids.end());
    for (const EdgeElement &e : aug.network.edges()) {
        if (tie_set.count(e.id)) continue;
        EdgeElement ed = e;
        auto fit = aug.replica_map.find(ed.from);
        if (fit != aug.replica_map.end()) ed.from = fit->second.first;
        auto tit = aug.replica_map.find(ed.to);
        if (tit != aug.replica_map.end()) ed.to = tit->second.first;
        edges.push_back(std::move(ed));
    }
    return Network(std::move(junctions), std::move(edges));
}

Solution project_solution(const Network &net, const AugmentedNetwork &aug,
                          const Solution &aug_sol) {
    Solution sol;
    for (const Junction &j : net.junctions()) sol.potentials[j.id] = aug_sol.potentials.at(j.id);
    for (const EdgeElement &e : net.edges()) sol.flows[e.id] = aug_sol.flows.at(e.id);
    sol.iterations_total = aug_sol.iterations_total;
    sol.residual_inf_norm = verify_solution(net, sol, 1.0).inf_norm;
    return sol;
}

}  // namespace netflow
