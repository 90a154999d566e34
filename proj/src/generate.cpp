#include "netflow/generate.hpp"

#include <random>
#include <set>

namespace netflow {

Network generate_network(const GenerateParams &params) {
    if (params.nodes < 3)
        throw InvalidNetwork("generator needs at least 3 nodes");
    std::mt19937_64 rng(params.seed);
    std::uniform_real_distribution<double> alpha_dist(0.5, 2.0);
    // Total withdrawal stays O(5) so flat-start Newton is comfortable at any size.
    std::uniform_real_distribution<double> demand_dist(0.0, 10.0 / params.nodes);

    std::vector<Junction> junctions;
    for (int i = 0; i < params.nodes; ++i) {
        Junction j;
        j.id = "n" + std::to_string(i);
        if (i == 0) {
            j.slack = true;
            j.slack_potential = params.slack_potential;
        } else {
            j.injection = demand_dist(rng);
        }
        junctions.push_back(std::move(j));
    }

    std::vector<EdgeElement> edges;
    std::set<std::pair<int, int>> used;
    auto add_pipe = [&](int a, int b) {
        EdgeElement e;
        e.id = "e" + std::to_string(edges.size());
        e.from = "n" + std::to_string(a);
        e.to = "n" + std::to_string(b);
        e.kind = EdgeKind::pipe;
        e.alpha = alpha_dist(rng);
        used.insert({std::min(a, b), std::max(a, b)});
        edges.push_back(std::move(e));
    };

    for (int i = 1; i < params.nodes; ++i) {
        std::uniform_int_distribution<int> parent(0, i - 1);
        add_pipe(parent(rng), i);
    }
    std::uniform_int_distribution<int> any(0, params.nodes - 1);
    int added = 0;
    for (int attempt = 0; added < params.cycles && attempt < 100 * (params.cycles + 1);
         ++attempt) {
        int a = any(rng), b = any(rng);
        if (a == b || used.count({std::min(a, b), std::max(a, b)})) continue;
        add_pipe(a, b);
        ++added;
    }
    return Network(std::move(junctions), std::move(edges));
}

}  // namespace netflow
