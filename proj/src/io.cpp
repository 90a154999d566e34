#include "netflow/io.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <nlohmann/json.hpp>
#include <sstream>

namespace netflow {

using nlohmann::json;

namespace {

const json &require(const json &obj, const std::string &key, const std::string &where) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError("missing field '" + key + "'", where);
    return *it;
}

double require_number(const json &obj, const std::string &key, const std::string &where) {
    const json &v = require(obj, key, where);
    if (!v.is_number()) throw ParseError("field '" + key + "' must be a number", where);
    return v.get<double>();
}

std::string require_string(const json &obj, const std::string &key, const std::string &where) {
    const json &v = require(obj, key, where);
    if (!v.is_string()) throw ParseError("field '" + key + "' must be a string", where);
    return v.get<std::string>();
}

}  // namespace

Network parse_network(const json &doc) {
    if (!doc.is_object()) throw ParseError("document must be an object", "$");
    const json &nodes = require(doc, "nodes", "$");
    const json &edges = require(doc, "edges", "$");
    if (!nodes.is_array()) throw ParseError("'nodes' must be an array", "nodes");
    if (!edges.is_array()) throw ParseError("'edges' must be an array", "edges");

    std::vector<Junction> junctions;
    junctions.reserve(nodes.size());
    for (size_t i = 0; i < nodes.size(); ++i) {
        std::string where = "nodes[" + std::to_string(i) + "]";
        const json &n = nodes[i];
        if (!n.is_object()) throw ParseError("node entry must be an object", where);
        Junction j;
        j.id = require_string(n, "id", where);
        const json &slack = require(n, "slack", where);
        if (!slack.is_boolean()) throw ParseError("field 'slack' must be a boolean", where);
        j.slack = slack.get<bool>();
        where = "nodes[" + std::to_string(i) + "] ('" + j.id + "')";
        if (j.slack) {
            j.slack_potential = require_number(n, "potential", where);
            if (n.contains("injection"))
                throw ParseError("slack node must not carry 'injection'", where);
        } else {
            j.injection = require_number(n, "injection", where);
            if (n.contains("potential"))
                throw ParseError("non-slack node must not carry 'potential'", where);
        }
        junctions.push_back(std::move(j));
    }

    std::vector<EdgeElement> elements;
    elements.reserve(edges.size());
    for (size_t i = 0; i < edges.size(); ++i) {
        std::string where = "edges[" + std::to_string(i) + "]";
        const json &e = edges[i];
        if (!e.is_object()) throw ParseError("edge entry must be an object", where);
        EdgeElement ed;
        ed.id = require_string(e, "id", where);
        where = "edges[" + std::to_string(i) + "] ('" + ed.id + "')";
        ed.from = require_string(e, "from", where);
        ed.to = require_string(e, "to", where);
        std::string kind = require_string(e, "kind", where);
        try {
            ed.kind = edge_kind_from_string(kind);
        } catch (const InvalidNetwork &ex) {
            throw ParseError(ex.what(), where);
        }
        switch (ed.kind) {
            case EdgeKind::pipe: ed.alpha = require_number(e, "alpha", where); break;
            case EdgeKind::linear: ed.r = require_number(e, "r", where); break;
            case EdgeKind::ideal:
                ed.gamma = e.contains("gamma") ? require_number(e, "gamma", where) : 1.0;
                break;
            case EdgeKind::offset: ed.c = require_number(e, "c", where); break;
        }
        elements.push_back(std::move(ed));
    }

    try {
        return Network(std::move(junctions), std::move(elements));
    } catch (const InvalidNetwork &ex) {
        throw ParseError(ex.what(), "$");
    }
}

Network parse_network_string(const std::string &text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &ex) {
        throw ParseError(ex.what(), "byte " + std::to_string(ex.byte));
    }
    return parse_network(doc);
}

Network load_network(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file", path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_network_string(ss.str());
}

json emit_network(const Network &net, const std::string &name) {
    json doc;
    doc["version"] = "1";
    if (!name.empty()) doc["name"] = name;
    std::vector<int> jorder(net.num_junctions()), eorder(net.num_edges());
    for (int i = 0; i < net.num_junctions(); ++i) jorder[i] = i;
    for (int i = 0; i < net.num_edges(); ++i) eorder[i] = i;
    std::sort(jorder.begin(), jorder.end(), [&](int a, int b) {
        return net.junctions()[a].id < net.junctions()[b].id;
    });
    std::sort(eorder.begin(), eorder.end(),
              [&](int a, int b) { return net.edges()[a].id < net.edges()[b].id; });

    doc["nodes"] = json::array();
    for (int i : jorder) {
        const Junction &j = net.junctions()[i];
        json n{{"id", j.id}, {"slack", j.slack}};
        if (j.slack)
            n["potential"] = j.slack_potential;
        else
            n["injection"] = j.injection;
        doc["nodes"].push_back(std::move(n));
    }
    doc["edges"] = json::array();
    for (int i : eorder) {
        const EdgeElement &e = net.edges()[i];
        json ej{{"id", e.id}, {"from", e.from}, {"to", e.to}, {"kind", to_string(e.kind)}};
        switch (e.kind) {
            case EdgeKind::pipe: ej["alpha"] = e.alpha; break;
            case EdgeKind::linear: ej["r"] = e.r; break;
            case EdgeKind::ideal: ej["gamma"] = e.gamma; break;
            case EdgeKind::offset: ej["c"] = e.c; break;
        }
        doc["edges"].push_back(std::move(ej));
    }
    return doc;
}

void save_network(const Network &net, const std::string &path, const std::string &name) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open file for writing", path);
    out << emit_network(net, name).dump(2) << "\n";
}

json solution_to_json(const Solution &sol) {
    json doc;
    doc["potentials"] = json::object();
    for (const auto &[id, v] : sol.potentials) doc["potentials"][id] = v;
    doc["flows"] = json::object();
    for (const auto &[id, v] : sol.flows) doc["flows"][id] = v;
    doc["residual_inf_norm"] = sol.residual_inf_norm;
    doc["iterations_total"] = sol.iterations_total;
    return doc;
}

json report_to_json(const SolveReport &report) {
    json doc;
    doc["method"] = report.method;
    doc["num_levels"] = report.num_levels;
    doc["global_residual"] = report.global_residual;
    doc["iterations_total"] = report.iterations_total;
    doc["seconds"] = {{"partition", report.seconds_partition},
                      {"tree_flow", report.seconds_tree_flow},
                      {"block_solves", report.seconds_block_solves}};
    doc["blocks"] = json::array();
    for (const auto &b : report.blocks)
        doc["blocks"].push_back({{"block", b.block},
                                 {"level", b.level},
                                 {"iterations", b.iterations},
                                 {"residual", b.residual},
                                 {"closed_form", b.closed_form}});
    return doc;
}

json partition_to_json(const Network &net, const PartitionSet &p, const BlockCutTree &tree) {
    json doc;
    doc["blocks"] = json::array();
    for (const Block &b : p.blocks) {
        json bj;
        bj["num_vertices"] = b.size();
        bj["num_edges"] = static_cast<int>(b.edges.size());
        bj["vertices"] = json::array();
        for (int v : b.vertices) bj["vertices"].push_back(net.junctions()[v].id);
        bj["edges"] = json::array();
        for (int e : b.edges) bj["edges"].push_back(net.edges()[e].id);
        doc["blocks"].push_back(std::move(bj));
    }
    doc["cuts"] = json::array();
    for (int c : p.cuts) doc["cuts"].push_back(net.junctions()[c].id);
    doc["tree_edges"] = json::array();
    for (const auto &[bv, cv] : tree.edges)
        doc["tree_edges"].push_back(
            {{"block", bv}, {"cut", net.junctions()[tree.cut_junction_of(cv)].id}});
    return doc;
}

StatsReport compute_stats(const Network &net, const std::string &name, int max_block_size) {
    StatsReport s;
    s.name = name;
    s.junctions = net.num_junctions();
    s.edges = net.num_edges();

    PartitionSet p;
    if (max_block_size >= 2) {
        SizedPartitionResult r = partition_with_max_size(net, max_block_size);
        if (auto *over = std::get_if<OversizedBlock>(&r)) {
            s.oversized = true;
            s.oversized_size = over->size;
            return s;
        }
        p = std::get<PartitionSet>(std::move(r));
    } else {
        p = compute_blocks(net);
    }

    s.num_blocks = static_cast<int>(p.blocks.size());
    s.num_cuts = static_cast<int>(p.cuts.size());
    for (const Block &b : p.blocks) {
        if (b.size() == 2) ++s.two_node_blocks;
        s.max_block_size = std::max(s.max_block_size, b.size());
    }
    s.max_block_pct = 100.0 * s.max_block_size / std::max(1, s.junctions);

    try {
        BlockCutTree tree = build_block_cut_tree(net, p);
        LevelSchedule sched = level_schedule(net, p, tree);
        s.tree_depth = static_cast<int>(sched.levels.size());
    } catch (const Error &) {
        s.tree_depth = -1;
    }
    return s;
}

json stats_to_json(const StatsReport &s) {
    json doc;
    doc["name"] = s.name;
    doc["junctions"] = s.junctions;
    doc["edges"] = s.edges;
    if (s.oversized) {
        doc["oversized"] = true;
        doc["oversized_block_size"] = s.oversized_size;
        return doc;
    }
    doc["num_blocks"] = s.num_blocks;
    doc["two_node_blocks"] = s.two_node_blocks;
    doc["max_block_size"] = s.max_block_size;
    doc["max_block_pct"] = s.max_block_pct;
    doc["num_cuts"] = s.num_cuts;
    doc["tree_depth"] = s.tree_depth;
    return doc;
}

std::string stats_table(const StatsReport &s) {
    std::ostringstream out;
    out << "Network        : " << s.name << "\n"
        << "Junctions      : " << s.junctions << "\n"
        << "Edges          : " << s.edges << "\n";
    if (s.oversized) {
        out << "Result         : non-separable block of " << s.oversized_size
            << " vertices exceeds the requested maximum\n";
        return out.str();
    }
    out << "No. of blocks  : " << s.num_blocks << "\n"
        << "2-node blocks  : " << s.two_node_blocks << "\n"
        << "Max block size : " << s.max_block_size << " (" << std::fixed
        << std::setprecision(1) << s.max_block_pct << "%)\n"
        << "Cut vertices   : " << s.num_cuts << "\n"
        << "Tree depth     : " << s.tree_depth << "\n";
    return out.str();
}

}  // namespace netflow
