#!/usr/bin/env python3
"""Deterministic construction of the benchmark-topology fixtures.

Each fixture reproduces the block-cut statistics of a well-known network
family (row-for-row: junction count, number of blocks, number of 2-node
blocks, largest block size) by building the block structure explicitly:

  gaslib40:   11-vertex core cycle, attached cycles of sizes {3, 3, 5},
              21 pendant bridges          -> 40 nodes, 25 blocks, 21 2-node, max 11
  gaslib134:  random tree on 134 nodes    -> 133 blocks, all 2-node
  gaslib582:  113-vertex core cycle, ten attached 12-cycles,
              359 pendant bridges         -> 582 nodes, 370 blocks, 359 2-node, max 113
  texas2451:  843-vertex core cycle, attached cycles {29, 29, 29, 29, 27},
              1470 pendant bridges        -> 2451 nodes, 1476 blocks, 1470 2-node, max 843

Cores and attached blocks are cycles (hence non-separable); every attached
cycle shares exactly one vertex with the structure built so far, and every
bridge adds one fresh pendant vertex. Node 0 is the slack; every other node
draws a small deterministic demand. All edges are pipes with unit loss
coefficient so the fixtures are solvable as well as partitionable.
"""

import json
import pathlib
import random


class Builder:
    def __init__(self, name, seed):
        self.name = name
        self.rng = random.Random(seed)
        self.nodes = []
        self.edges = []

    def add_node(self):
        idx = len(self.nodes)
        self.nodes.append(f"n{idx}")
        return idx

    def add_edge(self, a, b):
        self.edges.append((f"e{len(self.edges)}", self.nodes[a], self.nodes[b]))

    def cycle(self, size, attach_at=None):
        """A fresh cycle; if attach_at is given it becomes one of its vertices."""
        verts = [attach_at] if attach_at is not None else []
        while len(verts) < size:
            verts.append(self.add_node())
        for i in range(size):
            self.add_edge(verts[i], verts[(i + 1) % size])
        return verts

    def bridges(self, count):
        """Pendant edges hung off uniformly chosen existing vertices."""
        for _ in range(count):
            at = self.rng.randrange(len(self.nodes))
            self.add_edge(at, self.add_node())

    def random_tree(self, size):
        self.add_node()
        for i in range(1, size):
            parent = self.rng.randrange(i)
            self.add_edge(parent, self.add_node())

    def document(self):
        nodes = []
        for i, nid in enumerate(self.nodes):
            if i == 0:
                nodes.append({"id": nid, "slack": True, "potential": 100.0})
            else:
                demand = round(self.rng.uniform(0.0, 0.02), 6)
                nodes.append({"id": nid, "slack": False, "injection": demand})
        edges = [
            {"id": eid, "from": a, "to": b, "kind": "pipe", "alpha": 1.0}
            for eid, a, b in self.edges
        ]
        return {"version": "1", "name": self.name, "nodes": nodes, "edges": edges}


def core_with_attachments(name, seed, core_size, attached_sizes, bridge_count):
    b = Builder(name, seed)
    core = b.cycle(core_size)
    # spread the attached cycles over distinct core vertices
    for i, size in enumerate(attached_sizes):
        b.cycle(size, attach_at=core[(i * 7) % core_size])
    b.bridges(bridge_count)
    return b


def main():
    out_dir = pathlib.Path(__file__).resolve().parent.parent / "fixtures"
    out_dir.mkdir(exist_ok=True)

    fixtures = {
        "gaslib40": core_with_attachments("gaslib40", 401, 11, [3, 3, 5], 21),
        "gaslib582": core_with_attachments("gaslib582", 5821, 113, [12] * 10, 359),
        "texas2451": core_with_attachments(
            "texas2451", 24511, 843, [29, 29, 29, 29, 27], 1470
        ),
    }
    tree = Builder("gaslib134", 1341)
    tree.random_tree(134)
    fixtures["gaslib134"] = tree

    for name, builder in fixtures.items():
        doc = builder.document()
        path = out_dir / f"{name}.json"
        path.write_text(json.dumps(doc, indent=1) + "\n")
        print(f"{path}: {len(doc['nodes'])} nodes, {len(doc['edges'])} edges")


if __name__ == "__main__":
    main()
