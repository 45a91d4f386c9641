"""Depth-limited shortest-path DAG decomposition of a labeled graph.

Each node of a graph induces one rooted DAG: breadth-first levels are the
shortest-path distances from the root, and an edge of the graph survives,
directed downward, exactly when it links consecutive levels. Edges between
nodes on the same level and back edges lie on no shortest path from the
root and are dropped; a node reached simultaneously from several parents
keeps every such incoming edge.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graphs import LabeledGraph


@dataclass(frozen=True)
class DecompDag:
    """Rooted DAG of one breadth-first decomposition.

    ``order`` lists the reachable nodes by (level, node index) ascending, so
    iterating it in reverse visits children before parents. ``h`` is the
    depth limit used (``None`` = unbounded).
    """

    root: int
    levels: dict[int, int]
    children: dict[int, tuple[int, ...]]
    labels: tuple[str, ...]
    h: int | None
    order: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        ordered = tuple(sorted(self.levels, key=lambda u: (self.levels[u], u)))
        object.__setattr__(self, "order", ordered)

    @property
    def n(self) -> int:
        return len(self.levels)

    def edge_list(self) -> list[tuple[int, int]]:
        return [(u, w) for u in self.order for w in self.children[u]]


def decompose(graph: LabeledGraph, root: int, h: int | None) -> DecompDag:
    """Build the shortest-path DAG rooted at ``root``, truncated at depth ``h``."""
    if not 0 <= root < graph.n:
        raise ValueError(f"root {root} out of range 0..{graph.n - 1}")
    if graph.self_loops:
        raise ValueError("graph has self-loops; preprocess it first")
    if h is not None and h < 0:
        raise ValueError(f"depth limit must be >= 0, got {h}")

    adj = graph.adjacency
    levels = {root: 0}
    frontier = [root]
    depth = 0
    while frontier and (h is None or depth < h):
        nxt = set()
        for u in frontier:
            for w in adj[u]:
                if w not in levels:
                    nxt.add(w)
        depth += 1
        frontier = sorted(nxt)
        for w in frontier:
            levels[w] = depth

    children = {
        u: tuple(w for w in adj[u] if levels.get(w, -1) == levels[u] + 1)
        for u in levels
    }
    return DecompDag(root, levels, children, graph.labels, h)


def decompose_all(graph: LabeledGraph, h: int | None) -> list[DecompDag]:
    """One DAG per node, in node-index order."""
    return [decompose(graph, v, h) for v in range(graph.n)]


def dag_to_dot(dag: DecompDag, codes: dict[int, int] | None = None) -> str:
    """Render a decomposition DAG in DOT, levels (and codes) as attributes."""
    lines = ["digraph dd {"]
    for u in dag.order:
        attrs = f'label="{dag.labels[u]}", level={dag.levels[u]}'
        if codes is not None:
            attrs += f", code={codes[u]}"
        lines.append(f"  {u} [{attrs}];")
    for u, w in dag.edge_list():
        lines.append(f"  {u} -> {w};")
    lines.append("}")
    return "\n".join(lines) + "\n"
