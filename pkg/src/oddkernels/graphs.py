"""Labeled-graph model, dataset loaders, and corpus statistics.

Two on-disk formats are supported (documented in docs/formats.md):

* the TU Dortmund benchmark layout (``<name>_A.txt`` etc., 1-based indices),
* a line-oriented edge-list format with ``graph`` / ``node`` / ``edge`` records.

Node labels are opaque strings. Four symbols are reserved for the canonical
encoding of subtrees and for the self-loop rewrite rule and may never appear
in user-supplied labels: ``*``, ``#``, ``⌈``, ``⌉``.
"""

from __future__ import annotations

import os
from collections import defaultdict
from dataclasses import dataclass

from .errors import FormatError, LoadError

SELF_LOOP_MARK = "*"
CHILD_SEP = "#"
VISIT_OPEN = "⌈"   # ⌈
VISIT_CLOSE = "⌉"  # ⌉

RESERVED_SYMBOLS = (SELF_LOOP_MARK, CHILD_SEP, VISIT_OPEN, VISIT_CLOSE)


def _check_label(label: str, *, allow_loop_mark: bool = True) -> None:
    if not label:
        raise FormatError("empty node label")
    body = label
    if allow_loop_mark and label.endswith(SELF_LOOP_MARK):
        body = label[:-1]
    for sym in RESERVED_SYMBOLS:
        if sym in body:
            raise FormatError(
                f"label {label!r} contains reserved symbol {sym!r}"
            )


class LabeledGraph:
    """Undirected node-labeled graph with dense node indices 0..n-1.

    Instances are immutable after construction and safe to share across
    threads. Edges are stored as canonical ``(min, max)`` pairs; parallel
    edges are deduplicated and ``(u, u)`` pairs are recorded in
    ``self_loops`` until :func:`preprocess_self_loops` removes them.
    """

    __slots__ = ("labels", "edges", "self_loops", "_adj")

    def __init__(self, labels, edges=(), self_loops=()):
        self.labels = tuple(str(x) for x in labels)
        n = len(self.labels)
        loops = {int(u) for u in self_loops}
        canon = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                loops.add(u)
            else:
                canon.add((u, v) if u < v else (v, u))
        for u, v in canon:
            if not (0 <= u < n and 0 <= v < n):
                raise FormatError(f"edge ({u}, {v}) references node outside 0..{n - 1}")
        for u in loops:
            if not 0 <= u < n:
                raise FormatError(f"self-loop on node {u} outside 0..{n - 1}")
        self.edges = frozenset(canon)
        self.self_loops = frozenset(loops)
        self._adj = None

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        """Neighbor lists (sorted ascending), self-loops excluded. Cached."""
        if self._adj is None:
            nbrs = [[] for _ in range(self.n)]
            for u, v in self.edges:
                nbrs[u].append(v)
                nbrs[v].append(u)
            self._adj = tuple(tuple(sorted(x)) for x in nbrs)
        return self._adj

    def degree(self, u: int) -> int:
        return len(self.adjacency[u])

    def max_degree(self) -> int:
        return max((len(x) for x in self.adjacency), default=0)

    def edge_count(self) -> int:
        """Undirected edge count, self-loops included while still present."""
        return len(self.edges) + len(self.self_loops)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LabeledGraph):
            return NotImplemented
        return (
            self.labels == other.labels
            and self.edges == other.edges
            and self.self_loops == other.self_loops
        )

    def __hash__(self):
        return hash((self.labels, self.edges, self.self_loops))

    def __repr__(self):
        return f"LabeledGraph(n={self.n}, m={len(self.edges)}, loops={len(self.self_loops)})"


@dataclass(frozen=True)
class Dataset:
    """An ordered collection of graphs with optional class targets."""

    graphs: tuple[LabeledGraph, ...]
    targets: tuple[str, ...] | None = None
    name: str = ""

    def __post_init__(self):
        if self.targets is not None and len(self.targets) != len(self.graphs):
            raise FormatError(
                f"{len(self.targets)} targets for {len(self.graphs)} graphs"
            )

    def __len__(self) -> int:
        return len(self.graphs)

    def preprocessed(self) -> "Dataset":
        """Apply the self-loop rewrite to every graph."""
        return Dataset(
            tuple(preprocess_self_loops(g) for g in self.graphs),
            self.targets,
            self.name,
        )

    def target_of(self, i: int) -> str:
        return self.targets[i] if self.targets is not None else "?"


def preprocess_self_loops(graph: LabeledGraph) -> LabeledGraph:
    """Fold self-loops into labels: a looped node gets ``*`` appended once.

    The loop edges are removed; everything else is untouched. Idempotent,
    since the output has no self-loops left.
    """
    if not graph.self_loops:
        return graph
    labels = [
        lab + SELF_LOOP_MARK if u in graph.self_loops else lab
        for u, lab in enumerate(graph.labels)
    ]
    return LabeledGraph(labels, graph.edges)


# ---------------------------------------------------------------------------
# TU Dortmund benchmark format
# ---------------------------------------------------------------------------

def _read_lines(path: str) -> list[str]:
    with open(path, "r", encoding="utf-8") as f:
        return [line.strip() for line in f]


def load_tu_dataset(dir_path: str, name: str | None = None) -> Dataset:
    """Load a dataset stored in the TU Dortmund benchmark layout.

    ``dir_path`` must contain ``<name>_A.txt``, ``<name>_graph_indicator.txt``
    and ``<name>_node_labels.txt``; ``<name>_graph_labels.txt`` is optional.
    When ``name`` is omitted it defaults to the directory's basename.
    """
    if name is None:
        name = os.path.basename(os.path.normpath(dir_path))

    def required(suffix: str) -> str:
        path = os.path.join(dir_path, f"{name}{suffix}")
        if not os.path.isfile(path):
            raise LoadError(f"missing {name}{suffix}")
        return path

    indicator = []
    for lineno, line in enumerate(_read_lines(required("_graph_indicator.txt")), 1):
        if not line:
            continue
        try:
            indicator.append(int(line))
        except ValueError:
            raise FormatError(
                f"{name}_graph_indicator.txt:{lineno}: not an integer: {line!r}"
            ) from None

    raw_labels = []
    for lineno, line in enumerate(_read_lines(required("_node_labels.txt")), 1):
        if not line:
            continue
        raw_labels.append(line.split(",")[0].strip())
    if len(raw_labels) != len(indicator):
        raise FormatError(
            f"{name}_node_labels.txt has {len(raw_labels)} entries for "
            f"{len(indicator)} nodes"
        )

    n_total = len(indicator)
    node_graph = indicator  # 1-based graph id per 1-based node
    members = defaultdict(list)
    for node_1b, gid in enumerate(indicator, 1):
        members[gid].append(node_1b)
    graph_ids = sorted(members)
    local = {}
    for gid in graph_ids:
        for j, node_1b in enumerate(members[gid]):
            local[node_1b] = j

    per_graph_edges = defaultdict(set)
    per_graph_loops = defaultdict(set)
    for lineno, line in enumerate(_read_lines(required("_A.txt")), 1):
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise FormatError(f"{name}_A.txt:{lineno}: expected 'i, j', got {line!r}")
        try:
            u, v = int(parts[0].strip()), int(parts[1].strip())
        except ValueError:
            raise FormatError(f"{name}_A.txt:{lineno}: non-integer endpoint") from None
        if not (1 <= u <= n_total and 1 <= v <= n_total):
            raise FormatError(f"{name}_A.txt:{lineno}: node index out of range")
        if node_graph[u - 1] != node_graph[v - 1]:
            raise FormatError(
                f"{name}_A.txt:{lineno}: edge ({u}, {v}) crosses graphs "
                f"{node_graph[u - 1]} and {node_graph[v - 1]}"
            )
        gid = node_graph[u - 1]
        if u == v:
            per_graph_loops[gid].add(local[u])
        else:
            a, b = local[u], local[v]
            per_graph_edges[gid].add((min(a, b), max(a, b)))

    targets = None
    labels_path = os.path.join(dir_path, f"{name}_graph_labels.txt")
    if os.path.isfile(labels_path):
        targets = tuple(line for line in _read_lines(labels_path) if line)
        if len(targets) != len(graph_ids):
            raise FormatError(
                f"{name}_graph_labels.txt has {len(targets)} entries for "
                f"{len(graph_ids)} graphs"
            )

    graphs = []
    for gid in graph_ids:
        labels = [raw_labels[node_1b - 1] for node_1b in members[gid]]
        for lab in labels:
            _check_label(lab, allow_loop_mark=False)
        graphs.append(
            LabeledGraph(labels, per_graph_edges[gid], per_graph_loops[gid])
        )
    return Dataset(tuple(graphs), targets, name)


# ---------------------------------------------------------------------------
# Edge-list format
# ---------------------------------------------------------------------------

def load_edge_list(path: str) -> Dataset:
    """Load the block edge-list format (one ``graph`` header per graph).

    Within a block the ``node`` and ``edge`` lines may appear in any order;
    edges are validated once the block is complete.
    """
    if not os.path.isfile(path):
        raise LoadError(f"missing {path}")

    graphs: list[LabeledGraph] = []
    targets: list[str] = []
    any_target = False

    block_nodes: dict[str, str] = {}
    block_order: list[str] = []
    block_edges: list[tuple[str, str, int]] = []
    in_block = False

    def close_block():
        nonlocal block_nodes, block_order, block_edges
        index = {nid: i for i, nid in enumerate(block_order)}
        edges = []
        loops = []
        for a, b, lineno in block_edges:
            if a not in index or b not in index:
                missing = a if a not in index else b
                raise FormatError(f"{path}:{lineno}: edge names unknown node {missing!r}")
            if a == b:
                loops.append(index[a])
            else:
                edges.append((index[a], index[b]))
        labels = [block_nodes[nid] for nid in block_order]
        graphs.append(LabeledGraph(labels, edges, loops))
        block_nodes, block_order, block_edges = {}, [], []

    with open(path, "r", encoding="utf-8") as f:
        for lineno, raw in enumerate(f, 1):
            line = raw.strip()
            if not line or line.startswith("%"):
                continue
            parts = line.split()
            kind = parts[0]
            if kind == "graph":
                if len(parts) not in (2, 3):
                    raise FormatError(f"{path}:{lineno}: expected 'graph <id> [target]'")
                if in_block:
                    close_block()
                in_block = True
                if len(parts) == 3:
                    targets.append(parts[2])
                    any_target = True
                else:
                    targets.append("?")
            elif kind == "node":
                if not in_block:
                    raise FormatError(f"{path}:{lineno}: 'node' before any 'graph' header")
                if len(parts) != 3:
                    raise FormatError(f"{path}:{lineno}: expected 'node <i> <label>'")
                nid, label = parts[1], parts[2]
                if nid in block_nodes:
                    raise FormatError(f"{path}:{lineno}: duplicate node id {nid!r}")
                _check_label(label, allow_loop_mark=False)
                block_nodes[nid] = label
                block_order.append(nid)
            elif kind == "edge":
                if not in_block:
                    raise FormatError(f"{path}:{lineno}: 'edge' before any 'graph' header")
                if len(parts) != 3:
                    raise FormatError(f"{path}:{lineno}: expected 'edge <i> <j>'")
                block_edges.append((parts[1], parts[2], lineno))
            else:
                raise FormatError(f"{path}:{lineno}: unknown record {kind!r}")
    if in_block:
        close_block()

    return Dataset(
        tuple(graphs),
        tuple(targets) if any_target else None,
        os.path.splitext(os.path.basename(path))[0],
    )


def write_edge_list(dataset: Dataset, path: str) -> None:
    """Serialize a dataset to the edge-list format (inverse of the loader)."""
    with open(path, "w", encoding="utf-8") as f:
        for i, g in enumerate(dataset.graphs):
            header = f"graph {i}"
            if dataset.targets is not None:
                header += f" {dataset.targets[i]}"
            f.write(header + "\n")
            for u, lab in enumerate(g.labels):
                f.write(f"node {u} {lab}\n")
            for u, v in sorted(g.edges):
                f.write(f"edge {u} {v}\n")
            for u in sorted(g.self_loops):
                f.write(f"edge {u} {u}\n")


def dataset_stats(dataset: Dataset) -> dict:
    """Corpus summary: graph count, positive share, mean sizes, max degree.

    ``positive_fraction`` is the share of targets equal to ``"1"`` and is
    ``None`` when the dataset carries no targets.
    """
    if not dataset.graphs:
        raise ValueError("empty dataset")
    n = len(dataset.graphs)
    positive = None
    if dataset.targets is not None:
        positive = sum(1 for t in dataset.targets if t == "1") / n
    return {
        "graph_count": n,
        "positive_fraction": positive,
        "mean_nodes": sum(g.n for g in dataset.graphs) / n,
        "mean_edges": sum(g.edge_count() for g in dataset.graphs) / n,
        "max_degree": max(g.max_degree() for g in dataset.graphs),
    }
