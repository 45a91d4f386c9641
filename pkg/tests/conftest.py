"""Shared fixtures: figure graphs, random generators, permutation helpers."""

from __future__ import annotations

import random

import pytest

from oddkernels import LabeledGraph


def random_graph(rng: random.Random, max_n=12, max_edges=20, alphabet="abc") -> LabeledGraph:
    n = rng.randint(1, max_n)
    labels = [rng.choice(alphabet) for _ in range(n)]
    possible = [(u, v) for u in range(n) for v in range(u + 1, n)]
    rng.shuffle(possible)
    m = rng.randint(0, min(max_edges, len(possible)))
    return LabeledGraph(labels, possible[:m])


def random_tree(rng: random.Random, n: int, distinct_labels=True) -> LabeledGraph:
    labels = [f"L{i}" for i in range(n)] if distinct_labels else ["a"] * n
    edges = [(i, rng.randint(0, i - 1)) for i in range(1, n)]
    return LabeledGraph(labels, edges)


def permuted(graph: LabeledGraph, perm: list[int]) -> LabeledGraph:
    """Relabel node indices: ``perm[old] = new``."""
    labels = [""] * graph.n
    for old, new in enumerate(perm):
        labels[new] = graph.labels[old]
    edges = [(perm[u], perm[v]) for u, v in graph.edges]
    loops = [perm[u] for u in graph.self_loops]
    return LabeledGraph(labels, edges, loops)


def random_permutation(rng: random.Random, n: int) -> list[int]:
    perm = list(range(n))
    rng.shuffle(perm)
    return perm


@pytest.fixture
def four_node_graph() -> LabeledGraph:
    """Nodes s=0, b=1, e=2, d=3; edges (s,e),(s,b),(e,b),(e,d),(b,d)."""
    return LabeledGraph(["s", "b", "e", "d"], [(0, 2), (0, 1), (2, 1), (2, 3), (1, 3)])


def hub_path_graph(black_pos: int) -> LabeledGraph:
    """A hub adjacent to every node of an 11-node path; one path node 'b'."""
    labels = ["a"] * 12
    labels[black_pos] = "b"
    edges = [(0, i) for i in range(1, 12)] + [(i, i + 1) for i in range(1, 11)]
    return LabeledGraph(labels, edges)


def seven_node_pair() -> tuple[LabeledGraph, LabeledGraph]:
    """Same-degree-sequence 7-node pair; shortest-path profiles differ.

    Both: center 0 with chains 0-1-2-3 and 0-4-5-6. Left adds the crossed
    edges (1,6) and (4,3); right the shortcuts (1,3) and (4,6).
    """
    chains = [(0, 1), (0, 4), (1, 2), (4, 5), (2, 3), (5, 6)]
    left = LabeledGraph(["a"] * 7, chains + [(1, 6), (4, 3)])
    right = LabeledGraph(["a"] * 7, chains + [(1, 3), (4, 6)])
    return left, right


def write_toy_tu(tmp_path, name="toy"):
    """Two graphs: a labeled triangle and an isolated node. Returns the dir."""
    d = tmp_path / name
    d.mkdir()
    (d / f"{name}_A.txt").write_text(
        "1, 2\n2, 1\n2, 3\n3, 2\n1, 3\n3, 1\n", encoding="utf-8"
    )
    (d / f"{name}_graph_indicator.txt").write_text("1\n1\n1\n2\n", encoding="utf-8")
    (d / f"{name}_node_labels.txt").write_text("1\n1\n2\n3\n", encoding="utf-8")
    (d / f"{name}_graph_labels.txt").write_text("1\n-1\n", encoding="utf-8")
    return d
