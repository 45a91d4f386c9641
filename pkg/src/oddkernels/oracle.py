"""Slow, transparent kernel implementations used as ground truth in tests.

Everything here works on explicit canonical strings and plain dictionaries:
no interner, no structure sharing, no code reuse from the fast path beyond
the graph container itself. Even the breadth-first decomposition is
re-implemented locally. Feature multisets are enumerated tree by tree, so
the cost is exponential in the worst case; inputs are capped accordingly.
"""

from __future__ import annotations

from collections import Counter

from .graphs import CHILD_SEP, VISIT_CLOSE, VISIT_OPEN, LabeledGraph
from .trees import ExplicitTree

_MAX_NODES = 20


def _check_size(graph: LabeledGraph) -> None:
    if graph.n > _MAX_NODES:
        raise ValueError(f"oracle accepts at most {_MAX_NODES} nodes, got {graph.n}")
    if graph.self_loops:
        raise ValueError("graph has self-loops; preprocess it first")


def _bfs_children(graph: LabeledGraph, root: int, h: int | None):
    """Shortest-path successors per node, recomputed from scratch."""
    adj = {u: list(nbrs) for u, nbrs in enumerate(graph.adjacency)}
    level = {root: 0}
    queue = [root]
    while queue:
        nxt = []
        for u in queue:
            if h is not None and level[u] >= h:
                continue
            for w in adj[u]:
                if w not in level:
                    level[w] = level[u] + 1
                    nxt.append(w)
        queue = nxt
    children = {
        u: [w for w in adj[u] if level.get(w, -2) == level[u] + 1] for u in level
    }
    return children


def _heights(children) -> dict[int, int]:
    heights: dict[int, int] = {}

    def walk(u: int) -> int:
        if u in heights:
            return heights[u]
        kids = children[u]
        heights[u] = 1 + max(walk(c) for c in kids) if kids else 0
        return heights[u]

    for u in children:
        walk(u)
    return heights


def _canon(children, labels, u: int, budget: int, memo) -> tuple[str, int]:
    """Canonical string and node count of the visit from ``u``, ``budget`` deep."""
    key = (u, budget)
    if key in memo:
        return memo[key]
    kids = children[u]
    if budget == 0 or not kids:
        out = (labels[u], 1)
    else:
        parts = sorted(_canon(children, labels, c, budget - 1, memo) for c in kids)
        rep = labels[u] + VISIT_OPEN + CHILD_SEP.join(p[0] for p in parts) + VISIT_CLOSE
        out = (rep, 1 + sum(p[1] for p in parts))
    memo[key] = out
    return out


def st_feature_multiset(graph: LabeledGraph, h: int | None):
    """All depth-limited visits of all DAG nodes, one string per occurrence.

    Returns ``(counts, sizes)`` with ``counts`` a Counter over canonical
    strings and ``sizes`` mapping each string to its node count.
    """
    _check_size(graph)
    counts: Counter[str] = Counter()
    sizes: dict[str, int] = {}
    for root in range(graph.n):
        children = _bfs_children(graph, root, h)
        heights = _heights(children)
        memo: dict = {}
        for u in children:
            for depth in range(heights[u] + 1):
                rep, size = _canon(children, graph.labels, u, depth, memo)
                counts[rep] += 1
                sizes[rep] = size
    return counts, sizes


def stplus_feature_multiset(
    graph: LabeledGraph, h: int | None, include_limited_visits: bool = False
):
    """Feature multiset of the widened subtree kernel, enumerated literally.

    Per DAG node: the full visit, plus one mixed tree per (depth, child)
    pair in which that child is fully unrolled and its siblings are cut at
    the given depth. With ``include_limited_visits`` every depth-limited
    visit is added on top (superset variant).
    """
    _check_size(graph)
    counts: Counter[str] = Counter()
    sizes: dict[str, int] = {}

    def add(rep: str, size: int) -> None:
        counts[rep] += 1
        sizes[rep] = size

    for root in range(graph.n):
        children = _bfs_children(graph, root, h)
        heights = _heights(children)
        memo: dict = {}
        for u in children:
            add(*_canon(children, graph.labels, u, heights[u], memo))
            kids = children[u]
            lmax = heights[u] if h is None else min(h, heights[u])
            for cut in range(lmax):
                for j in range(len(kids)):
                    parts = [
                        _canon(
                            children,
                            graph.labels,
                            c,
                            heights[c] if z == j else cut,
                            memo,
                        )
                        for z, c in enumerate(kids)
                    ]
                    parts.sort()
                    rep = (
                        graph.labels[u]
                        + VISIT_OPEN
                        + CHILD_SEP.join(p[0] for p in parts)
                        + VISIT_CLOSE
                    )
                    add(rep, 1 + sum(p[1] for p in parts))
            if include_limited_visits:
                for depth in range(heights[u] + 1):
                    add(*_canon(children, graph.labels, u, depth, memo))
    return counts, sizes


def _match_sum(side1, side2, lam: float):
    counts1, sizes1 = side1
    counts2, _ = side2
    if lam == 1:
        return sum(counts1[rep] * counts2[rep] for rep in counts1.keys() & counts2.keys())
    return sum(
        counts1[rep] * counts2[rep] * lam ** sizes1[rep]
        for rep in counts1.keys() & counts2.keys()
    )


def oracle_st_kernel(g1: LabeledGraph, g2: LabeledGraph, h: int | None, lam: float):
    """Exhaustive subtree kernel over depth-limited visits.

    Exact integer arithmetic at ``lam == 1``.
    """
    return _match_sum(st_feature_multiset(g1, h), st_feature_multiset(g2, h), lam)


def oracle_stplus_kernel(
    g1: LabeledGraph,
    g2: LabeledGraph,
    h: int | None,
    lam: float,
    include_limited_visits: bool = False,
):
    return _match_sum(
        stplus_feature_multiset(g1, h, include_limited_visits),
        stplus_feature_multiset(g2, h, include_limited_visits),
        lam,
    )


def _identical(t1: ExplicitTree, t2: ExplicitTree) -> bool:
    return (
        t1.label == t2.label
        and len(t1.children) == len(t2.children)
        and all(_identical(a, b) for a, b in zip(t1.children, t2.children))
    )


def oracle_c_st(t1: ExplicitTree, t2: ExplicitTree, lam: float) -> float:
    """Local subtree-match kernel: ``lam ** |t1|`` on identical trees, else 0."""
    return lam ** t1.size if _identical(t1, t2) else 0.0


def total_visit_nodes(graph: LabeledGraph, h: int | None) -> int:
    """Node count of all full visit trees, summed without any sharing.

    Diagnostic only: this is the quantity that can blow up exponentially
    where the shared representation stays polynomial.
    """
    _check_size(graph)
    total = 0
    for root in range(graph.n):
        children = _bfs_children(graph, root, h)
        heights = _heights(children)
        memo: dict = {}
        for u in children:
            total += _canon(children, graph.labels, u, heights[u], memo)[1]
    return total
