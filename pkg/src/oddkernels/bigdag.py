"""Structure-shared DAG representations and the single-scan kernel path.

A BigDag collapses all of one graph's decomposition DAGs into one table:
the interner already gives identical proper subtrees identical codes, so
merging is frequency aggregation keyed by code. A Big2Dag extends the same
idea to a whole corpus, keeping one sparse frequency vector per code; with
exponential weighting the subtree kernel between any two graphs is then a
single scan over the codes both share, and the entire Gram matrix falls
out of one pass over the table.

The Big2Dag used for kernel evaluation is built from the per-graph feature
tables of the ST kernel (which include the depth-limited visits), so the
scan reproduces the explicit feature dot product exactly. Building a BigDag
straight from decomposition DAGs merges full visits only; that variant
feeds the structural diagnostics (node-count bounds, growth exponents).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .decompose import decompose_all
from .errors import InternError
from .features import FeatureStats, st_feature_stats
from .graphs import Dataset, LabeledGraph
from .ordering import CodeInterner, OrderedDag, canonical_codes


@dataclass
class BigDag:
    """Merged per-graph DAG: code -> [size, frequency], plus child codes."""

    nodes: dict[int, list[int]]
    edges: dict[int, tuple[int, ...]]

    def node_count(self) -> int:
        return len(self.nodes)

    def frequency(self, code: int) -> int:
        return self.nodes[code][1]

    def total_frequency(self) -> int:
        return sum(entry[1] for entry in self.nodes.values())


def build_bigdag(odds: list[OrderedDag], interner: CodeInterner) -> BigDag:
    """Merge coded DAGs: equal codes collapse, frequencies add up.

    All inputs must be coded against ``interner``; each DAG node
    contributes one occurrence of its full visit.
    """
    nodes: dict[int, list[int]] = {}
    edges: dict[int, tuple[int, ...]] = {}
    for odag in odds:
        for u in odag.dag.order:
            code = odag.codes[u]
            entry = nodes.get(code)
            if entry is None:
                if code >= len(interner) or interner.size(code) != odag.sizes[u]:
                    raise InternError(
                        f"code {code} was not produced by the given interner"
                    )
                nodes[code] = [odag.sizes[u], 1]
                edges[code] = tuple(odag.codes[c] for c in odag.children_sorted[u])
            else:
                entry[1] += 1
    return BigDag(nodes, edges)


def bigdag_from_stats(stats: FeatureStats, interner: CodeInterner) -> BigDag:
    """View a per-graph feature table as a BigDag (child codes from the interner)."""
    nodes = {code: [size, freq] for code, size, freq in stats.items()}
    edges = {code: interner.children_of(code) for code in nodes}
    return BigDag(nodes, edges)


@dataclass
class Big2Dag:
    """Corpus-level merge: code -> size, plus sparse per-graph frequencies."""

    sizes: dict[int, int]
    freqs: dict[int, dict[int, int]]
    m: int
    codes_sorted: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        self.codes_sorted = tuple(sorted(self.sizes))

    def frequency(self, code: int, graph_id: int) -> int:
        return self.freqs.get(code, {}).get(graph_id, 0)


def build_big2dag(per_graph: list[BigDag]) -> Big2Dag:
    """Union the per-graph tables; frequency vectors stay sparse by graph id."""
    sizes: dict[int, int] = {}
    freqs: dict[int, dict[int, int]] = {}
    for gid, bd in enumerate(per_graph):
        for code in sorted(bd.nodes):
            size, freq = bd.nodes[code]
            sizes.setdefault(code, size)
            freqs.setdefault(code, {})[gid] = freq
    return Big2Dag(sizes, freqs, len(per_graph))


def kernel_big2dag(b2: Big2Dag, i: int, j: int, lam: float) -> float:
    """One kernel entry as a single pass over codes both graphs share."""
    if not (0 <= i < b2.m and 0 <= j < b2.m):
        raise ValueError(f"graph index out of range 0..{b2.m - 1}: ({i}, {j})")
    if not lam > 0:
        raise ValueError(f"lambda must be > 0, got {lam}")
    total = 0.0
    for code in b2.codes_sorted:
        vec = b2.freqs[code]
        fi = vec.get(i)
        if fi is None:
            continue
        fj = vec.get(j)
        if fj is None:
            continue
        total += fi * fj * lam ** b2.sizes[code]
    return total


def st_big2dag(dataset: Dataset, h: int, interner: CodeInterner) -> Big2Dag:
    """Corpus Big2Dag over the ST feature tables (graphs must be preprocessed)."""
    tables = [
        bigdag_from_stats(st_feature_stats(g, h, interner), interner)
        for g in dataset.graphs
    ]
    return build_big2dag(tables)


def gram_values_big2dag(b2: Big2Dag, lam: float) -> np.ndarray:
    """Whole Gram matrix from one scan of the corpus table.

    Codes are visited in ascending order and each code contributes to every
    pair of graphs it appears in, so the accumulation order per entry is
    fixed and the result is reproducible.
    """
    values = np.zeros((b2.m, b2.m), dtype=np.float64)
    for code in b2.codes_sorted:
        vec = b2.freqs[code]
        lam_pow = lam ** b2.sizes[code]
        gids = list(vec)
        for a, ga in enumerate(gids):
            fa = vec[ga]
            values[ga, ga] += fa * fa * lam_pow
            for gb in gids[a + 1 :]:
                values[ga, gb] += fa * vec[gb] * lam_pow
    return values + np.triu(values, 1).T


# ---------------------------------------------------------------------------
# Structural diagnostics
# ---------------------------------------------------------------------------

def structural_bigdag(graph: LabeledGraph, h: int | None, interner: CodeInterner) -> BigDag:
    """BigDag of one graph's decompositions (full visits only)."""
    odds = [canonical_codes(d, interner) for d in decompose_all(graph, h)]
    return build_bigdag(odds, interner)


def depth_limited_node_bound(rho: int, h: int) -> int:
    """Node-count cap of one depth-limited DAG: 1 + rho + … + rho**h."""
    return sum(rho**j for j in range(h + 1))


def growth_rows(dataset: Dataset, h: int | None) -> list[tuple[int, int, int]]:
    """Per-graph ``(graph_id, n_nodes, bigdag_nodes)`` for the growth diagnostic."""
    rows = []
    for gid, graph in enumerate(dataset.graphs):
        interner = CodeInterner()
        bd = structural_bigdag(graph, h, interner)
        rows.append((gid, graph.n, bd.node_count()))
    return rows


def fit_loglog_exponent(rows: list[tuple[int, int, int]]) -> float:
    """Least-squares slope of log(bigdag_nodes) against log(n_nodes)."""
    xs = [math.log(n) for _, n, b in rows if n >= 2 and b >= 1]
    ys = [math.log(b) for _, n, b in rows if n >= 2 and b >= 1]
    if len(xs) < 2 or max(xs) == min(xs):
        raise ValueError("need at least two distinct graph sizes to fit an exponent")
    slope, _ = np.polyfit(np.array(xs), np.array(ys), 1)
    return float(slope)
