"""Explicit sparse feature extraction for the two subtree kernels.

For one decomposition DAG, every node ``u`` owns a ladder of visit codes:
position ``i`` encodes the visit from ``u`` cut ``i`` levels down, and the
ladder stops at the actual height of ``u``'s visit subtree, so a visit that
has already bottomed out is never counted twice. Children are re-sorted by
code at every cut depth, since truncation can change their relative order
and the encoding is only well defined on sorted children.

The ``st`` kernel counts every rung of every ladder. The ``st+`` kernel
counts the top rung (the full visit) plus, per cut depth and per child, a
mixed tree in which that one child is fully unrolled while its siblings
stay cut. Mixed features inflate the full visit's frequency whenever a node
has a single child; that degenerate case is part of the definition and is
kept as is.

Weights are attached after counting: either ``freq * lam**(size/2)``, whose
pairwise products telescope to ``freq1*freq2*lam**size`` per match, or the
saturating ``tanh(lam**size) * tanh(freq)`` which confines every feature's
influence to (0, 1). The second is nonlinear in the frequency, which is why
counting and weighting are separate passes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .decompose import DecompDag, decompose_all
from .graphs import LabeledGraph
from .ordering import CodeInterner, compose

VALID_KINDS = ("st", "st+")
VALID_WEIGHTINGS = ("exp", "tanh")


@dataclass(frozen=True)
class KernelConfig:
    kind: str = "st"
    h: int = 1
    lam: float = 1.0
    weighting: str = "exp"
    normalize: bool = False
    stplus_include_limited_visits: bool = False

    def __post_init__(self):
        if self.kind not in VALID_KINDS:
            raise ValueError(f"kind must be one of {VALID_KINDS}, got {self.kind!r}")
        if self.weighting not in VALID_WEIGHTINGS:
            raise ValueError(
                f"weighting must be one of {VALID_WEIGHTINGS}, got {self.weighting!r}"
            )
        if self.h < 0:
            raise ValueError(f"h must be >= 0, got {self.h}")
        if not self.lam > 0:
            raise ValueError(f"lambda must be > 0, got {self.lam}")


class FeatureStats:
    """Per-graph feature table: code -> (subtree node count, frequency)."""

    __slots__ = ("_map",)

    def __init__(self):
        self._map: dict[int, list[int]] = {}

    def add(self, code: int, size: int, count: int = 1) -> None:
        entry = self._map.get(code)
        if entry is None:
            self._map[code] = [size, count]
        else:
            entry[1] += count

    def items(self):
        """Iterate ``(code, size, freq)`` in code-ascending order."""
        for code in sorted(self._map):
            size, freq = self._map[code]
            yield code, size, freq

    def freq(self, code: int) -> int:
        return self._map[code][1]

    def size(self, code: int) -> int:
        return self._map[code][0]

    def codes(self) -> set[int]:
        return set(self._map)

    def total(self) -> int:
        return sum(entry[1] for entry in self._map.values())

    def __len__(self) -> int:
        return len(self._map)

    def __contains__(self, code: int) -> bool:
        return code in self._map

    def __eq__(self, other) -> bool:
        if not isinstance(other, FeatureStats):
            return NotImplemented
        return self._map == other._map


@dataclass(frozen=True)
class SparseFeatureVector:
    """Weighted sparse feature map of one graph, plus the tag it was built under."""

    weights: dict[int, float]
    scheme: str
    lam: float
    h: int | None = None
    kind: str | None = None

    def tag(self) -> tuple:
        return (self.kind, self.h, self.lam, self.scheme)

    def __len__(self) -> int:
        return len(self.weights)


def _visit_code_tables(dag: DecompDag, interner: CodeInterner):
    """Codes and sizes of every node's visit, per cut depth 0..height(u)."""
    X: dict[int, list[int]] = {}
    S: dict[int, list[int]] = {}
    for u in reversed(dag.order):
        label = dag.labels[u]
        xs = [interner.intern(label, 1)]
        ss = [1]
        kids = dag.children[u]
        if kids:
            height = 1 + max(len(X[c]) - 1 for c in kids)
            for i in range(1, height + 1):
                pairs = sorted(
                    (
                        X[c][min(i - 1, len(X[c]) - 1)],
                        S[c][min(i - 1, len(S[c]) - 1)],
                    )
                    for c in kids
                )
                size = 1 + sum(s for _, s in pairs)
                xs.append(interner.intern(compose(label, (c for c, _ in pairs)), size))
                ss.append(size)
        X[u] = xs
        S[u] = ss
    return X, S


def _st_events(dag: DecompDag, interner: CodeInterner):
    """Yield one ``(node, code, size)`` per counted feature of the ST kernel."""
    X, S = _visit_code_tables(dag, interner)
    for u in dag.order:
        for code, size in zip(X[u], S[u]):
            yield u, code, size


def _stplus_events(
    dag: DecompDag,
    interner: CodeInterner,
    h: int | None,
    include_limited_visits: bool,
):
    """Yield one ``(node, code, size)`` per counted feature of the ST+ kernel."""
    X, S = _visit_code_tables(dag, interner)
    for u in dag.order:
        xs, ss = X[u], S[u]
        yield u, xs[-1], ss[-1]
        kids = dag.children[u]
        height = len(xs) - 1
        lmax = height if h is None else min(h, height)
        for cut in range(lmax):
            for j in range(len(kids)):
                pairs = []
                for z, c in enumerate(kids):
                    at = len(X[c]) - 1 if z == j else min(cut, len(X[c]) - 1)
                    pairs.append((X[c][at], S[c][at]))
                pairs.sort()
                size = 1 + sum(s for _, s in pairs)
                code = interner.intern(
                    compose(dag.labels[u], (c for c, _ in pairs)), size
                )
                yield u, code, size
        if include_limited_visits:
            for code, size in zip(xs, ss):
                yield u, code, size


def st_feature_stats(
    graph: LabeledGraph, h: int | None, interner: CodeInterner
) -> FeatureStats:
    """Count every depth-limited visit of every node of every decomposition."""
    stats = FeatureStats()
    for dag in decompose_all(graph, h):
        for _, code, size in _st_events(dag, interner):
            stats.add(code, size)
    return stats


def stplus_feature_stats(
    graph: LabeledGraph,
    h: int | None,
    interner: CodeInterner,
    include_limited_visits: bool = False,
) -> FeatureStats:
    stats = FeatureStats()
    for dag in decompose_all(graph, h):
        for _, code, size in _stplus_events(dag, interner, h, include_limited_visits):
            stats.add(code, size)
    return stats


def _tanh_of_power(lam: float, size: int) -> float:
    # lam**size overflows floats for lam > 1 and large sizes; tanh has long
    # since saturated to 1.0 there.
    if lam > 1.0 and size * math.log(lam) > 700.0:
        return 1.0
    return math.tanh(lam**size)


def apply_weighting(stats: FeatureStats, lam: float, scheme: str) -> SparseFeatureVector:
    """Turn counted features into weights; entries come out code-ascending."""
    if not lam > 0:
        raise ValueError(f"lambda must be > 0, got {lam}")
    if scheme not in VALID_WEIGHTINGS:
        raise ValueError(f"weighting must be one of {VALID_WEIGHTINGS}, got {scheme!r}")
    weights: dict[int, float] = {}
    if scheme == "exp":
        for code, size, freq in stats.items():
            weights[code] = freq * lam ** (size / 2)
    else:
        for code, size, freq in stats.items():
            weights[code] = _tanh_of_power(lam, size) * math.tanh(freq)
    return SparseFeatureVector(weights, scheme, lam)


def feature_vector(
    graph: LabeledGraph, config: KernelConfig, interner: CodeInterner
) -> SparseFeatureVector:
    """Full per-graph pipeline: decompose, code, count, weight."""
    if config.kind == "st":
        stats = st_feature_stats(graph, config.h, interner)
    else:
        stats = stplus_feature_stats(
            graph, config.h, interner, config.stplus_include_limited_visits
        )
    vec = apply_weighting(stats, config.lam, config.weighting)
    return SparseFeatureVector(vec.weights, config.weighting, config.lam, config.h, config.kind)


def expanded_feature_map(
    vector: SparseFeatureVector, interner: CodeInterner
) -> dict[str, float]:
    """Weights keyed by fully expanded canonical strings (run-independent)."""
    return {interner.expand(code): w for code, w in vector.weights.items()}


def format_feature_line(
    vector: SparseFeatureVector,
    target: str,
    interner: CodeInterner | None = None,
    expand: bool = False,
) -> str:
    """One libsvm-style line: ``<target> code:weight …``, keys ascending.

    With ``expand`` the dense codes are replaced by expanded canonical
    strings and the entries are ordered by string instead, so output is
    comparable across runs.
    """
    if expand:
        if interner is None:
            raise ValueError("expanding codes requires the interner")
        entries = sorted(
            (interner.expand(code), w) for code, w in vector.weights.items()
        )
    else:
        entries = sorted(vector.weights.items())
    body = " ".join(f"{key}:{format(w, '.17g')}" for key, w in entries)
    return f"{target} {body}".rstrip()
