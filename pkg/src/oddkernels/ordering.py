"""Canonical codes for DAG nodes via string interning.

A node's code identifies its visit tree: leaves are coded by their label,
internal nodes by ``label⌈c1#c2#…⌉`` where the ``ci`` are the children's
codes in ascending order, rendered as decimal digits. Interning the strings
into dense integers makes the encoding collision-free by construction and
keeps every composite string short: it stores child *codes*, never whole
subtrees, so its length is bounded by the out-degree.

Two nodes receive the same code exactly when their visit trees are
identical, which is what lets equal subtrees be shared and counted across
DAGs and graphs.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

from .decompose import DecompDag
from .errors import InternError
from .graphs import CHILD_SEP, VISIT_CLOSE, VISIT_OPEN
from .trees import ExplicitTree


def compose(label: str, child_codes) -> str:
    """Render the canonical string of a node from its sorted child codes."""
    return label + VISIT_OPEN + CHILD_SEP.join(str(c) for c in child_codes) + VISIT_CLOSE


class CodeInterner:
    """Bijection between canonical strings and dense integer codes.

    Equal strings always map to the same code (within one interner), and
    each code remembers the node count of the subtree it encodes. Get-or-
    insert is thread-safe; code *numbering* is deterministic only when
    interning happens in a fixed order, which the pipeline guarantees by
    interning sequentially per graph.
    """

    def __init__(self):
        self._codes: dict[str, int] = {}
        self._strings: list[str] = []
        self._sizes: list[int] = []
        self._expanded: dict[int, str] = {}
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._strings)

    def intern(self, canonical: str, size: int) -> int:
        if size < 1:
            raise ValueError(f"subtree size must be >= 1, got {size}")
        with self._lock:
            code = self._codes.get(canonical)
            if code is None:
                code = len(self._strings)
                self._codes[canonical] = code
                self._strings.append(canonical)
                self._sizes.append(size)
            elif self._sizes[code] != size:
                raise InternError(
                    f"string {canonical!r} re-interned with size {size}, "
                    f"previously {self._sizes[code]}"
                )
            return code

    def string(self, code: int) -> str:
        return self._strings[code]

    def size(self, code: int) -> int:
        return self._sizes[code]

    def children_of(self, code: int) -> tuple[int, ...]:
        """Child codes of a composite code; empty for a leaf code."""
        s = self._strings[code]
        open_at = s.find(VISIT_OPEN)
        if open_at < 0:
            return ()
        inner = s[open_at + 1 : s.rfind(VISIT_CLOSE)]
        return tuple(int(tok) for tok in inner.split(CHILD_SEP))

    def expand(self, code: int) -> str:
        """Fully expanded canonical string (no code digits), for stable export.

        Child code references are replaced, recursively, by their expanded
        strings, and siblings are re-sorted lexicographically: code order
        depends on interning history, string order does not, so the result
        identifies the same tree across runs and interners.
        """
        cached = self._expanded.get(code)
        if cached is not None:
            return cached
        s = self._strings[code]
        open_at = s.find(VISIT_OPEN)
        if open_at < 0:
            expanded = s
        else:
            inner = s[open_at + 1 : s.rfind(VISIT_CLOSE)]
            parts = sorted(self.expand(int(tok)) for tok in inner.split(CHILD_SEP))
            expanded = s[:open_at] + VISIT_OPEN + CHILD_SEP.join(parts) + VISIT_CLOSE
        self._expanded[code] = expanded
        return expanded


@dataclass(frozen=True)
class OrderedDag:
    """A decomposition DAG with canonical codes and code-ordered children.

    ``sizes`` and ``depths`` describe the visit tree of each node: a shared
    descendant counts once per incoming path, so sizes add up over children.
    """

    dag: DecompDag
    codes: dict[int, int]
    sizes: dict[int, int]
    depths: dict[int, int]
    children_sorted: dict[int, tuple[int, ...]]

    @property
    def root(self) -> int:
        return self.dag.root

    def root_code(self) -> int:
        return self.codes[self.dag.root]


def canonical_codes(dag: DecompDag, interner: CodeInterner) -> OrderedDag:
    """Assign a canonical code to every DAG node, children before parents.

    Children end up ordered ascending by code; ties (equal codes) keep
    their input order, which by construction cannot affect any code
    computed above them.
    """
    codes: dict[int, int] = {}
    sizes: dict[int, int] = {}
    depths: dict[int, int] = {}
    children_sorted: dict[int, tuple[int, ...]] = {}

    for u in reversed(dag.order):
        kids = dag.children[u]
        label = dag.labels[u]
        if not kids:
            codes[u] = interner.intern(label, 1)
            sizes[u] = 1
            depths[u] = 0
            children_sorted[u] = ()
            continue
        for c in kids:
            if c not in codes:
                raise InternError(f"node {c} visited before its parent {u}: cycle?")
        ordered = tuple(sorted(kids, key=lambda c: codes[c]))
        size = 1 + sum(sizes[c] for c in ordered)
        codes[u] = interner.intern(compose(label, (codes[c] for c in ordered)), size)
        sizes[u] = size
        depths[u] = 1 + max(depths[c] for c in ordered)
        children_sorted[u] = ordered

    return OrderedDag(dag, codes, sizes, depths, children_sorted)


def tree_visit(odag: OrderedDag, node: int, limit: int | None = None) -> ExplicitTree:
    """Unroll the visit from ``node`` into an explicit ordered tree.

    Nodes reachable along several paths are duplicated once per path; the
    unrolling stops ``limit`` levels below ``node`` (``None`` = full visit).
    """
    def build(u: int, budget: int | None) -> ExplicitTree:
        kids = odag.children_sorted[u]
        if budget == 0 or not kids:
            return ExplicitTree(odag.dag.labels[u])
        nxt = None if budget is None else budget - 1
        return ExplicitTree(odag.dag.labels[u], tuple(build(c, nxt) for c in kids))

    return build(node, limit)
