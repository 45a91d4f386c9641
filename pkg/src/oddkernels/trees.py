"""Explicit ordered trees, as produced by unrolling DAG visits."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class ExplicitTree:
    """An ordered labeled tree; ``size`` and ``depth`` are derived on build."""

    label: str
    children: tuple["ExplicitTree", ...] = ()
    size: int = field(init=False)
    depth: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "size", 1 + sum(c.size for c in self.children))
        object.__setattr__(
            self, "depth", 1 + max(c.depth for c in self.children) if self.children else 0
        )

    def node_count(self) -> int:
        return self.size
