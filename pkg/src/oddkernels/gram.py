"""Gram matrix assembly, normalization, and spectrum diagnostics."""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .bigdag import gram_values_big2dag, st_big2dag
from .features import KernelConfig, SparseFeatureVector, feature_vector
from .graphs import Dataset
from .ordering import CodeInterner

EIG_CAP_DEFAULT = 500


@dataclass
class GramMatrix:
    """Symmetric matrix of pairwise kernel values with its provenance."""

    values: np.ndarray
    config: KernelConfig
    timing: dict

    @property
    def n(self) -> int:
        return int(self.values.shape[0])


def dot(a: SparseFeatureVector, b: SparseFeatureVector) -> float:
    """Sparse dot product; iterates the smaller map in code-ascending order."""
    if a.tag() != b.tag():
        raise ValueError(f"feature vectors built under different configs: {a.tag()} vs {b.tag()}")
    small, large = (a.weights, b.weights) if len(a.weights) <= len(b.weights) else (b.weights, a.weights)
    total = 0.0
    for code in sorted(small):
        w = large.get(code)
        if w is not None:
            total += small[code] * w
    return total


# rough CPython cost of one sparse entry (dict slot + boxed int + float)
_BYTES_PER_ENTRY = 120


def gram(
    dataset: Dataset,
    config: KernelConfig,
    threads: int = 1,
    via_big2dag: bool = False,
    interner: CodeInterner | None = None,
    memory_budget_mb: float | None = None,
) -> GramMatrix:
    """All pairwise kernel values over a dataset.

    Feature extraction is sequential in graph order (deterministic code
    numbering); only the pair evaluations are spread over ``threads``, and
    every entry is produced by the same fixed-order summation, so results
    are identical for any thread count. ``via_big2dag`` switches the
    exponentially weighted ST kernel to the shared single-scan path.

    All feature vectors are materialized before pairing; a
    ``memory_budget_mb`` cap aborts during materialization once their
    estimated footprint exceeds it.
    """
    if not dataset.graphs:
        raise ValueError("empty dataset")
    if via_big2dag and (config.kind != "st" or config.weighting != "exp"):
        raise ValueError("the shared-scan path covers only kind='st' with exp weighting")
    if interner is None:
        interner = CodeInterner()
    data = dataset.preprocessed()
    n = len(data.graphs)

    t0 = time.perf_counter()
    if via_big2dag:
        b2 = st_big2dag(data, config.h, interner)
        t1 = time.perf_counter()
        values = gram_values_big2dag(b2, config.lam)
    else:
        entry_cap = None
        if memory_budget_mb is not None:
            entry_cap = int(memory_budget_mb * 1024 * 1024 / _BYTES_PER_ENTRY)
        vectors = []
        entries = 0
        for g in data.graphs:
            vectors.append(feature_vector(g, config, interner))
            entries += len(vectors[-1])
            if entry_cap is not None and entries > entry_cap:
                raise ValueError(
                    f"feature vectors exceed the {memory_budget_mb} MB budget "
                    f"after {len(vectors)} of {n} graphs; lower h, raise the "
                    "budget, or use the shared single-scan path"
                )
        t1 = time.perf_counter()
        values = np.zeros((n, n), dtype=np.float64)

        def fill(rows):
            for i in rows:
                vi = vectors[i]
                for j in range(i, n):
                    values[i, j] = dot(vi, vectors[j])

        if threads <= 1:
            fill(range(n))
        else:
            blocks = [list(range(k, n, threads)) for k in range(threads)]
            with ThreadPoolExecutor(max_workers=threads) as pool:
                list(pool.map(fill, blocks))
        values = values + np.triu(values, 1).T
    t2 = time.perf_counter()

    result = GramMatrix(
        values,
        config,
        {
            "seconds_features": t1 - t0,
            "seconds_pairs": t2 - t1,
            "seconds_total": t2 - t0,
        },
    )
    if config.normalize:
        result = normalize(result)
    return result


def normalize(g: GramMatrix) -> GramMatrix:
    """Cosine-normalize: K[i,j] / sqrt(K[i,i] * K[j,j]); unit diagonal."""
    diag = np.diag(g.values).copy()
    for i, x in enumerate(diag):
        if x <= 0:
            raise ValueError(f"cannot normalize: diagonal entry {i} is {x}")
    values = g.values / np.sqrt(np.outer(diag, diag))
    np.fill_diagonal(values, 1.0)
    return GramMatrix(values, g.config, dict(g.timing))


def min_eigenvalue(g: GramMatrix, cap: int = EIG_CAP_DEFAULT) -> float:
    """Smallest eigenvalue of the matrix (positive-semidefiniteness probe)."""
    if g.n > cap:
        raise ValueError(
            f"matrix of order {g.n} exceeds the eigenvalue cap {cap}; "
            "run the diagnostic on a sample of the dataset"
        )
    return float(np.linalg.eigvalsh(g.values)[0])


# ---------------------------------------------------------------------------
# Output formats
# ---------------------------------------------------------------------------

def write_gram_csv(g: GramMatrix, path: str) -> None:
    """Headerless CSV, one row per graph."""
    with open(path, "w", encoding="utf-8") as f:
        for row in g.values:
            f.write(",".join(format(v, ".17g") for v in row) + "\n")


def write_gram_libsvm(g: GramMatrix, targets, path: str) -> None:
    """Precomputed-kernel rows: ``<target> 0:<i> 1:K(i,1) … n:K(i,n)``."""
    n = g.n
    with open(path, "w", encoding="utf-8") as f:
        for i in range(n):
            target = targets[i] if targets is not None else "?"
            parts = [str(target), f"0:{i + 1}"]
            parts.extend(
                f"{j + 1}:{format(g.values[i, j], '.17g')}" for j in range(n)
            )
            f.write(" ".join(parts) + "\n")


def write_timing(g: GramMatrix, path: str) -> None:
    payload = {"n": g.n, "config": asdict(g.config)}
    payload.update(g.timing)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, indent=2)
        f.write("\n")
