"""Feature extraction: frozen examples, oracle agreement, weighting laws."""

from __future__ import annotations

import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oddkernels import (
    CodeInterner,
    FeatureStats,
    KernelConfig,
    LabeledGraph,
    apply_weighting,
    dot,
    expanded_feature_map,
    feature_vector,
    oracle_st_kernel,
    oracle_stplus_kernel,
    st_feature_stats,
    stplus_feature_stats,
)
from oddkernels.features import format_feature_line
from conftest import hub_path_graph, permuted, random_graph, random_permutation, seven_node_pair

PATH_AB = LabeledGraph(["a", "b"], [(0, 1)])


def stats_by_string(stats, interner):
    return {interner.expand(code): (size, freq) for code, size, freq in stats.items()}


# ---------------------------------------------------------------------------
# Frozen counting examples
# ---------------------------------------------------------------------------

def test_single_node_st_stats():
    it = CodeInterner()
    stats = st_feature_stats(LabeledGraph(["a"]), 3, it)
    assert stats_by_string(stats, it) == {"a": (1, 1)}


def test_path_st_stats():
    it = CodeInterner()
    stats = st_feature_stats(PATH_AB, 1, it)
    assert stats_by_string(stats, it) == {
        "a": (1, 2),
        "b": (1, 2),
        "a⌈b⌉": (2, 1),
        "b⌈a⌉": (2, 1),
    }


def test_single_node_stplus_stats():
    it = CodeInterner()
    stats = stplus_feature_stats(LabeledGraph(["a"]), 2, it)
    assert stats_by_string(stats, it) == {"a": (1, 1)}


def test_path_stplus_stats():
    it = CodeInterner()
    stats = stplus_feature_stats(PATH_AB, 1, it)
    assert stats_by_string(stats, it) == {
        "a": (1, 1),
        "b": (1, 1),
        "a⌈b⌉": (2, 2),
        "b⌈a⌉": (2, 2),
    }


def test_path_self_dot_is_ten():
    it = CodeInterner()
    cfg = KernelConfig(kind="st", h=1, lam=1.0)
    v = feature_vector(PATH_AB, cfg, it)
    assert dot(v, v) == 10.0


def test_h_zero_degenerates_to_label_counts():
    g = LabeledGraph(["a", "a", "b"], [(0, 1), (1, 2)])
    it = CodeInterner()
    st0 = stats_by_string(st_feature_stats(g, 0, it), it)
    stp0 = stats_by_string(stplus_feature_stats(g, 0, it), it)
    assert st0 == stp0 == {"a": (1, 2), "b": (1, 1)}


def test_total_frequency_at_least_node_count():
    rng = random.Random(61)
    for _ in range(20):
        g = random_graph(rng)
        it = CodeInterner()
        h = rng.randint(0, 3)
        assert st_feature_stats(g, h, it).total() >= g.n
        assert stplus_feature_stats(g, h, it).total() >= g.n


# ---------------------------------------------------------------------------
# Oracle agreement (the load-bearing equivalence; full sweep in acceptance)
# ---------------------------------------------------------------------------

def test_fast_path_matches_oracle():
    rng = random.Random(62)
    for _ in range(120):
        g1, g2 = random_graph(rng), random_graph(rng)
        h = rng.randint(0, 4)
        lam = rng.choice([0.5, 1, 1.5])
        it = CodeInterner()
        for kind, inc in (("st", False), ("st+", False), ("st+", True)):
            cfg = KernelConfig(kind=kind, h=h, lam=lam, stplus_include_limited_visits=inc)
            fast = dot(feature_vector(g1, cfg, it), feature_vector(g2, cfg, it))
            if kind == "st":
                slow = oracle_st_kernel(g1, g2, h, lam)
            else:
                slow = oracle_stplus_kernel(g1, g2, h, lam, inc)
            if lam == 1:
                assert fast == slow
            else:
                assert fast == pytest.approx(slow, rel=1e-9)


def test_expanded_maps_match_oracle_multisets():
    # the fast path's expanded strings are the oracle's canonical strings
    from oddkernels.oracle import st_feature_multiset

    rng = random.Random(63)
    for _ in range(30):
        g = random_graph(rng, max_n=9)
        h = rng.randint(0, 3)
        it = CodeInterner()
        fast = stats_by_string(st_feature_stats(g, h, it), it)
        counts, sizes = st_feature_multiset(g, h)
        assert fast == {rep: (sizes[rep], counts[rep]) for rep in counts}


def test_permutation_invariance():
    rng = random.Random(64)
    for kind in ("st", "st+"):
        cfg = KernelConfig(kind=kind, h=2, lam=0.5)
        for _ in range(15):
            g = random_graph(rng)
            gp = permuted(g, random_permutation(rng, g.n))
            it1, it2 = CodeInterner(), CodeInterner()
            m1 = expanded_feature_map(feature_vector(g, cfg, it1), it1)
            m2 = expanded_feature_map(feature_vector(gp, cfg, it2), it2)
            assert m1 == m2


def test_superset_property():
    rng = random.Random(65)
    for _ in range(20):
        g = random_graph(rng, max_n=9)
        h = rng.randint(0, 3)
        it = CodeInterner()
        st_codes = st_feature_stats(g, h, it).codes()
        sup_codes = stplus_feature_stats(g, h, it, include_limited_visits=True).codes()
        assert st_codes <= sup_codes


def test_indistinguishable_pair_quick():
    g1, g2 = hub_path_graph(6), hub_path_graph(5)
    it = CodeInterner()
    assert stats_by_string(st_feature_stats(g1, 3, it), it) == stats_by_string(
        st_feature_stats(g2, 3, it), it
    )


def test_distinguishable_pair_quick():
    left, right = seven_node_pair()
    it = CodeInterner()
    cfg = KernelConfig(kind="st", h=3, lam=1.0)
    vl, vr = feature_vector(left, cfg, it), feature_vector(right, cfg, it)
    assert dot(vl, vl) + dot(vr, vr) - 2 * dot(vl, vr) > 0


# ---------------------------------------------------------------------------
# Weighting
# ---------------------------------------------------------------------------

def _stats_of(entries):
    stats = FeatureStats()
    for code, size, freq in entries:
        stats.add(code, size, freq)
    return stats


def test_exp_weight_formula():
    stats = _stats_of([(0, 1, 2)])
    assert apply_weighting(stats, 1.0, "exp").weights[0] == 2.0
    stats = _stats_of([(0, 3, 5)])
    w = apply_weighting(stats, 0.7, "exp").weights[0]
    assert w == pytest.approx(5 * 0.7 ** 1.5, rel=1e-12)


def test_exp_weight_freq_one_lambda_one():
    stats = _stats_of([(0, 17, 1)])
    assert apply_weighting(stats, 1.0, "exp").weights[0] == 1.0


def test_tanh_weight_value():
    stats = _stats_of([(0, 2, 3)])
    w = apply_weighting(stats, 1.0, "tanh").weights[0]
    assert w == pytest.approx(math.tanh(1.0) * math.tanh(3.0), rel=1e-12)
    assert w == pytest.approx(0.757828, abs=5e-7)


def test_nonpositive_lambda_rejected():
    with pytest.raises(ValueError):
        apply_weighting(_stats_of([(0, 1, 1)]), 0.0, "exp")
    with pytest.raises(ValueError):
        KernelConfig(lam=-1.0)


# float64 tanh rounds to exactly 1.0 from ~19.07 on; strictness holds below
TANH_SAT = 19.0


@given(
    size=st.integers(min_value=1, max_value=60),
    freq=st.integers(min_value=1, max_value=10_000),
    lam=st.floats(min_value=0.1, max_value=2.0),
)
def test_tanh_weights_in_unit_interval(size, freq, lam):
    w = apply_weighting(_stats_of([(0, size, freq)]), lam, "tanh").weights[0]
    assert 0.0 < w <= 1.0
    if freq <= TANH_SAT and lam**size <= TANH_SAT:
        assert w < 1.0


@given(
    size=st.integers(min_value=1, max_value=40),
    freq=st.integers(min_value=1, max_value=500),
    lam=st.floats(min_value=0.1, max_value=2.0),
)
def test_tanh_weight_monotone_in_freq(size, freq, lam):
    w1 = apply_weighting(_stats_of([(0, size, freq)]), lam, "tanh").weights[0]
    w2 = apply_weighting(_stats_of([(0, size, freq + 1)]), lam, "tanh").weights[0]
    assert w2 >= w1
    if freq + 1 <= TANH_SAT:
        assert w2 > w1


def test_tanh_weight_decreasing_in_size_for_small_lambda():
    for size in range(1, 20):
        w1 = apply_weighting(_stats_of([(0, size, 3)]), 0.5, "tanh").weights[0]
        w2 = apply_weighting(_stats_of([(0, size + 1, 3)]), 0.5, "tanh").weights[0]
        assert w2 < w1


def test_matched_pair_contribution():
    # the product of two exp weights for one shared feature
    lam, size, f1, f2 = 0.8, 4, 3, 7
    w1 = apply_weighting(_stats_of([(0, size, f1)]), lam, "exp").weights[0]
    w2 = apply_weighting(_stats_of([(0, size, f2)]), lam, "exp").weights[0]
    assert w1 * w2 == pytest.approx(f1 * f2 * lam**size, rel=1e-12)


def test_self_kernel_integer_at_lambda_one():
    rng = random.Random(66)
    for _ in range(15):
        g = random_graph(rng)
        it = CodeInterner()
        cfg = KernelConfig(kind="st", h=2, lam=1.0)
        v = feature_vector(g, cfg, it)
        value = dot(v, v)
        assert value == int(value)
        stats = st_feature_stats(g, 2, CodeInterner())
        assert value == sum(freq * freq for _, _, freq in stats.items())


# ---------------------------------------------------------------------------
# Export lines
# ---------------------------------------------------------------------------

def test_feature_line_codes_ascending():
    it = CodeInterner()
    cfg = KernelConfig(kind="st", h=1, lam=1.0)
    v = feature_vector(PATH_AB, cfg, it)
    line = format_feature_line(v, "1")
    target, *entries = line.split()
    assert target == "1"
    codes = [int(tok.split(":")[0]) for tok in entries]
    assert codes == sorted(codes)


def test_feature_line_expanded():
    it = CodeInterner()
    cfg = KernelConfig(kind="st", h=1, lam=1.0)
    v = feature_vector(LabeledGraph(["a"]), cfg, it)
    assert format_feature_line(v, "?", it, expand=True) == "? a:1"
