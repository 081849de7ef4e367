from __future__ import annotations

import math
from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gsemicircle.cayley import closed_walk_count
from gsemicircle.graphs import (
    all_labeled_graphs,
    build_graph,
    complete_graph,
    cycle_graph,
    edgeless_graph,
    minimizer_graph,
    turan_graph,
)
from gsemicircle.moments import (
    BoundReport,
    check_scalar_khintchine,
    edge_count_monotonicity_candidates,
    extremal_sweep,
    khintchine_rhs_scalar,
    minimizer_interval,
    mixed_moment,
    moment_unweighted,
    moment_weighted,
    monotonicity_check,
    normalized_moment,
    suboptimal_bounds,
    turan_exact_norm,
    weighted_moments_batch,
)
from gsemicircle.partitions import catalan
from tests.oracles import brute_pairings, classical_semicircle_sum_moment, crosses
from tests.strategies import graphs

K2, N2 = complete_graph(2), edgeless_graph(2)


def brute_mixed_moment(G, labels):
    """|NC_2(G, i)| straight from the definition."""
    count = 0
    for m in brute_pairings(tuple(range(len(labels)))):
        if any(labels[s] != labels[r] for s, r in m):
            continue
        if all(G.adjacent(labels[a[0]], labels[b[0]]) for a in m for b in m if a < b and crosses(a, b)):
            count += 1
    return count


def brute_weighted_moment(G, p, alpha):
    """tau[(S S*)^p] summed over all label sequences, alpha at even positions, conj at odd."""
    total = 0
    for labels in product(range(G.n), repeat=2 * p):
        w = 1
        for k, x in enumerate(labels):
            w *= alpha[x] if k % 2 == 0 else np.conj(alpha[x])
        if w != 0:
            total += w * brute_mixed_moment(G, labels)
    return total


def test_mixed_moment_examples():
    assert mixed_moment(K2, (0, 0)) == 1
    assert mixed_moment(K2, (0, 1, 0, 1)) == 1
    assert mixed_moment(N2, (0, 1, 0, 1)) == 0
    assert mixed_moment(N2, (1, 1, 1, 1)) == 2
    assert mixed_moment(K2, (0, 1, 0)) == 0


@given(graphs(max_n=3), st.data())
def test_mixed_moment_matches_definition(G, data):
    labels = data.draw(st.lists(st.integers(0, G.n - 1), min_size=0, max_size=8).filter(lambda x: len(x) % 2 == 0))
    assert mixed_moment(G, labels) == brute_mixed_moment(G, labels)


def test_moment_unweighted_examples():
    assert moment_unweighted(N2, 2) == 8
    for L in range(1, 4):
        for p in range(1, 5):
            assert moment_unweighted(edgeless_graph(L), p) == catalan(p) * L**p
    assert moment_unweighted(K2, 2) == 10
    for p in range(1, 7):
        assert moment_unweighted(complete_graph(1), p) == catalan(p)
    assert normalized_moment(K2, 2) == Fraction(10, 4)


@pytest.mark.parametrize("p", [1, 2, 3])
def test_dual_formula_agreement(p):
    for L in range(1, 4):
        for G in all_labeled_graphs(L):
            total = sum(mixed_moment(G, i) for i in product(range(L), repeat=2 * p))
            assert moment_unweighted(G, p) == total


@pytest.mark.parametrize("L", range(1, 5))
def test_classical_case_matches_independent_oracle(L):
    for p in range(1, 5):
        assert moment_unweighted(complete_graph(L), p) == classical_semicircle_sum_moment(L, p)


def test_moments_equal_walk_counts(small_graphs):
    for G in small_graphs:
        for p in range(1, 5):
            assert moment_unweighted(G, p) == closed_walk_count(G, p)


def test_moment_weighted_examples():
    G = turan_graph(4, 2)
    for p in range(1, 4):
        assert moment_weighted(G, p, [1, 1, 1, 1]).value == moment_unweighted(G, p)
        for j in range(4):
            alpha = [0] * 4
            alpha[j] = 1
            assert moment_weighted(G, p, alpha).value == catalan(p)
    assert moment_weighted(K2, 2, [1, 1]).value == 10
    with pytest.raises(ValueError):
        moment_weighted(K2, 2, [1])


@given(graphs(max_n=4), st.integers(1, 4), st.data())
def test_free_case(G, p, data):
    N = edgeless_graph(G.n)
    alpha = data.draw(st.lists(st.fractions(-3, 3, max_denominator=7), min_size=G.n, max_size=G.n))
    assert moment_weighted(N, p, alpha).value == catalan(p) * sum(a * a for a in alpha) ** p


def test_free_case_normalized():
    for L in (1, 2, 3, 5):
        alpha = [1 / math.sqrt(L)] * L
        for p in range(1, 6):
            assert moment_weighted(edgeless_graph(L), p, alpha).value == pytest.approx(catalan(p), rel=1e-12)


@pytest.mark.parametrize("G", [K2, N2, build_graph(3, [(0, 1)]), cycle_graph(3)])
def test_weighted_matches_brute_force_complex(G):
    rng = np.random.default_rng(7)
    for p in (1, 2):
        alpha = rng.normal(size=G.n) + 1j * rng.normal(size=G.n)
        got = moment_weighted(G, p, list(alpha)).value
        assert complex(got) == pytest.approx(complex(brute_weighted_moment(G, p, alpha)), rel=1e-10)


def test_exact_and_float_paths_agree(small_graphs):
    rng = np.random.default_rng(3)
    for G in small_graphs[::5]:
        alpha = [Fraction(int(x), 16) for x in rng.integers(-16, 17, G.n)]
        for p in (1, 2, 3):
            exact = moment_weighted(G, p, alpha).value
            batch = weighted_moments_batch(G, p, np.array([[float(a) for a in alpha]]))[0]
            assert float(exact) == pytest.approx(batch, rel=1e-12, abs=1e-12)


def test_rhs_examples():
    L = 3
    alpha = [0.3, -1.2, 2.0]
    assert khintchine_rhs_scalar(edgeless_graph(L), 4, alpha) == pytest.approx(
        catalan(4) ** (1 / 8) * math.sqrt(sum(a * a for a in alpha)))
    for L in (2, 3):
        for p in range(L, L + 3):
            alpha = [1 / math.sqrt(L)] * L
            assert khintchine_rhs_scalar(complete_graph(L), p, alpha) == pytest.approx(
                catalan(p) ** (1 / (2 * p)) * math.sqrt(L))
    assert khintchine_rhs_scalar(K2, 2, [1, 1]) == pytest.approx(2 ** 0.25 * 2)


def test_check_scalar_examples():
    r = check_scalar_khintchine(complete_graph(1), 3, [1])
    assert r.lhs == pytest.approx(5 ** (1 / 6)) and r.rhs == pytest.approx(5 ** (1 / 6)) and r.holds
    r = check_scalar_khintchine(K2, 2, [1, 1])
    assert r.lhs == pytest.approx(10 ** 0.25) and r.rhs == pytest.approx(2 * 2 ** 0.25) and r.holds


@given(graphs(max_n=5), st.integers(1, 4), st.data())
def test_scalar_khintchine_property(G, p, data):
    alpha = data.draw(st.lists(st.floats(-5, 5), min_size=G.n, max_size=G.n))
    assert check_scalar_khintchine(G, p, alpha).holds


def test_bound_report_semantics():
    assert BoundReport(3, 3, "x").holds and not BoundReport(4, 3, "x").holds
    assert BoundReport(1.0 + 1e-12, 1.0, "x").holds
    assert not BoundReport(1.0 + 1e-6, 1.0, "x").holds
    assert BoundReport(2.0, 1.5, "x", tol=0.6).holds
    d = BoundReport(2**70, 2**71, "x").to_dict()
    assert d["lhs"] == str(2**70) and d["slack"] == str(2**70) and d["holds"] is True


def test_turan_and_minimizer_values():
    assert turan_exact_norm(1) == 2 and turan_exact_norm(4) == 4
    assert turan_exact_norm(2) == pytest.approx(2 * math.sqrt(2))
    assert minimizer_interval(5, 1) == (1.0, 2.0)
    lo, hi = minimizer_interval(4, 2)
    assert (lo, hi) == pytest.approx((math.sqrt(1.5), 2 * math.sqrt(1.5)))
    assert minimizer_interval(3, 3) == pytest.approx((math.sqrt(3), 2 * math.sqrt(3)))
    with pytest.raises(ValueError):
        minimizer_interval(2, 3)


def test_suboptimal_bound_examples():
    b = suboptimal_bounds(complete_graph(4))
    assert b["sharp_clique"] == 4 and b["chromatic"] == 8 and b["clique_linear"] == 8
    assert b["adjacency_eigenvalue"] == pytest.approx(4)
    b = suboptimal_bounds(edgeless_graph(4))
    assert b["sharp_clique"] == 2 and all(b[k] >= 2 - 1e-12 for k in
                                          ("chromatic", "clique_linear", "chromatic_sqrt", "adjacency_eigenvalue"))
    b = suboptimal_bounds(turan_graph(4, 2))
    assert b["sharp_clique"] == pytest.approx(2 * math.sqrt(2))
    assert b["adjacency_eigenvalue"] == pytest.approx(2 * math.sqrt(3))


def test_sharp_bound_never_exceeds_others(corpus_graphs):
    for G in corpus_graphs:
        b = suboptimal_bounds(G)
        for k in ("chromatic", "clique_linear", "chromatic_sqrt", "adjacency_eigenvalue"):
            assert b["sharp_clique"] <= b[k] + 1e-9


def test_monotonicity_examples():
    r = monotonicity_check(N2, (0, 1), 2)
    assert (r.lhs, r.rhs) == (8, 10) and r.holds
    G = minimizer_graph(4, 2)
    for e in [(0, 2), (2, 3)]:
        r = monotonicity_check(G, e, 1)
        assert r.lhs == r.rhs == 4
    with pytest.raises(ValueError):
        monotonicity_check(K2, (0, 1), 2)


def test_extremal_sweep_examples():
    t = extremal_sweep(4, 2, 3, with_walk_bounds=False)
    for p in (1, 2, 3):
        assert t.turan_is_argmax(p) and t.minimizer_is_argmin(p)
    t = extremal_sweep(3, 3, 2)
    assert len(t.rows) == 1 and t.rows[0]["num_edges"] == 3
    assert t.turan_is_argmax(2) and t.minimizer_is_argmin(2)


def test_edge_count_candidates_are_genuine():
    t = extremal_sweep(4, 2, 3, with_walk_bounds=False)
    for a, b in edge_count_monotonicity_candidates(t, 3):
        assert t.rows[a]["num_edges"] < t.rows[b]["num_edges"]
        assert t.rows[a]["moments"][3] > t.rows[b]["moments"][3]
