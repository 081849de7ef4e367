"""Exact mixed moments of G-independent semicircles and the scalar bound checks.

Moments of ``sum_i alpha_i s_i`` are sums over pair partitions of
(weighted) homomorphism counts from the crossing graph into G. Unweighted
moments are exact integers; weighted moments are exact when every
coefficient is an ``int`` or ``Fraction`` and floating point otherwise.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from numbers import Rational
from typing import Any, Iterator, Optional, Sequence

import numpy as np

from .cayley import spectral_lower_bounds
from .graphs import (
    SimpleGraph,
    add_edge,
    all_labeled_graphs,
    clique_report,
    largest_adjacency_eigenvalue,
    minimizer_graph,
    optimal_coloring,
    turan_graph,
)
from .partitions import (
    PairPartition,
    catalan,
    crossing_edges,
    enumerate_pair_partitions,
    hom_count,
    is_g_noncrossing,
    iter_homomorphisms,
)

REL_TOL = 1e-9
MAX_SWEEP_L = 7
MAX_SWEEP_P = 4


@dataclass(frozen=True)
class BoundReport:
    lhs: Any
    rhs: Any
    which: str
    detail: dict = field(default_factory=dict, compare=False)
    # absolute tolerance; None means REL_TOL relative to max(1, |rhs|)
    tol: Optional[float] = None

    @property
    def slack(self):
        return self.rhs - self.lhs

    @property
    def holds(self) -> bool:
        if isinstance(self.lhs, int) and isinstance(self.rhs, int):
            return self.lhs <= self.rhs
        if self.tol is not None:
            return float(self.slack) >= -self.tol
        return float(self.slack) >= -REL_TOL * max(1.0, abs(float(self.rhs)))

    def to_dict(self) -> dict:
        def num(x):
            return str(x) if isinstance(x, (int, Fraction)) else float(x)

        return {"which": self.which, "lhs": num(self.lhs), "rhs": num(self.rhs), "slack": num(self.slack),
                "holds": self.holds, **self.detail}


@dataclass(frozen=True)
class MomentResult:
    p: int
    value: Any
    normalized: Optional[Any] = None


# partition shapes


@lru_cache(maxsize=None)
def crossing_graph_census(p: int) -> tuple[tuple[SimpleGraph, int], ...]:
    """Distinct labeled crossing graphs F_pi over P_2(2p), with multiplicities."""
    census = Counter(crossing_edges(pi) for pi in enumerate_pair_partitions(p))
    return tuple((SimpleGraph(p, edges), mult) for edges, mult in sorted(census.items()))


# unweighted


def mixed_moment(G: SimpleGraph, labels: Sequence[int]) -> int:
    """tau(s_{i_1} ... s_{i_m}) = |NC_2(G, i)|; odd orders vanish."""
    if len(labels) % 2:
        return 0
    if not labels:
        return 1
    return sum(1 for pi in _compatible_partitions(tuple(labels)) if is_g_noncrossing(pi, labels, G))


def _compatible_partitions(labels: tuple[int, ...]) -> Iterator[PairPartition]:
    """Pair partitions refining ``labels`` (blocks only join equal labels)."""

    def rec(points: tuple[int, ...]) -> Iterator[tuple[tuple[int, int], ...]]:
        if not points:
            yield ()
            return
        first, rest = points[0], points[1:]
        for k, mate in enumerate(rest):
            if labels[mate] != labels[first]:
                continue
            for tail in rec(rest[:k] + rest[k + 1 :]):
                yield ((first, mate),) + tail

    for blocks in rec(tuple(range(len(labels)))):
        yield PairPartition(blocks)


def moment_unweighted(G: SimpleGraph, p: int) -> int:
    """tau[(s_1 + ... + s_L)^{2p}] = sum over pi of hom(F_pi, G)."""
    if p == 0:
        return 1
    return sum(mult * hom_count(F, G) for F, mult in crossing_graph_census(p))


def normalized_moment(G: SimpleGraph, p: int) -> Fraction:
    """tau(T_G^{2p}) for T_G = L^{-1/2} sum_i s_i."""
    return Fraction(moment_unweighted(G, p), G.n**p)


# weighted


def _block_weight_kind(block: tuple[int, int]) -> int:
    # positions 0,2,4,.. carry alpha, odd positions carry conj(alpha)
    return (block[0] % 2) + (block[1] % 2)


def _is_exact(alpha: Sequence) -> bool:
    return all(isinstance(a, Rational) for a in alpha)


def moment_weighted(G: SimpleGraph, p: int, alpha: Sequence) -> MomentResult:
    """tau[(S S*)^p] for S = sum_i alpha_i s_i, following the homomorphism expansion.

    Each block ``(s, r)`` labeled ``v`` contributes ``alpha_v`` or
    ``conj(alpha_v)`` at each endpoint according to endpoint parity.
    """
    if len(alpha) != G.n:
        raise ValueError(f"need {G.n} coefficients, got {len(alpha)}")
    if p == 0:
        return MomentResult(0, 1, 1)
    if _is_exact(alpha):
        alpha = [Fraction(a) for a in alpha]
        squares = [a * a for a in alpha]
        total = Fraction(0)
        for F, mult in crossing_graph_census(p):
            total += mult * sum(_prod(squares[v] for v in phi) for phi in iter_homomorphisms(F, G))
        normalized = total / G.n**p if G.n else None
        return MomentResult(p, total, normalized)
    arr = np.asarray(alpha)
    value = weighted_moments_batch(G, p, arr[None, :])[0]
    if np.iscomplexobj(arr) and abs(value.imag) <= 1e-12 * max(1.0, abs(value.real)):
        value = value.real
    return MomentResult(p, value, None)


def _prod(xs):
    out = 1
    for x in xs:
        out *= x
    return out


_LETTERS = "abcdefghijklmnop"


@lru_cache(maxsize=None)
def _typed_census(p: int) -> tuple[tuple[tuple[tuple[int, int], ...], tuple[int, ...], int], ...]:
    """(crossing edges, block weight kinds, multiplicity) over P_2(2p)."""
    census = Counter()
    for pi in enumerate_pair_partitions(p):
        census[(crossing_edges(pi), tuple(_block_weight_kind(b) for b in pi.blocks))] += 1
    return tuple(sorted(census.items()))


def weighted_moments_batch(G: SimpleGraph, p: int, alphas: np.ndarray) -> np.ndarray:
    """Floating-point weighted moments for a batch of coefficient rows (shape ``(batch, L)``).

    Each crossing graph contributes a tensor contraction of per-vertex weights
    against copies of G's adjacency matrix, evaluated with ``einsum``.
    """
    alphas = np.atleast_2d(alphas)
    if alphas.shape[1] != G.n:
        raise ValueError(f"need {G.n} coefficients per row, got {alphas.shape[1]}")
    complex_mode = np.iscomplexobj(alphas)
    A = G.adjacency_matrix().astype(float)
    if not complex_mode:
        sq = alphas.astype(float) ** 2
        kinds = {0: sq, 1: sq, 2: sq}
        census = [(F.edges, (0,) * p, mult) for F, mult in crossing_graph_census(p)]
    else:
        kinds = {0: alphas * alphas, 1: alphas * alphas.conj(), 2: alphas.conj() * alphas.conj()}
        census = [(edges, kind, mult) for (edges, kind), mult in _typed_census(p)]
    total = np.zeros(alphas.shape[0], dtype=complex if complex_mode else float)
    for edges, kind, mult in census:
        subs = [f"z{_LETTERS[v]}" for v in range(p)] + [_LETTERS[u] + _LETTERS[v] for u, v in edges]
        operands = [kinds[kind[v]] for v in range(p)] + [A] * len(edges)
        expr = ",".join(subs) + "->z"
        if alphas.shape[0] * G.n**p <= _DIRECT_EINSUM_LIMIT:
            total += mult * np.einsum(expr, *operands)
        else:
            shapes = tuple(op.shape for op in operands)
            total += mult * np.einsum(expr, *operands, optimize=_einsum_path(expr, shapes))
    return total


# below this many index combinations a plain einsum beats contraction-path search
_DIRECT_EINSUM_LIMIT = 200_000


@lru_cache(maxsize=4096)
def _einsum_path(expr: str, shapes: tuple) -> list:
    dummies = [np.empty(shape) for shape in shapes]
    return np.einsum_path(expr, *dummies, optimize="greedy")[0]


# scalar Khintchine


def khintchine_rhs_scalar(G: SimpleGraph, p: int, alpha: Sequence) -> float:
    """C_p^{1/2p} * min(sum |a_i|^2 c*(i), p sum |a_i|^2)^{1/2}."""
    c_star = clique_report(G).per_vertex
    mods = [abs(complex(a)) ** 2 for a in alpha]
    clique_side = sum(m * c for m, c in zip(mods, c_star))
    p_side = p * sum(mods)
    return catalan(p) ** (1 / (2 * p)) * math.sqrt(min(clique_side, p_side))


def _root(value, p: int) -> float:
    v = float(abs(value)) if not isinstance(value, (int, Fraction)) else float(value)
    return v ** (1 / (2 * p)) if v > 0 else 0.0


def check_scalar_khintchine(G: SimpleGraph, p: int, alpha: Sequence) -> BoundReport:
    m = moment_weighted(G, p, alpha).value
    return BoundReport(_root(m, p), khintchine_rhs_scalar(G, p, alpha), "scalar_khintchine", {"p": p})


def turan_exact_norm(omega: int) -> float:
    if omega < 1:
        raise ValueError("omega must be at least 1")
    return 2 * math.sqrt(omega)


def minimizer_interval(L: int, omega: int) -> tuple[float, float]:
    if not 1 <= omega <= L:
        raise ValueError(f"need 1 <= omega <= L, got omega={omega}, L={L}")
    base = math.sqrt((omega * omega + L - omega) / L)
    return base, 2 * base


def suboptimal_bounds(G: SimpleGraph) -> dict[str, float]:
    """Upper bounds on ||T_G|| (normalized sum) from the clique number and weaker invariants."""
    omega = clique_report(G).omega
    coloring = optimal_coloring(G)
    chi = max(coloring) + 1
    parts = Counter(coloring).values()
    lam = largest_adjacency_eigenvalue(G)
    return {
        "sharp_clique": 2 * math.sqrt(omega),
        "chromatic": 2.0 * chi,
        "clique_linear": 2.0 * omega,
        "chromatic_sqrt": 2 * math.sqrt(chi),
        "coloring_parts": 2 * sum(math.sqrt(k) for k in parts) / math.sqrt(G.n),
        "adjacency_eigenvalue": 2 * math.sqrt(lam + 1),
        "omega": omega,
        "chi": chi,
        "lambda1": lam,
    }


def monotonicity_check(G: SimpleGraph, edge: tuple[int, int], p: int) -> BoundReport:
    u, v = edge
    if G.adjacent(u, v):
        raise ValueError(f"edge {edge} already present")
    H = add_edge(G, u, v)
    return BoundReport(moment_unweighted(G, p), moment_unweighted(H, p), "edge_monotonicity",
                       {"p": p, "edge": [u, v]})


# extremal sweeps


@dataclass
class SweepTable:
    L: int
    omega: int
    p_max: int
    rows: list[dict]
    max_rows: dict[int, list[int]]
    min_rows: dict[int, list[int]]
    turan_index: Optional[int]
    minimizer_index: Optional[int]

    def turan_is_argmax(self, p: int) -> bool:
        return self.turan_index is not None and self.turan_index in self.max_rows[p]

    def minimizer_is_argmin(self, p: int) -> bool:
        return self.minimizer_index is not None and self.minimizer_index in self.min_rows[p]


def extremal_sweep(L: int, omega: int, p_max: int, with_walk_bounds: bool = True) -> SweepTable:
    """Moments of every labeled graph on L vertices with clique number exactly ``omega``."""
    if not 1 <= L <= MAX_SWEEP_L:
        raise ValueError(f"L must be in 1..{MAX_SWEEP_L}")
    if not 1 <= p_max <= MAX_SWEEP_P:
        raise ValueError(f"p_max must be in 1..{MAX_SWEEP_P}")
    turan = turan_graph(L, omega) if L % omega == 0 else None
    minimizer = minimizer_graph(L, omega)
    rows = []
    turan_index = minimizer_index = None
    for G in all_labeled_graphs(L):
        if clique_report(G).omega != omega:
            continue
        moments = {p: moment_unweighted(G, p) for p in range(1, p_max + 1)}
        row = {
            "edges": [list(e) for e in G.edges],
            "num_edges": G.num_edges,
            "moments": moments,
            "normalized": {p: Fraction(m, L**p) for p, m in moments.items()},
        }
        if with_walk_bounds:
            row["norm_lower_bounds"] = [b / math.sqrt(L) for b in spectral_lower_bounds(G, p_max)]
        if G == turan:
            turan_index = len(rows)
        if G == minimizer:
            minimizer_index = len(rows)
        rows.append(row)
    max_rows, min_rows = {}, {}
    for p in range(1, p_max + 1):
        col = [r["moments"][p] for r in rows]
        max_rows[p] = [k for k, m in enumerate(col) if m == max(col)]
        min_rows[p] = [k for k, m in enumerate(col) if m == min(col)]
    return SweepTable(L, omega, p_max, rows, max_rows, min_rows, turan_index, minimizer_index)


def edge_count_monotonicity_candidates(table: SweepTable, p: int) -> list[tuple[int, int]]:
    """Row pairs (a, b) with fewer edges in a but a strictly larger 2p-moment.

    Reported only; whether such pairs can exist at fixed clique number is open.
    """
    out = []
    for a, b in combinations(range(len(table.rows)), 2):
        for x, y in ((a, b), (b, a)):
            rx, ry = table.rows[x], table.rows[y]
            if rx["num_edges"] < ry["num_edges"] and rx["moments"][p] > ry["moments"][p]:
                out.append((x, y))
    return out
