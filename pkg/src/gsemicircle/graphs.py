"""Simple labeled graphs on vertices ``0..n-1`` and the analytics used downstream.

Adjacency is stored as one integer bitmask per vertex, which keeps clique and
coloring searches cheap at the sizes we care about (n <= 64).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Sequence

import numpy as np

MAX_VERTICES = 64
MAX_CHROMATIC_VERTICES = 20


class GraphError(ValueError):
    """Invalid vertex, loop edge, or size limit violation."""


@dataclass(frozen=True)
class SimpleGraph:
    """Undirected loopless graph on ``range(n)``.

    ``edges`` is kept canonical: pairs ``(u, v)`` with ``u < v``, sorted and
    without duplicates. Equality is labeled equality.
    """

    n: int
    edges: tuple[tuple[int, int], ...] = ()
    nbrs: tuple[int, ...] = field(init=False, repr=False, compare=False)
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 0:
            raise GraphError(f"vertex count must be a non-negative integer, got {self.n!r}")
        if self.n > MAX_VERTICES:
            raise GraphError(f"graphs are limited to {MAX_VERTICES} vertices, got {self.n}")
        canon = set()
        for e in self.edges:
            u, v = (int(x) for x in e)
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge ({u}, {v}) has a vertex outside 0..{self.n - 1}")
            if u == v:
                raise GraphError(f"loop edge ({u}, {v}) is not allowed")
            canon.add((min(u, v), max(u, v)))
        edges = tuple(sorted(canon))
        masks = [0] * self.n
        for u, v in edges:
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "nbrs", tuple(masks))
        object.__setattr__(self, "_hash", hash((self.n, edges)))

    def __hash__(self) -> int:
        return self._hash

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def adjacent(self, u: int, v: int) -> bool:
        return bool((self.nbrs[u] >> v) & 1)

    def neighbors(self, v: int) -> list[int]:
        return _bits(self.nbrs[v])

    def degree(self, v: int) -> int:
        return self.nbrs[v].bit_count() if hasattr(int, "bit_count") else bin(self.nbrs[v]).count("1")

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int64)
        for u, v in self.edges:
            a[u, v] = a[v, u] = 1
        return a

    def is_clique(self, vertices: Iterable[int]) -> bool:
        vs = list(vertices)
        return len(set(vs)) == len(vs) and all(self.adjacent(u, v) for u, v in combinations(vs, 2))

    # serialization

    def to_dict(self) -> dict:
        return {"n": self.n, "edges": [[u, v] for u, v in self.edges]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "SimpleGraph":
        data = json.loads(text)
        if not isinstance(data, dict) or "n" not in data:
            raise GraphError("graph JSON must be an object with keys 'n' and 'edges'")
        return build_graph(int(data["n"]), [tuple(e) for e in data.get("edges", [])])

    def to_text(self) -> str:
        """One ``u v`` pair per line, preceded by an ``n <count>`` header."""
        lines = [f"n {self.n}"] + [f"{u} {v}" for u, v in self.edges]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "SimpleGraph":
        n = None
        edges = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if parts[0] == "n" and len(parts) == 2:
                n = int(parts[1])
                continue
            if len(parts) != 2:
                raise GraphError(f"line {lineno}: expected 'u v', got {raw!r}")
            edges.append((int(parts[0]), int(parts[1])))
        if n is None:
            # header-less edge lists: infer n from the largest vertex id
            n = 1 + max((max(e) for e in edges), default=-1)
        return build_graph(n, edges)


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _popcount(mask: int) -> int:
    return bin(mask).count("1")


# construction


def build_graph(n: int, edges: Iterable[Sequence[int]] = ()) -> SimpleGraph:
    return SimpleGraph(n, tuple(tuple(e) for e in edges))


def complete_graph(n: int) -> SimpleGraph:
    return SimpleGraph(n, tuple(combinations(range(n), 2)))


def edgeless_graph(n: int) -> SimpleGraph:
    return SimpleGraph(n)


def cycle_graph(n: int) -> SimpleGraph:
    if n < 3:
        raise GraphError("cycles need at least 3 vertices")
    return SimpleGraph(n, tuple((i, (i + 1) % n) for i in range(n)))


def path_graph(n: int) -> SimpleGraph:
    return SimpleGraph(n, tuple((i, i + 1) for i in range(n - 1)))


def complete_multipartite(part_sizes: Sequence[int]) -> SimpleGraph:
    owner = [k for k, size in enumerate(part_sizes) for _ in range(size)]
    n = len(owner)
    edges = [(u, v) for u, v in combinations(range(n), 2) if owner[u] != owner[v]]
    return SimpleGraph(n, tuple(edges))


def turan_graph(L: int, omega: int) -> SimpleGraph:
    """Complete ``omega``-partite graph with equal parts of size ``L / omega``.

    Vertex ``v`` lives in part ``v // (L // omega)``.
    """
    if omega < 1:
        raise GraphError("omega must be at least 1")
    if L % omega:
        raise GraphError(f"omega={omega} does not divide L={L}")
    return complete_multipartite([L // omega] * omega)


def minimizer_graph(L: int, omega: int) -> SimpleGraph:
    """``K_omega`` on vertices ``0..omega-1`` plus ``L - omega`` isolated vertices."""
    if not 1 <= omega <= L:
        raise GraphError(f"need 1 <= omega <= L, got omega={omega}, L={L}")
    return SimpleGraph(L, tuple(combinations(range(omega), 2)))


def add_edge(G: SimpleGraph, u: int, v: int) -> SimpleGraph:
    if u == v:
        raise GraphError(f"loop edge ({u}, {v}) is not allowed")
    return SimpleGraph(G.n, G.edges + ((u, v),))


def disjoint_union(G: SimpleGraph, H: SimpleGraph) -> SimpleGraph:
    shifted = tuple((u + G.n, v + G.n) for u, v in H.edges)
    return SimpleGraph(G.n + H.n, G.edges + shifted)


def all_labeled_graphs(n: int) -> Iterator[SimpleGraph]:
    """Every labeled graph on ``n`` vertices, ordered by edge-subset bitmask."""
    pairs = list(combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield SimpleGraph(n, tuple(p for k, p in enumerate(pairs) if (mask >> k) & 1))


# cliques


@dataclass(frozen=True)
class CliqueReport:
    omega: int
    per_vertex: tuple[int, ...]
    witness: tuple[int, ...]

    def c_star(self, v: int) -> int:
        return self.per_vertex[v]


def _max_clique_in(G: SimpleGraph, cand: int) -> int:
    """Bitmask of a maximum clique inside the vertex set ``cand``.

    Bron-Kerbosch with Tomita pivoting, pruned by the best size found so far.
    """
    best = 0
    best_size = 0

    def expand(R: int, r_size: int, P: int, X: int) -> None:
        nonlocal best, best_size
        if not P:
            if not X and r_size > best_size:
                best, best_size = R, r_size
            return
        if r_size + _popcount(P) <= best_size:
            return
        PX = P | X
        pivot = max(_bits(PX), key=lambda u: _popcount(P & G.nbrs[u]))
        for v in _bits(P & ~G.nbrs[pivot]):
            nv = G.nbrs[v]
            expand(R | (1 << v), r_size + 1, P & nv, X & nv)
            P &= ~(1 << v)
            X |= 1 << v

    expand(0, 0, cand, 0)
    return best


def clique_report(G: SimpleGraph) -> CliqueReport:
    if G.n < 1:
        raise GraphError("clique_report needs at least one vertex")
    witness = _max_clique_in(G, G.full_mask)
    per_vertex = tuple(1 + _popcount(_max_clique_in(G, G.nbrs[v])) for v in range(G.n))
    omega = _popcount(witness)
    assert omega == max(per_vertex)
    return CliqueReport(omega=omega, per_vertex=per_vertex, witness=tuple(_bits(witness)))


def clique_number(G: SimpleGraph) -> int:
    return clique_report(G).omega


# coloring


def greedy_coloring(G: SimpleGraph) -> list[int]:
    colors = [-1] * G.n
    for v in sorted(range(G.n), key=lambda u: -G.degree(u)):
        used = {colors[u] for u in G.neighbors(v)}
        c = 0
        while c in used:
            c += 1
        colors[v] = c
    return colors


def optimal_coloring(G: SimpleGraph) -> list[int]:
    """Exact minimum coloring by DSATUR-ordered branch and bound."""
    if G.n < 1:
        raise GraphError("coloring needs at least one vertex")
    if G.n > MAX_CHROMATIC_VERTICES:
        raise GraphError(f"chromatic number is limited to {MAX_CHROMATIC_VERTICES} vertices, got {G.n}")
    best = greedy_coloring(G)
    best_k = max(best) + 1
    lower = clique_number(G)
    if best_k == lower:
        return best
    colors = [-1] * G.n

    def search(colored: int, used: int) -> bool:
        nonlocal best, best_k
        if used >= best_k:
            return False
        if colored == G.n:
            best, best_k = colors.copy(), used
            return best_k == lower
        # most saturated uncolored vertex, ties by degree
        v = max(
            (u for u in range(G.n) if colors[u] < 0),
            key=lambda u: (len({colors[w] for w in G.neighbors(u) if colors[w] >= 0}), G.degree(u)),
        )
        forbidden = {colors[w] for w in G.neighbors(v)}
        for c in range(min(used + 1, best_k - 1)):
            if c in forbidden:
                continue
            colors[v] = c
            if search(colored + 1, max(used, c + 1)):
                return True
            colors[v] = -1
        return False

    search(0, 0)
    return best


def chromatic_number(G: SimpleGraph) -> int:
    return max(optimal_coloring(G)) + 1


# spectrum


def largest_adjacency_eigenvalue(G: SimpleGraph, tol: float = 1e-12, max_iter: int = 200_000) -> float:
    """Top adjacency eigenvalue by shifted power iteration.

    Iterates on ``A + I`` so bipartite graphs (spectrum symmetric about 0) do
    not oscillate. The all-ones start has positive overlap with every Perron
    vector, so it never needs perturbing for non-negative ``A``.
    """
    if G.n < 1:
        raise GraphError("need at least one vertex")
    if not G.edges:
        return 0.0
    A = G.adjacency_matrix().astype(float)
    x = np.ones(G.n) / math.sqrt(G.n)
    rq_old = -np.inf
    for _ in range(max_iter):
        y = A @ x
        rq = float(x @ y)
        z = y + x
        x = z / np.linalg.norm(z)
        if abs(rq - rq_old) <= tol * max(1.0, abs(rq)):
            break
        rq_old = rq
    else:
        raise RuntimeError("power iteration did not converge")
    return float(x @ (A @ x))
