"""Pair partitions of ``{0, ..., 2p-1}``, their crossing graphs, and Dyck paths."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Iterator, Mapping, Sequence

from .graphs import SimpleGraph, _bits

MAX_PARTITION_P = 8
MAX_DYCK_P = 10
MAX_HOM_SOURCE = 10


def catalan(p: int) -> int:
    return comb(2 * p, p) // (p + 1)


def double_factorial(m: int) -> int:
    out = 1
    while m > 1:
        out *= m
        m -= 2
    return out


@dataclass(frozen=True)
class PairPartition:
    """Perfect matching of ``range(2p)`` as blocks ``(s, r)``, ``s < r``, sorted by ``s``."""

    blocks: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        blocks = tuple(sorted((min(s, r), max(s, r)) for s, r in self.blocks))
        points = sorted(x for b in blocks for x in b)
        if points != list(range(2 * len(blocks))) or any(s == r for s, r in blocks):
            raise ValueError(f"not a pair partition of range(2p): {self.blocks!r}")
        object.__setattr__(self, "blocks", blocks)

    @property
    def p(self) -> int:
        return len(self.blocks)

    def partner(self) -> list[int]:
        out = [0] * (2 * self.p)
        for s, r in self.blocks:
            out[s], out[r] = r, s
        return out

    def to_json(self) -> str:
        return json.dumps([list(b) for b in self.blocks], separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "PairPartition":
        return cls(tuple(tuple(b) for b in json.loads(text)))


def blocks_cross(a: tuple[int, int], b: tuple[int, int]) -> bool:
    (s1, r1), (s2, r2) = sorted((a, b))
    return s1 < s2 < r1 < r2


def _matchings(points: tuple[int, ...]) -> Iterator[tuple[tuple[int, int], ...]]:
    if not points:
        yield ()
        return
    first, rest = points[0], points[1:]
    for k, mate in enumerate(rest):
        remaining = rest[:k] + rest[k + 1 :]
        for tail in _matchings(remaining):
            yield ((first, mate),) + tail


def enumerate_pair_partitions(p: int) -> Iterator[PairPartition]:
    """All of P_2(2p) in lexicographic order of block lists; (2p-1)!! of them."""
    if not 1 <= p <= MAX_PARTITION_P:
        raise ValueError(f"p must be in 1..{MAX_PARTITION_P}, got {p}")
    for blocks in _matchings(tuple(range(2 * p))):
        yield PairPartition(blocks)


@dataclass(frozen=True)
class IntersectionGraph:
    underlying: SimpleGraph
    block_index: Mapping[tuple[int, int], int]


def intersection_graph(pi: PairPartition) -> IntersectionGraph:
    edges = [(a, b) for a, b in combinations(range(pi.p), 2) if blocks_cross(pi.blocks[a], pi.blocks[b])]
    return IntersectionGraph(SimpleGraph(pi.p, tuple(edges)), {blk: k for k, blk in enumerate(pi.blocks)})


def crossing_edges(pi: PairPartition) -> tuple[tuple[int, int], ...]:
    return intersection_graph(pi).underlying.edges


# homomorphisms


def _search_order(F: SimpleGraph) -> list[int]:
    """Vertices of F ordered so each one has as many earlier neighbors as possible."""
    order: list[int] = []
    placed = 0
    remaining = set(range(F.n))
    while remaining:
        v = max(remaining, key=lambda u: (bin(F.nbrs[u] & placed).count("1"), F.degree(u), -u))
        order.append(v)
        placed |= 1 << v
        remaining.discard(v)
    return order


def iter_homomorphisms(F: SimpleGraph, G: SimpleGraph) -> Iterator[tuple[int, ...]]:
    """Yield every homomorphism F -> G as a tuple ``phi[v]`` indexed by F's vertices."""
    order = _search_order(F)
    phi = [-1] * F.n
    full = G.full_mask

    def rec(k: int) -> Iterator[tuple[int, ...]]:
        if k == len(order):
            yield tuple(phi)
            return
        v = order[k]
        cand = full
        for u in _bits(F.nbrs[v]):
            if phi[u] >= 0:
                cand &= G.nbrs[phi[u]]
        for x in _bits(cand):
            phi[v] = x
            yield from rec(k + 1)
        phi[v] = -1

    yield from rec(0)


def hom_count(F: SimpleGraph, G: SimpleGraph) -> int:
    """|Hom(F, G)| as an exact Python integer.

    Backtracking over F's vertices; candidate images are the common neighbours
    of the images of already-placed F-neighbours. Isolated vertices of F are
    factored out as powers of ``G.n``.
    """
    if F.n > MAX_HOM_SOURCE:
        raise ValueError(f"source graph limited to {MAX_HOM_SOURCE} vertices")
    return _hom_count_cached(F, G)


@lru_cache(maxsize=200_000)
def _hom_count_cached(F: SimpleGraph, G: SimpleGraph) -> int:
    isolated = [v for v in range(F.n) if not F.nbrs[v]]
    if not F.edges:
        return G.n ** F.n
    core = [v for v in range(F.n) if F.nbrs[v]]
    relabel = {v: k for k, v in enumerate(core)}
    core_graph = SimpleGraph(len(core), tuple((relabel[u], relabel[v]) for u, v in F.edges))
    order = _search_order(core_graph)
    nbrs = core_graph.nbrs
    pos = [0] * len(core)
    for k, v in enumerate(order):
        pos[v] = k
    earlier = [[u for u in _bits(nbrs[v]) if pos[u] < pos[v]] for v in order]
    phi = [0] * len(core)
    gn = G.nbrs
    full = G.full_mask

    def rec(k: int) -> int:
        if k == len(order):
            return 1
        cand = full
        for u in earlier[k]:
            cand &= gn[phi[u]]
        if k == len(order) - 1:
            return bin(cand).count("1")
        total = 0
        v = order[k]
        while cand:
            low = cand & -cand
            phi[v] = low.bit_length() - 1
            total += rec(k + 1)
            cand ^= low
        return total

    return rec(0) * G.n ** len(isolated)


def is_block_constant(pi: PairPartition, labels: Sequence[int]) -> bool:
    return all(labels[s] == labels[r] for s, r in pi.blocks)


def is_g_noncrossing(pi: PairPartition, labels: Sequence[int], G: SimpleGraph) -> bool:
    """Membership of ``pi`` in NC_2(G, labels).

    Requires ``pi`` to refine ``labels``; every crossing pair of blocks must
    carry G-adjacent labels. A non-block-constant labeling simply fails.
    """
    if len(labels) != 2 * pi.p:
        raise ValueError(f"labels have length {len(labels)}, partition covers {2 * pi.p} points")
    if not is_block_constant(pi, labels):
        return False
    for a, b in combinations(pi.blocks, 2):
        if blocks_cross(a, b) and not G.adjacent(labels[a[0]], labels[b[0]]):
            return False
    return True


def labels_from_block_labeling(pi: PairPartition, block_labels: Sequence[int]) -> tuple[int, ...]:
    out = [0] * (2 * pi.p)
    for (s, r), x in zip(pi.blocks, block_labels):
        out[s] = out[r] = x
    return tuple(out)


# Dyck paths


@dataclass(frozen=True)
class DyckPath:
    steps: tuple[int, ...]

    def __post_init__(self) -> None:
        height = 0
        for step in self.steps:
            if step not in (1, -1):
                raise ValueError(f"Dyck steps must be +1/-1, got {step!r}")
            height += step
            if height < 0:
                raise ValueError(f"prefix sum went negative: {self.steps!r}")
        if height != 0:
            raise ValueError(f"Dyck path does not return to 0: {self.steps!r}")

    @property
    def p(self) -> int:
        return len(self.steps) // 2

    @property
    def up_steps(self) -> tuple[int, ...]:
        return tuple(k for k, s in enumerate(self.steps) if s == 1)

    @property
    def down_steps(self) -> tuple[int, ...]:
        return tuple(k for k, s in enumerate(self.steps) if s == -1)


def enumerate_dyck_paths(p: int) -> Iterator[DyckPath]:
    if not 1 <= p <= MAX_DYCK_P:
        raise ValueError(f"p must be in 1..{MAX_DYCK_P}, got {p}")

    def rec(prefix: tuple[int, ...], ups: int, height: int) -> Iterator[tuple[int, ...]]:
        if len(prefix) == 2 * p:
            yield prefix
            return
        if ups < p:
            yield from rec(prefix + (1,), ups + 1, height + 1)
        if height > 0:
            yield from rec(prefix + (-1,), ups, height - 1)

    for steps in rec((), 0, 0):
        yield DyckPath(steps)
