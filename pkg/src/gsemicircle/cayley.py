"""Closed walks from the empty word in the Cayley graph of a trace monoid.

Positions in a walk are 0-based: ``words[k]`` is the word after step ``k`` and
the implicit start (before step 0) is the empty word. A pair partition block
``(s, r)`` labeled ``a`` means letter ``a`` is prepended at step ``s`` and
stripped from the left at step ``r``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from itertools import product
from math import factorial
from typing import Iterator, Mapping, Optional, Sequence

import numpy as np
import scipy.sparse as sp

from .graphs import SimpleGraph, clique_report
from .partitions import (
    DyckPath,
    PairPartition,
    blocks_cross,
    enumerate_pair_partitions,
    intersection_graph,
    iter_homomorphisms,
)
from .trace_monoid import EMPTY, DEFAULT_BALL_GUARD, Ball, TraceMonoid, TraceWord, monoid_for

MAX_WALK_P = 10


class MalformedPath(ValueError):
    pass


@dataclass(frozen=True)
class CayleyPath:
    words: tuple[TraceWord, ...]

    @property
    def p(self) -> int:
        return len(self.words) // 2

    def lengths(self) -> tuple[int, ...]:
        return tuple(w.length for w in self.words)

    def at(self, k: int) -> TraceWord:
        """Word after step ``k``; ``k = -1`` is the start."""
        return EMPTY if k < 0 else self.words[k]

    def to_list(self) -> list:
        return [w.to_list() for w in self.words]

    def to_json(self) -> str:
        return json.dumps(self.to_list(), separators=(",", ":"))

    @classmethod
    def from_list(cls, data) -> "CayleyPath":
        return cls(tuple(TraceWord.from_list(w) for w in data))


@dataclass(frozen=True)
class LabeledPartition:
    """A pair partition with one vertex of G per block (aligned with ``partition.blocks``)."""

    partition: PairPartition
    labeling: tuple[int, ...]

    def label_of(self, block: tuple[int, int]) -> int:
        return self.labeling[self.partition.blocks.index(block)]

    def is_homomorphism(self, G: SimpleGraph) -> bool:
        blocks = self.partition.blocks
        for a in range(len(blocks)):
            for b in range(a + 1, len(blocks)):
                if blocks_cross(blocks[a], blocks[b]) and not G.adjacent(self.labeling[a], self.labeling[b]):
                    return False
        return True


@dataclass(frozen=True)
class FirstReturnDecomposition:
    letter: int
    start: int
    ret: int
    rest_partition: Optional[PairPartition]
    rest_labeling: tuple[int, ...]
    # rest_positions[j] is the original position of the j-th point of the contracted problem
    rest_positions: tuple[int, ...]

    @property
    def block(self) -> tuple[int, int]:
        return (self.start, self.ret)


def first_return_decomposition(lp: LabeledPartition) -> FirstReturnDecomposition:
    blocks = lp.partition.blocks
    k = min(range(len(blocks)), key=lambda j: blocks[j][1])
    s, r = blocks[k]
    kept = tuple(x for x in range(2 * len(blocks)) if x not in (s, r))
    new_pos = {x: j for j, x in enumerate(kept)}
    rest_blocks = tuple((new_pos[a], new_pos[b]) for j, (a, b) in enumerate(blocks) if j != k)
    rest_labels = tuple(lab for j, lab in enumerate(lp.labeling) if j != k)
    rest = PairPartition(rest_blocks) if rest_blocks else None
    if rest is not None:
        # PairPartition re-sorts blocks; keep labels aligned with that order
        order = {b: lab for b, lab in zip(rest_blocks, rest_labels)}
        rest_labels = tuple(order[b] for b in rest.blocks)
    return FirstReturnDecomposition(lp.labeling[k], s, r, rest, rest_labels, kept)


# Phi and its inverse


def phi(lp: LabeledPartition, G: SimpleGraph, check: bool = True) -> CayleyPath:
    """Map a homomorphism-labeled pair partition to a closed Cayley walk.

    Peels the first-returning block, maps the contracted partition, then
    prepends the peeled letter on the steps strictly inside the block.
    """
    if check and not lp.is_homomorphism(G):
        raise ValueError("labeling is not a homomorphism from the intersection graph")
    return CayleyPath(tuple(_phi_words(lp, monoid_for(G))))


def _phi_words(lp: LabeledPartition, M: TraceMonoid) -> list[TraceWord]:
    d = first_return_decomposition(lp)
    s, r, a = d.start, d.ret, d.letter
    if d.rest_partition is None:
        u = {}
    else:
        inner = _phi_words(LabeledPartition(d.rest_partition, d.rest_labeling), M)
        u = dict(zip(d.rest_positions, inner))

    def u_at(k: int) -> TraceWord:
        # latest contracted position at or before k (positions s, r are absent)
        while k >= 0 and k not in u:
            k -= 1
        return EMPTY if k < 0 else u[k]

    n = 2 * lp.partition.p
    out: list[TraceWord] = []
    for k in range(n):
        if k < s or k > r:
            out.append(u[k])
        elif k == s:
            out.append(M.left_multiply(a, u_at(s - 1)))
        elif k < r:
            out.append(M.left_multiply(a, u[k]))
        else:
            out.append(u_at(r - 1))
    return out


def phi_direct(lp: LabeledPartition, G: SimpleGraph) -> CayleyPath:
    """Closed-form image: after step k, the open blocks' letters, newest first."""
    M = monoid_for(G)
    words = []
    for k in range(2 * lp.partition.p):
        open_blocks = sorted(
            ((s, lab) for (s, r), lab in zip(lp.partition.blocks, lp.labeling) if s <= k < r), reverse=True
        )
        words.append(M.normalize([lab for _, lab in open_blocks]))
    return CayleyPath(tuple(words))


def _step_letter(M: TraceMonoid, longer: TraceWord, shorter: TraceWord) -> Optional[int]:
    for v in sorted(M.removable_letters(longer)):
        if M.left_divide(v, longer) == shorter:
            return v
    return None


def validate_path(path: CayleyPath, G: SimpleGraph) -> None:
    M = monoid_for(G)
    if len(path.words) % 2 or not path.words or path.words[-1] != EMPTY:
        raise MalformedPath("a closed walk has even positive length and ends at e")
    for k, w in enumerate(path.words):
        if not M.is_normal_form(w):
            raise MalformedPath(f"step {k}: {w} is not in Foata normal form for this graph")
        prev = path.at(k - 1)
        if abs(w.length - prev.length) != 1:
            raise MalformedPath(f"step {k}: lengths {prev.length} -> {w.length} do not differ by one")
        longer, shorter = (w, prev) if w.length > prev.length else (prev, w)
        if _step_letter(M, longer, shorter) is None:
            raise MalformedPath(f"step {k}: {prev} and {w} are not adjacent in the Cayley graph")


def phi_inverse(path: CayleyPath, G: SimpleGraph, check: bool = True) -> LabeledPartition:
    if check:
        validate_path(path, G)
    M = monoid_for(G)
    blocks, labels = _phi_inverse(list(path.words), M)
    pi = PairPartition(tuple(blocks))
    by_block = dict(zip((tuple(b) for b in blocks), labels))
    return LabeledPartition(pi, tuple(by_block[b] for b in pi.blocks))


def _phi_inverse(words: list[TraceWord], M: TraceMonoid) -> tuple[list[tuple[int, int]], list[int]]:
    if not words:
        return [], []
    at = lambda k: EMPTY if k < 0 else words[k]  # noqa: E731
    r = next(k for k in range(len(words)) if words[k].length < at(k - 1).length)
    letter = _step_letter(M, at(r - 1), words[r])
    # every step before r is an up step; find the letter added at each
    added = [_step_letter(M, words[q], at(q - 1)) for q in range(r)]
    if letter is None or any(x is None for x in added):
        raise MalformedPath("path is not a walk in the Cayley graph")
    try:
        s = max(q for q in range(r) if added[q] == letter)
    except ValueError:
        raise MalformedPath(f"letter {letter} removed at step {r} was never added") from None
    contracted = []
    positions = []
    for k in range(len(words)):
        if k in (s, r):
            continue
        if s < k < r:
            u = M.left_divide(letter, words[k])
            if u is None:
                raise MalformedPath(f"letter {letter} cannot be stripped at step {k}")
        else:
            u = words[k]
        contracted.append(u)
        positions.append(k)
    inner_blocks, inner_labels = _phi_inverse(contracted, M)
    blocks = [(s, r)] + [(positions[a], positions[b]) for a, b in inner_blocks]
    return blocks, [letter] + inner_labels


def enumerate_labeled_partitions(G: SimpleGraph, p: int) -> Iterator[LabeledPartition]:
    """All of Pi_2p(G): pair partitions with a homomorphism labeling of their blocks."""
    for pi in enumerate_pair_partitions(p):
        F = intersection_graph(pi).underlying
        for labeling in iter_homomorphisms(F, G):
            yield LabeledPartition(pi, labeling)


def dyck_of_path(path: CayleyPath) -> DyckPath:
    lengths = (0,) + path.lengths()
    return DyckPath(tuple(1 if b > a else -1 for a, b in zip(lengths, lengths[1:])))


# walk counting


@dataclass(frozen=True)
class WalkCountTable:
    counts: tuple[int, ...]  # counts[p] = |P_2p(G)|, counts[0] = 1

    def to_dict(self) -> dict[str, str]:
        return {str(p): str(c) for p, c in enumerate(self.counts)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))


def _check_walk_p(p: int) -> None:
    if not 0 <= p <= MAX_WALK_P:
        raise ValueError(f"p must be in 0..{MAX_WALK_P}, got {p}")


def walk_count_table(G: SimpleGraph, p_max: int, guard: int = DEFAULT_BALL_GUARD) -> WalkCountTable:
    """Exact closed-walk counts for every p <= p_max from one DP on the radius-p_max ball.

    A walk of length 2p that returns to e never leaves the radius-p ball, so
    truncating at radius p_max loses nothing for any p <= p_max.
    """
    _check_walk_p(p_max)
    ball = monoid_for(G).ball(p_max, guard)
    down = ball.down()
    vec = [0] * len(ball)
    vec[0] = 1
    counts = [1]
    for t in range(1, 2 * p_max + 1):
        # only words that can still get home in the remaining steps matter
        cap = min(t, 2 * p_max - t)
        new = [0] * len(ball)
        for i in range(ball.level_start[cap + 1]):
            total = 0
            for _, j in down[i]:
                total += vec[j]
            for _, j in ball.up[i]:
                total += vec[j]
            new[i] = total
        vec = new
        if t % 2 == 0:
            counts.append(vec[0])
    return WalkCountTable(tuple(counts))


def closed_walk_count(G: SimpleGraph, p: int, guard: int = DEFAULT_BALL_GUARD) -> int:
    _check_walk_p(p)
    return walk_count_table(G, p, guard).counts[p]


def spectral_lower_bounds(G: SimpleGraph, p_max: int, guard: int = DEFAULT_BALL_GUARD) -> list[float]:
    """``|P_2p(G)|^(1/2p)`` for p = 1..p_max; each entry is a lower bound on the Cayley norm."""
    counts = walk_count_table(G, p_max, guard).counts
    return [math.exp(math.log(counts[p]) / (2 * p)) for p in range(1, p_max + 1)]


def ball_adjacency(ball: Ball) -> sp.csr_matrix:
    rows, cols = [], []
    for i, succ in enumerate(ball.up):
        for _, j in succ:
            rows += (i, j)
            cols += (j, i)
    n = len(ball)
    return sp.csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))


def spectral_power_estimate(
    G: SimpleGraph, radius: int, tol: float = 1e-10, max_iter: int = 100_000, guard: int = DEFAULT_BALL_GUARD
) -> float:
    """Top eigenvalue of the Cayley adjacency compressed to the radius-R ball.

    Power iteration on ``A^2`` (the compression is bipartite by word-length
    parity, so ``A`` itself has a symmetric spectrum). Every iterate's
    Rayleigh quotient is a lower bound on the true Cayley norm.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    A = ball_adjacency(monoid_for(G).ball(radius, guard))
    if A.nnz == 0:
        return 0.0
    x = np.ones(A.shape[0])
    x /= np.linalg.norm(x)
    est_old = 0.0
    for _ in range(max_iter):
        y = A @ x
        est = math.sqrt(float(y @ y))  # sqrt of <A^2 x, x> for unit x
        x = A @ y
        x /= np.linalg.norm(x)
        if abs(est - est_old) <= tol * max(1.0, est):
            return est
        est_old = est
    raise RuntimeError(f"power iteration did not reach tol={tol} in {max_iter} iterations (last {est_old})")


# labeled path sets


def enumerate_labeled_paths(
    G: SimpleGraph, eps: DyckPath, up_labels: Sequence[int] | Mapping[int, int]
) -> list[CayleyPath]:
    """Every closed walk with Dyck shape ``eps`` whose up steps add the given letters.

    ``up_labels`` is either a sequence (one letter per up step, in order) or a
    map from up-step position to letter. Down steps branch over the removable
    letters in ascending order.
    """
    ups = eps.up_steps
    if isinstance(up_labels, Mapping):
        labels = {k: up_labels[k] for k in ups}
    else:
        if len(up_labels) != len(ups):
            raise ValueError(f"need {len(ups)} up labels, got {len(up_labels)}")
        labels = dict(zip(ups, up_labels))
    M = monoid_for(G)
    out: list[CayleyPath] = []
    steps = eps.steps

    def rec(k: int, current: TraceWord, acc: list[TraceWord]) -> None:
        if k == len(steps):
            out.append(CayleyPath(tuple(acc)))
            return
        if steps[k] == 1:
            nxt = M.left_multiply(labels[k], current)
            rec(k + 1, nxt, acc + [nxt])
            return
        for v in sorted(M.removable_letters(current)):
            nxt = M.left_divide(v, current)
            rec(k + 1, nxt, acc + [nxt])

    rec(0, EMPTY, [])
    return out


@dataclass(frozen=True)
class PathCountReport:
    count: int
    clique_product: int
    p_factorial: int

    @property
    def bound(self) -> int:
        return min(self.clique_product, self.p_factorial)

    @property
    def holds(self) -> bool:
        return self.count <= self.bound


def verify_path_count_bound(G: SimpleGraph, eps: DyckPath, up_labels: Sequence[int]) -> PathCountReport:
    paths = enumerate_labeled_paths(G, eps, up_labels)
    c_star = clique_report(G).per_vertex
    prod = 1
    for x in up_labels:
        prod *= c_star[x]
    report = PathCountReport(len(paths), prod, factorial(eps.p))
    assert report.holds, f"labeled path bound violated: {report}"
    return report


def iter_up_labelings(G: SimpleGraph, p: int) -> Iterator[tuple[int, ...]]:
    return product(range(G.n), repeat=p)
