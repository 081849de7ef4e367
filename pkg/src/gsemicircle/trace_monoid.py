"""Trace monoid of a commutation graph, with words kept in Foata normal form.

A word is stored as its sequence of cliques ``(c_1, ..., c_h)``: every letter
sits in the clique whose index is one more than the deepest earlier letter it
does not commute with. Two letter sequences represent the same monoid element
iff they produce the same clique sequence, so equality and hashing are plain
tuple comparisons.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from .graphs import SimpleGraph, _bits

MAX_BALL_RADIUS = 64
DEFAULT_BALL_GUARD = 10**7


class BallTooLarge(ValueError):
    def __init__(self, reached: int, guard: int):
        super().__init__(f"trace-word ball exceeds the guard of {guard} words (reached {reached})")
        self.reached = reached
        self.guard = guard


@dataclass(frozen=True, order=True)
class TraceWord:
    cliques: tuple[tuple[int, ...], ...] = ()

    @property
    def length(self) -> int:
        return sum(len(c) for c in self.cliques)

    def __len__(self) -> int:
        return self.length

    @property
    def height(self) -> int:
        return len(self.cliques)

    def letters(self) -> tuple[int, ...]:
        return tuple(x for c in self.cliques for x in c)

    def to_list(self) -> list[list[int]]:
        return [list(c) for c in self.cliques]

    def to_json(self) -> str:
        return json.dumps(self.to_list(), separators=(",", ":"))

    @classmethod
    def from_list(cls, data: Iterable[Iterable[int]]) -> "TraceWord":
        return cls(tuple(tuple(c) for c in data))

    def __str__(self) -> str:
        if not self.cliques:
            return "e"
        return "".join("[" + ",".join(map(str, c)) + "]" for c in self.cliques)


EMPTY = TraceWord()


class TraceMonoid:
    """Word arithmetic in the trace monoid of ``graph``, memoised per instance."""

    def __init__(self, graph: SimpleGraph):
        self.graph = graph
        # letters that do NOT commute with v: non-neighbours, v itself included
        self._blockers = tuple(graph.full_mask & ~graph.nbrs[v] for v in range(graph.n))
        self._mult: dict[tuple[int, TraceWord], TraceWord] = {}
        self._div: dict[tuple[int, TraceWord], Optional[TraceWord]] = {}

    def check_letter(self, v: int) -> None:
        if not 0 <= v < self.graph.n:
            raise ValueError(f"letter {v} outside 0..{self.graph.n - 1}")

    def normalize(self, letters: Sequence[int]) -> TraceWord:
        level = [0] * self.graph.n
        cliques: list[list[int]] = []
        for x in letters:
            self.check_letter(x)
            depth = 0
            for u in _bits(self._blockers[x]):
                if level[u] > depth:
                    depth = level[u]
            level[x] = depth + 1
            if depth == len(cliques):
                cliques.append([x])
            else:
                cliques[depth].append(x)
        return TraceWord(tuple(tuple(sorted(c)) for c in cliques))

    def left_multiply(self, v: int, w: TraceWord) -> TraceWord:
        key = (v, w)
        out = self._mult.get(key)
        if out is None:
            out = self.normalize((v,) + w.letters())
            self._mult[key] = out
        return out

    def left_divide(self, v: int, w: TraceWord) -> Optional[TraceWord]:
        """``w'`` with ``w = v w'``, or ``None`` when ``v`` is not a left factor."""
        key = (v, w)
        if key in self._div:
            return self._div[key]
        out = None
        if w.cliques and v in w.cliques[0]:
            first = tuple(x for x in w.cliques[0] if x != v)
            rest = first + tuple(x for c in w.cliques[1:] for x in c)
            out = self.normalize(rest)
        self._div[key] = out
        return out

    def removable_letters(self, w: TraceWord) -> frozenset[int]:
        return frozenset(w.cliques[0]) if w.cliques else frozenset()

    def is_normal_position(self, c: Sequence[int], c_next: Sequence[int]) -> bool:
        for clique in (c, c_next):
            if not self.graph.is_clique(clique):
                raise ValueError(f"{list(clique)} is not a clique of the graph")
        mask = 0
        for x in c:
            mask |= 1 << x
        return all(self._blockers[y] & mask for y in c_next)

    def is_normal_form(self, w: TraceWord) -> bool:
        if any(not self.graph.is_clique(c) or list(c) != sorted(c) or not c for c in w.cliques):
            return False
        return all(self.is_normal_position(a, b) for a, b in zip(w.cliques, w.cliques[1:]))

    def ball(self, radius: int, guard: int = DEFAULT_BALL_GUARD) -> "Ball":
        return _ball_for(self, radius, guard)


@dataclass
class Ball:
    """All words of length <= radius, indexed by (length, normal form); index 0 is e.

    ``up[i]`` lists ``(letter, j)`` with ``words[j] = letter * words[i]`` for
    words shorter than the radius; the down-edges are the reverse relation.
    """

    graph: SimpleGraph
    radius: int
    words: list[TraceWord]
    index: dict[TraceWord, int]
    level_start: list[int]
    up: list[list[tuple[int, int]]]

    def __len__(self) -> int:
        return len(self.words)

    def level(self, k: int) -> range:
        return range(self.level_start[k], self.level_start[k + 1])

    def down(self) -> list[list[tuple[int, int]]]:
        out: list[list[tuple[int, int]]] = [[] for _ in self.words]
        for i, succ in enumerate(self.up):
            for v, j in succ:
                out[j].append((v, i))
        return out


def _ball_for(monoid: TraceMonoid, radius: int, guard: int) -> Ball:
    if not 0 <= radius <= MAX_BALL_RADIUS:
        raise ValueError(f"radius must be in 0..{MAX_BALL_RADIUS}, got {radius}")
    words = [EMPTY]
    level_start = [0, 1]
    frontier = [EMPTY]
    successors: list[list[tuple[int, TraceWord]]] = []
    for _ in range(radius):
        nxt: set[TraceWord] = set()
        for w in frontier:
            succ = [(v, monoid.left_multiply(v, w)) for v in range(monoid.graph.n)]
            successors.append(succ)
            nxt.update(u for _, u in succ)
            if len(words) + len(nxt) > guard:
                raise BallTooLarge(len(words) + len(nxt), guard)
        frontier = sorted(nxt)
        words.extend(frontier)
        level_start.append(len(words))
    index = {w: i for i, w in enumerate(words)}
    up = [[(v, index[u]) for v, u in succ] for succ in successors]
    up.extend([] for _ in range(len(words) - len(up)))
    return Ball(monoid.graph, radius, words, index, level_start, up)


# functional surface: one memoised monoid per graph


@lru_cache(maxsize=64)
def monoid_for(G: SimpleGraph) -> TraceMonoid:
    return TraceMonoid(G)


def normalize(letters: Sequence[int], G: SimpleGraph) -> TraceWord:
    return monoid_for(G).normalize(letters)


def is_normal_position(c: Sequence[int], c_next: Sequence[int], G: SimpleGraph) -> bool:
    return monoid_for(G).is_normal_position(c, c_next)


def left_multiply(v: int, w: TraceWord, G: SimpleGraph) -> TraceWord:
    m = monoid_for(G)
    m.check_letter(v)
    return m.left_multiply(v, w)


def left_divide(v: int, w: TraceWord, G: SimpleGraph) -> Optional[TraceWord]:
    m = monoid_for(G)
    m.check_letter(v)
    return m.left_divide(v, w)


def removable_letters(w: TraceWord, G: SimpleGraph) -> frozenset[int]:
    return monoid_for(G).removable_letters(w)


def first_clique_size(w: TraceWord) -> int:
    return len(w.cliques[0]) if w.cliques else 0


def enumerate_ball(G: SimpleGraph, radius: int, guard: int = DEFAULT_BALL_GUARD) -> Ball:
    return monoid_for(G).ball(radius, guard)


def word(G: SimpleGraph, *letters: int) -> TraceWord:
    """Shorthand: the normal form of a letter sequence."""
    return normalize(letters, G)
