"""Brute-force reference implementations, deliberately independent of the package internals."""

from __future__ import annotations

from itertools import combinations, product
from math import comb, factorial

import numpy as np


def edge_set(G):
    return {frozenset(e) for e in G.edges}


def brute_cliques(G):
    E = edge_set(G)
    for k in range(G.n, 0, -1):
        for S in combinations(range(G.n), k):
            if all(frozenset(pair) in E for pair in combinations(S, 2)):
                yield S


def brute_clique_number(G):
    return max((len(S) for S in brute_cliques(G)), default=0)


def brute_c_star(G):
    best = [1] * G.n
    for S in brute_cliques(G):
        for v in S:
            best[v] = max(best[v], len(S))
    return best


def brute_chromatic(G):
    E = [tuple(e) for e in G.edges]
    for k in range(1, G.n + 1):
        for col in product(range(k), repeat=G.n):
            if all(col[u] != col[v] for u, v in E):
                return k
    return 0


def brute_hom(F, G):
    E = edge_set(G)
    return sum(
        all(frozenset((phi[u], phi[v])) in E for u, v in F.edges)
        for phi in product(range(G.n), repeat=F.n)
    )


def brute_pairings(points):
    if not points:
        yield ()
        return
    a = points[0]
    for j in range(1, len(points)):
        rest = points[1:j] + points[j + 1:]
        for m in brute_pairings(rest):
            yield ((a, points[j]),) + m


def crosses(b1, b2):
    (a, b), (c, d) = sorted([b1, b2])
    return a < c < b < d


def catalan_rec(n):
    c = [1]
    for m in range(n):
        c.append(sum(c[i] * c[m - i] for i in range(m + 1)))
    return c[n]


def classical_semicircle_sum_moment(L, p):
    """E[(X_1+...+X_L)^{2p}] for independent standard semicircles, by multinomial expansion."""
    total = 0
    for ks in product(range(0, 2 * p + 1, 2), repeat=L):
        if sum(ks) != 2 * p:
            continue
        coef = factorial(2 * p)
        moment = 1
        for k in ks:
            coef //= factorial(k)
            moment *= catalan_rec(k // 2)
        total += coef * moment
    return total


def multiset_count(L, k):
    return comb(L + k - 1, k)


def adjacency_top_eigenvalue(G):
    A = np.zeros((G.n, G.n))
    for u, v in G.edges:
        A[u, v] = A[v, u] = 1
    return float(np.linalg.eigvalsh(A)[-1]) if G.n else 0.0


# Trace monoid oracle via projections: two letter sequences are equivalent iff
# their projections onto every pair of non-commuting letters coincide.


def projection_signature(G, letters):
    E = edge_set(G)
    sig = []
    for a in range(G.n):
        for b in range(a, G.n):
            if a == b or frozenset((a, b)) not in E:
                sig.append(tuple(x for x in letters if x in (a, b)))
    return tuple(sig)


def brute_closed_walks(G, p):
    """Count closed walks of length 2p from e in the Cayley graph, words as projection signatures."""
    E = edge_set(G)
    pairs = [(a, b) for a in range(G.n) for b in range(a, G.n) if a == b or frozenset((a, b)) not in E]

    def mult(v, sig):
        return tuple((v,) + s if v in pr else s for pr, s in zip(pairs, sig))

    def div(v, sig):
        out = []
        for pr, s in zip(pairs, sig):
            if v in pr:
                if not s or s[0] != v:
                    return None
                out.append(s[1:])
            else:
                out.append(s)
        return tuple(out)

    empty = tuple(() for _ in pairs)
    from functools import lru_cache

    @lru_cache(maxsize=None)
    def count(sig, steps):
        depth = sum(len(s) for pr, s in zip(pairs, sig) if pr[0] == pr[1])
        if depth > steps:
            return 0
        if steps == 0:
            return 1
        total = 0
        for v in range(G.n):
            total += count(mult(v, sig), steps - 1)
            d = div(v, sig)
            if d is not None:
                total += count(d, steps - 1)
        return total

    return count(empty, 2 * p)
