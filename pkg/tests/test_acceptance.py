"""Acceptance criteria, one test per criterion.

Each test prints a single ``PASS``/``FAIL`` line with the measured quantity,
the tolerance used, and the runtime against its budget. A criterion passes
only if the check holds and the runtime stays inside the budget.
"""

from __future__ import annotations

import math
import time
from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from gsemicircle.cayley import (
    closed_walk_count,
    dyck_of_path,
    enumerate_labeled_partitions,
    enumerate_labeled_paths,
    iter_up_labelings,
    phi,
    phi_inverse,
    spectral_lower_bounds,
    spectral_power_estimate,
    validate_path,
    walk_count_table,
)
from gsemicircle.corpus import corpus
from gsemicircle.fock import (
    build_fock_basis,
    check_operator_khintchine,
    number_like_operator,
    operator_norm,
    random_hermitian_coefficients,
    semicircle_sum,
    vacuum_moment,
)
from gsemicircle.graphs import (
    add_edge,
    all_labeled_graphs,
    clique_report,
    complete_graph,
    edgeless_graph,
    minimizer_graph,
    turan_graph,
)
from gsemicircle.moments import (
    extremal_sweep,
    khintchine_rhs_scalar,
    minimizer_interval,
    moment_unweighted,
    moment_weighted,
    normalized_moment,
    weighted_moments_batch,
)
from gsemicircle.partitions import enumerate_dyck_paths
from tests.conftest import ACCEPTANCE_LINES
from tests.oracles import classical_semicircle_sum_moment

pytestmark = pytest.mark.acceptance


def labeled_graphs_upto(n):
    return [G for m in range(1, n + 1) for G in all_labeled_graphs(m)]


class Clock:
    def __init__(self, budget):
        self.budget = budget
        self.start = time.perf_counter()

    @property
    def elapsed(self):
        return time.perf_counter() - self.start


def report(number, title, ok, detail, clock):
    in_time = clock.elapsed < clock.budget
    status = "PASS" if ok and in_time else "FAIL"
    line = (f"criterion {number}: {status}  {title}  [{detail}]  "
            f"runtime {clock.elapsed:.1f}s / budget {clock.budget:.0f}s")
    print("\n" + line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line
    assert in_time, line


def test_criterion_01_master_identity():
    clock = Clock(120)
    graphs = labeled_graphs_upto(4)
    bad = []
    for G in graphs:
        walks = walk_count_table(G, 4).counts
        for p in range(1, 5):
            m = moment_unweighted(G, p)
            images = {phi(lp, G, check=False) for lp in enumerate_labeled_partitions(G, p)}
            if not (m == walks[p] == len(images)):
                bad.append((G.edges, p, m, walks[p], len(images)))
    report(1, "moment = closed walks = |Phi image|", not bad,
           f"{len(graphs)} graphs x p<=4, exact, mismatches={len(bad)}", clock)


def test_criterion_02_free_case():
    clock = Clock(1)
    got = {}
    ok = True
    for L in (1, 2, 3, 4):
        vals = [normalized_moment(edgeless_graph(L), p) for p in range(1, 6)]
        ok &= vals == [Fraction(c) for c in (1, 2, 5, 14, 42)]
        # same check through the weighted route with alpha = 1/sqrt(L)
        alpha = [1 / math.sqrt(L)] * L
        floats = [moment_weighted(edgeless_graph(L), p, alpha).value for p in range(1, 6)]
        ok &= all(abs(x - c) <= 1e-12 * c for x, c in zip(floats, (1, 2, 5, 14, 42)))
        got[L] = [str(v) for v in vals]
    report(2, "edgeless moments are Catalan", ok, f"L=1..4: {got[4]}", clock)


def test_criterion_03_k2_landmark():
    clock = Clock(1)
    K2 = complete_graph(2)
    basis = build_fock_basis(K2, 2)
    values = {
        "partitions": moment_unweighted(K2, 2),
        "walks": closed_walk_count(K2, 2),
        "fock": vacuum_moment(semicircle_sum(basis), 4, basis),
        "classical": classical_semicircle_sum_moment(2, 2),
    }
    report(3, "tau((s1+s2)^4) = 10", set(values.values()) == {10}, f"{values}", clock)


def test_criterion_04_scalar_khintchine():
    clock = Clock(300)
    worst = math.inf
    checked = 0
    failures = 0
    for k, ng in enumerate(corpus()):
        G = ng.graph
        rng = np.random.default_rng([20240, k])
        alphas = rng.normal(size=(100, G.n))
        for p in range(1, 5):
            moments = weighted_moments_batch(G, p, alphas)
            for alpha, m in zip(alphas, moments):
                lhs = max(m, 0.0) ** (1 / (2 * p))
                rhs = khintchine_rhs_scalar(G, p, alpha)
                rel = (rhs - lhs) / max(1.0, abs(rhs))
                worst = min(worst, rel)
                failures += rel < -1e-9
                checked += 1
    report(4, "scalar Khintchine bound", failures == 0,
           f"{checked} triples, worst relative slack {worst:.3e} >= -1e-9", clock)


def test_criterion_05_labeled_path_bound():
    clock = Clock(120)
    sets = 0
    violations = 0
    tight = 0
    for G in labeled_graphs_upto(4):
        c_star = clique_report(G).per_vertex
        for p in range(1, 4):
            for eps in enumerate_dyck_paths(p):
                for labels in iter_up_labelings(G, p):
                    count = len(enumerate_labeled_paths(G, eps, labels))
                    bound = min(math.prod(c_star[x] for x in labels), math.factorial(p))
                    violations += count > bound
                    tight += count == bound
                    sets += 1
    report(5, "|P^(eps)(G,i)| <= min(prod c*, p!)", violations == 0,
           f"{sets} labeled shapes, violations={violations}, tight={tight}", clock)


def test_criterion_06_bijection_properties():
    clock = Clock(120)
    problems = 0
    total = 0
    for G in labeled_graphs_upto(4):
        for p in range(1, 4):
            seen = set()
            domain = 0
            for lp in enumerate_labeled_partitions(G, p):
                domain += 1
                path = phi(lp, G)
                try:
                    validate_path(path, G)
                except ValueError:
                    problems += 1
                    continue
                lengths = (0,) + path.lengths()
                for s, r in lp.partition.blocks:
                    problems += lengths[s + 1] != lengths[s] + 1 or lengths[r + 1] != lengths[r] - 1
                problems += phi_inverse(path, G) != lp
                problems += dyck_of_path(path).steps[lp.partition.blocks[0][0]] != 1
                seen.add(path)
            problems += len(seen) != domain
            total += domain
    report(6, "Phi injective, lands in closed walks, inverse, +-1 length rule", problems == 0,
           f"{total} labeled partitions, problems={problems}", clock)


def test_criterion_07_first_clique_operator():
    clock = Clock(30)
    bad = []
    graphs = corpus()
    for ng in graphs:
        omega = clique_report(ng.graph).omega
        for radius in (omega, omega + 1):
            value = operator_norm(number_like_operator(build_fock_basis(ng.graph, radius)))
            if value != omega:
                bad.append((ng.name, radius, value))
    report(7, "||L|| = omega(G)", not bad, f"{len(graphs)} graphs, radius omega and omega+1, exact", clock)


def test_criterion_08_operator_valued_bound():
    clock = Clock(600)
    worst = math.inf
    checked = 0
    failures = 0
    for k, ng in enumerate(corpus()):
        basis = build_fock_basis(ng.graph, 6)
        for j in range(50):
            coeffs = random_hermitian_coefficients(ng.graph.n, 2 + j % 2, seed=1000 * k + j)
            rep = check_operator_khintchine(coeffs, ng.graph, tol=1e-6, basis=basis)
            worst = min(worst, rep.slack)
            failures += not rep.holds
            checked += 1
    report(8, "||sum a_i (x) s_i|| <= 2 sqrt(omega) |T|_2", failures == 0,
           f"{checked} coefficient sets (d=2,3), radius 6, worst slack {worst:.4f} >= -1e-6", clock)


def test_criterion_09_turan_tightness():
    clock = Clock(120)
    G = turan_graph(4, 2)
    target = 2 * math.sqrt(8)
    walk = spectral_lower_bounds(G, 10)
    increasing = all(a < b for a, b in zip(walk, walk[1:]))
    below = all(b <= target + 1e-9 for b in walk)
    compression = spectral_power_estimate(G, 8, 1e-10)
    basis = build_fock_basis(G, 8)
    fock = operator_norm(semicircle_sum(basis))
    ok = increasing and below and 5.0 < compression <= target + 1e-9 and abs(fock - compression) < 1e-7
    report(9, "Turan(4,2) lower bounds approach 2 sqrt(8)", ok,
           f"walk p=1..10 {walk[0]:.3f}->{walk[-1]:.3f}, radius-8 compression {compression:.4f} in (5, {target:.4f}]",
           clock)


def test_criterion_10_monotonicity():
    clock = Clock(300)
    checks = 0
    decreases = 0
    for ng in corpus():
        G = ng.graph
        base = [moment_unweighted(G, p) for p in range(1, 5)]
        for u, v in product(range(G.n), repeat=2):
            if u < v and not G.adjacent(u, v):
                H = add_edge(G, u, v)
                for p in range(1, 5):
                    decreases += moment_unweighted(H, p) < base[p - 1]
                    checks += 1
    report(10, "moments never decrease under edge addition", decreases == 0,
           f"{checks} (graph, edge, p) checks, decreases={decreases}", clock)


def test_criterion_11_extremal_sweep():
    clock = Clock(180)
    table = extremal_sweep(4, 2, 3)
    ok = all(table.turan_is_argmax(p) and table.minimizer_is_argmin(p) for p in (1, 2, 3))
    turan_row = table.rows[table.turan_index]["moments"]
    min_row = table.rows[table.minimizer_index]["moments"]
    report(11, "K_{2,2} maximizes and K2+N2 minimizes every 2p-moment", ok,
           f"{len(table.rows)} graphs with omega=2; max {list(turan_row.values())}, min {list(min_row.values())}",
           clock)


def test_criterion_12_minimizer_interval():
    clock = Clock(120)
    ok = True
    parts = []
    for L, omega in ((4, 2), (5, 2), (6, 3)):
        G = minimizer_graph(L, omega)
        lo, hi = minimizer_interval(L, omega)
        estimates = [b / math.sqrt(L) for b in spectral_lower_bounds(G, 6)]
        for radius in (4, 5, 6):
            basis = build_fock_basis(G, radius)
            estimates.append(operator_norm(semicircle_sum(basis)) / math.sqrt(L))
        best = max(estimates)
        ok &= lo - 1e-9 <= best <= hi + 1e-9
        ok &= all(e <= hi + 1e-9 for e in estimates)
        parts.append(f"({L},{omega}): {best:.4f} in [{lo:.4f}, {hi:.4f}]")
    report(12, "minimizer lower-bound estimates inside the interval", ok, "; ".join(parts), clock)
