"""Command-line front end: ``gsemicircle <command> --graph SOURCE [options]``.

Every run produces one self-describing report (config echo, results,
falsifications, errors). JSON reports carry a hash of everything except the
timings block, so identical configs can be compared byte for byte.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
import tempfile
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Optional

import numpy as np

from . import __version__
from .cayley import (
    enumerate_labeled_partitions,
    phi,
    phi_inverse,
    spectral_lower_bounds,
    spectral_power_estimate,
    walk_count_table,
)
from .corpus import NamedGraph, parse_graph_source
from .fock import (
    ConvergenceError,
    build_fock_basis,
    check_operator_khintchine,
    number_like_operator,
    operator_norm,
    random_hermitian_coefficients,
    semicircle_sum,
    vacuum_moment,
)
from .graphs import GraphError, clique_report
from .moments import (
    BoundReport,
    check_scalar_khintchine,
    extremal_sweep,
    khintchine_rhs_scalar,
    minimizer_interval,
    moment_unweighted,
    suboptimal_bounds,
)
from .trace_monoid import DEFAULT_BALL_GUARD, BallTooLarge

SCHEMA_VERSION = 1
COMMANDS = ("moment", "walks", "norm", "bijection-verify", "khintchine-verify", "fock", "bounds", "extremal-sweep")
THREADS_ENV = "GSEMICIRCLE_THREADS"

# guards, all in one place
MAX_P_CORPUS = 6
MAX_P_SINGLE = 10
MAX_SWEEP_VERTICES = 8
BALL_GUARD = DEFAULT_BALL_GUARD


@dataclass
class ExperimentConfig:
    command: str
    graph: str
    p_max: int = 4
    radius: Optional[int] = None
    tol: float = 1e-10
    seed: int = 0
    samples: int = 100
    output: Optional[str] = None
    format: str = "json"

    def validate(self, graphs: list[NamedGraph]) -> None:
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.format not in ("json", "csv"):
            raise ValueError(f"format must be json or csv, got {self.format!r}")
        if self.p_max < 1:
            raise ValueError("p-max must be at least 1")
        limit = MAX_P_CORPUS if len(graphs) > 1 else MAX_P_SINGLE
        if self.p_max > limit:
            raise ValueError(f"p-max {self.p_max} exceeds the limit {limit} for this graph source")
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.radius is not None and self.radius < 0:
            raise ValueError("radius must be non-negative")
        if self.command == "extremal-sweep" and any(g.graph.n > MAX_SWEEP_VERTICES for g in graphs):
            raise ValueError(f"extremal sweeps are limited to {MAX_SWEEP_VERTICES} vertices")


@dataclass
class RunReport:
    config: dict
    results: list = field(default_factory=list)
    falsifications: list = field(default_factory=list)
    errors: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)

    def payload(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "tool": "gsemicircle",
            "version": __version__,
            "config": self.config,
            "results": _jsonable(self.results),
            "falsifications": _jsonable(self.falsifications),
            "errors": _jsonable(self.errors),
        }

    def payload_bytes(self) -> bytes:
        return json.dumps(self.payload(), sort_keys=True, separators=(",", ":")).encode()

    def payload_hash(self) -> str:
        return hashlib.sha256(self.payload_bytes()).hexdigest()

    @property
    def exit_status(self) -> int:
        if self.errors:
            return 2
        return 1 if self.falsifications else 0

    def to_json(self) -> str:
        doc = dict(self.payload())
        doc["payload_sha256"] = self.payload_hash()
        doc["timings"] = self.timings
        return json.dumps(doc, sort_keys=True, indent=1) + "\n"

    def to_csv(self) -> str:
        rows = [r for r in self.results if isinstance(r, dict)]
        columns = ["command", "seed", "graph_id", "p"]
        for r in rows:
            for key in r:
                if key not in columns:
                    columns.append(key)
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=columns, quoting=csv.QUOTE_MINIMAL, lineterminator="\r\n")
        writer.writeheader()
        for r in rows:
            flat = {k: _csv_cell(v) for k, v in _jsonable(r).items()}
            flat.setdefault("command", self.config["command"])
            flat.setdefault("seed", str(self.config["seed"]))
            writer.writerow(flat)
        return buf.getvalue()


def _jsonable(x: Any) -> Any:
    """Exact integers and fractions become decimal strings; numpy scalars become floats."""
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (float, np.floating)):
        return float(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, BoundReport):
        return _jsonable(x.to_dict())
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _csv_cell(v: Any) -> str:
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True, separators=(",", ":"))
    return "" if v is None else str(v)


def write_atomic(path: str | Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# commands


def _cmd_moment(ng: NamedGraph, cfg: ExperimentConfig, fals: list) -> list[dict]:
    G = ng.graph
    walks = walk_count_table(G, cfg.p_max, BALL_GUARD).counts
    alpha = [1 / math.sqrt(G.n)] * G.n
    rows = []
    for p in range(1, cfg.p_max + 1):
        m = moment_unweighted(G, p)
        norm = Fraction(m, G.n**p)
        identity = BoundReport(m, walks[p], "moment_equals_walk_count")
        if m != walks[p]:
            fals.append({"graph_id": ng.name, "p": p, **identity.to_dict()})
        lhs = float(norm) ** (1 / (2 * p))
        bound = BoundReport(lhs, khintchine_rhs_scalar(G, p, alpha), "scalar_khintchine_normalized")
        rows.append({
            "graph_id": ng.name, "p": p, "moment": m, "normalized_moment": norm,
            "closed_walk_count": walks[p], "identity_slack": walks[p] - m,
            "bound_which": bound.which, "bound_rhs": bound.rhs, "bound_slack": bound.slack,
        })
        if not bound.holds:
            fals.append({"graph_id": ng.name, **bound.to_dict()})
    return rows


def _cmd_walks(ng: NamedGraph, cfg: ExperimentConfig, fals: list) -> list[dict]:
    table = walk_count_table(ng.graph, cfg.p_max, BALL_GUARD)
    lower = spectral_lower_bounds(ng.graph, cfg.p_max, BALL_GUARD)
    return [{"graph_id": ng.name, "p": p, "closed_walk_count": table.counts[p], "norm_lower_bound": lower[p - 1]}
            for p in range(1, cfg.p_max + 1)]


def _cmd_norm(ng: NamedGraph, cfg: ExperimentConfig, fals: list) -> list[dict]:
    G = ng.graph
    omega = clique_report(G).omega
    upper = 2 * math.sqrt(omega * G.n)
    rows = []
    for p, lb in enumerate(spectral_lower_bounds(G, cfg.p_max, BALL_GUARD), 1):
        rep = BoundReport(lb, upper, "walk_count_lower_vs_clique_upper")
        rows.append({"graph_id": ng.name, "p": p, "estimate": "walk_count", "lower_bound": lb,
                     "normalized_lower_bound": lb / math.sqrt(G.n), "upper_bound": upper,
                     "which": rep.which, "slack": rep.slack})
        if not rep.holds:
            fals.append({"graph_id": ng.name, "p": p, **rep.to_dict()})
    radius = cfg.radius if cfg.radius is not None else cfg.p_max
    est = spectral_power_estimate(G, radius, cfg.tol, guard=BALL_GUARD)
    rep = BoundReport(est, upper, "compression_lower_vs_clique_upper")
    rows.append({"graph_id": ng.name, "p": None, "estimate": f"compression_radius_{radius}", "lower_bound": est,
                 "normalized_lower_bound": est / math.sqrt(G.n), "upper_bound": upper,
                 "which": rep.which, "slack": rep.slack})
    if not rep.holds:
        fals.append({"graph_id": ng.name, **rep.to_dict()})
    return rows


def _cmd_bijection(ng: NamedGraph, cfg: ExperimentConfig, fals: list) -> list[dict]:
    G = ng.graph
    walks = walk_count_table(G, cfg.p_max, BALL_GUARD).counts
    rows = []
    for p in range(1, cfg.p_max + 1):
        image = set()
        domain = 0
        problems = 0
        for lp in enumerate_labeled_partitions(G, p):
            domain += 1
            path = phi(lp, G, check=False)
            image.add(path)
            lengths = (0,) + path.lengths()
            rule = all(lengths[s + 1] == lengths[s] + 1 and lengths[r + 1] == lengths[r] - 1
                       for s, r in lp.partition.blocks)
            if not rule or phi_inverse(path, G, check=False) != lp:
                problems += 1
        ok = problems == 0 and len(image) == domain == walks[p]
        if not ok:
            fals.append({"graph_id": ng.name, "p": p, "which": "phi_bijection", "domain": domain,
                         "image": len(image), "walks": walks[p], "problems": problems})
        rows.append({"graph_id": ng.name, "p": p, "labeled_partitions": domain, "distinct_images": len(image),
                     "closed_walk_count": walks[p], "which": "phi_bijection", "slack": walks[p] - len(image),
                     "holds": ok})
    return rows


def _cmd_khintchine(ng: NamedGraph, cfg: ExperimentConfig, fals: list) -> list[dict]:
    G = ng.graph
    rng = np.random.default_rng([cfg.seed, G.n, len(G.edges)])
    rows = []
    for p in range(1, cfg.p_max + 1):
        worst = None
        for k in range(cfg.samples):
            alpha = list(rng.uniform(-1, 1, G.n))
            rep = check_scalar_khintchine(G, p, alpha)
            if not rep.holds:
                fals.append({"graph_id": ng.name, "p": p, "sample": k, "alpha": alpha, **rep.to_dict()})
            if worst is None or rep.slack / max(1.0, rep.rhs) < worst.slack / max(1.0, worst.rhs):
                worst = rep
        rows.append({"graph_id": ng.name, "p": p, "samples": cfg.samples, "which": worst.which,
                     "worst_lhs": worst.lhs, "worst_rhs": worst.rhs, "worst_slack": worst.slack})
    return rows


def _cmd_fock(ng: NamedGraph, cfg: ExperimentConfig, fals: list) -> list[dict]:
    G = ng.graph
    radius = cfg.radius if cfg.radius is not None else max(cfg.p_max, clique_report(G).omega)
    basis = build_fock_basis(G, radius, BALL_GUARD)
    S = semicircle_sum(basis)
    rows = []
    for p in range(1, min(cfg.p_max, radius) + 1):
        vac = vacuum_moment(S, 2 * p, basis)
        m = moment_unweighted(G, p)
        rep = BoundReport(vac, m, "vacuum_moment_equals_moment")
        if vac != m:
            fals.append({"graph_id": ng.name, "p": p, **rep.to_dict()})
        rows.append({"graph_id": ng.name, "p": p, "vacuum_moment": vac, "moment": m, "which": rep.which,
                     "slack": m - vac})
    omega = clique_report(G).omega
    n_norm = operator_norm(number_like_operator(basis))
    ok = radius < omega or n_norm == omega
    rows.append({"graph_id": ng.name, "p": None, "which": "first_clique_operator_norm", "value": n_norm,
                 "omega": omega, "radius": radius, "holds": ok})
    if not ok:
        fals.append({"graph_id": ng.name, "which": "first_clique_operator_norm", "value": n_norm, "omega": omega})
    for k in range(cfg.samples):
        d = 2 + k % 2
        coeffs = random_hermitian_coefficients(G.n, d, seed=cfg.seed * 1_000_003 + k)
        rep = check_operator_khintchine(coeffs, G, tol=1e-6, basis=basis)
        rec = {"graph_id": ng.name, "p": None, "sample": k, **rep.to_dict()}
        rows.append(rec)
        if not rep.holds:
            fals.append(rec)
    return rows


def _cmd_bounds(ng: NamedGraph, cfg: ExperimentConfig, fals: list) -> list[dict]:
    G = ng.graph
    b = suboptimal_bounds(G)
    row = {"graph_id": ng.name, "p": None, **b}
    rep = BoundReport(b["sharp_clique"], b["adjacency_eigenvalue"], "sharp_below_adjacency_bound")
    row["which"], row["slack"] = rep.which, rep.slack
    if not rep.holds:
        fals.append({"graph_id": ng.name, **rep.to_dict()})
    omega = b["omega"]
    if G.n % omega == 0:
        row["turan_norm"] = 2 * math.sqrt(omega)
    lo, hi = minimizer_interval(G.n, omega)
    row["minimizer_interval_low"], row["minimizer_interval_high"] = lo, hi
    return [row]


def _cmd_sweep(ng: NamedGraph, cfg: ExperimentConfig, fals: list) -> list[dict]:
    G = ng.graph
    omega = clique_report(G).omega
    p_max = min(cfg.p_max, 4)
    table = extremal_sweep(G.n, omega, p_max)
    rows = []
    for k, r in enumerate(table.rows):
        rows.append({
            "graph_id": f"L{G.n}_w{omega}_#{k}", "p": None,
            "edges": " ".join(f"{u}-{v}" for u, v in r["edges"]), "num_edges": r["num_edges"],
            **{f"moment_p{p}": r["moments"][p] for p in r["moments"]},
            **{f"normalized_p{p}": r["normalized"][p] for p in r["normalized"]},
            "norm_lower_bounds": r["norm_lower_bounds"],
            "is_turan": k == table.turan_index, "is_minimizer": k == table.minimizer_index,
            "argmax_of": " ".join(str(p) for p in table.max_rows if k in table.max_rows[p]),
            "argmin_of": " ".join(str(p) for p in table.min_rows if k in table.min_rows[p]),
        })
    for p in range(1, p_max + 1):
        if table.turan_index is not None and not table.turan_is_argmax(p):
            fals.append({"which": "turan_maximizes_moment", "p": p, "L": G.n, "omega": omega})
        if not table.minimizer_is_argmin(p):
            fals.append({"which": "minimizer_minimizes_moment", "p": p, "L": G.n, "omega": omega})
    return rows


HANDLERS: dict[str, Callable[[NamedGraph, ExperimentConfig, list], list[dict]]] = {
    "moment": _cmd_moment,
    "walks": _cmd_walks,
    "norm": _cmd_norm,
    "bijection-verify": _cmd_bijection,
    "khintchine-verify": _cmd_khintchine,
    "fock": _cmd_fock,
    "bounds": _cmd_bounds,
    "extremal-sweep": _cmd_sweep,
}


def run(cfg: ExperimentConfig) -> RunReport:
    """Execute one configured experiment and, if requested, write its report atomically."""
    report = RunReport(config=asdict(cfg))
    started = time.perf_counter()
    try:
        graphs = parse_graph_source(cfg.graph)
        cfg.validate(graphs)
        handler = HANDLERS[cfg.command]
        for ng in graphs:
            t0 = time.perf_counter()
            report.results.extend(handler(ng, cfg, report.falsifications))
            report.timings[ng.name] = round(time.perf_counter() - t0, 6)
    except (GraphError, BallTooLarge, ConvergenceError, ValueError, RuntimeError, OSError) as exc:
        report.errors.append({"type": type(exc).__name__, "message": str(exc)})
    report.timings["total"] = round(time.perf_counter() - started, 6)
    report.timings["threads"] = os.environ.get(THREADS_ENV, "1")
    if cfg.output:
        write_atomic(cfg.output, report.to_json() if cfg.format == "json" else report.to_csv())
    return report


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gsemicircle", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--graph", required=True,
                    help="turan:L,w | minimizer:L,w | complete:L | edgeless:L | cycle:L | path:L | file:PATH | corpus")
    ap.add_argument("--p-max", type=int, default=4)
    ap.add_argument("--radius", type=int, default=None, help="truncation radius (norm, fock)")
    ap.add_argument("--tol", type=float, default=1e-10)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--samples", type=int, default=100, help="random coefficient sets per graph")
    ap.add_argument("--output", "-o", default=None, help="report path (stdout when omitted)")
    ap.add_argument("--format", choices=("json", "csv"), default="json")
    return ap


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = ExperimentConfig(
        command=args.command, graph=args.graph, p_max=args.p_max, radius=args.radius, tol=args.tol,
        seed=args.seed, samples=args.samples, output=args.output, format=args.format,
    )
    report = run(cfg)
    if not cfg.output:
        sys.stdout.write(report.to_json() if cfg.format == "json" else report.to_csv())
    for err in report.errors:
        print(f"error: {err['type']}: {err['message']}", file=sys.stderr)
    if report.falsifications:
        print(f"{len(report.falsifications)} falsification(s) recorded", file=sys.stderr)
    return report.exit_status


if __name__ == "__main__":
    raise SystemExit(main())
