"""Standard graph corpus and the ``kind:args`` graph-source syntax used by the CLI."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .graphs import (
    GraphError,
    SimpleGraph,
    all_labeled_graphs,
    build_graph,
    complete_graph,
    complete_multipartite,
    cycle_graph,
    edgeless_graph,
    minimizer_graph,
    path_graph,
    turan_graph,
)


@dataclass(frozen=True)
class NamedGraph:
    name: str
    graph: SimpleGraph


def _edge_mask_name(G: SimpleGraph) -> str:
    return f"L{G.n}_" + ("-".join(f"{u}{v}" for u, v in G.edges) or "empty")


def corpus() -> list[NamedGraph]:
    """All labeled graphs on 1..4 vertices, then the named extras.

    Extras that coincide with an earlier labeled graph (K_{2,2} is one of the
    64 graphs on 4 vertices, Turan(6,2) is K_{3,3}) appear once.
    """
    out: list[NamedGraph] = []
    seen: set[SimpleGraph] = set()

    def push(name: str, G: SimpleGraph) -> None:
        if G not in seen:
            seen.add(G)
            out.append(NamedGraph(name, G))

    for n in range(1, 5):
        for G in all_labeled_graphs(n):
            push(_edge_mask_name(G), G)
    push("K5", complete_graph(5))
    push("C5", cycle_graph(5))
    push("K2,2", complete_multipartite([2, 2]))
    push("K3,3", complete_multipartite([3, 3]))
    push("turan6,2", turan_graph(6, 2))
    push("turan6,3", turan_graph(6, 3))
    push("minimizer5,2", minimizer_graph(5, 2))
    push("minimizer6,3", minimizer_graph(6, 3))
    return out


def _ints(args: str, count: int, kind: str) -> list[int]:
    try:
        vals = [int(x) for x in args.split(",")]
    except ValueError:
        raise GraphError(f"{kind}: expected {count} integer argument(s), got {args!r}") from None
    if len(vals) != count:
        raise GraphError(f"{kind}: expected {count} integer argument(s), got {args!r}")
    return vals


def parse_graph_source(source: str) -> list[NamedGraph]:
    """Resolve ``turan:L,w | minimizer:L,w | complete:L | edgeless:L | cycle:L | path:L |
    file:PATH | corpus`` into named graphs."""
    if source == "corpus":
        return corpus()
    kind, _, args = source.partition(":")
    if kind == "turan":
        L, w = _ints(args, 2, kind)
        return [NamedGraph(f"turan{L},{w}", turan_graph(L, w))]
    if kind == "minimizer":
        L, w = _ints(args, 2, kind)
        return [NamedGraph(f"minimizer{L},{w}", minimizer_graph(L, w))]
    if kind == "complete":
        (L,) = _ints(args, 1, kind)
        return [NamedGraph(f"K{L}", complete_graph(L))]
    if kind == "edgeless":
        (L,) = _ints(args, 1, kind)
        return [NamedGraph(f"N{L}", edgeless_graph(L))]
    if kind == "cycle":
        (L,) = _ints(args, 1, kind)
        return [NamedGraph(f"C{L}", cycle_graph(L))]
    if kind == "path":
        (L,) = _ints(args, 1, kind)
        return [NamedGraph(f"P{L}", path_graph(L))]
    if kind == "file":
        return [NamedGraph(Path(args).stem, load_graph_file(args))]
    raise GraphError(f"unknown graph source {source!r}")


def load_graph_file(path: str | Path) -> SimpleGraph:
    path = Path(path)
    if not path.exists():
        raise GraphError(f"graph file {path} does not exist")
    text = path.read_text()
    if text.lstrip().startswith("{"):
        return SimpleGraph.from_json(text)
    return SimpleGraph.from_text(text)


def save_graph_file(G: SimpleGraph, path: str | Path) -> None:
    path = Path(path)
    path.write_text(G.to_json() if path.suffix == ".json" else G.to_text())


__all__ = ["NamedGraph", "corpus", "parse_graph_source", "load_graph_file", "save_graph_file", "build_graph"]
