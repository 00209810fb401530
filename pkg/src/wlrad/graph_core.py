"""Graph and sample data model, dataset ingestion and synthetic corpora.

Two on-disk formats are supported:

* the TU graph-classification directory layout (``<DS>_A.txt``,
  ``<DS>_graph_indicator.txt`` and optional ``<DS>_node_labels.txt`` /
  ``<DS>_graph_labels.txt``), 1-indexed and comma separated;
* a line-delimited JSON format, one graph per line::

      {"n": 3, "edges": [[0, 1], [1, 2]], "attrs": [[0.0], [1.0], [0.0]], "label": 1}

Nodes are 0-indexed internally.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

Edge = tuple[int, int]


class GraphFormatError(ValueError):
    """Malformed graph data. Carries the offending file and line when known."""

    def __init__(self, message: str, path: str | Path | None = None, line: int | None = None):
        self.path = None if path is None else str(path)
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(where + message)


@dataclass(frozen=True)
class AttributedGraph:
    """Finite simple undirected graph with optional per-node attribute vectors.

    ``edges`` is normalised to a sorted tuple of ``(u, v)`` pairs with ``u < v``.
    """

    node_count: int
    edges: tuple[Edge, ...] = ()
    attributes: tuple[tuple[float, ...], ...] | None = None

    def __post_init__(self):
        n = self.node_count
        if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 0:
            raise GraphFormatError(f"node_count must be a non-negative integer, got {n!r}")
        object.__setattr__(self, "node_count", int(n))
        seen = set()
        for e in self.edges:
            if len(e) != 2:
                raise GraphFormatError(f"edge {e!r} is not a pair")
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise GraphFormatError(f"self-loop at node {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphFormatError(f"edge ({u}, {v}) out of range for {n} nodes")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise GraphFormatError(f"duplicate edge {key}")
            seen.add(key)
        object.__setattr__(self, "edges", tuple(sorted(seen)))
        if self.attributes is not None:
            attrs = tuple(tuple(float(x) for x in a) for a in self.attributes)
            if len(attrs) != n:
                raise GraphFormatError(f"{len(attrs)} attribute vectors for {n} nodes")
            if attrs and len({len(a) for a in attrs}) != 1:
                raise GraphFormatError("attribute vectors have unequal dimension")
            object.__setattr__(self, "attributes", attrs)

    @property
    def attribute_dim(self) -> int | None:
        if self.attributes is None:
            return None
        return len(self.attributes[0]) if self.attributes else 0

    def degrees(self) -> list[int]:
        deg = [0] * self.node_count
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def neighbors(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.node_count)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj


@dataclass(frozen=True)
class GraphSample:
    """Ordered sample of graphs with optional labels in {-1, +1}.

    ``warnings`` records non-fatal ingestion events, e.g. graph labels that
    were dropped because they were not binary.
    """

    graphs: tuple[AttributedGraph, ...]
    labels: tuple[int, ...] | None = None
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        graphs = tuple(self.graphs)
        object.__setattr__(self, "graphs", graphs)
        if not graphs:
            raise GraphFormatError("a sample needs at least one graph")
        if self.labels is not None:
            labels = tuple(int(y) for y in self.labels)
            if len(labels) != len(graphs):
                raise GraphFormatError(f"{len(labels)} labels for {len(graphs)} graphs")
            if any(y not in (-1, 1) for y in labels):
                raise GraphFormatError("labels must be -1 or +1")
            object.__setattr__(self, "labels", labels)
        present = {g.attributes is not None for g in graphs}
        dims = {g.attribute_dim for g in graphs if g.node_count}
        if len(present) > 1 or len(dims) > 1:
            raise GraphFormatError(
                "graphs disagree on node attributes (all or none, with one shared dimension)"
            )
        object.__setattr__(self, "warnings", tuple(self.warnings))

    def __len__(self) -> int:
        return len(self.graphs)

    @property
    def m(self) -> int:
        return len(self.graphs)

    @property
    def has_attributes(self) -> bool:
        return self.graphs[0].attributes is not None

    @property
    def attribute_dim(self) -> int | None:
        if not self.has_attributes:
            return None
        return max(g.attribute_dim for g in self.graphs)

    def concat(self, other: GraphSample) -> GraphSample:
        """Sample holding ``self`` followed by ``other``; labels kept only if both have them."""
        labels = None
        if self.labels is not None and other.labels is not None:
            labels = self.labels + other.labels
        return GraphSample(self.graphs + other.graphs, labels)


# -- TU directory format ------------------------------------------------------


def _read_int_rows(path: Path, width: int) -> list[list[int]]:
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            parts = [p.strip() for p in line.split(",")]
            if len(parts) != width:
                raise GraphFormatError(f"expected {width} comma-separated values", path, lineno)
            try:
                rows.append([int(p) for p in parts])
            except ValueError:
                try:
                    rows.append([_int_like(p) for p in parts])
                except ValueError:
                    raise GraphFormatError(f"not an integer: {line!r}", path, lineno) from None
    return rows


def _int_like(s: str) -> int:
    x = float(s)
    if not x.is_integer():
        raise ValueError(s)
    return int(x)


def parse_tu_dataset(directory: str | Path) -> GraphSample:
    """Load a TU-format dataset directory.

    Node labels become one-dimensional attributes. Graph labels are mapped
    to -1/+1 (smaller value to -1) when exactly two distinct values occur;
    otherwise they are dropped and a warning is recorded on the sample.
    """
    directory = Path(directory)
    a_files = sorted(directory.glob("*_A.txt"))
    if not a_files:
        raise GraphFormatError("missing required file <DS>_A.txt", directory)
    prefix = a_files[0].name[: -len("_A.txt")]
    a_path = a_files[0]
    ind_path = directory / f"{prefix}_graph_indicator.txt"
    if not ind_path.exists():
        raise GraphFormatError("missing required file", ind_path)
    nl_path = directory / f"{prefix}_node_labels.txt"
    gl_path = directory / f"{prefix}_graph_labels.txt"

    indicator = [r[0] for r in _read_int_rows(ind_path, 1)]
    graph_labels = [r[0] for r in _read_int_rows(gl_path, 1)] if gl_path.exists() else None
    declared = len(graph_labels) if graph_labels is not None else max(indicator, default=0)
    if declared == 0:
        raise GraphFormatError("no graphs declared", ind_path)

    counts = [0] * declared
    local = []  # node -> index inside its graph
    for lineno, gid in enumerate(indicator, start=1):
        if not 1 <= gid <= declared:
            raise GraphFormatError(
                f"indicator out of range: graph id {gid} for {declared} graphs", ind_path, lineno
            )
        local.append(counts[gid - 1])
        counts[gid - 1] += 1

    node_labels = None
    if nl_path.exists():
        node_labels = [r[0] for r in _read_int_rows(nl_path, 1)]
        if len(node_labels) != len(indicator):
            raise GraphFormatError(
                f"{len(node_labels)} node labels for {len(indicator)} nodes", nl_path
            )

    edge_sets: list[set[Edge]] = [set() for _ in range(declared)]
    for lineno, (u, v) in enumerate(_read_int_rows(a_path, 2), start=1):
        if not (1 <= u <= len(indicator) and 1 <= v <= len(indicator)):
            raise GraphFormatError(f"node index out of range in ({u}, {v})", a_path, lineno)
        gu, gv = indicator[u - 1], indicator[v - 1]
        if gu != gv:
            raise GraphFormatError(f"edge ({u}, {v}) joins graphs {gu} and {gv}", a_path, lineno)
        if u == v:
            raise GraphFormatError(f"self-loop at node {u}", a_path, lineno)
        lu, lv = local[u - 1], local[v - 1]
        edge_sets[gu - 1].add((lu, lv) if lu < lv else (lv, lu))

    attrs: list[list[tuple[float, ...]]] | None = None
    if node_labels is not None:
        attrs = [[] for _ in range(declared)]
        for gid, lab in zip(indicator, node_labels):
            attrs[gid - 1].append((float(lab),))

    graphs = tuple(
        AttributedGraph(
            counts[k],
            tuple(sorted(edge_sets[k])),
            None if attrs is None else tuple(attrs[k]),
        )
        for k in range(declared)
    )

    labels = None
    warnings: tuple[str, ...] = ()
    if graph_labels is not None:
        distinct = sorted(set(graph_labels))
        if len(distinct) == 2:
            labels = tuple(-1 if y == distinct[0] else 1 for y in graph_labels)
        elif len(distinct) > 2:
            warnings = (f"graph labels dropped: {len(distinct)} distinct values, expected 2",)
        else:
            warnings = ("graph labels dropped: only one distinct value",)
    return GraphSample(graphs, labels, warnings)


# -- JSONL format ---------------------------------------------------------------


def graph_from_record(obj: dict) -> tuple[AttributedGraph, int | None]:
    if not isinstance(obj, dict):
        raise GraphFormatError("record is not a JSON object")
    if "n" not in obj or "edges" not in obj:
        raise GraphFormatError("record needs keys 'n' and 'edges'")
    edges = obj["edges"]
    if not isinstance(edges, list):
        raise GraphFormatError("'edges' must be a list")
    for e in edges:
        if not isinstance(e, list) or len(e) != 2:
            raise GraphFormatError(f"edge {e!r} is not a 2-list")
    label = obj.get("label")
    return AttributedGraph(obj["n"], tuple(map(tuple, edges)), obj.get("attrs")), label


def parse_jsonl(path: str | Path) -> GraphSample:
    """Read one graph per line. Blank lines are skipped."""
    path = Path(path)
    graphs = []
    labels = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            if not raw.strip():
                continue
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise GraphFormatError(f"malformed JSON: {exc.msg}", path, lineno) from None
            try:
                g, y = graph_from_record(obj)
            except (GraphFormatError, TypeError, ValueError) as exc:
                msg = exc.args[0] if isinstance(exc, GraphFormatError) else str(exc)
                raise GraphFormatError(msg, path, lineno) from None
            graphs.append(g)
            labels.append(y)
    if not graphs:
        raise GraphFormatError("file contains no graphs", path)
    have = [y is not None for y in labels]
    if all(have):
        try:
            return GraphSample(tuple(graphs), tuple(labels))
        except GraphFormatError as exc:
            raise GraphFormatError(exc.args[0], path) from None
    if any(have):
        raise GraphFormatError("labels present on some lines only", path)
    return GraphSample(tuple(graphs))


def graph_to_record(graph: AttributedGraph, label: int | None = None) -> dict:
    rec: dict = {"n": graph.node_count, "edges": [list(e) for e in graph.edges]}
    if graph.attributes is not None:
        rec["attrs"] = [list(a) for a in graph.attributes]
    if label is not None:
        rec["label"] = label
    return rec


def dumps_jsonl(sample: GraphSample) -> str:
    labels = sample.labels or (None,) * sample.m
    lines = [
        json.dumps(graph_to_record(g, y), separators=(",", ":"))
        for g, y in zip(sample.graphs, labels)
    ]
    return "\n".join(lines) + "\n"


def write_jsonl(sample: GraphSample, path: str | Path) -> None:
    Path(path).write_text(dumps_jsonl(sample), encoding="utf-8")


# -- synthetic samples -----------------------------------------------------------

FAMILIES = ("erdos_renyi", "d_regular", "cycle", "disjoint_cycles")


@dataclass(frozen=True)
class RandomSampleSpec:
    """Recipe for a deterministic synthetic sample.

    ``n`` is the order for ``erdos_renyi``, ``d_regular`` and ``cycle``;
    ``lengths`` lists cycle lengths for ``disjoint_cycles``.
    """

    family: str
    count: int = 1
    seed: int = 0
    n: int = 0
    edge_probability: float = 0.5
    degree: int = 0
    lengths: tuple[int, ...] = ()

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if self.count < 1:
            raise ValueError("count must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.family == "erdos_renyi":
            if self.n < 0 or not 0.0 <= self.edge_probability <= 1.0:
                raise ValueError("erdos_renyi needs n >= 0 and 0 <= edge_probability <= 1")
        elif self.family == "d_regular":
            if self.degree < 0 or self.degree >= max(self.n, 1) or (self.n * self.degree) % 2:
                raise ValueError(
                    f"infeasible d_regular({self.n}, {self.degree}): need degree < n and n*degree even"
                )
        elif self.family == "cycle":
            if self.n < 3:
                raise ValueError("cycle needs n >= 3")
        elif not self.lengths or min(self.lengths) < 3:
            raise ValueError("disjoint_cycles needs lengths, each >= 3")


def cycle_edges(n: int, offset: int = 0) -> list[Edge]:
    return [(offset + i, offset + (i + 1) % n) for i in range(n)]


def _erdos_renyi(n: int, prob: float, rng: np.random.Generator) -> AttributedGraph:
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(iu.size) < prob
    return AttributedGraph(n, tuple(zip(iu[keep].tolist(), ju[keep].tolist())))


def _d_regular(n: int, d: int, rng: np.random.Generator, max_tries: int = 10_000) -> AttributedGraph:
    # configuration model; reject pairings with loops or multi-edges
    stubs = np.repeat(np.arange(n), d)
    for _ in range(max_tries):
        perm = rng.permutation(stubs)
        u, v = perm[0::2], perm[1::2]
        if np.any(u == v):
            continue
        lo, hi = np.minimum(u, v), np.maximum(u, v)
        keys = lo * n + hi
        if np.unique(keys).size != keys.size:
            continue
        return AttributedGraph(n, tuple(zip(lo.tolist(), hi.tolist())))
    raise ValueError(f"could not draw a simple {d}-regular graph on {n} nodes")


def generate_sample(spec: RandomSampleSpec) -> GraphSample:
    """Build ``spec.count`` graphs; a pure function of ``spec``."""
    rng = np.random.default_rng(spec.seed)
    graphs = []
    for _ in range(spec.count):
        if spec.family == "erdos_renyi":
            graphs.append(_erdos_renyi(spec.n, spec.edge_probability, rng))
        elif spec.family == "d_regular":
            graphs.append(_d_regular(spec.n, spec.degree, rng))
        elif spec.family == "cycle":
            graphs.append(AttributedGraph(spec.n, tuple(cycle_edges(spec.n))))
        else:
            edges: list[Edge] = []
            offset = 0
            for length in spec.lengths:
                edges += cycle_edges(length, offset)
                offset += length
            graphs.append(AttributedGraph(offset, tuple(edges)))
    return GraphSample(tuple(graphs))


def permute_nodes(graph: AttributedGraph, permutation: Sequence[int]) -> AttributedGraph:
    """Relabel node ``i`` as ``permutation[i]``; attributes move with their nodes."""
    perm = [int(x) for x in permutation]
    n = graph.node_count
    if len(perm) != n or sorted(perm) != list(range(n)):
        raise ValueError("permutation is not a bijection on the node set")
    edges = tuple((perm[u], perm[v]) for u, v in graph.edges)
    attrs = None
    if graph.attributes is not None:
        moved: list[tuple[float, ...]] = [()] * n
        for i, a in enumerate(graph.attributes):
            moved[perm[i]] = a
        attrs = tuple(moved)
    return AttributedGraph(n, edges, attrs)


def sample_from_graphs(graphs: Iterable[AttributedGraph], labels=None) -> GraphSample:
    return GraphSample(tuple(graphs), None if labels is None else tuple(labels))

