"""Coloring functions over graph samples.

All colorings here run jointly over the whole sample with one shared
interning table, so color ids are comparable across graphs. Ids are dense
from 0 and assigned in sorted order of the interned keys, which makes the
output deterministic.

Hierarchy, coarsest to finest on attribute-free samples::

    trivial  <=  degree  <=  wl  <=  exact_iso
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .graph_core import AttributedGraph, GraphSample
from .partition import ColorHistogram, SamplePartition

EXACT_ISO_MAX_NODES = 8

# WL signature matrices larger than this many cells use the pure-Python path.
_MAX_SIGNATURE_CELLS = 1 << 25


class InfeasibleColoringError(ValueError):
    def __init__(self, message: str, graph_index: int | None = None):
        self.graph_index = graph_index
        super().__init__(message)


@dataclass(frozen=True)
class NodeColoring:
    colors: tuple[tuple[int, ...], ...]
    iteration_count: int


# -- shared plumbing -------------------------------------------------------------


class _Union:
    """Disjoint union of a sample's graphs as flat numpy arrays."""

    def __init__(self, sample: GraphSample):
        sizes = np.fromiter((g.node_count for g in sample.graphs), dtype=np.int64, count=sample.m)
        self.sizes = sizes
        self.offsets = np.concatenate(([0], np.cumsum(sizes)))
        self.n = int(self.offsets[-1])
        self.graph_of = np.repeat(np.arange(sample.m, dtype=np.int64), sizes)
        chunks = [
            np.asarray(g.edges, dtype=np.int64).reshape(-1, 2) + off
            for g, off in zip(sample.graphs, self.offsets[:-1].tolist())
        ]
        e = np.concatenate(chunks) if chunks else np.empty((0, 2), dtype=np.int64)
        # both directions
        self.src = np.concatenate((e[:, 0], e[:, 1]))
        self.dst = np.concatenate((e[:, 1], e[:, 0]))
        self.degree = np.bincount(self.src, minlength=self.n).astype(np.int64)

    def histograms(self, colors: np.ndarray, m: int) -> list[ColorHistogram]:
        ncol = int(colors.max()) + 1 if colors.size else 1
        keys, counts = np.unique(self.graph_of * ncol + colors, return_counts=True)
        gids, cols = np.divmod(keys, ncol)
        out: list[list[tuple[int, int]]] = [[] for _ in range(m)]
        for g, c, k in zip(gids.tolist(), cols.tolist(), counts.tolist()):
            out[g].append((c, k))
        return [tuple(h) for h in out]


def _attribute_colors(sample: GraphSample, union: _Union) -> np.ndarray:
    """Initial colors: attribute vectors interned by exact byte equality."""
    if not sample.has_attributes:
        return np.zeros(union.n, dtype=np.int64)
    dim = sample.attribute_dim
    if union.n == 0:
        return np.zeros(0, dtype=np.int64)
    if dim == 0:
        return np.zeros(union.n, dtype=np.int64)
    flat = np.array([a for g in sample.graphs for a in g.attributes], dtype="<f8")
    rows = np.ascontiguousarray(flat).view(np.dtype((np.void, 8 * dim))).ravel()
    _, inv = np.unique(rows, return_inverse=True)
    return inv.reshape(-1).astype(np.int64)


def _split(colors: np.ndarray, union: _Union) -> tuple[tuple[int, ...], ...]:
    offs = union.offsets.tolist()
    flat = colors.tolist()
    return tuple(tuple(flat[a:b]) for a, b in zip(offs[:-1], offs[1:]))


# -- 1-WL -----------------------------------------------------------------------


def _refine_round_numpy(colors: np.ndarray, union: _Union) -> np.ndarray:
    # Signatures lead with the node's own color, so new ids are grouped by old
    # color. A node alone in its color class has rank 0 inside its group and
    # needs no neighbour sorting; only crowded classes are ranked row-wise.
    ncol = int(colors.max()) + 1
    class_size = np.bincount(colors, minlength=ncol)
    crowded = class_size[colors] > 1
    idx = np.flatnonzero(crowded)
    rank = np.zeros(union.n, dtype=np.int64)
    distinct = np.ones(ncol, dtype=np.int64)  # distinct signatures per old color
    if idx.size:
        local = np.full(union.n, -1, dtype=np.int64)
        local[idx] = np.arange(idx.size)
        keep = crowded[union.src]
        src = local[union.src[keep]]
        nbr = colors[union.dst[keep]]
        deg = union.degree[idx]
        width = 1 + int(deg.max())
        order = np.argsort(src * ncol + nbr)
        src_sorted = src[order]
        starts = np.concatenate(([0], np.cumsum(deg)))[:-1]
        pos = np.arange(src_sorted.size) - starts[src_sorted]
        # row = (own color, sorted neighbour colors) shifted by one so 0 pads;
        # big-endian makes bytewise order equal lexicographic order
        sig = np.zeros((idx.size, width), dtype=">u4")
        sig[:, 0] = colors[idx] + 1
        sig[src_sorted, 1 + pos] = nbr[order] + 1
        rows = np.ascontiguousarray(sig).view(np.dtype((np.void, 4 * width))).ravel()
        uniq, inv = np.unique(rows, return_inverse=True)
        inv = inv.reshape(-1)
        lead = sig[:, 0].astype(np.int64)[np.unique(inv, return_index=True)[1]] - 1
        # lead[k] is the old color of the k-th distinct signature (sorted)
        first = np.searchsorted(lead, lead, side="left")
        rank[idx] = (np.arange(uniq.size) - first)[inv]
        per_class = np.bincount(lead, minlength=ncol)
        distinct = np.where(per_class > 0, per_class, 1)
    offset = np.concatenate(([0], np.cumsum(distinct)))[:-1]
    return offset[colors] + rank


def _refine_round_python(colors: np.ndarray, union: _Union) -> np.ndarray:
    cols = colors.tolist()
    adj: list[list[int]] = [[] for _ in range(union.n)]
    for u, v in zip(union.src.tolist(), union.dst.tolist()):
        adj[u].append(cols[v])
    sigs = [(c, *sorted(a)) for c, a in zip(cols, adj)]
    ids = {s: i for i, s in enumerate(sorted(set(sigs)))}
    return np.fromiter((ids[s] for s in sigs), dtype=np.int64, count=len(sigs))


def wl_refine(
    sample: GraphSample, *, max_rounds: int | None = None, engine: str = "auto"
) -> tuple[NodeColoring, list[ColorHistogram]]:
    """Run 1-WL jointly over the disjoint union of the sample's graphs.

    Each round maps a node to the rank of its signature ``(color, sorted
    neighbour colors)`` among all distinct signatures of the sample. Stops at
    the first round whose partition of the union node set equals the
    previous one and returns that round's colors.

    ``engine`` is ``"numpy"``, ``"python"`` or ``"auto"``; both engines give
    identical ids. ``max_rounds`` caps the rounds (unset: run to stability).
    """
    union = _Union(sample)
    colors = _attribute_colors(sample, union)
    if engine == "auto":
        width = 1 + (int(union.degree.max()) if union.n else 0)
        engine = "numpy" if union.n * width <= _MAX_SIGNATURE_CELLS else "python"
    step = {"numpy": _refine_round_numpy, "python": _refine_round_python}[engine]

    rounds = 0
    if union.n:
        n_colors = int(colors.max()) + 1
        limit = union.n if max_rounds is None else max_rounds
        while rounds < limit:
            colors = step(colors, union)
            rounds += 1
            new_count = int(colors.max()) + 1
            # refinement only splits classes, so equal counts mean equal partitions
            if new_count == n_colors:
                break
            n_colors = new_count
    return NodeColoring(_split(colors, union), rounds), union.histograms(colors, sample.m)


def wl_coloring(sample: GraphSample) -> list[ColorHistogram]:
    return wl_refine(sample)[1]


# -- coarser colorings -------------------------------------------------------------


def trivial_coloring(sample: GraphSample) -> list[ColorHistogram]:
    """Every node gets color 0, so only graph order is seen."""
    return [((0, g.node_count),) if g.node_count else () for g in sample.graphs]


def degree_coloring(sample: GraphSample) -> list[ColorHistogram]:
    """Color = interned (attribute color, degree) pair."""
    union = _Union(sample)
    attr = _attribute_colors(sample, union)
    if union.n == 0:
        return [() for _ in sample.graphs]
    key = attr * (int(union.degree.max()) + 1) + union.degree
    _, colors = np.unique(key, return_inverse=True)
    return union.histograms(colors.reshape(-1).astype(np.int64), sample.m)


# -- exact isomorphism class -----------------------------------------------------------


@lru_cache(maxsize=None)
def _permutations(n: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(n))), dtype=np.intp).reshape(-1, n)


@lru_cache(maxsize=None)
def _upper_pairs(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.triu_indices(n, k=1)


def canonical_form(graph: AttributedGraph, attr_ids: Sequence[int]) -> tuple:
    """Lexicographically smallest (attribute ids, adjacency bits) over all relabelings.

    ``attr_ids`` holds one interned attribute id per node. Cost grows as n!.
    """
    n = graph.node_count
    if n == 0:
        return (0, (), 0)
    adj = np.zeros((n, n), dtype=np.int64)
    if graph.edges:
        e = np.asarray(graph.edges)
        adj[e[:, 0], e[:, 1]] = 1
        adj[e[:, 1], e[:, 0]] = 1
    perms = _permutations(n)
    iu, ju = _upper_pairs(n)
    bits = adj[perms[:, iu], perms[:, ju]]
    codes = bits @ (1 << np.arange(bits.shape[1] - 1, -1, -1, dtype=np.int64))
    attrs = np.asarray(attr_ids, dtype=np.int64)
    if attrs.min() == attrs.max():
        best = int(np.argmin(codes))
    else:
        seq = attrs[perms]
        # lexsort: last key is primary
        order = np.lexsort((codes, *seq.T[::-1]))
        best = int(order[0])
    return (n, tuple(attrs[perms[best]].tolist()), int(codes[best]))


def exact_iso_coloring(
    sample: GraphSample, max_nodes: int = EXACT_ISO_MAX_NODES
) -> list[ColorHistogram]:
    """One color per isomorphism class of attributed graphs, by brute-force canonization."""
    for i, g in enumerate(sample.graphs):
        if g.node_count > max_nodes:
            raise InfeasibleColoringError(
                f"exact coloring infeasible: graph {i} has {g.node_count} nodes "
                f"(limit {max_nodes})",
                graph_index=i,
            )
    union = _Union(sample)
    attr = _attribute_colors(sample, union).tolist()
    offs = union.offsets.tolist()
    cache: dict[tuple, tuple] = {}
    forms = []
    for g, a, b in zip(sample.graphs, offs[:-1], offs[1:]):
        ids = tuple(attr[a:b])
        key = (g.node_count, g.edges, ids)
        if key not in cache:
            cache[key] = canonical_form(g, ids)
        forms.append(cache[key])
    table = {f: i for i, f in enumerate(sorted(set(forms)))}
    return [((table[f], g.node_count),) if g.node_count else () for f, g in zip(forms, sample.graphs)]


# -- registry -------------------------------------------------------------------------


@dataclass(frozen=True)
class ColoringFunction:
    name: str
    evaluate: Callable[[GraphSample], list[ColorHistogram]]

    def __call__(self, sample: GraphSample) -> list[ColorHistogram]:
        return self.evaluate(sample)


COLORINGS: dict[str, ColoringFunction] = {
    "trivial": ColoringFunction("trivial", trivial_coloring),
    "order": ColoringFunction("order", trivial_coloring),
    "degree": ColoringFunction("degree", degree_coloring),
    "wl": ColoringFunction("wl", wl_coloring),
    "exact_iso": ColoringFunction("exact_iso", exact_iso_coloring),
}

HIERARCHY = ("trivial", "degree", "wl", "exact_iso")


def get_coloring(name: str) -> ColoringFunction:
    try:
        return COLORINGS[name]
    except KeyError:
        raise ValueError(f"unknown coloring {name!r}; choose from {sorted(COLORINGS)}") from None


def is_finer(part_a: SamplePartition, part_b: SamplePartition) -> bool:
    """True iff every class of ``part_a`` lies inside one class of ``part_b``."""
    if part_a.m != part_b.m:
        raise ValueError(f"partitions cover different sample sizes: {part_a.m} vs {part_b.m}")
    where = part_b.class_index()
    return all(len({where[i] for i in cls}) == 1 for cls in part_a.classes)
