"""Nearest-word quantization into a constrained language, and covering radii.

The quantizer is a trellis (Viterbi-style) dynamic program over the
presentation: ``c[v]`` is the fewest substitutions needed to read the prefix
of the input along some path ending at ``v``.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from covrad.entropy import entropy_hq_inverse
from covrad.errors import CapExceededError, EmptyLanguageError, InvalidInputError
from covrad.graphs import ConstrainedSystem, LabeledGraph, capacity, is_deterministic

DEFAULT_LANGUAGE_CAP = 2**22
DEEP_HOLE_CAP = 16
_CHUNK = 4096


@dataclass(frozen=True)
class QuantizationResult:
    input: tuple[int, ...]
    nearest: tuple[int, ...]
    distance: int
    path: tuple[int, ...]


@dataclass(frozen=True)
class CoveringRadiusReport:
    n: int
    radius: int
    normalized: float
    deep_holes: list[tuple[int, ...]] = field(default_factory=list)
    method: str = "exhaustive"

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "radius": self.radius,
            "normalized": self.normalized,
            "deep_holes": [list(w) for w in self.deep_holes],
            "method": self.method,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _graph(x: ConstrainedSystem | LabeledGraph) -> LabeledGraph:
    g = x.presentation if isinstance(x, ConstrainedSystem) else x
    if g.vertex_count == 0 or g.edge_count == 0:
        raise EmptyLanguageError("quantization needs a nonempty presentation")
    return g


def _incoming_table(g: LabeledGraph) -> np.ndarray:
    """``(V, D)`` incoming edge ids per vertex in increasing order, padded with ``E``."""
    deg = max(len(i) for i in g.in_edges) or 1
    table = np.full((g.vertex_count, deg), g.edge_count, dtype=np.int64)
    for v, inc in enumerate(g.in_edges):
        table[v, : len(inc)] = inc
    return table


def _as_batch(words, q: int) -> np.ndarray:
    arr = np.asarray(words, dtype=np.int64)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] == 0:
        raise InvalidInputError("words must be a nonempty 2-D array of symbols")
    if arr.size and (arr.min() < 0 or arr.max() >= q):
        raise InvalidInputError(f"words contain symbols outside 0..{q - 1}")
    return arr


def quantize_distances(x: ConstrainedSystem | LabeledGraph, words) -> np.ndarray:
    """Distance from each row of ``words`` to the length-``n`` language of ``x``.

    All rows are processed together, one trellis step per symbol position.
    """
    g = _graph(x)
    y = _as_batch(words, g.q)
    batch, n = y.shape
    big = n + 1
    table = _incoming_table(g)
    src, lab = g.sources, g.labels
    cost = np.zeros((batch, g.vertex_count), dtype=np.int64)
    pad = np.full((batch, 1), big, dtype=np.int64)
    for i in range(n):
        edge_cost = cost[:, src] + (lab[None, :] != y[:, i, None])
        cost = np.concatenate([edge_cost, pad], axis=1)[:, table].min(axis=2)
    return cost.min(axis=1)


def quantize_distance(x: ConstrainedSystem | LabeledGraph, y: Sequence[int]) -> int:
    """Hamming distance from ``y`` to the nearest word of the same length in ``x``."""
    return int(quantize_distances(x, [list(y)])[0])


def quantize(x: ConstrainedSystem | LabeledGraph, y: Sequence[int]) -> QuantizationResult:
    """Nearest constrained word to ``y`` with a witnessing path.

    Ties are broken toward the lowest incoming edge id at every step and the
    lowest end vertex, so the witness is reproducible.
    """
    g = _graph(x)
    word = _as_batch([list(y)], g.q)[0]
    n = len(word)
    big = n + 1
    table = _incoming_table(g)
    src, lab = g.sources, g.labels
    cost = np.zeros(g.vertex_count, dtype=np.int64)
    back = np.empty((n, g.vertex_count), dtype=np.int64)
    for i in range(n):
        edge_cost = np.append(cost[src] + (lab != word[i]), big)
        cand = edge_cost[table]
        arg = cand.argmin(axis=1)
        back[i] = table[np.arange(g.vertex_count), arg]
        cost = cand[np.arange(g.vertex_count), arg]
    v = int(cost.argmin())
    distance = int(cost[v])
    path = []
    for i in range(n - 1, -1, -1):
        e = int(back[i, v])
        path.append(e)
        v = int(src[e])
    path.reverse()
    nearest = tuple(int(lab[e]) for e in path)
    return QuantizationResult(tuple(int(a) for a in word), nearest, distance, tuple(path))


def _paths_from_one_vertex(g: LabeledGraph, n: int) -> int:
    # in a deterministic graph, paths from a fixed start read distinct words
    counts = [1] * g.vertex_count
    for _ in range(n):
        counts = [sum(counts[g.edges[e][1]] for e in g.out_edges[v]) for v in range(g.vertex_count)]
    return max(counts)


def language_array(x: ConstrainedSystem | LabeledGraph, n: int, cap: int = DEFAULT_LANGUAGE_CAP) -> np.ndarray:
    """Words of length ``n`` as rows of an array, in lexicographic order.

    Raises
    ------
    CapExceededError
        If more than ``cap`` distinct words appear at any prefix length.
    """
    if n < 1:
        raise InvalidInputError(f"n must be >= 1, got {n}")
    g = _graph(x)
    q = g.q
    if is_deterministic(g) and _paths_from_one_vertex(g, n) > cap:
        raise CapExceededError(f"language size exceeds cap {cap}; use the sampled estimator instead")
    # word -> set of end vertices; words encoded base q
    frontier: dict[int, set[int]] = {0: set(range(g.vertex_count))}
    for _ in range(n):
        nxt: dict[int, set[int]] = {}
        for code, ends in frontier.items():
            for v in ends:
                for e in g.out_edges[v]:
                    _, t, a = g.edges[e]
                    nxt.setdefault(code * q + a, set()).add(t)
        if len(nxt) > cap:
            raise CapExceededError(f"language size exceeds cap {cap}; use the sampled estimator instead")
        frontier = nxt
    codes = np.array(sorted(frontier), dtype=np.int64)
    powers = q ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return (codes[:, None] // powers[None, :]) % q


def enumerate_language(x: ConstrainedSystem | LabeledGraph, n: int,
                       cap: int = DEFAULT_LANGUAGE_CAP) -> set[tuple[int, ...]]:
    """The set of length-``n`` words of ``x``."""
    return {tuple(int(a) for a in row) for row in language_array(x, n, cap)}


def covering_radius_exact(x: ConstrainedSystem, y: ConstrainedSystem, n: int,
                          cap: int = DEFAULT_LANGUAGE_CAP, workers: int = 1) -> CoveringRadiusReport:
    """Exact ``max`` over words of ``y`` of the distance to the language of ``x``.

    Deep holes are the lexicographically smallest words attaining the radius,
    at most 16 of them; the result does not depend on ``workers``.
    """
    if x.q != y.q:
        raise InvalidInputError("x and y must share an alphabet")
    words = language_array(y, n, cap)
    chunks = [words[i:i + _CHUNK] for i in range(0, len(words), _CHUNK)]
    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda c: quantize_distances(x, c), chunks))
    else:
        parts = [quantize_distances(x, c) for c in chunks]
    dist = np.concatenate(parts)
    radius = int(dist.max())
    holes = [tuple(int(a) for a in words[i]) for i in np.flatnonzero(dist == radius)[:DEEP_HOLE_CAP]]
    return CoveringRadiusReport(n=n, radius=radius, normalized=radius / n, deep_holes=holes)


def covering_radius_upper_curve(x: ConstrainedSystem, y: ConstrainedSystem, n_max: int,
                                cap: int = DEFAULT_LANGUAGE_CAP) -> list[tuple[int, int, float]]:
    """``(n, radius, radius/n)`` for ``n = 1..n_max``; no convergence is asserted."""
    out = []
    for n in range(1, n_max + 1):
        rep = covering_radius_exact(x, y, n, cap)
        out.append((n, rep.radius, rep.normalized))
    return out


def sphere_covering_lower_bound(x: ConstrainedSystem, y: ConstrainedSystem) -> float:
    """Ball-covering lower bound ``H_q^{-1}(h(y) - h(x))`` on the normalized radius."""
    if x.q != y.q:
        raise InvalidInputError("x and y must share an alphabet")
    if x.q < 2:
        return 0.0
    hx = capacity(x, auto_determinize=True)
    hy = capacity(y, auto_determinize=True)
    if hx > hy + 1e-12:
        raise InvalidInputError(
            f"capacity of x ({hx:.6f}) exceeds capacity of y ({hy:.6f}); swap the arguments"
        )
    return entropy_hq_inverse(x.q, min(max(hy - hx, 0.0), 1.0))
