"""Stationary Markov chains on labeled graphs, product graphs, and sampling.

A stationary chain is stored by its edge distribution ``P``: a probability
vector over edges whose inflow equals outflow at every vertex.  The vertex
distribution ``pi`` and the conditional edge probabilities ``Q`` are derived
from it.  Vertices carrying no mass are removed on construction; the
``vertex_origin`` / ``edge_origin`` maps lead back to the input graph.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from covrad.errors import InvalidInputError, InvalidMarkovChainError, ParallelEdgeError
from covrad.graphs import LabeledGraph, has_parallel_same_label, is_essential

PROB_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class MarkovChain:
    base_graph: LabeledGraph
    graph: LabeledGraph
    edge_probs: np.ndarray
    vertex_origin: tuple[int, ...]
    edge_origin: tuple[int, ...]

    @cached_property
    def vertex_probs(self) -> np.ndarray:
        """``pi(v)``: total probability of edges leaving ``v``."""
        return np.bincount(self.graph.sources, weights=self.edge_probs, minlength=self.graph.vertex_count)

    @cached_property
    def conditional(self) -> np.ndarray:
        """``Q(e) = P(e) / pi(source(e))``."""
        return self.edge_probs / self.vertex_probs[self.graph.sources]

    def full_edge_probs(self) -> np.ndarray:
        """``P`` indexed by the edges of ``base_graph`` (zeros on removed edges)."""
        p = np.zeros(self.base_graph.edge_count)
        p[list(self.edge_origin)] = self.edge_probs
        return p

    def full_conditional(self) -> np.ndarray:
        """``Q`` indexed by the edges of ``base_graph`` (zeros on removed edges)."""
        c = np.zeros(self.base_graph.edge_count)
        c[list(self.edge_origin)] = self.conditional
        return c

    def to_dict(self) -> dict:
        d = self.base_graph.to_dict()
        d["edge_probs"] = [float(p) for p in self.full_edge_probs()]
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "MarkovChain":
        if "edge_probs" not in d:
            raise InvalidInputError("Markov chain JSON needs an 'edge_probs' array")
        return markov_from_edge_probs(LabeledGraph.from_dict(d), d["edge_probs"])

    @classmethod
    def from_json(cls, text: str) -> "MarkovChain":
        return cls.from_dict(json.loads(text))


def markov_from_edge_probs(g: LabeledGraph, p: Sequence[float], tol: float = PROB_TOL) -> MarkovChain:
    """Validate an edge distribution and package it as a stationary chain.

    Raises
    ------
    InvalidMarkovChainError
        If ``p`` is negative, not normalized, or not a conserved flow.
    """
    p = np.asarray(p, dtype=float)
    if p.shape != (g.edge_count,):
        raise InvalidMarkovChainError(f"expected {g.edge_count} edge probabilities, got shape {p.shape}")
    if not np.all(np.isfinite(p)) or (p < -tol).any():
        raise InvalidMarkovChainError("edge probabilities must be finite and nonnegative")
    p = np.clip(p, 0.0, None)
    if abs(p.sum() - 1.0) > tol:
        raise InvalidMarkovChainError(f"edge probabilities sum to {p.sum()!r}, not 1")
    outflow = np.bincount(g.sources, weights=p, minlength=g.vertex_count)
    inflow = np.bincount(g.targets, weights=p, minlength=g.vertex_count)
    bad = np.flatnonzero(np.abs(outflow - inflow) > tol)
    if bad.size:
        v = int(bad[0])
        raise InvalidMarkovChainError(
            f"flow not conserved at vertex {v}: out {outflow[v]!r} vs in {inflow[v]!r}"
        )
    alive = outflow > tol
    new_id = np.cumsum(alive) - 1
    keep_edges = [i for i, (s, t, _) in enumerate(g.edges) if alive[s] and alive[t]]
    edges = tuple((int(new_id[g.edges[i][0]]), int(new_id[g.edges[i][1]]), g.edges[i][2]) for i in keep_edges)
    sub = LabeledGraph(g.q, int(alive.sum()), edges)
    # canonical order is preserved by an order-preserving relabel, so edge i of sub is keep_edges[i]
    probs = p[keep_edges]
    probs = probs / probs.sum()
    return MarkovChain(
        base_graph=g,
        graph=sub,
        edge_probs=probs,
        vertex_origin=tuple(int(v) for v in np.flatnonzero(alive)),
        edge_origin=tuple(keep_edges),
    )


def uniform_bernoulli(q: int) -> MarkovChain:
    """I.i.d. uniform symbols: one vertex, ``q`` loops of probability ``1/q``."""
    if q < 1:
        raise InvalidInputError(f"q must be >= 1, got {q}")
    g = LabeledGraph(q, 1, tuple((0, 0, a) for a in range(q)))
    return markov_from_edge_probs(g, np.full(q, 1.0 / q))


@dataclass(frozen=True)
class ProductGraph:
    """``G_X x G_Y`` with pair labels encoded as ``a_x * q_y + a_y``.

    Vertex ``(u, w)`` is ``u * |V_Y| + w``.  ``provenance[e]`` gives the
    factor edge ids ``(e_x, e_y)`` of product edge ``e``.
    """

    gx: LabeledGraph
    gy: LabeledGraph
    product: LabeledGraph
    provenance: tuple[tuple[int, int], ...]

    def pair_label(self, e: int) -> tuple[int, int]:
        return divmod(self.product.edges[e][2], self.gy.q)


def product_graph(gx: LabeledGraph, gy: LabeledGraph) -> ProductGraph:
    """Strong product of two essential labeled graphs.

    Raises
    ------
    ParallelEdgeError
        If either factor has parallel edges with the same label.
    """
    for name, g in (("G_X", gx), ("G_Y", gy)):
        if g.vertex_count == 0 or not is_essential(g):
            raise InvalidInputError(f"{name} must be essential and nonempty")
        if has_parallel_same_label(g):
            raise ParallelEdgeError(f"{name} has parallel edges with the same label")
    vy = gy.vertex_count
    raw = []
    for ix, (sx, tx, ax) in enumerate(gx.edges):
        for iy, (sy, ty, ay) in enumerate(gy.edges):
            raw.append(((sx * vy + sy, tx * vy + ty, ax * gy.q + ay), (ix, iy)))
    # no same-label parallels in either factor, so product edges are distinct triples
    raw.sort(key=lambda r: (r[0][0], r[0][2], r[0][1]))
    product = LabeledGraph(gx.q * gy.q, gx.vertex_count * vy, tuple(r[0] for r in raw))
    return ProductGraph(gx, gy, product, tuple(r[1] for r in raw))


def _walk_tables(mc: MarkovChain):
    g = mc.graph
    deg = max(len(o) for o in g.out_edges)
    cum = np.full((g.vertex_count, deg), np.inf)
    ids = np.zeros((g.vertex_count, deg), dtype=np.int64)
    q = mc.conditional
    for v, out in enumerate(g.out_edges):
        c = np.cumsum(q[list(out)])
        c[-1] = np.inf  # absorb rounding so every uniform draw lands on an edge
        cum[v, : len(out)] = c
        ids[v, : len(out)] = out
        ids[v, len(out):] = out[-1]
    return cum, ids


def sample_words(mc: MarkovChain, n: int, count: int, rng: np.random.Generator | int) -> np.ndarray:
    """``count`` independent length-``n`` label sequences of stationary walks.

    The start vertex is drawn from ``pi`` and each step from ``Q`` given the
    current vertex.  All walks advance together.
    """
    if n < 1 or count < 1:
        raise InvalidInputError("n and count must be >= 1")
    rng = np.random.default_rng(rng)
    g = mc.graph
    start_u = rng.random(count)
    u = rng.random((count, n))
    pi_cum = np.cumsum(mc.vertex_probs)
    v = np.minimum(np.searchsorted(pi_cum, start_u * pi_cum[-1], side="right"), g.vertex_count - 1)
    cum, ids = _walk_tables(mc)
    labels, targets = g.labels, g.targets
    if g.vertex_count == 1:
        k = (u[:, :, None] >= cum[0][None, None, :]).sum(axis=2)
        return labels[ids[0][k]]
    out = np.empty((count, n), dtype=np.int64)
    for t in range(n):
        k = (u[:, t, None] >= cum[v]).sum(axis=1)
        e = ids[v, k]
        out[:, t] = labels[e]
        v = targets[e]
    return out


def sample_word(mc: MarkovChain, n: int, seed: int | np.random.Generator) -> tuple[int, ...]:
    """One sampled word; the same seed always gives the same word."""
    return tuple(int(a) for a in sample_words(mc, n, 1, seed)[0])
