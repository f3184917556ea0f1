"""Labeled graphs presenting constrained systems, and their structural analyses.

A constrained system over the alphabet ``{0, ..., q-1}`` is given by a
:class:`LabeledGraph`: a directed multigraph whose edges carry symbols.  The
system's words of length ``n`` are the label sequences of length-``n`` paths,
which is exact once the graph is *essential* (every vertex has an incoming and
an outgoing edge; see :func:`trim_to_essential`).

Edges are stored in canonical order, sorted by ``(source, label, target)``;
an edge's id is its index in that order.  Everything downstream (quantizer
witnesses, Markov chain edge vectors, JSON files) uses these ids.
"""

from __future__ import annotations

import json
import logging
import math
import warnings
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from covrad.errors import (
    ConvergenceError,
    EmptyLanguageError,
    InvalidInputError,
    NotDeterministicError,
    NotEssentialError,
    StateExplosionError,
)

log = logging.getLogger(__name__)

Edge = tuple[int, int, int]

DEFAULT_SUBSET_CAP = 2**16
POWER_ITERATION_CAP = 10**5
POWER_ITERATION_RTOL = 1e-12


@dataclass(frozen=True)
class LabeledGraph:
    """Directed multigraph with integer edge labels.

    Parameters
    ----------
    q : int
        Alphabet size; labels are ``0..q-1``.
    vertex_count : int
        Vertices are ``0..vertex_count-1``.  Zero is allowed so that an
        empty graph can be represented, but most operations reject it.
    edges : sequence of (source, target, label)
        Re-sorted into canonical ``(source, label, target)`` order.
    """

    q: int
    vertex_count: int
    edges: tuple[Edge, ...] = field(default=())

    def __post_init__(self):
        if self.q < 1:
            raise InvalidInputError(f"alphabet size must be >= 1, got {self.q}")
        if self.vertex_count < 0:
            raise InvalidInputError("vertex_count must be nonnegative")
        edges = []
        for e in self.edges:
            s, t, a = (int(v) for v in e)
            if not (0 <= s < self.vertex_count and 0 <= t < self.vertex_count):
                raise InvalidInputError(f"edge {e} has an endpoint outside 0..{self.vertex_count - 1}")
            if not 0 <= a < self.q:
                raise InvalidInputError(f"edge {e} has a label outside 0..{self.q - 1}")
            edges.append((s, t, a))
        edges.sort(key=lambda e: (e[0], e[2], e[1]))
        object.__setattr__(self, "edges", tuple(edges))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def sources(self) -> np.ndarray:
        return np.array([e[0] for e in self.edges], dtype=np.int64)

    @cached_property
    def targets(self) -> np.ndarray:
        return np.array([e[1] for e in self.edges], dtype=np.int64)

    @cached_property
    def labels(self) -> np.ndarray:
        return np.array([e[2] for e in self.edges], dtype=np.int64)

    @cached_property
    def out_edges(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for i, (s, _, _) in enumerate(self.edges):
            out[s].append(i)
        return tuple(tuple(o) for o in out)

    @cached_property
    def in_edges(self) -> tuple[tuple[int, ...], ...]:
        inc: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for i, (_, t, _) in enumerate(self.edges):
            inc[t].append(i)
        return tuple(tuple(o) for o in inc)

    def adjacency(self) -> np.ndarray:
        """Edge-count matrix ``A[u, v]`` = number of edges ``u -> v``."""
        a = np.zeros((self.vertex_count, self.vertex_count), dtype=np.int64)
        np.add.at(a, (self.sources, self.targets), 1)
        return a

    def relabel_vertices(self, perm: Sequence[int]) -> "LabeledGraph":
        """Return the isomorphic graph where vertex ``v`` becomes ``perm[v]``."""
        if sorted(perm) != list(range(self.vertex_count)):
            raise InvalidInputError("perm must be a permutation of the vertex ids")
        return LabeledGraph(self.q, self.vertex_count, tuple((perm[s], perm[t], a) for s, t, a in self.edges))

    def to_dict(self) -> dict:
        return {"q": self.q, "vertices": self.vertex_count, "edges": [list(e) for e in self.edges]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "LabeledGraph":
        try:
            return cls(int(d["q"]), int(d["vertices"]), tuple(tuple(e) for e in d["edges"]))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InvalidInputError):
                raise
            raise InvalidInputError(f"malformed graph JSON: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "LabeledGraph":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class ConstrainedSystem:
    """A constrained system given by an essential, nonempty presentation.

    Build these with :func:`make_system` or one of the ``build_*`` helpers so
    that the presentation is trimmed and the flags are computed.
    """

    presentation: LabeledGraph
    is_irreducible: bool
    is_primitive: bool
    is_deterministic: bool
    name: str = ""

    @property
    def q(self) -> int:
        return self.presentation.q


def make_system(g: LabeledGraph, name: str = "") -> ConstrainedSystem:
    """Trim ``g`` to essential form and compute its structural flags."""
    g = trim_to_essential(g)
    irreducible = is_irreducible(g)
    return ConstrainedSystem(
        presentation=g,
        is_irreducible=irreducible,
        is_primitive=irreducible and is_primitive(g),
        is_deterministic=is_deterministic(g),
        name=name,
    )


# -- builders ---------------------------------------------------------------


def build_rll_0k(k: int) -> ConstrainedSystem:
    """Binary sequences with no run of ``k+1`` zeros.

    Vertex ``j`` is the length of the current zero run: ``j -> j+1`` reads 0,
    and every vertex returns to 0 on a 1.

    >>> build_rll_0k(1).presentation.edges
    ((0, 1, 0), (0, 0, 1), (1, 0, 1))
    """
    if k < 1:
        raise InvalidInputError(f"(0,k)-RLL needs k >= 1, got {k}")
    edges = [(j, j + 1, 0) for j in range(k)] + [(j, 0, 1) for j in range(k + 1)]
    return make_system(LabeledGraph(2, k + 1, tuple(edges)), name=f"rll0k:{k}")


def build_rll_d_inf(d: int) -> ConstrainedSystem:
    """Binary sequences with at least ``d`` zeros between consecutive ones."""
    if d < 1:
        raise InvalidInputError(f"(d,inf)-RLL needs d >= 1, got {d}")
    edges = [(j, j + 1, 0) for j in range(d)] + [(d, d, 0), (d, 0, 1)]
    return make_system(LabeledGraph(2, d + 1, tuple(edges)), name=f"dinf:{d}")


def build_repetition(q: int) -> ConstrainedSystem:
    """Constant sequences: ``q`` isolated vertices, each with one labeled loop."""
    if q < 1:
        raise InvalidInputError(f"q must be >= 1, got {q}")
    return make_system(LabeledGraph(q, q, tuple((a, a, a) for a in range(q))), name=f"rep:{q}")


def build_full_shift(q: int) -> ConstrainedSystem:
    if q < 1:
        raise InvalidInputError(f"q must be >= 1, got {q}")
    return make_system(LabeledGraph(q, 1, tuple((0, 0, a) for a in range(q))), name=f"full:{q}")


def build_from_forbidden_words(q: int, m: int, forbidden: Iterable[Sequence[int]]) -> ConstrainedSystem:
    """Shift of finite type avoiding the given length-``m`` words.

    Vertices are the ``(m-1)``-grams; the edge for the ``m``-gram ``w`` goes
    from ``w[:-1]`` to ``w[1:]`` and is labeled ``w[-1]``.  Edges for
    forbidden ``m``-grams are omitted and the result is trimmed.

    Raises
    ------
    EmptyLanguageError
        If no bi-infinite sequence avoids ``forbidden``.
    """
    if m < 1:
        raise InvalidInputError(f"m must be >= 1, got {m}")
    if q < 1:
        raise InvalidInputError(f"q must be >= 1, got {q}")
    bad = set()
    for w in forbidden:
        w = tuple(int(a) for a in w)
        if len(w) != m or any(not 0 <= a < q for a in w):
            raise InvalidInputError(f"forbidden word {w} is not a length-{m} word over [{q}]")
        bad.add(w)
    if len(bad) >= q**m:
        raise EmptyLanguageError("every length-m word is forbidden")

    def index(gram: Sequence[int]) -> int:
        v = 0
        for a in gram:
            v = v * q + a
        return v

    edges = []
    for code in range(q**m):
        w = _digits(code, q, m)
        if w in bad:
            continue
        edges.append((index(w[:-1]), index(w[1:]), w[-1]))
    g = LabeledGraph(q, q ** (m - 1), tuple(edges))
    return make_system(g, name=f"sft:q={q},m={m}")


def _digits(code: int, q: int, m: int) -> tuple[int, ...]:
    out = []
    for _ in range(m):
        code, r = divmod(code, q)
        out.append(r)
    return tuple(reversed(out))


# -- structure ----------------------------------------------------------------


def is_essential(g: LabeledGraph) -> bool:
    return all(g.out_edges[v] and g.in_edges[v] for v in range(g.vertex_count))


def trim_to_essential(g: LabeledGraph) -> LabeledGraph:
    """Repeatedly drop vertices with no incoming or no outgoing edges.

    Surviving vertices are renumbered in increasing order of their old ids.

    Raises
    ------
    EmptyLanguageError
        If nothing survives.
    """
    alive = np.ones(g.vertex_count, dtype=bool)
    src, dst = g.sources, g.targets
    while True:
        live_edges = alive[src] & alive[dst]
        outdeg = np.bincount(src[live_edges], minlength=g.vertex_count)
        indeg = np.bincount(dst[live_edges], minlength=g.vertex_count)
        keep = alive & (outdeg > 0) & (indeg > 0)
        if np.array_equal(keep, alive):
            break
        alive = keep
    if not alive.any():
        raise EmptyLanguageError("trimming removed every vertex")
    if alive.all():
        return g
    new_id = np.cumsum(alive) - 1
    edges = tuple(
        (int(new_id[s]), int(new_id[t]), a) for s, t, a in g.edges if alive[s] and alive[t]
    )
    return LabeledGraph(g.q, int(alive.sum()), edges)


def _require_essential(g: LabeledGraph) -> None:
    if g.vertex_count == 0 or not is_essential(g):
        raise NotEssentialError("graph must be essential and nonempty; call trim_to_essential first")


def strong_components(g: LabeledGraph) -> tuple[int, np.ndarray]:
    """Number of strongly connected components and the component of each vertex."""
    a = csr_matrix(
        (np.ones(g.edge_count), (g.sources, g.targets)), shape=(g.vertex_count, g.vertex_count)
    )
    n, comp = connected_components(a, directed=True, connection="strong")
    return int(n), comp


def is_irreducible(g: LabeledGraph) -> bool:
    if g.vertex_count == 0:
        return False
    return strong_components(g)[0] == 1


def _bool_power_positive(a: np.ndarray, exponent: int) -> np.ndarray:
    """Boolean ``a**e`` for the smallest power of two ``e >= exponent``."""
    p = a.astype(bool)
    power = 1
    while power < exponent:
        pi = p.astype(np.int64)
        p = (pi @ pi) > 0
        power *= 2
    return p


def is_primitive(g: LabeledGraph) -> bool:
    """True iff some power of the adjacency matrix is entrywise positive.

    Uses boolean squaring past the Wielandt bound ``(|V|-1)**2 + 1``: a
    primitive matrix is positive at every power beyond it, and an imprimitive
    one at none.
    """
    _require_essential(g)
    v = g.vertex_count
    return bool(_bool_power_positive(g.adjacency() > 0, (v - 1) ** 2 + 1).all())


def primitivity_exponent(g: LabeledGraph) -> int | None:
    """Smallest ``N`` with ``A**N > 0``, or ``None`` when ``g`` is not primitive."""
    _require_essential(g)
    v = g.vertex_count
    a = (g.adjacency() > 0).astype(np.int64)
    p = a.copy()
    for n in range(1, (v - 1) ** 2 + 2):
        if p.all():
            return n
        p = ((p @ a) > 0).astype(np.int64)
    return None


def is_deterministic(g: LabeledGraph) -> bool:
    """Right-resolving: the out-edges of every vertex carry distinct labels."""
    for out in g.out_edges:
        labels = [g.edges[i][2] for i in out]
        if len(labels) != len(set(labels)):
            return False
    return True


def has_parallel_same_label(g: LabeledGraph) -> bool:
    return len(set(g.edges)) != len(g.edges)


def determinize(g: LabeledGraph, max_states: int = DEFAULT_SUBSET_CAP) -> LabeledGraph:
    """Right-resolving presentation of the same language, by subset construction.

    Starts from the set of all vertices, so every word of ``g`` is readable,
    then trims to essential form.  A graph that is already deterministic is
    returned unchanged.

    Raises
    ------
    StateExplosionError
        If more than ``max_states`` subset-states are reachable.
    """
    _require_essential(g)
    if is_deterministic(g):
        return g
    start = frozenset(range(g.vertex_count))
    index = {start: 0}
    queue = deque([start])
    edges = []
    while queue:
        s = queue.popleft()
        follow: dict[int, set[int]] = {}
        for v in sorted(s):
            for i in g.out_edges[v]:
                _, t, a = g.edges[i]
                follow.setdefault(a, set()).add(t)
        for a in sorted(follow):
            t = frozenset(follow[a])
            if t not in index:
                if len(index) >= max_states:
                    raise StateExplosionError(f"subset construction exceeded {max_states} states")
                index[t] = len(index)
                queue.append(t)
            edges.append((index[s], index[t], a))
    return trim_to_essential(LabeledGraph(g.q, len(index), tuple(edges)))


def contains(x: ConstrainedSystem | LabeledGraph, word: Sequence[int]) -> bool:
    """Membership of a finite word in the language of ``x``."""
    g = x.presentation if isinstance(x, ConstrainedSystem) else x
    current = set(range(g.vertex_count))
    for a in word:
        current = {g.edges[i][1] for v in current for i in g.out_edges[v] if g.edges[i][2] == a}
        if not current:
            return False
    return True


# -- capacity -------------------------------------------------------------------


def _perron_root(b: np.ndarray) -> float:
    """Spectral radius of an irreducible nonnegative matrix.

    Power iteration on ``b + I`` (primitive whenever ``b`` is irreducible)
    from the all-ones vector, stopped when the Collatz-Wielandt bracket
    ``min(Mv/v) <= rho <= max(Mv/v)`` is relatively tighter than the tolerance.
    """
    m = b.astype(float) + np.eye(b.shape[0])
    v = np.ones(b.shape[0])
    for _ in range(POWER_ITERATION_CAP):
        w = m @ v
        ratios = w / v
        lo, hi = ratios.min(), ratios.max()
        if hi - lo <= POWER_ITERATION_RTOL * hi:
            return 0.5 * (lo + hi) - 1.0
        v = w / np.linalg.norm(w)
    raise ConvergenceError("power iteration did not converge")


def spectral_radius(g: LabeledGraph) -> float:
    """Largest Perron root over the strongly connected components of ``g``."""
    n_comp, comp = strong_components(g)
    a = g.adjacency()
    best = 0.0
    for c in range(n_comp):
        idx = np.flatnonzero(comp == c)
        sub = a[np.ix_(idx, idx)]
        if not sub.any():
            continue
        best = max(best, _perron_root(sub))
    return best


def capacity(x: ConstrainedSystem | LabeledGraph, auto_determinize: bool = False) -> float:
    """Capacity ``log_q`` of the spectral radius of a deterministic presentation.

    Parameters
    ----------
    x : ConstrainedSystem or LabeledGraph
    auto_determinize : bool
        If the presentation is not right-resolving, determinize it with a
        warning instead of raising.

    Raises
    ------
    NotDeterministicError
        For a non-deterministic presentation when ``auto_determinize`` is off.
    """
    g = x.presentation if isinstance(x, ConstrainedSystem) else trim_to_essential(x)
    if not is_deterministic(g):
        if not auto_determinize:
            raise NotDeterministicError(
                "capacity needs a right-resolving presentation; call determinize() first"
            )
        warnings.warn("presentation is not deterministic; determinizing before computing capacity",
                      stacklevel=2)
        g = determinize(g)
    if g.q == 1:
        return 0.0
    lam = spectral_radius(g)
    h = math.log(lam) / math.log(g.q)
    return min(max(h, 0.0), 1.0)


def determinized(x: ConstrainedSystem, max_states: int = DEFAULT_SUBSET_CAP) -> ConstrainedSystem:
    """System with a right-resolving presentation of the same language."""
    if x.is_deterministic:
        return x
    return make_system(determinize(x.presentation, max_states), name=x.name)
