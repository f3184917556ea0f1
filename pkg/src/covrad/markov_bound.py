"""Linear-programming upper bound on the essential covering radius.

Given presentations ``G_X``, ``G_Y`` and a stationary chain ``P_Y`` on
``G_Y``, the bound is the least mismatch probability ``P[L_X != L_Y]`` over
stationary chains ``P`` on the product graph whose ``G_Y``-marginal process
is exactly ``P_Y``.  One LP variable per product edge; constraints:

* normalization: ``sum P = 1``;
* Y-marginal: for each ``e_y``, ``sum_{e'_y = e_y} P(e') = P_Y(e_y)``;
* stationarity: outflow equals inflow at each product vertex;
* conditional marginal: for each pair (``u_x`` source vertex of ``G_X``,
  ``e_y``), the mass on product edges ``(. from u_x, e_y)`` equals
  ``Q_Y(e_y)`` times the mass on product edges from ``(u_x, source(e_y))``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from covrad.errors import InfeasibleBoundError, InvalidInputError, SandwichViolationError
from covrad.graphs import ConstrainedSystem, LabeledGraph, build_full_shift, build_rll_0k, build_rll_d_inf
from covrad.lp import LinearProgram, check_solution, solve
from covrad.markov import MarkovChain, ProductGraph, markov_from_edge_probs, product_graph, uniform_bernoulli

REPLAY_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class MarkovBoundProblem:
    product: ProductGraph
    py: MarkovChain
    lp: LinearProgram
    mismatch_edges: frozenset[int]
    blocks: dict[str, slice]


@dataclass(frozen=True, eq=False)
class MarkovBound:
    value: float
    chain: MarkovChain
    assignment: np.ndarray
    constraints_checked: int


def _graph(x) -> LabeledGraph:
    return x.presentation if isinstance(x, ConstrainedSystem) else x


def formulate(x: ConstrainedSystem | LabeledGraph, y: ConstrainedSystem | LabeledGraph,
              py: MarkovChain) -> MarkovBoundProblem:
    """Build the LP for ``x`` against ``y`` under the measure of ``py``.

    Raises
    ------
    ParallelEdgeError
        If either presentation has same-label parallel edges.
    InvalidInputError
        If ``py`` is not a chain on ``y``'s presentation.
    """
    gx, gy = _graph(x), _graph(y)
    if py.base_graph != gy:
        raise InvalidInputError("py must be a Markov chain on y's presentation")
    if gx.q != gy.q:
        raise InvalidInputError("x and y must share an alphabet")
    prod = product_graph(gx, gy)
    g = prod.product
    ne = g.edge_count
    py_full = py.full_edge_probs()
    qy_full = py.full_conditional()
    ex_of = np.array([p[0] for p in prod.provenance])
    ey_of = np.array([p[1] for p in prod.provenance])
    ux_of = gx.sources[ex_of]

    rows, rhs, blocks = [], [], {}

    def block(name, new_rows, new_rhs):
        start = len(rows)
        rows.extend(new_rows)
        rhs.extend(new_rhs)
        blocks[name] = slice(start, len(rows))

    block("normalization", [np.ones(ne)], [1.0])
    block("y_marginal", [(ey_of == iy).astype(float) for iy in range(gy.edge_count)], list(py_full))
    flow = []
    for v in range(g.vertex_count):
        r = np.zeros(ne)
        r[list(g.out_edges[v])] += 1.0
        r[list(g.in_edges[v])] -= 1.0
        flow.append(r)
    block("stationarity", flow, [0.0] * g.vertex_count)
    cond = []
    ysrc_of = gy.sources[ey_of]
    for ux in sorted(set(ux_of.tolist())):
        at_ux = ux_of == ux
        for iy in range(gy.edge_count):
            if qy_full[iy] <= 0.0:
                continue  # implied by the Y-marginal row and nonnegativity
            r = (at_ux & (ey_of == iy)).astype(float)
            r -= qy_full[iy] * (at_ux & (ysrc_of == gy.sources[iy]))
            cond.append(r)
    block("conditional_marginal", cond, [0.0] * len(cond))

    mismatch = frozenset(
        e for e in range(ne) if gx.labels[ex_of[e]] != gy.labels[ey_of[e]]
    )
    c = np.zeros(ne)
    c[list(mismatch)] = 1.0
    lp = LinearProgram(c, np.array(rows), np.array(rhs))
    return MarkovBoundProblem(prod, py, lp, mismatch, blocks)


def solve_bound(p: MarkovBoundProblem) -> MarkovBound:
    """Solve the LP and re-validate its optimizer as a chain on the product graph.

    Raises
    ------
    InfeasibleBoundError
        If no Markov extension of ``py`` lives on these presentations.
    """
    sol = solve(p.lp)
    if sol.status == "infeasible":
        raise InfeasibleBoundError("no Markov-extension bound available from these presentations")
    if sol.status != "optimal":
        raise InfeasibleBoundError(f"LP returned status {sol.status}")
    if not check_solution(p.lp, sol, REPLAY_TOL):
        raise InfeasibleBoundError("optimal assignment failed constraint replay")
    x = np.clip(sol.assignment, 0.0, None)
    chain = markov_from_edge_probs(p.product.product, x / x.sum())
    return MarkovBound(sol.value, chain, sol.assignment, p.lp.a_eq.shape[0])


def markov_bound(x, y, py) -> float:
    return solve_bound(formulate(x, y, py)).value


def dinfty_sandwich(d: int, tol: float = 1e-9) -> tuple[float, float, float]:
    """Analytic interval ``[1/2 - 1/(d+1), d/(2(d+2))]`` and the LP value inside it.

    Raises
    ------
    SandwichViolationError
        If the LP value falls outside the interval.
    """
    if d < 1:
        raise InvalidInputError(f"d must be >= 1, got {d}")
    lower = 0.5 - 1.0 / (d + 1)
    upper = d / (2.0 * (d + 2))
    value = markov_bound(build_rll_d_inf(d), build_full_shift(2), uniform_bernoulli(2))
    if not lower - tol <= value <= upper + tol:
        raise SandwichViolationError(f"LP value {value} outside [{lower}, {upper}] for d={d}")
    return lower, upper, value


def rll0k_product_chain(k: int) -> np.ndarray:
    """Closed-form optimal chain for (0,k)-RLL against uniform binary input.

    Copy the input symbol unless the zero run would reach ``k+1``, in which
    case emit a 1.  Returns edge probabilities on
    ``product_graph(build_rll_0k(k), build_full_shift(2))``.  Its mismatch
    mass is ``1/(2(2^{k+1}-1))``.
    """
    gx = build_rll_0k(k).presentation
    gy = build_full_shift(2).presentation
    prod = product_graph(gx, gy)
    alpha = 1.0 / (2 * (2 ** (k + 1) - 1))
    pi = [2 * alpha * 2 ** (k - j) for j in range(k + 1)]
    p = np.zeros(prod.product.edge_count)
    for e, (ix, iy) in enumerate(prod.provenance):
        sx, tx, ax = gx.edges[ix]
        ay = gy.edges[iy][2]
        if sx < k and ax == ay:
            p[e] = pi[sx] / 2
        elif sx == k and ax == 1:
            p[e] = pi[sx] / 2
    return p
