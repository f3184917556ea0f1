"""Equality-form linear programs and a two-phase primal simplex solver.

Problems have the form ``min c.x  s.t.  A x = b, x >= 0``.  The solver works
on a dense tableau and uses Bland's rule for both the entering and the
leaving variable, so it cannot cycle and its pivot sequence is a pure
function of the input.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from covrad.errors import InvalidInputError, NumericalInstabilityError

FEAS_TOL = 1e-9
PIVOT_TOL = 1e-11
ZERO_TOL = 1e-14

Status = Literal["optimal", "infeasible", "unbounded"]


@dataclass(frozen=True, eq=False)
class LinearProgram:
    objective: np.ndarray
    a_eq: np.ndarray
    b_eq: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.objective, dtype=float).ravel()
        a = np.asarray(self.a_eq, dtype=float)
        b = np.asarray(self.b_eq, dtype=float).ravel()
        if a.size == 0:
            a = a.reshape(0, c.size)
        if a.ndim != 2 or a.shape[1] != c.size or a.shape[0] != b.size:
            raise InvalidInputError(f"inconsistent LP shapes: c {c.shape}, A {a.shape}, b {b.shape}")
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise InvalidInputError("LP data must be finite")
        object.__setattr__(self, "objective", c)
        object.__setattr__(self, "a_eq", a)
        object.__setattr__(self, "b_eq", b)

    @property
    def variable_count(self) -> int:
        return self.objective.size

    def to_dict(self) -> dict:
        return {
            "objective": self.objective.tolist(),
            "constraints": self.a_eq.tolist(),
            "rhs": self.b_eq.tolist(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "LinearProgram":
        return cls(np.array(d["objective"]), np.array(d["constraints"]), np.array(d["rhs"]))


@dataclass(frozen=True, eq=False)
class LPSolution:
    status: Status
    value: float = float("nan")
    assignment: np.ndarray = field(default_factory=lambda: np.empty(0))
    pivots: tuple[tuple[int, int], ...] = ()


class _Tableau:
    """Rows ``[A | b]`` plus a cost row ``[reduced costs | -z]``."""

    def __init__(self, rows: np.ndarray, basis: list[int]):
        self.t = rows
        self.basis = basis
        self.pivots: list[tuple[int, int]] = []

    def pivot(self, r: int, j: int) -> None:
        t = self.t
        p = t[r, j]
        if abs(p) < PIVOT_TOL:
            raise NumericalInstabilityError(f"pivot element {p!r} below {PIVOT_TOL}")
        t[r] /= p
        col = t[:, j].copy()
        col[r] = 0.0
        t -= np.outer(col, t[r])
        t[np.abs(t) < ZERO_TOL] = 0.0
        self.basis[r] = j
        self.pivots.append((r, j))

    def run(self, allowed: int) -> Status:
        """Minimize the cost row over columns ``< allowed``; Bland's rule."""
        t = self.t
        m = t.shape[0] - 1
        while True:
            cost = t[m, :allowed]
            entering = np.flatnonzero(cost < -FEAS_TOL)
            if entering.size == 0:
                return "optimal"
            j = int(entering[0])
            col = t[:m, j]
            ok = col > PIVOT_TOL
            if not ok.any():
                if (col > ZERO_TOL).any():
                    raise NumericalInstabilityError(
                        f"column {j} has only pivot candidates below {PIVOT_TOL}"
                    )
                return "unbounded"
            rows = np.flatnonzero(ok)
            ratios = t[rows, -1] / col[rows]
            best = ratios.min()
            tied = rows[ratios <= best + FEAS_TOL * max(1.0, abs(best))]
            r = int(min(tied, key=lambda i: self.basis[i]))
            self.pivot(r, j)


def solve(lp: LinearProgram) -> LPSolution:
    """Two-phase simplex.

    Phase one minimizes the sum of artificial variables; redundant equality
    rows are dropped when their artificial cannot be pivoted out.  Optimal
    solutions are basic feasible solutions.

    Raises
    ------
    NumericalInstabilityError
        If a pivot on an element smaller than ``1e-11`` would be needed.
    """
    c, a, b = lp.objective, lp.a_eq.copy(), lp.b_eq.copy()
    m, n = a.shape
    if m == 0:
        if (c < -FEAS_TOL).any():
            return LPSolution("unbounded")
        return LPSolution("optimal", 0.0, np.zeros(n))
    neg = b < 0
    a[neg] *= -1
    b[neg] *= -1

    rows = np.zeros((m + 1, n + m + 1))
    rows[:m, :n] = a
    rows[:m, n:n + m] = np.eye(m)
    rows[:m, -1] = b
    rows[m, :n] = -a.sum(axis=0)
    rows[m, -1] = -b.sum()
    tab = _Tableau(rows, list(range(n, n + m)))
    tab.run(n + m)
    if -tab.t[m, -1] > FEAS_TOL * max(1.0, np.abs(b).max()):
        return LPSolution("infeasible", pivots=tuple(tab.pivots))

    # drive artificials out of the basis; rows where that is impossible are redundant
    keep = []
    for r in range(m):
        if tab.basis[r] >= n:
            cand = np.flatnonzero(np.abs(tab.t[r, :n]) > PIVOT_TOL)
            if cand.size == 0:
                continue
            tab.pivot(r, int(cand[0]))
        keep.append(r)
    t2 = np.zeros((len(keep) + 1, n + 1))
    t2[:-1, :n] = tab.t[keep, :n]
    t2[:-1, -1] = tab.t[keep, -1]
    basis = [tab.basis[r] for r in keep]
    t2[-1, :n] = c
    for r, j in enumerate(basis):
        t2[-1] -= c[j] * t2[r]
    phase2 = _Tableau(t2, basis)
    phase2.pivots = tab.pivots
    status = phase2.run(n)
    if status == "unbounded":
        return LPSolution("unbounded", pivots=tuple(phase2.pivots))
    x = np.zeros(n)
    for r, j in enumerate(phase2.basis):
        x[j] = phase2.t[r, -1]
    x[np.abs(x) < ZERO_TOL] = 0.0
    return LPSolution("optimal", float(c @ x), x, tuple(phase2.pivots))


def check_solution(lp: LinearProgram, sol: LPSolution, tol: float = 1e-8) -> bool:
    """Replay an optimal assignment against the constraints and the objective."""
    if sol.status != "optimal":
        return False
    x = sol.assignment
    return bool(
        (x >= -tol).all()
        and np.abs(lp.a_eq @ x - lp.b_eq).max(initial=0.0) <= tol
        and abs(lp.objective @ x - sol.value) <= tol
    )
