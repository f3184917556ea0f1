"""Monte Carlo estimates of epsilon-covering radii and sliding-block extensions.

Finite-length estimates only: each estimate is indexed by ``(n, N, eps)``
and its seed.  Nothing here claims a limit value.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass
from typing import Callable, Sequence

import numpy as np

from covrad.errors import InvalidInputError
from covrad.graphs import ConstrainedSystem
from covrad.markov import MarkovChain, sample_words
from covrad.quantizer import quantize_distances

CSV_FIELDS = ("n", "N", "eps", "quantile", "normalized", "mean", "stderr", "seed")


@dataclass(frozen=True)
class EpsRadiusEstimate:
    n: int
    samples: int
    epsilon: float
    quantile_radius: int
    normalized: float
    mean_normalized: float
    stderr: float
    seed: int

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def csv_row(self) -> dict:
        return {
            "n": self.n, "N": self.samples, "eps": self.epsilon, "quantile": self.quantile_radius,
            "normalized": self.normalized, "mean": self.mean_normalized, "stderr": self.stderr,
            "seed": self.seed,
        }


def estimates_to_csv(estimates: Sequence[EpsRadiusEstimate]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for est in estimates:
        w.writerow(est.csv_row())
    return buf.getvalue()


def empirical_quantile(distances: Sequence[int], eps: float) -> int:
    """The ``ceil((1-eps) N)``-th smallest distance (1-based order statistic)."""
    d = np.sort(np.asarray(distances))
    idx = math.ceil((1.0 - eps) * len(d) - 1e-9)
    return int(d[max(idx, 1) - 1])


def estimate_eps_radius(x: ConstrainedSystem, mu: MarkovChain, n: int, N: int, eps: float,
                        seed: int) -> EpsRadiusEstimate:
    """Sample ``N`` words of length ``n`` from ``mu`` and quantize them into ``x``.

    Returns the ``(1-eps)``-quantile of the distances plus their mean and the
    standard error of the mean, all normalized by ``n``.
    """
    if n < 1:
        raise InvalidInputError(f"n must be >= 1, got {n}")
    if N < 10:
        raise InvalidInputError(f"need at least 10 samples, got {N}")
    if not 0.0 < eps < 1.0:
        raise InvalidInputError(f"eps must lie in (0, 1), got {eps}")
    if mu.graph.q != x.q:
        raise InvalidInputError("measure and system alphabets differ")
    words = sample_words(mu, n, N, seed)
    dist = quantize_distances(x, words)
    r = empirical_quantile(dist, eps)
    norm = dist / n
    return EpsRadiusEstimate(
        n=n, samples=N, epsilon=eps, quantile_radius=r, normalized=r / n,
        mean_normalized=float(norm.mean()), stderr=float(norm.std(ddof=1) / math.sqrt(N)), seed=seed,
    )


def analytic_essential_0k(k: int) -> float:
    """Essential covering radius of (0,k)-RLL under uniform binary input."""
    if k < 1:
        raise InvalidInputError(f"k must be >= 1, got {k}")
    return 1.0 / (2 * (2 ** (k + 1) - 1))


# -- sliding-block codes --------------------------------------------------------


@dataclass(frozen=True)
class SlidingBlockRule:
    """Local rule reading the window ``y[i-look_back : i+look_ahead+1]``.

    ``rule`` maps a window (tuple of symbols) to an output symbol.
    ``vectorized``, when given, maps a 2-D batch of words to the 2-D batch of
    interior images and must agree with ``rule``.
    """

    look_back: int
    look_ahead: int
    rule: Callable[[tuple[int, ...]], int]
    vectorized: Callable[[np.ndarray], np.ndarray] | None = None
    name: str = ""

    @property
    def width(self) -> int:
        return self.look_back + self.look_ahead + 1


def _interior(rule: SlidingBlockRule, y: np.ndarray) -> np.ndarray:
    return y[:, rule.look_back: y.shape[1] - rule.look_ahead]


def apply_sliding_block_batch(rule: SlidingBlockRule, words) -> tuple[np.ndarray, np.ndarray]:
    """Images on interior positions and per-word mismatch counts."""
    y = np.asarray(words, dtype=np.int64)
    if y.ndim == 1:
        y = y[None, :]
    if y.shape[1] <= rule.look_back + rule.look_ahead:
        raise InvalidInputError(f"word length {y.shape[1]} does not exceed the window span {rule.width - 1}")
    if rule.vectorized is not None:
        img = np.asarray(rule.vectorized(y), dtype=np.int64)
    else:
        n = y.shape[1]
        img = np.array([
            [rule.rule(tuple(int(a) for a in row[i - rule.look_back: i + rule.look_ahead + 1]))
             for i in range(rule.look_back, n - rule.look_ahead)]
            for row in y
        ], dtype=np.int64)
    mismatches = (img != _interior(rule, y)).sum(axis=1)
    return img, mismatches


def apply_sliding_block(rule: SlidingBlockRule, y: Sequence[int]) -> tuple[tuple[int, ...], int]:
    """Apply ``rule`` at every interior position of ``y``.

    Positions without a full window are dropped rather than padded.
    """
    img, mism = apply_sliding_block_batch(rule, [list(y)])
    return tuple(int(a) for a in img[0]), int(mism[0])


def identity_rule() -> SlidingBlockRule:
    return SlidingBlockRule(0, 0, lambda w: w[0], vectorized=lambda y: y, name="identity")


def constant_rule(symbol: int) -> SlidingBlockRule:
    return SlidingBlockRule(0, 0, lambda w: symbol, vectorized=lambda y: np.full_like(y, symbol),
                            name=f"constant:{symbol}")


def _zero_suffix(window: Sequence[int]) -> int:
    c = 0
    for a in reversed(window):
        if a != 0:
            break
        c += 1
    return c


def rll0k_rule(k: int, N: int) -> SlidingBlockRule:
    """Insert a 1 wherever the input's preceding zero run reaches ``k`` mod ``k+1``.

    The rule looks back ``N(k+1)-1`` symbols, measures the trailing zero run
    ``c`` of that block, and outputs 1 when ``c % (k+1) == k``; otherwise it
    copies the current symbol.  Images never contain ``k+1`` zeros in a row.
    """
    if k < 1 or N < 1:
        raise InvalidInputError("k and N must be >= 1")
    m = N * (k + 1) - 1

    def rule(window: tuple[int, ...]) -> int:
        c = _zero_suffix(window[:m])
        return 1 if c % (k + 1) == k else window[m]

    def vectorized(y: np.ndarray) -> np.ndarray:
        n = y.shape[1]
        pos = np.arange(n)
        last_one = np.maximum.accumulate(np.where(y != 0, pos[None, :], -1), axis=1)
        run_incl = pos[None, :] - last_one  # zeros ending at i, inclusive
        c = np.minimum(run_incl[:, m - 1: n - 1], m)
        cur = y[:, m:]
        return np.where(c % (k + 1) == k, 1, cur)

    return SlidingBlockRule(m, 0, rule, vectorized, name=f"rll0k:k={k},N={N}")


def rll0k_rule_mismatch(k: int, N: int) -> float:
    """Exact mismatch probability of :func:`rll0k_rule` under uniform input."""
    return 2.0 ** (-N * (k + 1)) + 0.5 * sum(2.0 ** (-i * (k + 1)) for i in range(1, N))


def estimate_sbc_mismatch(rule: SlidingBlockRule, mu: MarkovChain, n: int, N_samples: int,
                          seed: int) -> tuple[float, float]:
    """Average interior mismatch rate of ``rule`` on words sampled from ``mu``.

    Returns ``(rate, stderr)`` where the standard error is taken across the
    independent samples.
    """
    if n <= rule.look_back + rule.look_ahead:
        raise InvalidInputError("n must exceed the rule's window span")
    if N_samples < 2:
        raise InvalidInputError("need at least 2 samples for a standard error")
    words = sample_words(mu, n, N_samples, seed)
    _, mism = apply_sliding_block_batch(rule, words)
    rates = mism / (n - rule.look_back - rule.look_ahead)
    return float(rates.mean()), float(rates.std(ddof=1) / math.sqrt(N_samples))
