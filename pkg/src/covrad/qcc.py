"""Quantized-constraint concatenation: encode, quantize, transmit, decode.

A message is encoded with a block code, the codeword is moved to the nearest
word of the constrained language (an irreversible step of ``r`` flips), the
channel substitutes ``e`` symbols, and the block decoder recovers the message
whenever ``r + e <= t``.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from itertools import combinations
from typing import Iterable, Mapping, Sequence

import numpy as np

from covrad.errors import InvalidInputError
from covrad.graphs import ConstrainedSystem
from covrad.quantizer import quantize, quantize_distances

MAX_TABLE_CODEWORDS = 2**14


@dataclass(frozen=True, eq=False)
class BlockCode:
    """Explicit-table block code with exhaustive nearest-codeword decoding.

    A single-codeword code has no pairwise distance; ``d_min`` is then taken
    as ``n + 1`` so that ``t = n // 2`` and decoding always returns it.
    """

    q: int
    codewords: np.ndarray
    d_min: int
    name: str = ""

    @property
    def n(self) -> int:
        return int(self.codewords.shape[1])

    @property
    def size(self) -> int:
        return int(self.codewords.shape[0])

    @property
    def t(self) -> int:
        return (self.d_min - 1) // 2

    def encode(self, message: int) -> tuple[int, ...]:
        if not 0 <= message < self.size:
            raise InvalidInputError(f"message must be in 0..{self.size - 1}, got {message}")
        return tuple(int(a) for a in self.codewords[message])

    def decode(self, word: Sequence[int]) -> int:
        """Index of the nearest codeword; ties go to the lowest index."""
        w = np.asarray(word)
        if w.shape != (self.n,):
            raise InvalidInputError(f"expected a length-{self.n} word")
        return int((self.codewords != w[None, :]).sum(axis=1).argmin())

    def decode_word(self, word: Sequence[int]) -> tuple[int, ...]:
        return self.encode(self.decode(word))


def _min_distance(cw: np.ndarray) -> int:
    m, n = cw.shape
    if m == 1:
        return n + 1
    best = n
    for i in range(m - 1):
        d = (cw[i + 1:] != cw[i][None, :]).sum(axis=1)
        best = min(best, int(d.min()))
    return best


def make_table_code(q: int, codewords: Iterable[Sequence[int]], name: str = "") -> BlockCode:
    cw = np.array([list(c) for c in codewords], dtype=np.int64)
    if cw.ndim != 2 or cw.shape[0] == 0 or cw.shape[1] == 0:
        raise InvalidInputError("need a nonempty list of equal-length, nonempty codewords")
    if cw.shape[0] > MAX_TABLE_CODEWORDS:
        raise InvalidInputError(f"table codes are limited to {MAX_TABLE_CODEWORDS} codewords")
    if cw.min() < 0 or cw.max() >= q:
        raise InvalidInputError(f"codeword symbols must lie in 0..{q - 1}")
    if len({tuple(r) for r in cw.tolist()}) != cw.shape[0]:
        raise InvalidInputError("duplicate codewords")
    return BlockCode(q, cw, _min_distance(cw), name)


def make_repetition_code(q: int, n: int) -> BlockCode:
    if n < 1 or q < 1:
        raise InvalidInputError("q and n must be >= 1")
    return make_table_code(q, [[a] * n for a in range(q)], name=f"rep:{q}:{n}")


@dataclass(frozen=True)
class QccRun:
    message: int
    codeword: tuple[int, ...]
    quantized: tuple[int, ...]
    quantization_distance: int
    channel_errors: int
    received: tuple[int, ...]
    decoded: int
    success: bool

    def to_dict(self) -> dict:
        d = asdict(self)
        for k in ("codeword", "quantized", "received"):
            d[k] = list(d[k])
        return d


def channel(word: Sequence[int], q: int, error_positions: Iterable[int],
            rng: np.random.Generator, error_values: Mapping[int, int] | None = None) -> tuple[int, ...]:
    """Substitute each listed position by a different symbol.

    The replacement is ``error_values[i]`` when given, else uniform over the
    other ``q-1`` symbols.
    """
    out = list(word)
    for i in sorted(set(error_positions)):
        if not 0 <= i < len(out):
            raise InvalidInputError(f"error position {i} outside the word")
        if error_values is not None and i in error_values:
            v = int(error_values[i])
            if v == out[i] or not 0 <= v < q:
                raise InvalidInputError(f"error value at {i} must be a different symbol in 0..{q - 1}")
        else:
            v = int(rng.integers(q - 1))
            v += v >= out[i]
        out[i] = v
    return tuple(out)


def qcc_transmit(code: BlockCode, x: ConstrainedSystem, message: int, error_positions: Iterable[int],
                 seed: int | np.random.Generator = 0,
                 error_values: Mapping[int, int] | None = None) -> QccRun:
    """Run one message through encoder, quantizer, channel and decoder."""
    if code.q != x.q:
        raise InvalidInputError("code and system alphabets differ")
    if code.q < 2:
        raise InvalidInputError("the channel needs at least two symbols")
    errs = set(error_positions)
    if len(errs) > code.n:
        raise InvalidInputError("more error positions than symbols")
    rng = np.random.default_rng(seed)
    y = code.encode(message)
    qr = quantize(x, y)
    received = channel(qr.nearest, code.q, errs, rng, error_values)
    decoded = code.decode(received)
    return QccRun(
        message=message, codeword=y, quantized=qr.nearest, quantization_distance=qr.distance,
        channel_errors=len(errs), received=received, decoded=decoded, success=decoded == message,
    )


def codeword_quantization_distances(code: BlockCode, x: ConstrainedSystem) -> np.ndarray:
    """Distance from every codeword to the language of ``x``."""
    return quantize_distances(x, code.codewords)


@dataclass(frozen=True)
class Preflight:
    """Code-specific covering radius and the error weights it guarantees."""

    t: int
    max_quantization_distance: int
    guaranteed_weight: int | None

    def to_dict(self) -> dict:
        return asdict(self)


def preflight(code: BlockCode, x: ConstrainedSystem) -> Preflight:
    r = int(codeword_quantization_distances(code, x).max())
    g = code.t - r
    return Preflight(code.t, r, g if g >= 0 else None)


@dataclass(frozen=True)
class QccSummary:
    trials: int
    channel_error_weight: int
    success_rate: float
    mean_quantization_distance: float
    histogram: dict[int, int] = field(default_factory=dict)
    preflight: Preflight | None = None
    seed: int = 0

    def to_dict(self) -> dict:
        d = asdict(self)
        d["histogram"] = {str(k): v for k, v in sorted(self.histogram.items())}
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def qcc_experiment(code: BlockCode, x: ConstrainedSystem, trials: int, channel_error_weight: int,
                   seed: int) -> QccSummary:
    """Random messages through a random weight-``w`` substitution channel."""
    if not 0 <= channel_error_weight <= code.n:
        raise InvalidInputError("channel error weight must lie in 0..n")
    if trials < 1:
        raise InvalidInputError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    successes = 0
    hist: dict[int, int] = {}
    total_r = 0
    for _ in range(trials):
        m = int(rng.integers(code.size))
        pos = rng.choice(code.n, size=channel_error_weight, replace=False)
        run = qcc_transmit(code, x, m, pos.tolist(), rng)
        successes += run.success
        total_r += run.quantization_distance
        hist[run.quantization_distance] = hist.get(run.quantization_distance, 0) + 1
    return QccSummary(
        trials=trials, channel_error_weight=channel_error_weight, success_rate=successes / trials,
        mean_quantization_distance=total_r / trials, histogram=hist, preflight=preflight(code, x),
        seed=seed,
    )


def qcc_sweep(code: BlockCode, x: ConstrainedSystem, trials: int, weights: Iterable[int],
              seed: int) -> list[QccSummary]:
    return [qcc_experiment(code, x, trials, w, seed + i) for i, w in enumerate(weights)]


def error_patterns(n: int, q: int, max_weight: int):
    """Every ``(positions, values)`` substitution pattern of weight ``<= max_weight``.

    Values are offsets ``1..q-1`` added mod ``q`` to the transmitted symbol.
    """
    for w in range(max_weight + 1):
        for pos in combinations(range(n), w):
            for offs in np.ndindex(*([q - 1] * w)):
                yield pos, tuple(o + 1 for o in offs)


def verify_guarantee(code: BlockCode, x: ConstrainedSystem) -> tuple[int, int]:
    """Exhaustively check decoding under every pattern of weight ``<= t - r``.

    ``r`` is the largest codeword quantization distance.  Returns
    ``(patterns_checked, failures)``; nothing is checked when ``t < r``.
    """
    pf = preflight(code, x)
    if pf.guaranteed_weight is None:
        return 0, 0
    checked = failures = 0
    rng = np.random.default_rng(0)
    for m in range(code.size):
        y = code.encode(m)
        xq = quantize(x, y).nearest
        for pos, offs in error_patterns(code.n, code.q, pf.guaranteed_weight):
            vals = {p: (xq[p] + o) % code.q for p, o in zip(pos, offs)}
            rec = channel(xq, code.q, pos, rng, vals)
            checked += 1
            failures += code.decode(rec) != m
    return checked, failures
