"""Parse textual system, measure and code specifications.

Systems: ``rll0k:K``, ``dinf:D``, ``rep:Q``, ``full:Q``, ``file:PATH`` (graph JSON).
Measures: ``uniform`` / ``uniform:Q``, ``file:PATH`` (Markov chain JSON).
Codes: ``rep:Q:N``, ``file:PATH`` (``{"q": Q, "codewords": [[...], ...]}``).
"""

from __future__ import annotations

import json
from pathlib import Path

from covrad.errors import InvalidInputError
from covrad.graphs import (
    ConstrainedSystem,
    LabeledGraph,
    build_full_shift,
    build_repetition,
    build_rll_0k,
    build_rll_d_inf,
    make_system,
)
from covrad.markov import MarkovChain, uniform_bernoulli
from covrad.qcc import BlockCode, make_repetition_code, make_table_code

_BUILDERS = {"rll0k": build_rll_0k, "dinf": build_rll_d_inf, "rep": build_repetition, "full": build_full_shift}


def _int(text: str, spec: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise InvalidInputError(f"bad integer {text!r} in {spec!r}") from None


def _read_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidInputError(f"cannot read {path}: {exc}") from exc


def parse_system(spec: str) -> ConstrainedSystem:
    kind, _, arg = spec.partition(":")
    if kind == "file":
        return make_system(LabeledGraph.from_dict(_read_json(arg)), name=spec)
    if kind not in _BUILDERS or not arg:
        raise InvalidInputError(f"unknown system {spec!r}; expected one of rll0k:K, dinf:D, rep:Q, full:Q, file:PATH")
    return _BUILDERS[kind](_int(arg, spec))


def parse_measure(spec: str, default_q: int) -> MarkovChain:
    kind, _, arg = spec.partition(":")
    if kind == "uniform":
        return uniform_bernoulli(_int(arg, spec) if arg else default_q)
    if kind == "file":
        return MarkovChain.from_dict(_read_json(arg))
    raise InvalidInputError(f"unknown measure {spec!r}; expected uniform[:Q] or file:PATH")


def parse_code(spec: str) -> BlockCode:
    parts = spec.split(":")
    if parts[0] == "rep" and len(parts) == 3:
        return make_repetition_code(_int(parts[1], spec), _int(parts[2], spec))
    if parts[0] == "file" and len(parts) >= 2:
        d = _read_json(spec[len("file:"):])
        try:
            return make_table_code(int(d["q"]), d["codewords"], name=spec)
        except (KeyError, TypeError) as exc:
            raise InvalidInputError(f"malformed code file: {exc}") from exc
    raise InvalidInputError(f"unknown code {spec!r}; expected rep:Q:N or file:PATH")
