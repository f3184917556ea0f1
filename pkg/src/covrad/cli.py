"""Command-line interface: ``covrad <verb> ...``.

Every output embeds the resolved configuration (including the seed) so the
run can be repeated bit for bit.  Exit codes: 0 success, 2 invalid input,
3 infeasible LP, 4 enumeration cap exceeded, 1 any other library error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import warnings
from pathlib import Path

import numpy as np

from covrad import __version__
from covrad.errors import CapExceededError, CovradError, InfeasibleBoundError, InvalidInputError
from covrad.essential import estimate_eps_radius, estimate_sbc_mismatch, estimates_to_csv, rll0k_rule, rll0k_rule_mismatch
from covrad.graphs import capacity, determinize, primitivity_exponent
from covrad.markov import uniform_bernoulli
from covrad.markov_bound import formulate, solve_bound
from covrad.qcc import preflight, qcc_sweep, qcc_transmit
from covrad.quantizer import covering_radius_exact, covering_radius_upper_curve, sphere_covering_lower_bound
from covrad.registry import parse_code, parse_measure, parse_system

THREADS_ENV = "COVRAD_THREADS"

EXIT_OK, EXIT_ERROR, EXIT_INPUT, EXIT_INFEASIBLE, EXIT_CAP = 0, 1, 2, 3, 4


def _threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def _against(args, x):
    return parse_system(args.against) if args.against else parse_system(f"full:{x.q}")


def _config(args) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k not in ("func", "output", "format")}
    cfg["threads"] = _threads()
    cfg["version"] = __version__
    return cfg


def cmd_radius(args) -> dict:
    x = parse_system(args.system)
    y = _against(args, x)
    if args.mode == "exact":
        try:
            rep = covering_radius_exact(x, y, args.n, workers=_threads())
        except CapExceededError as exc:
            raise CapExceededError(f"{exc} (`covrad essential`)") from exc
        return rep.to_dict()
    if args.mode == "curve":
        rows = covering_radius_upper_curve(x, y, args.nmax)
        return {"curve": [{"n": n, "radius": r, "normalized": v} for n, r, v in rows]}
    return {"lower_bound": sphere_covering_lower_bound(x, y)}


def cmd_essential(args) -> dict:
    x = parse_system(args.system)
    mu = parse_measure(args.measure, x.q)
    est = estimate_eps_radius(x, mu, args.n, args.samples, args.eps, args.seed)
    if args.format == "csv":
        return {"_csv": estimates_to_csv([est])}
    return est.to_dict()


def cmd_sbc(args) -> dict:
    rule = rll0k_rule(args.k, args.block)
    rate, se = estimate_sbc_mismatch(rule, uniform_bernoulli(2), args.n, args.samples, args.seed)
    return {"rate": rate, "stderr": se, "analytic": rll0k_rule_mismatch(args.k, args.block)}


def cmd_bound(args) -> dict:
    x = parse_system(args.system)
    y = _against(args, x)
    py = parse_measure(args.measure, y.q)
    problem = formulate(x, y, py)
    res = solve_bound(problem)
    return {"value": res.value, "chain": res.chain.to_dict(), "constraints_checked": res.constraints_checked}


def cmd_qcc(args) -> dict:
    x = parse_system(args.system)
    code = parse_code(args.code)
    pf = preflight(code, x)
    if args.mode == "run":
        rng = np.random.default_rng(args.seed)
        message = args.message if args.message is not None else int(rng.integers(code.size))
        if args.positions:
            positions = [int(p) for p in args.positions.split(",")]
        else:
            positions = rng.choice(code.n, size=args.errors, replace=False).tolist()
        run = qcc_transmit(code, x, message, positions, rng)
        guaranteed = run.channel_errors <= code.t - run.quantization_distance
        return {"run": run.to_dict(), "preflight": pf.to_dict(), "guaranteed": guaranteed}
    weights = [int(w) for w in args.weights.split(",")]
    summaries = qcc_sweep(code, x, args.trials, weights, args.seed)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["weight", "success_rate", "trials"])
        for s in summaries:
            w.writerow([s.channel_error_weight, s.success_rate, s.trials])
        return {"_csv": buf.getvalue()}
    return {"preflight": pf.to_dict(), "sweep": [s.to_dict() for s in summaries]}


def cmd_system(args) -> dict:
    x = parse_system(args.system)
    g = x.presentation
    if args.mode == "build":
        return g.to_dict()
    if args.mode == "determinize":
        return determinize(g).to_dict()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        h = capacity(x, auto_determinize=True)
    info = {
        "vertices": g.vertex_count, "edges": g.edge_count, "q": g.q,
        "irreducible": x.is_irreducible, "primitive": x.is_primitive, "deterministic": x.is_deterministic,
        "capacity": h, "primitivity_exponent": primitivity_exponent(g) if x.is_primitive else None,
    }
    if caught:
        info["warnings"] = [str(w.message) for w in caught]
    return info


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="covrad", description="Covering radii of constrained systems.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="verb", required=True)

    def common(sp, system=True):
        if system:
            sp.add_argument("--system", required=True, help="rll0k:K | dinf:D | rep:Q | full:Q | file:PATH")
        sp.add_argument("--output", "-o", help="write here instead of stdout")
        sp.add_argument("--format", choices=("json", "csv"), default="json")

    r = sub.add_parser("radius", help="exact covering radius, radius curve, or ball-covering lower bound")
    r.add_argument("mode", choices=("exact", "curve", "lower"))
    common(r)
    r.add_argument("--against", help="covered system (default: full shift)")
    r.add_argument("--n", type=int, default=8)
    r.add_argument("--nmax", type=int, default=8)
    r.set_defaults(func=cmd_radius)

    e = sub.add_parser("essential", help="Monte Carlo epsilon-covering radius")
    common(e)
    e.add_argument("--measure", default="uniform")
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--samples", type=int, default=200)
    e.add_argument("--eps", type=float, default=0.5)
    e.add_argument("--seed", type=int, required=True)
    e.set_defaults(func=cmd_essential)

    s = sub.add_parser("sbc", help="mismatch rate of the (0,k)-RLL sliding-block rule")
    common(s, system=False)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--block", type=int, required=True, help="block multiplier N (window N(k+1))")
    s.add_argument("--n", type=int, default=10**5)
    s.add_argument("--samples", type=int, default=20)
    s.add_argument("--seed", type=int, required=True)
    s.set_defaults(func=cmd_sbc)

    b = sub.add_parser("bound", help="Markov-extension LP upper bound")
    b.add_argument("mode", choices=("markov",))
    common(b)
    b.add_argument("--against", help="covered system (default: full shift)")
    b.add_argument("--measure", default="uniform")
    b.set_defaults(func=cmd_bound)

    qp = sub.add_parser("qcc", help="quantized-constraint concatenation runs")
    qp.add_argument("mode", choices=("run", "sweep"))
    common(qp)
    qp.add_argument("--code", required=True, help="rep:Q:N | file:PATH")
    qp.add_argument("--seed", type=int, required=True)
    qp.add_argument("--errors", type=int, default=0, help="random error weight (run)")
    qp.add_argument("--positions", help="comma-separated error positions (run)")
    qp.add_argument("--message", type=int)
    qp.add_argument("--weights", default="0,1,2", help="comma-separated error weights (sweep)")
    qp.add_argument("--trials", type=int, default=100)
    qp.set_defaults(func=cmd_qcc)

    sy = sub.add_parser("system", help="build, inspect or determinize a presentation")
    sy.add_argument("mode", choices=("build", "info", "determinize"))
    common(sy)
    sy.set_defaults(func=cmd_system)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = args.func(args)
    except InvalidInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InfeasibleBoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except CovradError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if "_csv" in result:
        text = result["_csv"]
    else:
        text = json.dumps({"config": _config(args), "result": result}, indent=2) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
