"""Command-line interface.

Exit status: 0 on success, 1 when a verified identity or inequality fails,
2 on usage, parse or domain errors. Floats are printed with ``repr``, the
shortest decimal that round-trips exactly.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .coupling import convexity_gap, diversification_gap, prepare
from .distribution import DiscreteDistribution, Weights, check_level, mix
from .errors import ParseError, RiskMixError
from .es import es_curve, es_integral, es_tail, es_value
from .formats import load_distribution, load_joint, load_spectral
from .harness import GenConfig, level_grid, run_suite
from .lemma import concavity_gap, lemma_decomposition
from .oracle import es_minimization
from .spectral import spectral_value

log = logging.getLogger("riskmix")

METHODS = ("tail", "integral", "minimization", "all")


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return str(x).lower()
    return repr(float(x))


def parse_beta(text: str) -> Weights:
    try:
        entries = tuple(float(b) for b in text.split(","))
    except ValueError:
        raise ParseError(f"--beta must be a comma-separated list of reals, got {text!r}") from None
    return Weights(entries)


def parse_grid(text: str, d: DiscreteDistribution) -> list[float]:
    text = text.strip()
    if text == "":
        return []
    if text == "breakpoints":
        return level_grid(d, "breakpoints")
    if text.startswith("n="):
        try:
            k = int(text[2:])
        except ValueError:
            raise ParseError(f"bad grid size in {text!r}") from None
        if k < 0:
            raise ParseError("grid size must be nonnegative")
        if k == 1:
            return [0.0]
        return [i / (k - 1) for i in range(k)]
    try:
        return [float(a) for a in text.split(",")]
    except ValueError:
        raise ParseError(f"grid must be 'n=K', 'breakpoints' or a list of levels, got {text!r}") from None


def _levels(alphas) -> list[float]:
    if not alphas:
        raise ParseError("at least one --alpha is required")
    return [check_level(a) for a in alphas]


def _emit_row(out, fmt_name: str, header: list[str], row: list) -> None:
    if fmt_name == "json":
        out.write(json.dumps(dict(zip(header, row))) + "\n")
    else:
        out.write(",".join(fmt(x) for x in row) + "\n")


def _at(fn, d, a):
    # the open-interval forms have no level 0; use the essinf definition there
    return es_value(d, a) if a == 0.0 else fn(d, a)


def cmd_es(args, out) -> int:
    d = load_distribution(args.input)
    levels = _levels(args.alpha)
    fmt_name = args.format or "csv"
    minimize = lambda d, a: es_minimization(d, a)[0]  # noqa: E731
    for a in levels:
        if args.method == "tail":
            _emit_row(out, fmt_name, ["alpha", "es"], [a, es_value(d, a)])
        elif args.method == "integral":
            _emit_row(out, fmt_name, ["alpha", "es"], [a, _at(es_integral, d, a)])
        elif args.method == "minimization":
            _emit_row(out, fmt_name, ["alpha", "es"], [a, _at(minimize, d, a)])
        else:
            tail, integral, minimum = (_at(f, d, a) for f in (es_tail, es_integral, minimize))
            residual = max(abs(integral - tail), abs(minimum - tail))
            _emit_row(out, fmt_name, ["alpha", "tail", "integral", "minimization", "residual"],
                      [a, tail, integral, minimum, residual])
    return 0


def cmd_curve(args, out) -> int:
    d = load_distribution(args.input)
    grid = parse_grid(args.grid, d)
    fmt_name = args.format or "csv"
    if fmt_name == "csv":
        out.write("alpha,es\n")
    for a, v in es_curve(d, grid):
        _emit_row(out, fmt_name, ["alpha", "es"], [a, v])
    return 0


def _emit_report(out, fmt_name: str, check: str, report) -> None:
    body = report.to_json()
    if fmt_name == "csv":
        row = [check, body["alpha"], body["lhs"], body["rhs"],
               body.get("gap", body.get("decomposition_residual"))]
        out.write(",".join([row[0], *(fmt(x) for x in row[1:])]) + "\n")
    else:
        out.write(json.dumps({"check": check, "report": body}) + "\n")


def cmd_mix(args, out) -> int:
    comps = [load_distribution(p) for p in args.inputs]
    beta = parse_beta(args.beta) if args.beta else Weights.uniform(len(comps))
    levels = _levels(args.alpha)
    fmt_name = args.format or "json"
    xi = mix(comps, beta)
    if fmt_name == "csv":
        out.write("check,alpha,lhs,rhs,gap\n")
    ok = True
    for a in levels:
        if 0.0 < a < 1.0:
            lemma = lemma_decomposition(comps, beta, a, mixture=xi)
            ok &= lemma.ok
            _emit_report(out, fmt_name, "lemma", lemma)
        gap = concavity_gap(comps, beta, a, mixture=xi)
        ok &= gap.ok
        _emit_report(out, fmt_name, "concavity", gap)
    return 0 if ok else 1


def cmd_joint(args, out) -> int:
    joint = load_joint(args.input)
    beta = parse_beta(args.beta) if args.beta else Weights.uniform(joint.n_positions)
    levels = _levels(args.alpha)
    fmt_name = args.format or "json"
    pr = prepare(joint, beta)
    if fmt_name == "csv":
        out.write("check,alpha,lhs,rhs,gap\n")
    ok = True
    for a in levels:
        for check, fn in (("convexity", convexity_gap), ("diversification", diversification_gap)):
            rep = fn(joint, beta, a, prepared=pr)
            ok &= rep.ok
            _emit_report(out, fmt_name, check, rep)
    return 0 if ok else 1


def cmd_spectral(args, out) -> int:
    d = load_distribution(args.input)
    nu = load_spectral(args.nu)
    value = spectral_value(d, nu)
    if (args.format or "csv") == "json":
        out.write(json.dumps({"spectral": value, "nu": nu.to_json()}) + "\n")
    else:
        out.write(fmt(value) + "\n")
    return 0


def cmd_check(args, out) -> int:
    config = GenConfig(seed=args.seed, instance_count=args.instances, exhaustive=args.exhaustive)
    report = run_suite(config)
    body = report.dumps()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(body)
    else:
        out.write(body)
    print(
        f"riskmix check: seed={report.seed} failures={report.n_failures} "
        f"wall_time={report.wall_time:.2f}s",
        file=sys.stderr,
    )
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="riskmix", description="Expected Shortfall on discrete laws: mixtures, couplings, spectral measures."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, alpha=True, fmt=True):
        if alpha:
            p.add_argument("--alpha", type=float, action="append", help="level in [0,1]; repeatable")
        if fmt:
            p.add_argument("--format", choices=("csv", "json"), default=None)

    p = sub.add_parser("es", help="Expected Shortfall at given levels")
    p.add_argument("input", help="distribution JSON or sample CSV")
    p.add_argument("--method", choices=METHODS, default="tail")
    common(p)
    p.set_defaults(func=cmd_es)

    p = sub.add_parser("curve", help="ES curve as CSV plot data")
    p.add_argument("input")
    p.add_argument("--grid", default="breakpoints", help="'n=K', 'breakpoints' or comma list")
    common(p, alpha=False)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("mix", help="lemma decomposition and concavity gap of a mixture")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--beta", help="comma-separated mixture weights (default uniform)")
    common(p)
    p.set_defaults(func=cmd_mix)

    p = sub.add_parser("joint", help="convexity and diversification gaps of a joint law")
    p.add_argument("input", help="joint scenarios JSON")
    p.add_argument("--beta")
    common(p)
    p.set_defaults(func=cmd_joint)

    p = sub.add_parser("spectral", help="spectral risk measure value")
    p.add_argument("input")
    p.add_argument("--nu", required=True, help="spectral measure JSON")
    common(p, alpha=False)
    p.set_defaults(func=cmd_spectral)

    p = sub.add_parser("check", help="run the randomized and exhaustive verification suite")
    p.add_argument("--seed", type=int, default=GenConfig.seed)
    p.add_argument("--instances", type=int, default=GenConfig.instance_count)
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    p.add_argument("--no-exhaustive", dest="exhaustive", action="store_false")
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None, out=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(name)s: %(message)s")
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except RiskMixError as exc:
        log.error("%s", exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())
