"""Command-line front end: ``ldic <command> ...``.

Exit status: 0 on success, 1 when a verification or comparison fails,
2 on bad input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

from .channel import ChannelParams, format_rational, load_channel_file, parse_rational
from .gf2 import ParameterError
from .regions import (
    inner_region,
    outer_region,
    p_star,
    region_equal,
    scheme_constants,
    sym_capacity,
)
from .regions.polyhedra import UnboundedRegionError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _rational_arg(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ParameterError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _rational_list(text: str) -> list[Fraction]:
    return [_rational_arg(t) for t in text.split(",") if t.strip()]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _decimal(x: Fraction, digits: int = 6) -> str:
    return f"{float(x):.{digits}f}"


def _channel_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--channel", type=Path, help="JSON file with n11..n22 and q00..q11")
    for name in ("n11", "n12", "n21", "n22"):
        p.add_argument(f"--{name}", type=int)
    p.add_argument("--p1", type=_rational_arg)
    p.add_argument("--p2", type=_rational_arg)


def _channel(args) -> tuple[ChannelParams, Fraction, Fraction]:
    if args.channel is not None:
        params, dist = load_channel_file(args.channel)
        p1 = args.p1 if args.p1 is not None else dist.p1
        p2 = args.p2 if args.p2 is not None else dist.p2
        return params, p1, p2
    ns = [getattr(args, k) for k in ("n11", "n12", "n21", "n22")]
    if any(v is None for v in ns) or args.p1 is None or args.p2 is None:
        raise UsageError("give --channel FILE or all of --n11 --n12 --n21 --n22 --p1 --p2")
    return ChannelParams(*ns), args.p1, args.p2


def _region_text(region) -> str:
    return "\n".join(str(c) for c in region.constraints) or "(no constraints)"


def _emit(args, payload, human: str, rows=None) -> None:
    fmt = args.format
    if fmt == "json":
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    elif fmt == "csv":
        if rows is None:
            raise UsageError("this command has no tabular output; use --format json or human")
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(rows[0].keys()) if rows else [], lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        text = buf.getvalue()
    else:
        text = human.rstrip("\n") + "\n"
    if args.out is not None:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _constraint_rows(region) -> list[dict]:
    rows = []
    for c in region.constraints:
        row = {v: format_rational(c.coeff(v)) for v in region.variables}
        row["bound"] = format_rational(c.bound)
        rows.append(row)
    return rows


def cmd_region(args) -> int:
    params, p1, p2 = _channel(args)
    outer = outer_region(params, p1, p2)
    if args.kind == "outer":
        _emit(args, outer.to_dict(), _region_text(outer), _constraint_rows(outer))
        return EXIT_OK
    inner = inner_region(scheme_constants(params, p1, p2))
    if args.kind == "inner":
        _emit(args, inner.to_dict(), _region_text(inner), _constraint_rows(inner))
        return EXIT_OK
    rep = region_equal(inner, outer)
    witness = {k: format_rational(v) for k, v in rep.witness.items()} if rep.witness else None
    side = {"a_not_b": "inner", "b_not_a": "outer"}.get(rep.side)
    payload = {"equal": rep.equal, "witness": witness, "witness_in": side, "inner": inner.to_dict(), "outer": outer.to_dict()}
    human = "equal" if rep.equal else f"not equal: witness {witness} lies only in the {side} region"
    row = {"equal": rep.equal, "witness_in": side or "", **{k: (witness or {}).get(k, "") for k in ("R1", "R2")}}
    _emit(args, payload, human, [row])
    return EXIT_OK if rep.equal else EXIT_FAIL


def cmd_symcap(args) -> int:
    try:
        value = sym_capacity(args.n, args.alpha, args.p)
    except ParameterError as exc:
        raise UsageError(str(exc)) from None
    row = {"n": args.n, "alpha": format_rational(args.alpha), "p": format_rational(args.p), "csym": format_rational(value)}
    _emit(args, {**row, "decimal": _decimal(value)}, f"{format_rational(value)} ({_decimal(value)})", [row])
    return EXIT_OK


def cmd_pstar(args) -> int:
    value = p_star(args.alpha)
    row = {"alpha": format_rational(args.alpha), "pstar": format_rational(value)}
    _emit(args, {**row, "decimal": _decimal(value)}, f"{format_rational(value)} ({_decimal(value)})", [row])
    return EXIT_OK


def cmd_sweep(args) -> int:
    rows = []
    for alpha in args.alpha:
        for p in args.p:
            try:
                c = sym_capacity(args.n, alpha, p)
            except ParameterError as exc:
                raise UsageError(str(exc)) from None
            rows.append(
                {
                    "alpha": format_rational(alpha),
                    "p": format_rational(p),
                    "csym": format_rational(c),
                    "pstar": format_rational(p_star(alpha)),
                }
            )
    human = "\n".join(f"alpha={r['alpha']:>6} p={r['p']:>5} csym={r['csym']:>7} pstar={r['pstar']}" for r in rows)
    _emit(args, {"n": args.n, "rows": rows}, human, rows)
    return EXIT_OK


def cmd_verify(args) -> int:
    from . import verify

    if args.nmax > 6:
        print(f"warning: nmax={args.nmax} makes the grid large", file=sys.stderr)
    if args.nmax < 0:
        raise UsageError("--nmax must be nonnegative")
    kw = {"nmax": args.nmax}
    if args.suite in ("theorem1-grid", "fact1") and args.pgrid is not None:
        kw["pgrid"] = tuple(args.pgrid)
    if args.suite in ("appendix-a", "entropy-bounds"):
        kw["seed"] = args.seed
    rep = verify.SUITES[args.suite](**kw)
    status = "pass" if rep.passed else "FAIL"
    human = f"{rep.suite}: {status} ({rep.checked} checked, {len(rep.failures)} failures)"
    rows = [{"suite": rep.suite, "passed": rep.passed, "checked": rep.checked, "failures": len(rep.failures)}]
    _emit(args, rep.to_dict(), human, rows)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_simulate(args) -> int:
    from .scheme import SchemeConfig, run_trial, trace_to_json
    from .sim import run_monte_carlo, trial_seed, wilson_interval

    try:
        cfg = SchemeConfig.from_dict(json.loads(Path(args.config).read_text()))
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config: {exc}") from None
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    res = run_monte_carlo(cfg, args.trials, args.seed, workers=args.workers, genie=args.genie)
    payload = res.to_dict()
    if args.trace is not None:
        tr = run_trial(cfg, trial_seed(args.seed, 0), genie=args.genie, keep_trace=True)
        Path(args.trace).write_text(trace_to_json(tr.traces) + "\n")
        payload["trace"] = str(args.trace)
    lo, hi = wilson_interval(res.either, res.trials)
    human = (
        f"trials={res.trials} err1={res.err1} err2={res.err2} outage={res.outage} "
        f"error rate {res.either}/{res.trials}, 95% interval [{lo:.4f}, {hi:.4f}]"
    )
    if args.trace is not None:
        human += f"\ntrace of trial 0 written to {args.trace}"
    _emit(args, payload, human, [res.csv_row()])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    def globals_(defaults: bool):
        g = _Parser(add_help=False)
        # on subcommands the flags must not overwrite values given before the subcommand
        d = (lambda v: v) if defaults else (lambda v: argparse.SUPPRESS)
        g.add_argument("--format", choices=("json", "csv", "human"), default=d("human"))
        g.add_argument("--seed", type=int, default=d(0))
        g.add_argument("--out", type=Path, default=d(None))
        return g

    common = globals_(False)
    p = _Parser(prog="ldic", description=__doc__.splitlines()[0], parents=[globals_(True)])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("region", parents=[common], help="outer bound, achievable region, or their comparison")
    r.add_argument("kind", choices=("outer", "inner", "compare"))
    _channel_args(r)
    r.set_defaults(func=cmd_region)

    s = sub.add_parser("symcap", parents=[common], help="symmetric capacity")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--alpha", type=_rational_arg, required=True)
    s.add_argument("--p", type=_rational_arg, required=True)
    s.set_defaults(func=cmd_symcap)

    s = sub.add_parser("pstar", parents=[common], help="feedback threshold for the symmetric channel")
    s.add_argument("--alpha", type=_rational_arg, required=True)
    s.set_defaults(func=cmd_pstar)

    v = sub.add_parser("verify", parents=[common], help="grid-wide checks")
    v.add_argument("suite", choices=("theorem1-grid", "appendix-a", "fact1", "entropy-bounds"))
    v.add_argument("--nmax", type=int, default=4)
    v.add_argument("--pgrid", type=_rational_list)
    v.set_defaults(func=cmd_verify)

    w = sub.add_parser("sweep", parents=[common], help="symmetric capacity and p* over a grid")
    w.add_argument("--n", type=int, required=True)
    w.add_argument("--alpha", type=_rational_list, required=True, help="comma-separated, e.g. 1/4,1/2,2")
    w.add_argument("--p", type=_rational_list, required=True)
    w.set_defaults(func=cmd_sweep)

    m = sub.add_parser("simulate", parents=[common], help="Monte Carlo run of the codec")
    m.add_argument("config", type=Path)
    m.add_argument("--trials", type=int, default=100)
    m.add_argument("--workers", type=int, default=1)
    m.add_argument("--genie", action="store_true", help="hand the decoders the true bin indices")
    m.add_argument("--trace", type=Path, help="write a hex trace of trial 0 here")
    m.set_defaults(func=cmd_simulate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except (UsageError, ParameterError, UnboundedRegionError) as exc:
        print(f"ldic: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
