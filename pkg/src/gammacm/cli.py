"""Command-line interface: ``gammacm check|eval|oracle|corpus``.

Exit codes: 0 certified true, 1 certified false, 2 inconclusive or only
numerically supported, 3 input error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import replace
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import classical, corpus, oracle, qlattice, specfun
from .errors import GammaCMError
from .model import RatioSpec, Verdict
from .report import CheckOptions, run_check

EXIT_INPUT = 3


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _load_spec(path: str) -> RatioSpec:
    p = Path(path)
    if not p.is_file():
        raise InputError(f"spec file not found: {path}")
    try:
        return RatioSpec.from_json(p.read_text())
    except GammaCMError as exc:
        raise InputError(f"{path}: {exc}") from None


def _positive_int(s):
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _positive_float(s):
    v = float(s)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _emit(obj: dict, text: str, fmt: str):
    if fmt == "json":
        print(json.dumps(obj, indent=2, sort_keys=True))
    else:
        print(text)


def _dump(spec: RatioSpec, path: str, opts: CheckOptions):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        if spec.classical:
            u, vals = classical.q_grid(spec, classical.GridConfig(points=opts.grid_points, u_max=opts.u_max))
            w.writerow(["u", "Q"])
            w.writerows((repr(float(a)), repr(float(b))) for a, b in zip(u, vals))
        else:
            w.writerow(["irr_class", "k", "t", "tau_mass"])
            for cls, lat in qlattice.build_lattices(spec).items():
                k_max = opts.k_max or 4 * lat.period
                for k in range(1, k_max + 1):
                    if lat.contributing(k):
                        w.writerow([cls if cls is not None else "", k, repr(float(lat.point(k))), repr(float(lat.mass(k)))])


def cmd_check(args) -> int:
    spec = _load_spec(args.spec)
    opts = _options(args)
    report = run_check(spec, opts)
    if args.dump:
        _dump(spec, args.dump, opts)
    _emit(report.to_dict(), report.to_text(), args.report)
    return report.exit_code


def _options(args) -> CheckOptions:
    return CheckOptions(
        k_max=args.kmax,
        n_max=args.nmax,
        u_max=args.umax,
        grid_points=args.grid_points,
        rel_tol=args.rel_tol,
        max_order=args.max_order,
        run_oracle=getattr(args, "oracle", False),
        timing=not args.no_timing,
    )


def cmd_oracle(args) -> int:
    spec = _load_spec(args.spec)
    cfg = replace(oracle.DEFAULT, max_order=args.max_order)
    v = oracle.bernstein_oracle(spec, cfg) if args.bernstein else oracle.lcm_oracle(spec, cfg)
    _emit(v.to_dict(), f"{v.status.value}: {v.reason}\n{json.dumps(v.witness, sort_keys=True)}", args.report)
    return v.exit_code


_EVAL_ARITY = {
    "gamma_q": 1,
    "digamma_q": 1,
    "polygamma_q": 2,
    "digamma": 1,
    "polygamma": 2,
    "phi": 3,
    "Q": 0,
}


def cmd_eval(args) -> int:
    fn = args.function
    need = _EVAL_ARITY[fn]
    if len(args.args) != need:
        raise InputError(f"{fn} takes {need} positional argument(s), got {len(args.args)}")
    try:
        vals = [float(v) for v in args.args]
    except ValueError as exc:
        raise InputError(str(exc)) from None
    cfg = specfun.EvalConfig(rel_tol=args.rel_tol)
    if fn.endswith("_q"):
        if args.q is None:
            raise InputError(f"{fn} needs --q")
        q = float(args.q)
    if fn in ("polygamma_q", "polygamma") and not vals[0].is_integer():
        raise InputError("order k must be an integer")
    if fn == "gamma_q":
        out = specfun.gamma_q(vals[0], q, cfg)
    elif fn == "digamma_q":
        out = specfun.digamma_q(vals[0], q, cfg)
    elif fn == "polygamma_q":
        out = specfun.polygamma_q(int(vals[0]), vals[1], q, cfg)
    elif fn == "digamma":
        out = specfun.digamma(vals[0])
    elif fn == "polygamma":
        out = specfun.polygamma(int(vals[0]), vals[1])
    elif fn == "phi":
        out = specfun.phi(*vals)
    else:
        if args.spec is None or args.u is None:
            raise InputError("Q needs --spec and --u")
        spec = _load_spec(args.spec)
        if not spec.classical:
            raise InputError("Q is defined for classical specs")
        out = classical.q_kernel(spec, args.u)
    print(format(float(out), ".16g"))
    return 0


def cmd_corpus(args) -> int:
    rows = []
    failures = 0
    opts = CheckOptions(run_oracle=args.oracle, timing=False, max_order=args.max_order)
    if args.write:
        out = Path(args.write)
        out.mkdir(parents=True, exist_ok=True)
    for e in corpus.entries():
        if args.write:
            (out / f"{e.name}.json").write_text(json.dumps({"name": e.name, "comment": e.note, **e.spec.to_dict()}, indent=2) + "\n")
        r = run_check(e.spec, opts)
        ok = r.overall.status is e.expected
        clash = None
        if "oracle" in r.results:
            clash = oracle.cross_validate(r.overall, r.results["oracle"])
        ok = ok and clash is None
        failures += not ok
        rows.append({"name": e.name, "expected": e.expected.value, "got": r.overall.status.value, "ok": ok})
    text = "\n".join(f"{'ok  ' if r['ok'] else 'FAIL'} {r['name']:<22} expected {r['expected']:<21} got {r['got']}" for r in rows)
    _emit({"entries": rows, "failures": failures}, text, args.report)
    return 0 if failures == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gammacm", description="Complete-monotonicity certificates for gamma and q-gamma ratios.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--report", choices=("json", "text"), default="text")
        sp.add_argument("--rel-tol", type=_positive_float, default=1e-14, help="series truncation tolerance")
        sp.add_argument("--max-order", type=int, choices=range(1, 13), default=8, metavar="N", help="highest difference order (1-12)")

    c = sub.add_parser("check", help="run every applicable check on a spec file")
    c.add_argument("spec")
    common(c)
    c.add_argument("--kmax", type=_positive_int, help="finite lattice horizon (default 64 periods)")
    c.add_argument("--nmax", type=_positive_int, default=256, help="horizon for the all-scales-one check")
    c.add_argument("--umax", type=_positive_float, help="upper end of the Q(u) grid")
    c.add_argument("--grid-points", type=_positive_int, default=2000)
    c.add_argument("--oracle", action="store_true", help="also run the finite-difference oracle")
    c.add_argument("--no-timing", action="store_true", help="omit timings for byte-stable output")
    c.add_argument("--dump", metavar="CSV", help="write Q(u) samples or lattice masses to a CSV file")
    c.set_defaults(func=cmd_check)

    o = sub.add_parser("oracle", help="finite-difference oracle only")
    o.add_argument("spec")
    common(o)
    o.add_argument("--bernstein", action="store_true", help="test the Bernstein property of (log f)'")
    o.set_defaults(func=cmd_oracle)

    e = sub.add_parser("eval", help="evaluate a special function")
    e.add_argument("function", choices=sorted(_EVAL_ARITY))
    e.add_argument("args", nargs="*")
    e.add_argument("--q")
    e.add_argument("--spec")
    e.add_argument("--u", type=_positive_float)
    e.add_argument("--rel-tol", type=_positive_float, default=1e-14)
    e.set_defaults(func=cmd_eval)

    k = sub.add_parser("corpus", help="run the golden corpus")
    common(k)
    k.add_argument("--oracle", action="store_true")
    k.add_argument("--write", metavar="DIR", help="also write the corpus specs as JSON files")
    k.set_defaults(func=cmd_corpus)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, GammaCMError) as exc:
        print(f"gammacm: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"gammacm: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
