"""Command-line entry point: ``kannappan <command> [flags]``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from ..algebra import FiniteSemigroup, InvolutiveAutomorphism, SemigroupError
from ..classify import classify, construct
from ..equations import EquationId, residual
from ..functions import enumerate_exponentials, fit_measure
from ..linalg import Inconsistent, ToleranceProfile
from .catalog import UnknownName, catalog, catalog_names
from .formats import (
    FormatError,
    dumps_report,
    format_measure,
    format_semigroup,
    format_sigma,
    read_function,
    read_measure,
    read_semigroup,
    read_sigma,
)
from .search import DEFAULT_GRID, UnclassifiedSolution, grid_completeness_search
from .suite import SUITES, SuiteConfig, run_verification_suite

__all__ = ["main", "build_parser"]


def _load_semigroup(spec: str) -> FiniteSemigroup:
    """A semigroup file, or a catalog name when no such file exists."""
    if Path(spec).exists():
        return read_semigroup(spec)
    try:
        return catalog(spec).semigroup
    except UnknownName:
        raise FormatError(f"{spec!r} is neither a readable file nor a catalog name") from None


def _load_sigma(path: Optional[str], S: FiniteSemigroup) -> InvolutiveAutomorphism:
    return InvolutiveAutomorphism.identity(S.n) if path is None else read_sigma(path, S)


def _tol(args) -> ToleranceProfile:
    return ToleranceProfile(args.eps, args.rank_eps)


def _emit(obj, out: Optional[str] = None) -> None:
    text = dumps_report(obj)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _complex(text: str) -> complex:
    return complex(text.replace(" ", ""))


def cmd_check(args) -> int:
    S = _load_semigroup(args.semigroup)
    sigma = _load_sigma(args.sigma, S)
    eq = EquationId.parse(args.eq)
    mu = read_measure(args.measure) if args.measure else None
    f = read_function(args.f, S.n)
    g = read_function(args.g, S.n) if args.g else None
    rep = residual(S, sigma, mu, eq, f, g, _tol(args))
    _emit({"command": "check", "report": rep.to_dict()}, args.out)
    return 0 if rep.verdict else 1


def cmd_exponentials(args) -> int:
    S = _load_semigroup(args.semigroup)
    exps = enumerate_exponentials(S)
    _emit({
        "command": "exponentials",
        "count": len(exps),
        "exponentials": [{"index": i, "label": e.label(), "values": e.values} for i, e in enumerate(exps)],
    }, args.out)
    return 0


def cmd_classify(args) -> int:
    S = _load_semigroup(args.semigroup)
    sigma = _load_sigma(args.sigma, S)
    eq = EquationId.parse(args.eq)
    if eq not in (EquationId.KSSub, EquationId.KSAdd):
        raise ValueError("classify takes --eq kss or ksa")
    tol = _tol(args)
    mu = read_measure(args.measure)
    f, g = read_function(args.f, S.n), read_function(args.g, S.n)
    desc, trace = classify(S, sigma, mu, eq, f, g, tol)
    F, G = construct(S, sigma, mu, desc, tol)
    rt = float(max(np.max(np.abs(F - f)), np.max(np.abs(G - g))))
    _emit({"command": "classify", "descriptor": desc.to_dict(), "trace": trace.to_dict(),
           "round_trip": rt}, args.out)
    return 0 if rt <= tol.residual_eps * (1 + max(np.max(np.abs(f)), np.max(np.abs(g)))) else 1


def cmd_fit_measure(args) -> int:
    S = _load_semigroup(args.semigroup)
    exps = enumerate_exponentials(S)
    constraints = []
    for idx, target in args.exp or []:
        constraints.append((exps[int(idx)], _complex(target)))
    for path, target in args.moment or []:
        constraints.append((read_function(path, S.n), _complex(target)))
    if not constraints:
        raise ValueError("give at least one --exp or --moment constraint")
    support = range(S.n) if args.support is None else [int(z) for z in args.support.split(",")]
    mu = fit_measure(S, constraints, support, _tol(args))
    text = format_measure(mu)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_grid_search(args) -> int:
    S = _load_semigroup(args.semigroup)
    sigma = _load_sigma(args.sigma, S)
    eq = EquationId.parse(args.eq)
    mu = read_measure(args.measure)
    grid = DEFAULT_GRID if args.grid is None else tuple(_complex(v) for v in args.grid.split(","))
    try:
        hits = grid_completeness_search(S, sigma, mu, eq, grid, args.max_terms, _tol(args))
    except UnclassifiedSolution as exc:
        _emit({"command": "grid-search", "unclassified": exc.failures}, args.out)
        return 1
    _emit({"command": "grid-search", "hits": [h.to_dict() for h in hits]}, args.out)
    return 0


def cmd_verify(args) -> int:
    text = Path(args.semigroup).read_text(encoding="utf-8") if args.semigroup else None
    cfg = SuiteConfig.select(args.suite, seed=args.seed, per_family=args.per_family,
                             tol=_tol(args), jobs=args.jobs, semigroup_text=text)
    report = run_verification_suite(cfg)
    _emit(report.to_dict(), args.out)
    return report.exit_status


def cmd_catalog(args) -> int:
    if args.list:
        for name in catalog_names():
            e = catalog(name)
            sys.stdout.write(f"{name}\tn={e.semigroup.n}\tinvolutions={len(e.involutions)}\t{e.notes}\n")
        return 0
    e = catalog(args.dump)
    sys.stdout.write(f"# {e.name}: {e.notes}\n")
    for s in e.involutions:
        sys.stdout.write(f"# involution: {format_sigma(s)}")
    sys.stdout.write(format_semigroup(e.semigroup))
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--eps", type=float, default=1e-9, help="residual tolerance")
    common.add_argument("--rank-eps", type=float, default=1e-8, help="rank tolerance")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for independent checks")
    common.add_argument("--out", help="write the report to this file instead of stdout")

    p = argparse.ArgumentParser(prog="kannappan", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def instance_args(sp, need_measure: bool, need_g: bool):
        sp.add_argument("--semigroup", required=True, help="semigroup file or catalog name")
        sp.add_argument("--sigma", help="sigma file (default: identity)")
        sp.add_argument("--measure", required=need_measure, help="measure file")
        sp.add_argument("--f", required=True, help="function file for f")
        sp.add_argument("--g", required=need_g, help="function file for g")

    sp = sub.add_parser("check", parents=[common], help="residual of one equation")
    sp.add_argument("--eq", required=True, help=", ".join(e.name for e in EquationId) + ", kss, ksa")
    instance_args(sp, need_measure=False, need_g=False)
    sp.set_defaults(run=cmd_check)

    sp = sub.add_parser("exponentials", parents=[common], help="list the exponentials of a semigroup")
    sp.add_argument("--semigroup", required=True)
    sp.set_defaults(run=cmd_exponentials)

    sp = sub.add_parser("classify", parents=[common], help="recover the solution family of (f, g)")
    sp.add_argument("--eq", required=True, choices=["kss", "ksa", "KSSub", "KSAdd"])
    instance_args(sp, need_measure=True, need_g=True)
    sp.set_defaults(run=cmd_classify)

    sp = sub.add_parser("fit-measure", parents=[common], help="minimal-norm measure with given moments")
    sp.add_argument("--semigroup", required=True)
    sp.add_argument("--exp", nargs=2, action="append", metavar=("INDEX", "TARGET"),
                    help="moment of the INDEX-th enumerated exponential")
    sp.add_argument("--moment", nargs=2, action="append", metavar=("FILE", "TARGET"),
                    help="moment of the function in FILE")
    sp.add_argument("--support", help="comma-separated support indices (default: all)")
    sp.set_defaults(run=cmd_fit_measure)

    sp = sub.add_parser("grid-search", parents=[common], help="grid completeness probe")
    sp.add_argument("--eq", required=True, choices=["kss", "ksa", "KSSub", "KSAdd"])
    sp.add_argument("--semigroup", required=True)
    sp.add_argument("--sigma")
    sp.add_argument("--measure", required=True)
    sp.add_argument("--grid", help="comma-separated complex coefficients")
    sp.add_argument("--max-terms", type=int, default=2)
    sp.set_defaults(run=cmd_grid_search)

    sp = sub.add_parser("verify", parents=[common], help="run verification suites")
    sp.add_argument("--suite", default="all", choices=("all",) + SUITES)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--per-family", type=int, default=40)
    sp.add_argument("--semigroup", help="also validate this semigroup file")
    sp.set_defaults(run=cmd_verify)

    sp = sub.add_parser("catalog", help="built-in semigroups")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--list", action="store_true")
    g.add_argument("--dump", metavar="NAME")
    sp.set_defaults(run=cmd_catalog)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except (FormatError, SemigroupError, UnknownName, Inconsistent, ValueError, OSError) as exc:
        sys.stderr.write(f"kannappan {args.command}: {type(exc).__name__}: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
