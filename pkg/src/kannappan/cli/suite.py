"""Batch verification suites and their report."""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from ..algebra import (
    FiniteSemigroup,
    InvolutiveAutomorphism,
    SemigroupError,
    lcm_of_periods,
    verify_associativity,
)
from ..classify import FAMILIES, verify_prop31
from ..equations import EquationId, residual_table
from ..functions import DiscreteMeasure, RootOfUnity, enumerate_exponentials, integrate
from ..linalg import DEFAULT_TOL, ToleranceProfile
from .catalog import catalog, catalog_names, negation
from .formats import FormatError, digest, dumps_report, parse_table
from .search import UnclassifiedSolution, grid_completeness_search
from .sweep import check_instance, generate_instances

__all__ = ["SUITES", "SuiteConfig", "RunReport", "run_verification_suite", "brute_force_exponentials"]

SUITES = ("catalog", "exponentials", "t36", "t44", "prop31", "lemmas", "reduction", "grid")


@dataclass(frozen=True)
class SuiteConfig:
    suites: tuple[str, ...] = SUITES
    seed: int = 0
    per_family: int = 40
    tol: ToleranceProfile = DEFAULT_TOL
    jobs: int = 1
    semigroup_text: Optional[str] = None  # an extra user table to validate

    @classmethod
    def select(cls, name: str, **kw) -> "SuiteConfig":
        if name == "all":
            return cls(SUITES, **kw)
        if name not in SUITES:
            raise ValueError(f"unknown suite {name!r}; expected all or one of {', '.join(SUITES)}")
        return cls((name,), **kw)

    def echo(self) -> dict:
        return {
            "suites": list(self.suites),
            "seed": self.seed,
            "per_family": self.per_family,
            "eps": self.tol.residual_eps,
            "rank_eps": self.tol.rank_eps,
        }


@dataclass
class RunReport:
    command: dict
    digests: dict[str, str]
    records: list[dict] = field(default_factory=list)

    @property
    def exit_status(self) -> int:
        return 0 if all(r["verdict"] for r in self.records) else 1

    def summary(self) -> dict:
        out: dict[str, dict[str, int]] = {}
        for r in self.records:
            s = out.setdefault(r["suite"], {"passed": 0, "failed": 0})
            s["passed" if r["verdict"] else "failed"] += 1
        return out

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "digests": self.digests,
            "records": self.records,
            "summary": self.summary(),
            "exit_status": self.exit_status,
        }

    def to_json(self) -> str:
        return dumps_report(self.to_dict())


# -- individual suites --------------------------------------------------------

def _suite_catalog(cfg: SuiteConfig) -> list[dict]:
    out = []
    for name in catalog_names():
        e = catalog(name)
        S = e.semigroup
        ok = not verify_associativity(S.table)
        for s in e.involutions:
            InvolutiveAutomorphism.checked(S, s.perm)
        out.append({"id": name, "n": S.n, "identity": S.identity,
                    "involutions": [list(s.perm) for s in e.involutions], "verdict": ok})
    if cfg.semigroup_text is not None:
        out.append(_user_table_record(cfg.semigroup_text))
    return out


def _user_table_record(text: str) -> dict:
    rec: dict = {"id": "user-table"}
    try:
        rows, _ = parse_table(text)
        violations = verify_associativity(rows)
    except (FormatError, SemigroupError) as exc:
        rec.update({"error": str(exc), "verdict": False})
        return rec
    rec.update({"violations": [list(v) for v in violations], "verdict": not violations})
    return rec


def brute_force_exponentials(S: FiniteSemigroup) -> list[tuple]:
    """Every nonzero multiplicative map into ``{0} | U_L`` by exhaustive search."""
    L = lcm_of_periods(S)
    values = [None] + [RootOfUnity(Fraction(j, L)) for j in range(L)]
    t = S.table
    found = []
    for cand in itertools.product(values, repeat=S.n):
        if all(v is None for v in cand):
            continue
        if all(cand[t[a][b]] == (None if cand[a] is None or cand[b] is None else cand[a] * cand[b])
               for a in range(S.n) for b in range(S.n)):
            found.append(cand)
    return found


def _suite_exponentials(cfg: SuiteConfig) -> list[dict]:
    out = []
    for name in catalog_names():
        S = catalog(name).semigroup
        if S.n > 4:
            continue
        fast = {e.exact for e in enumerate_exponentials(S)}
        slow = set(brute_force_exponentials(S))
        out.append({"id": name, "count": len(fast), "oracle_count": len(slow), "verdict": fast == slow})
    return out


def _sweep(cfg: SuiteConfig, prefix: str, lemmas: bool = True, reduction: bool = True) -> list[dict]:
    tags = [t for t in FAMILIES if t.startswith(prefix)]
    insts = generate_instances(cfg.seed, cfg.per_family, tags)
    args = [(i, cfg.tol, lemmas, reduction) for i in insts]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            recs = list(pool.map(_check_star, args, chunksize=16))
    else:
        recs = [_check_star(a) for a in args]
    for r in recs:
        r["id"] = r.pop("label")
    return recs


def _check_star(args) -> dict:
    inst, tol, lemmas, reduction = args
    try:
        return check_instance(inst, tol, lemmas, reduction)
    except Exception as exc:  # reported, never swallowed silently
        return {"label": inst.label, "tag": inst.descriptor.tag, "error": f"{type(exc).__name__}: {exc}",
                "verdict": False}


def _prop31_measures(S: FiniteSemigroup, seed: int) -> list[DiscreteMeasure]:
    rng = np.random.default_rng([seed, S.n])
    weights = np.round(rng.normal(size=S.n) * 2) / 2 + 1j * np.round(rng.normal(size=S.n) * 2) / 2
    mus = [DiscreteMeasure.point_mass(0, 2.0)]
    if np.any(weights != 0):
        mus.append(DiscreteMeasure.from_weights(range(S.n), weights))
    return mus


def _suite_prop31(cfg: SuiteConfig) -> list[dict]:
    tol = cfg.tol
    out = []
    for name in catalog_names():
        e = catalog(name)
        S = e.semigroup
        for k, mu in enumerate(_prop31_measures(S, cfg.seed)):
            for sigma in e.involutions:
                base = f"{name}/sigma={list(sigma.perm)}/mu{k}"
                zero = verify_prop31(S, sigma, mu, np.zeros(S.n), tol)
                out.append({"id": f"{base}/f=0", "part_a": zero.part_a, "verdict": zero.verdict})
                for chi in enumerate_exponentials(S):
                    if not chi.is_sigma_invariant(sigma):
                        continue
                    m = integrate(mu, chi.values)
                    if tol.is_zero(m):
                        continue
                    f = m * chi.values
                    rep = verify_prop31(S, sigma, mu, f, tol)
                    exact = rep.chi == chi
                    out.append({"id": f"{base}/{chi.label()}", "recovered": None if rep.chi is None else rep.chi.label(),
                                "exact": exact, "part_a": rep.part_a, "residual": rep.residual,
                                "verdict": rep.verdict and exact})
    return out


def _suite_lemmas(cfg: SuiteConfig) -> list[dict]:
    recs = _sweep(cfg, "T", lemmas=True, reduction=False)
    out = []
    for r in recs:
        if "lemmas" in r or "error" in r:
            out.append({"id": r["id"], "lemmas": r.get("lemmas"), "error": r.get("error"),
                        "verdict": bool(r.get("checks", {}).get("lemmas", False))})
    return out


def _suite_reduction(cfg: SuiteConfig) -> list[dict]:
    out = []
    rng = np.random.default_rng([cfg.seed, 7])
    pairs = ((EquationId.KSSub, EquationId.SineSub), (EquationId.KSAdd, EquationId.SineAdd))
    for name in catalog_names():
        e = catalog(name)
        S = e.semigroup
        if S.identity is None:
            continue
        mu = DiscreteMeasure.point_mass(S.identity)
        for sigma in e.involutions:
            f = rng.uniform(-1, 1, S.n) + 1j * rng.uniform(-1, 1, S.n)
            g = rng.uniform(-1, 1, S.n) + 1j * rng.uniform(-1, 1, S.n)
            worst = 0.0
            for integral, plain in pairs:
                a = residual_table(S, sigma, mu, integral, f, g)
                b = residual_table(S, sigma, None, plain, f, g)
                worst = max(worst, float(np.max(np.abs(a - b))))
            out.append({"id": f"{name}/point-mass/{list(sigma.perm)}", "deviation": worst,
                        "verdict": worst <= 1e-12})
    for r in _sweep(cfg, "T", lemmas=False, reduction=True):
        if "reduction" in r or "error" in r:
            out.append({"id": r["id"], "reduction": r.get("reduction"), "error": r.get("error"),
                        "verdict": bool(r.get("checks", {}).get("reduction", False))})
    return out


GRID_PROBES = (
    ("Z3", "neg", EquationId.KSSub),
    ("Z2", "id", EquationId.KSAdd),
    ("Trunc4", "id", EquationId.KSAdd),
)


def _suite_grid(cfg: SuiteConfig) -> list[dict]:
    out = []
    for name, kind, eq in GRID_PROBES:
        S = catalog(name).semigroup
        sigma = negation(S.n) if kind == "neg" else InvolutiveAutomorphism.identity(S.n)
        mu = DiscreteMeasure.point_mass(0)
        rid = f"{name}/{kind}/delta0/{eq.name}"
        try:
            hits = grid_completeness_search(S, sigma, mu, eq, tol=cfg.tol)
        except UnclassifiedSolution as exc:
            out.append({"id": rid, "unclassified": exc.failures, "verdict": False})
            continue
        tags: dict[str, int] = {}
        for h in hits:
            tags[h.descriptor.tag] = tags.get(h.descriptor.tag, 0) + 1
        out.append({"id": rid, "hits": len(hits), "tags": tags,
                    "max_residual": max((h.residual for h in hits), default=0.0), "verdict": True})
    return out


_RUNNERS = {
    "catalog": _suite_catalog,
    "exponentials": _suite_exponentials,
    "t36": lambda cfg: _sweep(cfg, "T36_"),
    "t44": lambda cfg: _sweep(cfg, "T44_"),
    "prop31": _suite_prop31,
    "lemmas": _suite_lemmas,
    "reduction": _suite_reduction,
    "grid": _suite_grid,
}


def run_verification_suite(cfg: SuiteConfig) -> RunReport:
    """Run the selected suites in canonical order; exit status 0 iff every record passes."""
    digests = {"config": digest(dumps_report(cfg.echo()))}
    if cfg.semigroup_text is not None:
        digests["semigroup"] = digest(cfg.semigroup_text)
    report = RunReport(command={"verify": cfg.echo()}, digests=digests)
    for name in SUITES:
        if name not in cfg.suites:
            continue
        for rec in _RUNNERS[name](cfg):
            rec["suite"] = name
            report.records.append(rec)
    if cfg.semigroup_text is not None and "catalog" not in cfg.suites:
        rec = _user_table_record(cfg.semigroup_text)
        rec["suite"] = "catalog"
        report.records.append(rec)
    return report
