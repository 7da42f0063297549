"""Seeded family instances and the per-instance verification pipeline.

``generate_instances`` draws descriptors for every family from a fixed
parameter grid; measures come from ``fit_measure`` so that each family's
moment conditions hold. ``check_instance`` then constructs, normalizes,
verifies, classifies and reconstructs one instance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..algebra import InvolutiveAutomorphism
from ..classify import (
    FAMILIES,
    FamilyDescriptor,
    classify,
    construct,
    lemma_suite_t36,
    lemma_suite_t44,
)
from ..equations import EquationId, monoid_reduction_check, normalize_instance, residual
from ..functions import (
    DiscreteMeasure,
    Exponential,
    enumerate_exponentials,
    fit_measure,
    integrate,
    solve_sine_addition_special,
    solve_special_ks_addition,
)
from ..linalg import DEFAULT_TOL, ToleranceProfile, rank
from .catalog import catalog, negation

__all__ = ["PARAM_GRID", "Instance", "generate_instances", "check_instance"]

# nonzero parameter values; ``c``-type parameters may also be 0
PARAM_GRID: tuple[complex, ...] = (
    1, -1, 2, -0.5, 0.5, 1j, -1j, 1 + 1j, 2 - 1j, -1.5 + 0.5j, 3, 0.25j,
)


@dataclass
class Instance:
    label: str
    semigroup: str
    sigma: InvolutiveAutomorphism
    mu: DiscreteMeasure
    descriptor: FamilyDescriptor

    @property
    def S(self):
        return catalog(self.semigroup).semigroup


class _Draw:
    def __init__(self, rng: np.random.Generator):
        self.rng = rng

    def nonzero(self) -> complex:
        return complex(PARAM_GRID[self.rng.integers(len(PARAM_GRID))])

    def any(self) -> complex:
        k = self.rng.integers(len(PARAM_GRID) + 1)
        return 0j if k == len(PARAM_GRID) else complex(PARAM_GRID[k])

    def pick(self, seq):
        return seq[int(self.rng.integers(len(seq)))]

    def vector(self, n: int) -> np.ndarray:
        # grid-valued so that every instance is exactly reproducible from its data
        return np.array([self.any() for _ in range(n)], dtype=complex)

    def support(self, n: int, required=()) -> list[int]:
        extra = [z for z in range(n) if z not in required and self.rng.random() < 0.6]
        return sorted(set(required) | set(extra))


def _sigma(name: str, kind: str) -> InvolutiveAutomorphism:
    n = catalog(name).semigroup.n
    if kind == "id":
        return InvolutiveAutomorphism.identity(n)
    if kind == "neg":
        return negation(n)
    entry = catalog(name)
    return next(s for s in entry.involutions if not s.is_identity)


def _extras(draw: _Draw, exps, skip) -> list[tuple[Exponential, complex]]:
    """Random moment targets for exponentials not already constrained."""
    return [(chi, draw.nonzero()) for chi in exps if chi not in skip and draw.rng.random() < 0.5]


def _fit(name: str, constraints, required, draw: _Draw) -> DiscreteMeasure:
    S = catalog(name).semigroup
    return fit_measure(S, constraints, draw.support(S.n, required))


def _random_measure(name: str, draw: _Draw) -> DiscreteMeasure:
    n = catalog(name).semigroup.n
    support = draw.support(n, (int(draw.rng.integers(n)),))
    w = [draw.nonzero() for _ in support]
    return DiscreteMeasure.from_weights(support, w)


def _phi_basis(name: str, chi: Exponential, sigma, parity: int) -> list[np.ndarray]:
    return solve_sine_addition_special(catalog(name).semigroup, chi, parity=(sigma, parity)).basis


def _annihilated(draw: _Draw, tag: str) -> tuple[str, InvolutiveAutomorphism, DiscreteMeasure, np.ndarray]:
    """A setting where ``int f(x y t) dmu(t) = 0`` for all ``x, y`` and ``f != 0``."""
    kind = draw.rng.integers(3)
    if kind == 0:
        name = "Z3"
        sigma = _sigma(name, draw.pick(["id", "neg"]))
        exps = enumerate_exponentials(catalog(name).semigroup)
        killed = [chi for chi in exps if draw.rng.random() < 0.5] or [draw.pick(exps)]
        cons = [(chi, 0) for chi in killed] + [(chi, draw.nonzero()) for chi in exps if chi not in killed]
        mu = _fit(name, cons, range(3), draw)
        f = sum(draw.nonzero() * chi.values for chi in killed)
    elif kind == 1:
        name = "Null3"
        sigma = draw.pick(catalog(name).involutions)
        mu = _random_measure(name, draw)
        f = np.concatenate([[0], [draw.nonzero(), draw.any()]])
    else:
        name = "LeftZero3"
        sigma = draw.pick(catalog(name).involutions)
        ones = np.ones(3)
        mu = _fit(name, [(ones, 0), (np.eye(3)[0], draw.nonzero())], (0, 1), draw)
        f = np.array([draw.nonzero(), draw.any(), draw.any()])
    return name, sigma, mu, np.asarray(f, dtype=complex)


def _gen_trivial(tag: str, draw: _Draw):
    name = draw.pick(["Z3", "Trunc4", "TruncSq4", "LeftZero2", "Null3"])
    sigma = draw.pick(catalog(name).involutions)
    g = draw.vector(catalog(name).semigroup.n)
    return name, sigma, _random_measure(name, draw), FamilyDescriptor(tag, func=g)


def _gen_t36_2(draw: _Draw):
    name, sigma, mu, f = _annihilated(draw, "T36_2")
    return name, sigma, mu, FamilyDescriptor("T36_2", {"k": draw.any()}, func=f)


def _gen_t44_2(draw: _Draw):
    name, sigma, mu, f = _annihilated(draw, "T44_2")
    return name, sigma, mu, FamilyDescriptor("T44_2", func=f)


def _z3_character(draw: _Draw):
    name, sigma = "Z3", negation(3)
    exps = enumerate_exponentials(catalog(name).semigroup)
    chi = draw.pick([e for e in exps if not e.is_sigma_invariant(sigma)])
    return name, sigma, exps, chi, chi.pullback(sigma)


def _gen_t36_3(draw: _Draw):
    name, sigma, exps, chi, chis = _z3_character(draw)
    gamma, b = draw.nonzero(), draw.nonzero()
    c = draw.pick([v for v in (0,) + PARAM_GRID if v not in (1, -1)])
    cons = [(chi, -2 * b / (1 + c)), (chis, 2 * b / (1 - c))] + _extras(draw, exps, (chi, chis))
    mu = _fit(name, cons, range(3), draw)
    return name, sigma, mu, FamilyDescriptor("T36_3", {"gamma": gamma, "b": b, "c": c}, chi=chi)


def _gen_t36_4(draw: _Draw):
    name, sigma, exps, chi, chis = _z3_character(draw)
    beta, b, c = draw.nonzero(), draw.nonzero(), draw.any()
    cons = [(chi, 1 / beta), (chis, 1 / beta)] + _extras(draw, exps, (chi, chis))
    mu = _fit(name, cons, range(3), draw)
    return name, sigma, mu, FamilyDescriptor("T36_4", {"beta": beta, "b": b, "c": c}, chi=chi)


def _gen_t36_5(draw: _Draw):
    name, sigma, exps, chi, chis = _z3_character(draw)
    while True:
        a, d, b, c = draw.nonzero(), draw.nonzero(), draw.nonzero(), draw.any()
        s = 2 * b * d + a * c
        if abs(a - s) > 1e-6 and abs(a + s) > 1e-6:
            break
    cons = [(chi, 2 * b / (a * (1 + c) + 2 * b * d)), (chis, 2 * b / (a * (c - 1) + 2 * b * d))]
    mu = _fit(name, cons + _extras(draw, exps, (chi, chis)), range(3), draw)
    return name, sigma, mu, FamilyDescriptor("T36_5", {"alpha": a, "delta": d, "b": b, "c": c}, chi=chi)


def _truncsq_phi(draw: _Draw, parity: int, kind: str = "swap"):
    name = "TruncSq4"
    sigma = _sigma(name, kind)
    S = catalog(name).semigroup
    exps = enumerate_exponentials(S)
    chi = exps[0]  # indicator of (0, 0)
    basis = _phi_basis(name, chi, sigma, parity)
    phi = sum(draw.nonzero() * v for v in basis)
    ones = next(e for e in exps if all(v is not None for v in e.exact))
    return name, sigma, chi, phi, ones


def _gen_t36_6(draw: _Draw):
    name, sigma, chi, phi, ones = _truncsq_phi(draw, -1)
    gamma, m = draw.nonzero(), draw.nonzero()
    cons = [(chi, m), (phi, m * m)] + _extras(draw, (ones,), ())
    mu = _fit(name, cons, (0, 1, 4), draw)
    return name, sigma, mu, FamilyDescriptor("T36_6", {"gamma": gamma}, chi=chi, func=phi)


def _gen_t36_7(draw: _Draw):
    name, sigma, chi, phi, ones = _truncsq_phi(draw, -1)
    while True:
        a, c, d = draw.any(), draw.any(), draw.nonzero()
        if abs(a * c + d) > 1e-6:
            break
    D = a * c + d
    cons = [(chi, 1 / D), (phi, -a / D ** 2)] + _extras(draw, (ones,), ())
    mu = _fit(name, cons, (0, 1, 4), draw)
    return name, sigma, mu, FamilyDescriptor("T36_7", {"alpha": a, "c": c, "delta": d}, chi=chi, func=phi)


def _gen_t36_8(draw: _Draw):
    name, sigma, chi, phi, ones = _truncsq_phi(draw, -1)
    c, m = draw.any(), draw.nonzero()
    cons = [(chi, m), (phi, 0)] + _extras(draw, (ones,), ())
    mu = _fit(name, cons, (0, 1, 4), draw)
    return name, sigma, mu, FamilyDescriptor("T36_8", {"c": c}, chi=chi, func=phi)


_ADD_SETTINGS = (("Z2", "id"), ("Z3", "id"), ("Z3", "neg"), ("Trunc4", "id"))


def _gen_t44_3(draw: _Draw):
    name, kind = draw.pick(_ADD_SETTINGS)
    sigma = _sigma(name, kind)
    exps = enumerate_exponentials(catalog(name).semigroup)
    chi = draw.pick([e for e in exps if e.is_sigma_invariant(sigma)])
    cons = [(chi, draw.nonzero())] + _extras(draw, exps, (chi,))
    mu = _fit(name, cons, range(catalog(name).semigroup.n), draw)
    return name, sigma, mu, FamilyDescriptor("T44_3", {"delta": draw.nonzero()}, chi=chi)


def _gen_t44_4(draw: _Draw):
    name = draw.pick(["Z2", "Z3", "Trunc4"])
    sigma = _sigma(name, "id")
    exps = enumerate_exponentials(catalog(name).semigroup)
    i, j = sorted(draw.rng.choice(len(exps), size=2, replace=False))
    chi1, chi2 = exps[i], exps[j]
    if draw.rng.random() < 0.5:
        chi1, chi2 = chi2, chi1
    cons = [(chi1, draw.nonzero()), (chi2, draw.nonzero())] + _extras(draw, exps, (chi1, chi2))
    mu = _fit(name, cons, range(catalog(name).semigroup.n), draw)
    return name, sigma, mu, FamilyDescriptor("T44_4", {"alpha": draw.nonzero()}, chi=chi1, chi2=chi2)


def _gen_t44_5(draw: _Draw):
    if draw.rng.random() < 0.5:
        name, sigma = "Trunc4", _sigma("Trunc4", "id")
        exps = enumerate_exponentials(catalog(name).semigroup)
        chi, ones = exps[0], exps[1]
        phi = draw.nonzero() * np.array([0, 1, 0, 0], dtype=complex)
        required = (0, 1, 2)
    else:
        name, sigma, chi, phi, ones = _truncsq_phi(draw, +1, draw.pick(["id", "swap"]))
        required = (0, 1, 4)
    cons = [(chi, draw.nonzero()), (phi, 0)] + _extras(draw, (ones,), ())
    mu = _fit(name, cons, required, draw)
    return name, sigma, mu, FamilyDescriptor("T44_5", chi=chi, func=phi)


def _gen_t44_6(draw: _Draw):
    while True:
        name = draw.pick(["Trunc3", "Trunc4", "TruncSq3", "TruncSq4"])
        sigma = draw.pick(catalog(name).involutions)
        S = catalog(name).semigroup
        chi = enumerate_exponentials(S)[0]
        mu = DiscreteMeasure.from_weights(range(S.n), [draw.nonzero() for _ in range(S.n)])
        if abs(integrate(mu, chi.values)) < 1e-6:
            continue
        basis = solve_special_ks_addition(S, sigma, mu, chi)
        if basis:
            Phi = sum(draw.nonzero() * v for v in basis)
            if np.max(np.abs(Phi)) > 1e-6:
                return name, sigma, mu, FamilyDescriptor("T44_6", chi=chi, func=Phi)


_GENERATORS: dict[str, Callable[[_Draw], tuple]] = {
    "T36_1": lambda d: _gen_trivial("T36_1", d),
    "T36_2": _gen_t36_2,
    "T36_3": _gen_t36_3,
    "T36_4": _gen_t36_4,
    "T36_5": _gen_t36_5,
    "T36_6": _gen_t36_6,
    "T36_7": _gen_t36_7,
    "T36_8": _gen_t36_8,
    "T44_1": lambda d: _gen_trivial("T44_1", d),
    "T44_2": _gen_t44_2,
    "T44_3": _gen_t44_3,
    "T44_4": _gen_t44_4,
    "T44_5": _gen_t44_5,
    "T44_6": _gen_t44_6,
}


def generate_instances(seed: int = 0, per_family: int = 40, families=None) -> list[Instance]:
    """Deterministic instances, ``per_family`` for each family tag (default: all 14)."""
    tags = list(FAMILIES) if families is None else list(families)
    out = []
    for t_index, tag in enumerate(FAMILIES):
        if tag not in tags:
            continue
        draw = _Draw(np.random.default_rng([seed, t_index]))
        for k in range(per_family):
            name, sigma, mu, desc = _GENERATORS[tag](draw)
            out.append(Instance(f"{tag}#{k:03d}", name, sigma, mu, desc))
    return out


def _deviation(a, b) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def check_instance(inst: Instance, tol: ToleranceProfile = DEFAULT_TOL,
                   lemmas: bool = True, reduction: bool = True) -> dict:
    """Construct, normalize, verify and round-trip one instance; returns a report record."""
    S, sigma, desc = inst.S, inst.sigma, inst.descriptor
    eq = desc.equation
    rec: dict = {"label": inst.label, "semigroup": inst.semigroup, "tag": desc.tag,
                 "sigma": list(sigma.perm)}
    f, g = construct(S, sigma, inst.mu, desc, tol)
    mu, f, g = normalize_instance(inst.mu, f, g)
    rep = residual(S, sigma, mu, eq, f, g, tol)
    rec["residual"] = rep.max_residual
    checks = {"residual": rep.verdict}

    got, trace = classify(S, sigma, mu, eq, f, g, tol)
    F, G = construct(S, sigma, mu, got, tol)
    rt = max(_deviation(F, f), _deviation(G, g))
    rec.update({"classified_as": got.tag, "round_trip": rt, "parameters": got.to_dict()["params"],
                "branches": trace.branches})
    checks["round_trip"] = rt <= tol.residual_eps

    independent = rank(np.vstack([f, g]), tol) == 2
    if lemmas and independent:
        suite = lemma_suite_t36 if eq is EquationId.KSSub else lemma_suite_t44
        lr = suite(S, sigma, mu, f, g, tol)
        rec["lemmas"] = {c.name: c.passed for c in lr.checks}
        checks["lemmas"] = lr.verdict
    if reduction and S.identity is not None:
        red = monoid_reduction_check(S, sigma, mu, f, g, -1 if eq is EquationId.KSSub else 1, tol)
        rec["reduction"] = {"branch": red.branch, "residuals": red.residuals}
        checks["reduction"] = red.verdict
    rec["checks"] = checks
    rec["verdict"] = all(checks.values())
    return rec
