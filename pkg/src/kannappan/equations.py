"""Residual checks for the functional equations handled by the package.

Every check evaluates ``max |LHS(x, y) - RHS(x, y)|`` over all pairs, with no
rescaling. Callers that want one tolerance to mean the same thing across
instances should normalize first (see ``normalize_instance``).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .algebra import FiniteSemigroup, InvolutiveAutomorphism
from .functions import DiscreteMeasure, as_function, integrate, kannappan_transform
from .linalg import DEFAULT_TOL, ToleranceProfile

__all__ = [
    "EquationId",
    "CheckReport",
    "ArityMismatch",
    "MeasureMissing",
    "NotAMonoid",
    "NotASolution",
    "DegenerateGe",
    "residual",
    "residual_table",
    "is_solution",
    "normalize_instance",
    "ReductionReport",
    "monoid_reduction_check",
]


class EquationId(enum.Enum):
    """Equation variants: ``(two unknown functions?, integrates against mu?)``."""

    SineSub = ("SineSub", True, False)
    SineAdd = ("SineAdd", True, False)
    KSSub = ("KSSub", True, True)
    KSAdd = ("KSAdd", True, True)
    CosSub = ("CosSub", True, False)
    SpecialKSAdd = ("SpecialKSAdd", True, True)
    SpecialSineAdd = ("SpecialSineAdd", True, False)
    KMultSigma = ("KMultSigma", False, True)

    def __init__(self, label: str, two_functions: bool, integrates: bool):
        self.label = label
        self.two_functions = two_functions
        self.integrates = integrates

    @classmethod
    def parse(cls, name: str) -> "EquationId":
        aliases = {"kss": "KSSub", "ksa": "KSAdd"}
        name = aliases.get(name, name)
        try:
            return cls[name]
        except KeyError:
            raise ValueError(f"unknown equation {name!r}; expected one of "
                             f"{', '.join(e.name for e in cls)}") from None


class ArityMismatch(ValueError):
    pass


class MeasureMissing(ValueError):
    pass


class NotAMonoid(ValueError):
    pass


class NotASolution(ValueError):
    pass


class DegenerateGe(ValueError):
    pass


@dataclass
class CheckReport:
    equation: EquationId
    max_residual: float
    argmax: tuple[int, int]
    verdict: bool

    def to_dict(self) -> dict:
        return {
            "equation": self.equation.name,
            "residual": self.max_residual,
            "argmax": list(self.argmax),
            "verdict": self.verdict,
        }


def residual_table(S: FiniteSemigroup, sigma: InvolutiveAutomorphism | None,
                   mu: DiscreteMeasure | None, eq: EquationId, f, g=None) -> np.ndarray:
    """Pointwise ``LHS - RHS`` as an ``n x n`` array."""
    n = S.n
    if eq.two_functions != (g is not None):
        raise ArityMismatch(f"{eq.name} takes {'two functions' if eq.two_functions else 'one function'}")
    if eq.integrates and mu is None:
        raise MeasureMissing(f"{eq.name} integrates against a measure")
    if not eq.integrates and mu is not None:
        raise ArityMismatch(f"{eq.name} does not take a measure")
    f = as_function(f, n)
    g = None if g is None else as_function(g, n)
    if sigma is None:
        sigma = InvolutiveAutomorphism.identity(n)
    xsy = S.array[:, sigma.array]

    if eq is EquationId.SineSub:
        return f[xsy] - (np.outer(f, g) - np.outer(g, f))
    if eq is EquationId.SineAdd:
        return f[xsy] - (np.outer(f, g) + np.outer(g, f))
    if eq is EquationId.KSSub:
        return kannappan_transform(S, sigma, mu, f) - (np.outer(f, g) - np.outer(g, f))
    if eq is EquationId.KSAdd:
        return kannappan_transform(S, sigma, mu, f) - (np.outer(f, g) + np.outer(g, f))
    if eq is EquationId.CosSub:
        h = f - g
        return f[xsy] - (np.outer(f, f) - np.outer(h, h))
    if eq is EquationId.SpecialKSAdd:
        m = integrate(mu, g)
        return kannappan_transform(S, sigma, mu, f) - m * (np.outer(f, g) + np.outer(g, f))
    if eq is EquationId.SpecialSineAdd:
        return f[S.array] - (np.outer(f, g) + np.outer(g, f))
    if eq is EquationId.KMultSigma:
        return kannappan_transform(S, sigma, mu, f) - np.outer(f, f)
    raise AssertionError(eq)


def residual(S: FiniteSemigroup, sigma: InvolutiveAutomorphism | None,
             mu: DiscreteMeasure | None, eq: EquationId, f, g=None,
             tol: ToleranceProfile = DEFAULT_TOL) -> CheckReport:
    """Maximal pointwise defect of ``eq`` for the given unknowns.

    For ``SpecialKSAdd`` and ``SpecialSineAdd`` the second function is the
    exponential ``chi``.
    """
    R = np.abs(residual_table(S, sigma, mu, eq, f, g))
    x, y = np.unravel_index(int(np.argmax(R)), R.shape)
    worst = float(R[x, y])
    return CheckReport(eq, worst, (int(x), int(y)), worst <= tol.residual_eps)


def is_solution(S, sigma, mu, eq: EquationId, f, g=None, tol: ToleranceProfile = DEFAULT_TOL) -> bool:
    return residual(S, sigma, mu, eq, f, g, tol).verdict


def normalize_instance(mu: DiscreteMeasure, f, g=None):
    """Rescale ``(mu, f, g)`` to infinity-norm 1 without changing solution status.

    Both Kannappan-sine laws are linear in ``f`` on each side, and scaling
    ``g`` by ``c`` is compensated by scaling ``mu`` by ``c``.
    """
    f = np.asarray(f, dtype=complex)
    nf = float(np.max(np.abs(f))) if f.size else 0.0
    if nf > 0:
        f = f / nf
    if g is None:
        return mu, f, None
    g = np.asarray(g, dtype=complex)
    ng = float(np.max(np.abs(g))) if g.size else 0.0
    if ng > 0:
        g = g / ng
        mu = mu.scaled(1.0 / ng)
    return mu, f, g


@dataclass
class ReductionReport:
    """Outcome of the identity-element reduction of a Kannappan-sine solution."""

    sign: int
    branch: str
    f_e: complex
    g_e: complex
    residuals: dict[str, float] = field(default_factory=dict)
    verdict: bool = True
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "sign": self.sign,
            "branch": self.branch,
            "f_e": self.f_e,
            "g_e": self.g_e,
            "residuals": dict(self.residuals),
            "verdict": self.verdict,
            "note": self.note,
        }


def monoid_reduction_check(S: FiniteSemigroup, sigma: InvolutiveAutomorphism,
                           mu: DiscreteMeasure, f, g, sign: int,
                           tol: ToleranceProfile = DEFAULT_TOL, strict: bool = False,
                           ) -> ReductionReport:
    """Check the identities obtained by putting ``y = e`` in a Kannappan-sine law.

    ``sign=-1`` is the subtraction law, ``sign=+1`` the addition law. With
    ``u = f(e)`` and ``v = g(e)`` every solution satisfies

        v f(x sigma(y)) = f(x)g(y) + sign f(y)g(x) - sign u g(x sigma(y)).

    If ``u = 0`` this is the plain sine law scaled by ``v``. If ``u, v != 0``
    then, with ``g1 = g / v``, the pair ``(f/u - g1, g1)`` solves the sine
    subtraction law (``sign=-1``) and ``F = (g1 + f/u) / 2`` solves the cosine
    subtraction law together with ``g1`` (``sign=+1``). If ``v = 0 != u`` the
    reduction is undefined; this is reported in ``branch`` (or raised as
    ``DegenerateGe`` when ``strict``).
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    e = S.identity
    if e is None:
        raise NotAMonoid(f"{S!r} has no identity element")
    eq = EquationId.KSAdd if sign > 0 else EquationId.KSSub
    base = residual(S, sigma, mu, eq, f, g, tol)
    if not base.verdict:
        raise NotASolution(f"{eq.name} residual {base.max_residual:.3e} exceeds tolerance")

    f = as_function(f, S.n)
    g = as_function(g, S.n)
    u, v = complex(f[e]), complex(g[e])
    xsy = S.array[:, sigma.array]
    pair = np.outer(f, g) + sign * np.outer(g, f)
    report = ReductionReport(sign=sign, branch="", f_e=u, g_e=v)
    general = v * f[xsy] - (pair - sign * u * g[xsy])
    report.residuals["identity_at_e"] = float(np.max(np.abs(general)))

    scale = float(max(np.max(np.abs(f)), np.max(np.abs(g))))
    if tol.is_zero(u, scale):
        report.branch = "f(e)=0"
        report.residuals["scaled_sine_law"] = float(np.max(np.abs(v * f[xsy] - pair)))
    elif tol.is_zero(v, scale):
        report.branch = "degenerate g(e)=0"
        report.note = "g(e) = 0 while f(e) != 0: reduction to a sine/cosine law is undefined"
        if strict:
            raise DegenerateGe(report.note)
    else:
        g1 = g / v
        reduced = f[xsy] - (pair / v - sign * (u / v) * g[xsy])
        report.residuals["reduced_identity"] = float(np.max(np.abs(reduced)))
        if sign < 0:
            report.branch = "sine subtraction"
            F = f / u - g1
            report.residuals["SineSub"] = residual(
                S, sigma, None, EquationId.SineSub, F, g1, tol).max_residual
        else:
            report.branch = "cosine subtraction"
            F = (g1 + f / u) / 2
            report.residuals["CosSub"] = residual(
                S, sigma, None, EquationId.CosSub, F, g1, tol).max_residual
    report.verdict = all(r <= tol.residual_eps for r in report.residuals.values())
    return report
