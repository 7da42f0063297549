"""Solution families of the integral Kannappan-sine laws, and classifiers.

Family tags ``T36_1`` .. ``T36_8`` describe solutions of the subtraction law

    int f(x sigma(y) t) dmu(t) = f(x)g(y) - f(y)g(x),

and ``T44_1`` .. ``T44_6`` solutions of the addition law (``+`` on the right).
``construct_t36``/``construct_t44`` build ``(f, g)`` from a descriptor, and
``classify_t36``/``classify_t44`` walk the case analysis backwards: they
compute the integrals that decide each branch and return a descriptor whose
construction reproduces the input pair.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .algebra import FiniteSemigroup, InvolutiveAutomorphism
from .equations import EquationId, NotASolution, residual, residual_table
from .functions import (
    DiscreteMeasure,
    Exponential,
    as_function,
    double_moment,
    enumerate_exponentials,
    integrate,
    kannappan_transform,
    match_exponential,
    sigma_pullback,
)
from .linalg import DEFAULT_TOL, ToleranceProfile, rank

__all__ = [
    "FAMILIES",
    "FamilyDescriptor",
    "ConstraintCheck",
    "DescriptorReport",
    "ClassificationTrace",
    "ConstraintViolation",
    "UnknownTag",
    "InternalContradiction",
    "PreconditionViolation",
    "TwoCharacter",
    "CharacterPlusPhi",
    "TwoCharacterAdd",
    "CharacterPhiAdd",
    "Unrepresentable",
    "Prop31Report",
    "LemmaReport",
    "validate_descriptor",
    "construct",
    "construct_t36",
    "construct_t44",
    "decompose_sine_subtraction",
    "decompose_sine_addition",
    "classify",
    "classify_t36",
    "classify_t44",
    "verify_prop31",
    "lemma_suite_t36",
    "lemma_suite_t44",
]


class ConstraintViolation(ValueError):
    def __init__(self, report: "DescriptorReport"):
        failed = ", ".join(c.name for c in report.checks if not c.passed)
        super().__init__(f"{report.tag}: failed constraints: {failed}")
        self.report = report


class UnknownTag(ValueError):
    pass


class InternalContradiction(RuntimeError):
    """A consistency fact that must hold for every verified solution failed."""


class PreconditionViolation(ValueError):
    pass


@dataclass(frozen=True)
class _FamilySpec:
    equation: EquationId
    params: tuple[str, ...]
    characters: int
    func: Optional[str]


FAMILIES: dict[str, _FamilySpec] = {
    "T36_1": _FamilySpec(EquationId.KSSub, (), 0, "g"),
    "T36_2": _FamilySpec(EquationId.KSSub, ("k",), 0, "f"),
    "T36_3": _FamilySpec(EquationId.KSSub, ("gamma", "b", "c"), 1, None),
    "T36_4": _FamilySpec(EquationId.KSSub, ("beta", "b", "c"), 1, None),
    "T36_5": _FamilySpec(EquationId.KSSub, ("alpha", "delta", "b", "c"), 1, None),
    "T36_6": _FamilySpec(EquationId.KSSub, ("gamma",), 1, "phi"),
    "T36_7": _FamilySpec(EquationId.KSSub, ("alpha", "c", "delta"), 1, "phi"),
    "T36_8": _FamilySpec(EquationId.KSSub, ("c",), 1, "phi"),
    "T44_1": _FamilySpec(EquationId.KSAdd, (), 0, "g"),
    "T44_2": _FamilySpec(EquationId.KSAdd, (), 0, "f"),
    "T44_3": _FamilySpec(EquationId.KSAdd, ("delta",), 1, None),
    "T44_4": _FamilySpec(EquationId.KSAdd, ("alpha",), 2, None),
    "T44_5": _FamilySpec(EquationId.KSAdd, (), 1, "phi"),
    "T44_6": _FamilySpec(EquationId.KSAdd, (), 1, "Phi"),
}


def _cx(z: complex) -> list[float]:
    z = complex(z)
    return [z.real + 0.0, z.imag + 0.0]


@dataclass(eq=False)
class FamilyDescriptor:
    """One solution family together with its parameters.

    ``params`` holds the complex constants named in ``FAMILIES[tag].params``;
    ``chi``/``chi2`` are the exponentials and ``func`` the free function of
    the family (``g``, ``f``, ``phi`` or ``Phi``, depending on the tag).
    """

    tag: str
    params: dict[str, complex] = field(default_factory=dict)
    chi: Optional[Exponential] = None
    chi2: Optional[Exponential] = None
    func: Optional[np.ndarray] = None

    def __post_init__(self):
        spec = FAMILIES.get(self.tag)
        if spec is None:
            raise UnknownTag(f"unknown family tag {self.tag!r}")
        missing = set(spec.params) - set(self.params)
        extra = set(self.params) - set(spec.params)
        if missing or extra:
            raise ValueError(f"{self.tag} takes parameters {spec.params}, got {sorted(self.params)}")
        self.params = {k: complex(self.params[k]) for k in spec.params}
        chis = [c for c in (self.chi, self.chi2) if c is not None]
        if len(chis) != spec.characters or (spec.characters == 1 and self.chi is None):
            raise ValueError(f"{self.tag} takes {spec.characters} exponential(s)")
        if (spec.func is None) != (self.func is None):
            raise ValueError(f"{self.tag} {'takes' if spec.func else 'does not take'} a function")
        if self.func is not None:
            self.func = as_function(self.func).copy()

    @property
    def equation(self) -> EquationId:
        return FAMILIES[self.tag].equation

    def __getitem__(self, name: str) -> complex:
        return self.params[name]

    def to_dict(self) -> dict:
        out: dict = {"tag": self.tag, "params": {k: _cx(v) for k, v in self.params.items()}}
        if self.chi is not None:
            out["chi"] = self.chi.label()
        if self.chi2 is not None:
            out["chi2"] = self.chi2.label()
        if self.func is not None:
            out[FAMILIES[self.tag].func] = [_cx(v) for v in self.func]
        return out


@dataclass
class ConstraintCheck:
    name: str
    value: complex
    passed: bool

    def to_dict(self) -> dict:
        return {"constraint": self.name, "value": _cx(self.value), "passed": self.passed}


@dataclass
class DescriptorReport:
    tag: str
    checks: list[ConstraintCheck] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {"tag": self.tag, "ok": self.ok, "checks": [c.to_dict() for c in self.checks]}


@dataclass
class ClassificationTrace:
    """Branch decisions and constants computed while classifying a solution."""

    branches: list[str] = field(default_factory=list)
    moments: dict[str, complex] = field(default_factory=dict)
    constants: dict[str, complex] = field(default_factory=dict)
    psi: Optional[np.ndarray] = None

    def to_dict(self) -> dict:
        out = {
            "branches": list(self.branches),
            "moments": {k: _cx(v) for k, v in self.moments.items()},
            "constants": {k: _cx(v) for k, v in self.constants.items()},
        }
        if self.psi is not None:
            out["psi"] = [_cx(v) for v in self.psi]
        return out


# -- small numeric helpers ---------------------------------------------------

def _norm(v) -> float:
    v = np.asarray(v)
    return float(np.max(np.abs(v))) if v.size else 0.0


def _mu_scale(mu: DiscreteMeasure) -> float:
    return max(1.0, mu.total_variation)


def _close(a, b, tol: ToleranceProfile, scale: float = 0.0) -> bool:
    return _norm(np.asarray(a) - np.asarray(b)) <= tol.residual_eps * (1.0 + scale)


def _coef(v: np.ndarray, target: np.ndarray) -> complex:
    """Least-squares coefficient ``c`` minimizing ``|target - c v|``."""
    den = np.vdot(v, v)
    return complex(np.vdot(v, target) / den) if abs(den) > 0 else 0j


def _dependent(f, g, tol: ToleranceProfile) -> bool:
    return rank(np.vstack([f, g]), tol) < 2


def _moment_zero(value: complex, h, tol: ToleranceProfile) -> bool:
    # a moment is zero iff |value| <= eps * (1 + |h|_inf)
    return tol.is_zero(value, _norm(h))


def _scaled_residual_ok(S, sigma, mu, eq, f, g, tol, scale: float) -> tuple[bool, float]:
    r = residual(S, sigma, mu, eq, f, g, tol).max_residual
    return r <= tol.residual_eps * (1.0 + scale), r


def _integral_products_table(S: FiniteSemigroup, mu: DiscreteMeasure, f) -> np.ndarray:
    """``T[x, y] = int f(x y t) dmu(t)``."""
    f = as_function(f, S.n)
    T = np.zeros((S.n, S.n), dtype=complex)
    for z, w in mu.atoms:
        T += w * f[S.array[S.array, z]]
    return T


def _left_double_moment(S: FiniteSemigroup, sigma: InvolutiveAutomorphism,
                        mu: DiscreteMeasure, g) -> np.ndarray:
    """``y -> sum_{i,j} w_i w_j g(y sigma(z_i) z_j)``."""
    g = as_function(g, S.n)
    out = np.zeros(S.n, dtype=complex)
    for zi, wi in mu.atoms:
        ys = S.array[:, sigma.perm[zi]]
        for zj, wj in mu.atoms:
            out += wi * wj * g[S.array[ys, zj]]
    return out


def _phi_defect(S, chi: Exponential, phi) -> float:
    return float(np.max(np.abs(residual_table(S, None, None, EquationId.SpecialSineAdd, phi, chi.values))))


# -- descriptor validation and construction ---------------------------------

def validate_descriptor(S: FiniteSemigroup, sigma: InvolutiveAutomorphism, mu: DiscreteMeasure,
                        desc: FamilyDescriptor, tol: ToleranceProfile = DEFAULT_TOL,
                        ) -> DescriptorReport:
    """Evaluate every side condition of ``desc.tag`` on ``(S, sigma, mu)``.

    Never raises for a failed condition; each line of the report carries the
    computed value and a pass flag.
    """
    rep = DescriptorReport(desc.tag)
    eps = tol.residual_eps
    p = desc.params
    musc = _mu_scale(mu)

    def add(name: str, value: complex, passed: bool) -> None:
        rep.checks.append(ConstraintCheck(name, complex(value), bool(passed)))

    def nonzero(name: str, value: complex) -> None:
        add(f"{name} != 0", value, abs(value) > eps)

    def equal(name: str, value: complex, target: complex) -> None:
        add(name, value - target, abs(value - target) <= eps * (1 + abs(target)))

    def chi_relation(chi: Exponential, invariant: bool, label: str = "chi") -> None:
        same = chi.is_sigma_invariant(sigma)
        add(f"{label} o sigma {'=' if invariant else '!='} {label}", 0 if same == invariant else 1,
            same == invariant)

    def phi_conditions(chi: Exponential, phi, parity: int, label: str = "phi") -> None:
        scale = _norm(phi)
        add(f"{label} != 0", scale, scale > eps)
        d = _phi_defect(S, chi, phi)
        add(f"{label} solves the special sine addition law", d, d <= eps * (1 + scale))
        d = _norm(sigma_pullback(phi, sigma) - parity * np.asarray(phi))
        add(f"{label} o sigma = {'+' if parity > 0 else '-'}{label}", d, d <= eps * (1 + scale))

    def annihilated(f) -> None:
        scale = _norm(f)
        add("f != 0", scale, scale > eps)
        d = _norm(_integral_products_table(S, mu, f))
        add("int f(x y t) dmu(t) = 0 for all x, y", d, d <= eps * (1 + scale) * musc)

    tag, chi = desc.tag, desc.chi
    m = integrate(mu, chi.values) if chi is not None else 0j
    ms = integrate(mu, chi.pullback(sigma).values) if chi is not None else 0j

    if tag in ("T36_1", "T44_1"):
        pass
    elif tag in ("T36_2", "T44_2"):
        annihilated(desc.func)
    elif tag == "T36_3":
        b, c = p["b"], p["c"]
        nonzero("gamma", p["gamma"])
        nonzero("b", b)
        add("c not in {1, -1}", c, abs(c - 1) > eps and abs(c + 1) > eps)
        chi_relation(chi, False)
        if abs(c - 1) > eps and abs(c + 1) > eps:
            equal("int chi dmu = -2b/(1+c)", m, -2 * b / (1 + c))
            equal("int chi o sigma dmu = 2b/(1-c)", ms, 2 * b / (1 - c))
    elif tag == "T36_4":
        nonzero("beta", p["beta"])
        nonzero("b", p["b"])
        chi_relation(chi, False)
        if abs(p["beta"]) > eps:
            equal("int chi dmu = 1/beta", m, 1 / p["beta"])
            equal("int chi o sigma dmu = 1/beta", ms, 1 / p["beta"])
    elif tag == "T36_5":
        a, d, b, c = p["alpha"], p["delta"], p["b"], p["c"]
        for name in ("alpha", "delta", "b"):
            nonzero(name, p[name])
        s = 2 * b * d + a * c
        add("alpha != +(2 b delta + alpha c)", a - s, abs(a - s) > eps)
        add("alpha != -(2 b delta + alpha c)", a + s, abs(a + s) > eps)
        chi_relation(chi, False)
        if abs(a + s) > eps and abs(a - s) > eps:
            equal("int chi dmu = 2b/(alpha(1+c)+2b delta)", m, 2 * b / (a * (1 + c) + 2 * b * d))
            equal("int chi o sigma dmu = 2b/(alpha(c-1)+2b delta)", ms, 2 * b / (a * (c - 1) + 2 * b * d))
    elif tag == "T36_6":
        nonzero("gamma", p["gamma"])
        chi_relation(chi, True)
        phi_conditions(chi, desc.func, -1)
        nonzero("int chi dmu", m)
        equal("int phi dmu = (int chi dmu)^2", integrate(mu, desc.func), m * m)
    elif tag == "T36_7":
        a, c, d = p["alpha"], p["c"], p["delta"]
        nonzero("delta", d)
        nonzero("alpha c + delta", a * c + d)
        chi_relation(chi, True)
        phi_conditions(chi, desc.func, -1)
        if abs(a * c + d) > eps:
            D = a * c + d
            equal("int chi dmu = 1/(alpha c + delta)", m, 1 / D)
            equal("int phi dmu = -alpha/(alpha c + delta)^2", integrate(mu, desc.func), -a / D ** 2)
    elif tag == "T36_8":
        chi_relation(chi, True)
        phi_conditions(chi, desc.func, -1)
        nonzero("int chi dmu", m)
        equal("int phi dmu = 0", integrate(mu, desc.func), 0)
    elif tag == "T44_3":
        nonzero("delta", p["delta"])
        chi_relation(chi, True)
        nonzero("int chi dmu", m)
    elif tag == "T44_4":
        nonzero("alpha", p["alpha"])
        add("chi1 != chi2", 0 if chi != desc.chi2 else 1, chi != desc.chi2)
        chi_relation(chi, True, "chi1")
        chi_relation(desc.chi2, True, "chi2")
        nonzero("int chi1 dmu", m)
        nonzero("int chi2 dmu", integrate(mu, desc.chi2.values))
    elif tag == "T44_5":
        chi_relation(chi, True)
        phi_conditions(chi, desc.func, +1)
        nonzero("int chi dmu", m)
        equal("int phi dmu = 0", integrate(mu, desc.func), 0)
    elif tag == "T44_6":
        chi_relation(chi, True)
        nonzero("int chi dmu", m)
        Phi = desc.func
        scale = _norm(Phi)
        add("Phi != 0", scale, scale > eps)
        r = residual(S, sigma, mu, EquationId.SpecialKSAdd, Phi, chi.values, tol).max_residual
        add("Phi solves the special integral addition law", r, r <= eps * (1 + scale) * musc)
    return rep


def _build(S: FiniteSemigroup, sigma: InvolutiveAutomorphism, mu: DiscreteMeasure,
           desc: FamilyDescriptor) -> tuple[np.ndarray, np.ndarray]:
    n, p, tag = S.n, desc.params, desc.tag
    zero = np.zeros(n, dtype=complex)
    if tag in ("T36_1", "T44_1"):
        return zero, desc.func.copy()
    if tag == "T36_2":
        return desc.func.copy(), p["k"] * desc.func
    if tag == "T44_2":
        return desc.func.copy(), zero

    X = desc.chi.values
    m = integrate(mu, X)
    if tag in ("T36_3", "T36_4", "T36_5"):
        Y = desc.chi.pullback(sigma).values
        even, odd = X + Y, X - Y
        if tag == "T36_3":
            gam, b, c = p["gamma"], p["b"], p["c"]
            return even / (2 * gam) + c * odd / (2 * gam), b * odd
        if tag == "T36_4":
            beta, b, c = p["beta"], p["b"], p["c"]
            return b * odd, even / (2 * beta) + c * odd / (2 * beta)
        a, d, b, c = p["alpha"], p["delta"], p["b"], p["c"]
        return (a * even / (2 * d) + (a * c + 2 * b * d) * odd / (2 * d),
                even / (2 * d) + c * odd / (2 * d))
    phi = desc.func
    if tag == "T36_6":
        gam = p["gamma"]
        return (X - phi / m) / gam, phi.copy()
    if tag == "T36_7":
        a, c, d = p["alpha"], p["c"], p["delta"]
        return (a * X + (a * c + d) * phi) / d, (X + c * phi) / d
    if tag == "T36_8":
        return phi.copy(), m * (X + p["c"] * phi)
    if tag == "T44_3":
        d = p["delta"]
        return X * m / (2 * d), X * m / 2
    if tag == "T44_4":
        X2 = desc.chi2.values
        m2 = integrate(mu, X2)
        a = p["alpha"]
        return (X * m - X2 * m2) / (2 * a), (X * m + X2 * m2) / 2
    if tag in ("T44_5", "T44_6"):
        return phi.copy(), X * m
    raise UnknownTag(tag)


def construct(S: FiniteSemigroup, sigma: InvolutiveAutomorphism, mu: DiscreteMeasure,
              desc: FamilyDescriptor, tol: ToleranceProfile = DEFAULT_TOL,
              ) -> tuple[np.ndarray, np.ndarray]:
    """Build ``(f, g)`` for any family after validating its side conditions."""
    report = validate_descriptor(S, sigma, mu, desc, tol)
    if not report.ok:
        raise ConstraintViolation(report)
    return _build(S, sigma, mu, desc)


def construct_t36(S, sigma, mu, desc: FamilyDescriptor, tol: ToleranceProfile = DEFAULT_TOL):
    if not desc.tag.startswith("T36_"):
        raise UnknownTag(f"{desc.tag} is not a subtraction-law family")
    return construct(S, sigma, mu, desc, tol)


def construct_t44(S, sigma, mu, desc: FamilyDescriptor, tol: ToleranceProfile = DEFAULT_TOL):
    if not desc.tag.startswith("T44_"):
        raise UnknownTag(f"{desc.tag} is not an addition-law family")
    return construct(S, sigma, mu, desc, tol)


# -- decompositions of the plain sine laws ----------------------------------

@dataclass
class TwoCharacter:
    """``F = b (chi - chi o sigma)``, ``G = (chi + chi o sigma)/2 + c (chi - chi o sigma)/2``."""

    chi: Exponential
    b: complex
    c: complex


@dataclass
class CharacterPlusPhi:
    """``F = phi``, ``G = chi + c phi`` with ``chi o sigma = chi`` and ``phi o sigma = -phi``."""

    chi: Exponential
    phi: np.ndarray
    c: complex


@dataclass
class TwoCharacterAdd:
    """``F = c (chi1 - chi2)``, ``G = (chi1 + chi2)/2``."""

    chi1: Exponential
    chi2: Exponential
    c: complex


@dataclass
class CharacterPhiAdd:
    """``F = phi``, ``G = chi`` with ``phi o sigma = phi``."""

    chi: Exponential
    phi: np.ndarray


@dataclass
class Unrepresentable:
    note: str


SubDecomposition = Union[TwoCharacter, CharacterPlusPhi, Unrepresentable]
AddDecomposition = Union[TwoCharacterAdd, CharacterPhiAdd, Unrepresentable]


def decompose_sine_subtraction(S: FiniteSemigroup, sigma: InvolutiveAutomorphism, F, G,
                               tol: ToleranceProfile = DEFAULT_TOL) -> SubDecomposition:
    """Match a solution of ``F(x sigma(y)) = F(x)G(y) - F(y)G(x)`` to a known form.

    Exponentials are tried in canonical order and the first fit is returned.
    """
    F, G = as_function(F, S.n), as_function(G, S.n)
    scale = max(_norm(F), _norm(G))
    ok, r = _scaled_residual_ok(S, sigma, None, EquationId.SineSub, F, G, tol, scale * (1 + scale))
    if not ok:
        raise NotASolution(f"sine subtraction residual {r:.3e}")
    if _norm(F) <= tol.residual_eps or _dependent(F, G, tol):
        return Unrepresentable("dependent/zero input")
    exps = enumerate_exponentials(S)
    for chi in exps:
        if chi.is_sigma_invariant(sigma):
            continue
        X, Y = chi.values, chi.pullback(sigma).values
        odd, even = X - Y, (X + Y) / 2
        b = _coef(odd, F)
        c = _coef(odd / 2, G - even)
        if _close(F, b * odd, tol, scale) and _close(G, even + c * odd / 2, tol, scale):
            return TwoCharacter(chi, b, c)
    if _close(sigma_pullback(F, sigma), -F, tol, scale):
        for chi in exps:
            if not chi.is_sigma_invariant(sigma):
                continue
            if _phi_defect(S, chi, F) > tol.residual_eps * (1 + scale):
                continue
            c = _coef(F, G - chi.values)
            if _close(G, chi.values + c * F, tol, scale):
                return CharacterPlusPhi(chi, F.copy(), c)
    return Unrepresentable("no enumerated exponential fits")


def decompose_sine_addition(S: FiniteSemigroup, sigma: InvolutiveAutomorphism, F, G,
                            tol: ToleranceProfile = DEFAULT_TOL) -> AddDecomposition:
    """Match a solution of ``F(x sigma(y)) = F(x)G(y) + F(y)G(x)`` to a known form."""
    F, G = as_function(F, S.n), as_function(G, S.n)
    scale = max(_norm(F), _norm(G))
    ok, r = _scaled_residual_ok(S, sigma, None, EquationId.SineAdd, F, G, tol, scale * (1 + scale))
    if not ok:
        raise NotASolution(f"sine addition residual {r:.3e}")
    if _norm(F) <= tol.residual_eps or _dependent(F, G, tol):
        return Unrepresentable("dependent/zero input")
    exps = enumerate_exponentials(S)
    for i, chi1 in enumerate(exps):
        for chi2 in exps[i + 1:]:
            X1, X2 = chi1.values, chi2.values
            if not _close(G, (X1 + X2) / 2, tol, scale):
                continue
            c = _coef(X1 - X2, F)
            if _close(F, c * (X1 - X2), tol, scale):
                return TwoCharacterAdd(chi1, chi2, c)
    if _close(sigma_pullback(F, sigma), F, tol, scale):
        for chi in exps:
            if _close(G, chi.values, tol, scale) and _phi_defect(S, chi, F) <= tol.residual_eps * (1 + scale):
                return CharacterPhiAdd(chi, F.copy())
    return Unrepresentable("no enumerated exponential fits")


# -- multiplicative kernels: int f(x sigma(y) t) dmu(t) = f(x) f(y) ------------

@dataclass
class Prop31Report:
    residual: float
    integral: complex
    part_a: bool
    alpha: Optional[complex] = None
    chi: Optional[Exponential] = None
    checks: dict[str, float] = field(default_factory=dict)
    verdict: bool = False

    def to_dict(self) -> dict:
        return {
            "residual": self.residual,
            "integral": _cx(self.integral),
            "part_a": self.part_a,
            "alpha": None if self.alpha is None else _cx(self.alpha),
            "chi": None if self.chi is None else self.chi.label(),
            "checks": dict(self.checks),
            "verdict": self.verdict,
        }


def verify_prop31(S: FiniteSemigroup, sigma: InvolutiveAutomorphism, mu: DiscreteMeasure, f,
                  tol: ToleranceProfile = DEFAULT_TOL) -> Prop31Report:
    """Check the structure of a solution of ``int f(x sigma(y) t) dmu(t) = f(x) f(y)``.

    Part (a): the integral of ``f`` vanishes exactly when ``f`` does. For
    ``f != 0`` the constant ``alpha = int f / iint f(sigma(k) s)`` turns ``f``
    into an exponential ``chi = alpha f`` with ``chi o sigma = chi`` and
    ``f = (int chi dmu) chi``; ``chi`` is returned as the matching enumerated
    exponential.
    """
    f = as_function(f, S.n)
    eps = tol.residual_eps
    scale = _norm(f)
    ok, r = _scaled_residual_ok(S, sigma, mu, EquationId.KMultSigma, f, None, tol,
                                scale * (1 + scale) * _mu_scale(mu))
    if not ok:
        raise NotASolution(f"KMultSigma residual {r:.3e}")
    total = integrate(mu, f)
    f_zero = scale <= eps
    int_zero = _moment_zero(total, f, tol)
    rep = Prop31Report(residual=r, integral=total, part_a=(f_zero == int_zero))
    if f_zero:
        rep.verdict = rep.part_a
        return rep
    D = double_moment(S, mu, f, sigma)
    if _moment_zero(D, f, tol):
        raise InternalContradiction("double moment of a nonzero solution vanishes")
    alpha = total / D
    rep.alpha = alpha
    chi_vals = alpha * f
    chi = match_exponential(S, chi_vals, tol)
    if chi is None:
        raise InternalContradiction("alpha * f is not an enumerated exponential")
    rep.chi = chi
    m = integrate(mu, chi.values)
    xsy = S.array[:, sigma.array]
    rep.checks["exponential"] = _norm(chi_vals - chi.values)
    rep.checks["sigma_invariant"] = 0.0 if chi.is_sigma_invariant(sigma) else 1.0
    rep.checks["f_equals_moment_times_chi"] = _norm(f - m * chi.values)
    rep.checks["scaled_multiplicative"] = _norm(f[xsy] - alpha * np.outer(f, f))
    bound = eps * (1 + scale) * (1 + abs(alpha) * (1 + scale))
    rep.verdict = rep.part_a and all(v <= bound for v in rep.checks.values())
    return rep


# -- classifiers -------------------------------------------------------------

def _sigma_moments(S, sigma, mu, f, g) -> tuple[complex, complex]:
    return double_moment(S, mu, g, sigma), double_moment(S, mu, f, sigma)


def classify_t36(S: FiniteSemigroup, sigma: InvolutiveAutomorphism, mu: DiscreteMeasure, f, g,
                 tol: ToleranceProfile = DEFAULT_TOL) -> tuple[FamilyDescriptor, ClassificationTrace]:
    """Recover the subtraction-law family of a solution ``(f, g)``."""
    f, g = as_function(f, S.n), as_function(g, S.n)
    eps = tol.residual_eps
    scale = max(_norm(f), _norm(g))
    ok, r = _scaled_residual_ok(S, sigma, mu, EquationId.KSSub, f, g, tol,
                                scale * (1 + scale) * _mu_scale(mu))
    if not ok:
        raise NotASolution(f"KSSub residual {r:.3e}")
    trace = ClassificationTrace()

    if _norm(f) <= eps:
        trace.branches.append("f = 0")
        return FamilyDescriptor("T36_1", func=g), trace

    if _dependent(f, g, tol):
        k = _coef(f, g)
        trace.branches.append("f, g dependent")
        trace.constants["k"] = k
        if not _close(g, k * f, tol, _norm(g)):
            raise InternalContradiction("rank test says dependent but g is not a multiple of f")
        d = _norm(_integral_products_table(S, mu, f))
        trace.moments["max |int f(xyt) dmu|"] = d
        if d > eps * (1 + _norm(f)) * _mu_scale(mu):
            raise InternalContradiction("dependent solution with int f(xyt) dmu != 0")
        return FamilyDescriptor("T36_2", {"k": k}, func=f), trace

    trace.branches.append("f, g independent")
    If, Ig = integrate(mu, f), integrate(mu, g)
    Mg, Mf = _sigma_moments(S, sigma, mu, f, g)
    trace.moments.update({"int f": If, "int g": Ig, "M_g": Mg, "M_f": Mf})
    if not _moment_zero(If, f, tol):
        raise InternalContradiction(f"independent solution with int f dmu = {If:.3e}")
    if _moment_zero(Ig, g, tol):
        raise InternalContradiction("independent solution with int g dmu = 0")

    if _moment_zero(Mg, g, tol):
        trace.branches.append("M_g = 0")
        if _moment_zero(Mf, f, tol):
            raise InternalContradiction("M_g = M_f = 0 for an independent solution")
        gamma = Ig / Mf
        trace.constants["gamma"] = gamma
        dec = decompose_sine_subtraction(S, sigma, g, gamma * f, tol)
        if isinstance(dec, TwoCharacter):
            trace.branches.append("two characters")
            desc = FamilyDescriptor("T36_3", {"gamma": gamma, "b": dec.b, "c": dec.c}, chi=dec.chi)
        elif isinstance(dec, CharacterPlusPhi):
            trace.branches.append("character plus phi")
            desc = FamilyDescriptor("T36_6", {"gamma": gamma}, chi=dec.chi, func=g)
        else:
            raise InternalContradiction(f"M_g = 0 branch decomposition failed: {dec.note}")
        return desc, trace

    if _moment_zero(Mf, f, tol):
        trace.branches.append("M_g != 0, M_f = 0")
        beta = Ig / Mg
        trace.constants["beta"] = beta
        dec = decompose_sine_subtraction(S, sigma, f, beta * g, tol)
        if isinstance(dec, TwoCharacter):
            trace.branches.append("two characters")
            desc = FamilyDescriptor("T36_4", {"beta": beta, "b": dec.b, "c": dec.c}, chi=dec.chi)
        elif isinstance(dec, CharacterPlusPhi):
            trace.branches.append("character plus phi")
            desc = FamilyDescriptor("T36_8", {"c": dec.c}, chi=dec.chi, func=f)
        else:
            raise InternalContradiction(f"M_f = 0 branch decomposition failed: {dec.note}")
        return desc, trace

    trace.branches.append("M_g != 0, M_f != 0")
    delta, alpha = Ig / Mg, Mf / Mg
    trace.constants.update({"delta": delta, "alpha": alpha})
    dec = decompose_sine_subtraction(S, sigma, f - alpha * g, delta * g, tol)
    if isinstance(dec, TwoCharacter):
        trace.branches.append("two characters")
        desc = FamilyDescriptor("T36_5", {"alpha": alpha, "delta": delta, "b": dec.b, "c": dec.c},
                                chi=dec.chi)
    elif isinstance(dec, CharacterPlusPhi):
        trace.branches.append("character plus phi")
        desc = FamilyDescriptor("T36_7", {"alpha": alpha, "c": dec.c, "delta": delta},
                                chi=dec.chi, func=dec.phi)
    else:
        raise InternalContradiction(f"M_f != 0 branch decomposition failed: {dec.note}")
    return desc, trace


def _psi_xi(S, sigma, mu, f, g) -> tuple[np.ndarray, complex]:
    If, Ig = integrate(mu, f), integrate(mu, g)
    psi = (_left_double_moment(S, sigma, mu, g) - g * Ig) / If
    return psi, integrate(mu, psi) / If


def classify_t44(S: FiniteSemigroup, sigma: InvolutiveAutomorphism, mu: DiscreteMeasure, f, g,
                 tol: ToleranceProfile = DEFAULT_TOL) -> tuple[FamilyDescriptor, ClassificationTrace]:
    """Recover the addition-law family of a solution ``(f, g)``."""
    f, g = as_function(f, S.n), as_function(g, S.n)
    eps = tol.residual_eps
    scale = max(_norm(f), _norm(g))
    musc = _mu_scale(mu)
    ok, r = _scaled_residual_ok(S, sigma, mu, EquationId.KSAdd, f, g, tol, scale * (1 + scale) * musc)
    if not ok:
        raise NotASolution(f"KSAdd residual {r:.3e}")
    trace = ClassificationTrace()

    if _norm(f) <= eps:
        trace.branches.append("f = 0")
        return FamilyDescriptor("T44_1", func=g), trace

    if _dependent(f, g, tol):
        delta = _coef(f, g)
        trace.branches.append("f, g dependent")
        trace.constants["delta"] = delta
        if not _close(g, delta * f, tol, _norm(g)):
            raise InternalContradiction("rank test says dependent but g is not a multiple of f")
        if _norm(g) <= eps * (1 + _norm(f)):
            trace.branches.append("g = 0")
            d = _norm(_integral_products_table(S, mu, f))
            trace.moments["max |int f(xyt) dmu|"] = d
            if d > eps * (1 + _norm(f)) * musc:
                raise InternalContradiction("g = 0 solution with int f(xyt) dmu != 0")
            return FamilyDescriptor("T44_2", func=f), trace
        rep = verify_prop31(S, sigma, mu, 2 * delta * f, tol)
        if rep.chi is None or not rep.verdict:
            raise InternalContradiction("2 delta f does not have the multiplicative form")
        trace.constants["prop31_alpha"] = rep.alpha
        return FamilyDescriptor("T44_3", {"delta": delta}, chi=rep.chi), trace

    trace.branches.append("f, g independent")
    If, Ig = integrate(mu, f), integrate(mu, g)
    trace.moments.update({"int f": If, "int g": Ig})

    if _moment_zero(If, f, tol):
        trace.branches.append("int f = 0")
        Mg, Mf = _sigma_moments(S, sigma, mu, f, g)
        trace.moments.update({"M_g": Mg, "M_f": Mf})
        if _moment_zero(Ig, g, tol):
            raise InternalContradiction("int f = 0 with int g dmu = 0")
        if _moment_zero(Mg, g, tol):
            trace.branches.append("int f = 0, M_g = 0")
            if _moment_zero(Mf, f, tol):
                raise InternalContradiction("M_g = M_f = 0 for an independent solution")
            beta = Ig / Mf
            trace.constants["beta"] = beta
            dec = decompose_sine_addition(S, sigma, g, beta * f, tol)
            if not isinstance(dec, TwoCharacterAdd):
                raise InternalContradiction(f"M_g = 0 branch did not give two characters: {dec}")
            m1 = integrate(mu, dec.chi1.values)
            m2 = integrate(mu, dec.chi2.values)
            trace.moments.update({"int chi1": m1, "int chi2": m2})
            if not (_close(m1, 2 * dec.c, tol) and _close(m2, -2 * dec.c, tol)):
                raise InternalContradiction("M_g = 0 branch moments differ from +-2c")
            trace.branches.append("two characters")
            return FamilyDescriptor("T44_4", {"alpha": beta * m1}, chi=dec.chi1, chi2=dec.chi2), trace

        trace.branches.append("int f = 0, M_g != 0")
        alpha = Ig / Mg
        trace.constants["alpha"] = alpha
        if not (_close(sigma_pullback(f, sigma), f, tol, _norm(f))
                and _close(sigma_pullback(g, sigma), g, tol, _norm(g))):
            raise InternalContradiction("M_g != 0 branch solution is not sigma-even")
        dec = decompose_sine_addition(S, sigma, f, alpha * g, tol)
        if isinstance(dec, TwoCharacterAdd):
            m1 = integrate(mu, dec.chi1.values)
            trace.moments["int chi1"] = m1
            trace.branches.append("two characters")
            return FamilyDescriptor("T44_4", {"alpha": m1 / (2 * dec.c)},
                                    chi=dec.chi1, chi2=dec.chi2), trace
        if isinstance(dec, CharacterPhiAdd):
            trace.branches.append("character plus phi")
            return FamilyDescriptor("T44_5", chi=dec.chi, func=f), trace
        raise InternalContradiction(f"M_g != 0 branch decomposition failed: {dec.note}")

    trace.branches.append("int f != 0")
    psi, xi = _psi_xi(S, sigma, mu, f, g)
    trace.psi = psi
    trace.constants["xi"] = xi
    alpha = 0j if tol.is_zero(xi, _norm(g) ** 2) else complex(cmath.sqrt(xi))
    trace.constants["alpha"] = alpha
    rep1 = verify_prop31(S, sigma, mu, g + alpha * f, tol)
    rep2 = verify_prop31(S, sigma, mu, g - alpha * f, tol)
    if rep1.chi is None or rep2.chi is None:
        raise InternalContradiction("g +- alpha f vanishes for an independent solution")
    m1 = integrate(mu, rep1.chi.values)
    m2 = integrate(mu, rep2.chi.values)
    trace.moments.update({"int chi1": m1, "int chi2": m2})
    if alpha != 0 and rep1.chi != rep2.chi:
        trace.branches.append("two different products")
        return FamilyDescriptor("T44_4", {"alpha": alpha}, chi=rep1.chi, chi2=rep2.chi), trace
    trace.branches.append("equal products")
    return FamilyDescriptor("T44_6", chi=rep1.chi, func=f), trace


def classify(S, sigma, mu, eq: EquationId, f, g, tol: ToleranceProfile = DEFAULT_TOL):
    if eq is EquationId.KSSub:
        return classify_t36(S, sigma, mu, f, g, tol)
    if eq is EquationId.KSAdd:
        return classify_t44(S, sigma, mu, f, g, tol)
    raise ValueError(f"no classifier for {eq.name}")


# -- lemma suites ------------------------------------------------------------

@dataclass
class LemmaReport:
    checks: list[ConstraintCheck] = field(default_factory=list)

    @property
    def verdict(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, value: complex, passed: bool) -> None:
        self.checks.append(ConstraintCheck(name, complex(value), bool(passed)))

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "checks": [c.to_dict() for c in self.checks]}


def _lemma_preconditions(S, sigma, mu, eq, f, g, tol) -> tuple[np.ndarray, np.ndarray]:
    f, g = as_function(f, S.n), as_function(g, S.n)
    scale = max(_norm(f), _norm(g))
    ok, r = _scaled_residual_ok(S, sigma, mu, eq, f, g, tol, scale * (1 + scale) * _mu_scale(mu))
    if not ok:
        raise NotASolution(f"{eq.name} residual {r:.3e}")
    if _dependent(f, g, tol):
        raise PreconditionViolation("f and g must be linearly independent")
    return f, g


def lemma_suite_t36(S: FiniteSemigroup, sigma: InvolutiveAutomorphism, mu: DiscreteMeasure, f, g,
                    tol: ToleranceProfile = DEFAULT_TOL) -> LemmaReport:
    """Facts every independent subtraction-law solution satisfies.

    ``int f = 0``; the identity
    ``f(x sigma(y)) M_g = [f(x)g(y) - f(y)g(x)] int g + g(x sigma(y)) M_f``;
    ``int g != 0``; and ``M_g = 0`` forces ``M_f != 0``.
    """
    f, g = _lemma_preconditions(S, sigma, mu, EquationId.KSSub, f, g, tol)
    eps = tol.residual_eps
    rep = LemmaReport()
    If, Ig = integrate(mu, f), integrate(mu, g)
    Mg, Mf = _sigma_moments(S, sigma, mu, f, g)
    rep.add("int f dmu = 0", If, abs(If) <= eps)
    xsy = S.array[:, sigma.array]
    d = f[xsy] * Mg - ((np.outer(f, g) - np.outer(g, f)) * Ig + g[xsy] * Mf)
    dn = _norm(d)
    rep.add("two-sided identity with double moments", dn, dn <= eps * _mu_scale(mu) ** 2)
    rep.add("int g dmu != 0", Ig, not _moment_zero(Ig, g, tol))
    rep.add("M_g = 0 implies M_f != 0", Mf,
            not _moment_zero(Mg, g, tol) or not _moment_zero(Mf, f, tol))
    return rep


def lemma_suite_t44(S: FiniteSemigroup, sigma: InvolutiveAutomorphism, mu: DiscreteMeasure, f, g,
                    tol: ToleranceProfile = DEFAULT_TOL) -> LemmaReport:
    """Facts every independent addition-law solution satisfies.

    With ``int f = 0``: the double-moment identity, ``int g != 0``, equality of
    the three double integrals of ``f``, and the exclusions on ``M_g, M_f``.
    With ``int f != 0``: ``int g(x sigma(y) t) dmu(t) = g(x)g(y) + xi f(x)f(y)``.
    """
    f, g = _lemma_preconditions(S, sigma, mu, EquationId.KSAdd, f, g, tol)
    eps = tol.residual_eps
    rep = LemmaReport()
    If, Ig = integrate(mu, f), integrate(mu, g)
    musc = _mu_scale(mu)
    if _moment_zero(If, f, tol):
        Mg, Mf = _sigma_moments(S, sigma, mu, f, g)
        xsy = S.array[:, sigma.array]
        d = f[xsy] * Mg - ((np.outer(f, g) + np.outer(g, f)) * Ig - g[xsy] * Mf)
        dn = _norm(d)
        rep.add("double-moment identity", dn, dn <= eps * musc ** 2)
        rep.add("int g dmu != 0", Ig, not _moment_zero(Ig, g, tol))
        plain = double_moment(S, mu, f)
        swapped = complex(mu.weights @ f[S.array[np.ix_(mu.support, sigma.array[mu.support])]] @ mu.weights)
        # swapped = sum w_s w_t f(s sigma(t))
        rep.add("iint f(ts) = iint f(sigma(t)s)", plain - Mf, abs(plain - Mf) <= eps)
        rep.add("iint f(sigma(t)s) = iint f(s sigma(t))", Mf - swapped, abs(Mf - swapped) <= eps)
        zg, zf = _moment_zero(Mg, g, tol), _moment_zero(Mf, f, tol)
        rep.add("not both double moments zero", Mg, not (zg and zf))
        rep.add("M_g != 0 implies M_f = 0", Mf, zg or zf)
    else:
        psi, xi = _psi_xi(S, sigma, mu, f, g)
        K = kannappan_transform(S, sigma, mu, g)
        d = _norm(K - np.outer(g, g) - xi * np.outer(f, f))
        rep.add("int g(x sigma(y) t) dmu = g(x)g(y) + xi f(x)f(y)", d, d <= eps * musc * (1 + abs(xi)))
        d = _norm(psi - xi * f)
        rep.add("psi = xi f", d, d <= eps * musc * (1 + abs(xi)))
    return rep
