"""Complex functions on a finite semigroup, discrete measures, and exponentials.

Functions ``S -> C`` are plain complex numpy vectors of length ``S.n``.
Exponentials (nonzero multiplicative functions) are enumerated exactly: on a
finite semigroup every value is either 0 or a root of unity whose order divides
the period of the element, so the search space is finite and the values are
kept as exact fractions of a turn.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Optional, Sequence

import numpy as np

from .algebra import FiniteSemigroup, InvolutiveAutomorphism, index_period
from .linalg import DEFAULT_TOL, AffineSolution, ToleranceProfile, nullspace, solve_affine

__all__ = [
    "RootOfUnity",
    "Exponential",
    "DiscreteMeasure",
    "DegenerateMoment",
    "SigmaMismatch",
    "as_function",
    "integrate",
    "kannappan_transform",
    "kannappan_matrix",
    "double_moment",
    "sigma_pullback",
    "is_exponential",
    "enumerate_exponentials",
    "match_exponential",
    "multiplicative_residual",
    "sine_addition_matrix",
    "solve_sine_addition_special",
    "special_ks_addition_matrix",
    "solve_special_ks_addition",
    "fit_measure",
]


class DegenerateMoment(ValueError):
    pass


class SigmaMismatch(ValueError):
    pass


@dataclass(frozen=True, order=True)
class RootOfUnity:
    """``exp(2 pi i * turn)`` with ``turn`` a fraction in ``[0, 1)``."""

    turn: Fraction

    def __post_init__(self):
        object.__setattr__(self, "turn", Fraction(self.turn) % 1)

    @classmethod
    def of(cls, j: int, k: int) -> "RootOfUnity":
        return cls(Fraction(j, k))

    @property
    def j(self) -> int:
        return self.turn.numerator

    @property
    def k(self) -> int:
        return self.turn.denominator

    def __mul__(self, other: "RootOfUnity") -> "RootOfUnity":
        return RootOfUnity(self.turn + other.turn)

    def __complex__(self) -> complex:
        quarter = self.turn * 4
        if quarter.denominator == 1:
            return (1 + 0j, 1j, -1 + 0j, -1j)[int(quarter)]
        return cmath.exp(2j * cmath.pi * float(self.turn))

    def __str__(self) -> str:
        return "1" if self.turn == 0 else f"e({self.j}/{self.k})"


ExactValue = Optional[RootOfUnity]


def _exact_mul(a: ExactValue, b: ExactValue) -> ExactValue:
    if a is None or b is None:
        return None
    return a * b


def _exact_key(values: Sequence[ExactValue]) -> tuple:
    return tuple((0, Fraction(0)) if v is None else (1, v.turn) for v in values)


@dataclass(frozen=True)
class Exponential:
    """A nonzero multiplicative function held exactly (``None`` encodes 0)."""

    exact: tuple[ExactValue, ...]

    @cached_property
    def values(self) -> np.ndarray:
        arr = np.array([0j if v is None else complex(v) for v in self.exact], dtype=complex)
        arr.setflags(write=False)
        return arr

    @property
    def fn(self) -> np.ndarray:
        return self.values

    @property
    def n(self) -> int:
        return len(self.exact)

    def pullback(self, sigma: InvolutiveAutomorphism) -> "Exponential":
        return Exponential(tuple(self.exact[s] for s in sigma.perm))

    def is_sigma_invariant(self, sigma: InvolutiveAutomorphism) -> bool:
        return self.pullback(sigma) == self

    @property
    def sort_key(self) -> tuple:
        return _exact_key(self.exact)

    def label(self) -> str:
        return "[" + ", ".join("0" if v is None else str(v) for v in self.exact) + "]"

    def __repr__(self) -> str:
        return f"Exponential({self.label()})"


@dataclass(frozen=True)
class DiscreteMeasure:
    """Finitely supported complex measure ``sum_i w_i * delta_{z_i}``."""

    atoms: tuple[tuple[int, complex], ...]

    def __post_init__(self):
        atoms = tuple(sorted(((int(z), complex(w)) for z, w in self.atoms), key=lambda a: a[0]))
        if not atoms:
            raise ValueError("a measure needs at least one atom")
        zs = [z for z, _ in atoms]
        if len(set(zs)) != len(zs):
            raise ValueError("support indices must be distinct")
        if any(z < 0 for z in zs):
            raise ValueError("support indices must be nonnegative")
        if not all(cmath.isfinite(w) for _, w in atoms):
            raise ValueError("weights must be finite")
        object.__setattr__(self, "atoms", atoms)

    @classmethod
    def point_mass(cls, z: int, weight: complex = 1.0) -> "DiscreteMeasure":
        return cls(((z, weight),))

    @classmethod
    def from_weights(cls, support: Iterable[int], weights: Iterable[complex]) -> "DiscreteMeasure":
        return cls(tuple(zip(support, weights)))

    @property
    def support(self) -> np.ndarray:
        return np.array([z for z, _ in self.atoms], dtype=np.intp)

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for _, w in self.atoms], dtype=complex)

    @property
    def total_variation(self) -> float:
        return float(np.sum(np.abs(self.weights)))

    def scaled(self, c: complex) -> "DiscreteMeasure":
        return DiscreteMeasure(tuple((z, c * w) for z, w in self.atoms))

    def check(self, n: int) -> None:
        if int(self.support.max()) >= n:
            raise ValueError(f"measure support exceeds semigroup size {n}")


def as_function(values, n: int | None = None) -> np.ndarray:
    arr = np.asarray(values, dtype=complex)
    if arr.ndim != 1:
        raise ValueError("a function on S is a 1-D vector of values")
    if n is not None and arr.size != n:
        raise ValueError(f"function has {arr.size} values, semigroup has {n} elements")
    if not np.all(np.isfinite(arr)):
        raise ValueError("function values must be finite")
    return arr


def integrate(mu: DiscreteMeasure, h) -> complex:
    h = as_function(h)
    return complex(np.dot(mu.weights, h[mu.support]))


def _sigma_products(S: FiniteSemigroup, sigma: InvolutiveAutomorphism) -> np.ndarray:
    # P[x, y] = x * sigma(y)
    return S.array[:, sigma.array]


def kannappan_transform(S: FiniteSemigroup, sigma: InvolutiveAutomorphism,
                        mu: DiscreteMeasure, f) -> np.ndarray:
    """``K[x, y] = sum_i w_i f(x sigma(y) z_i)``."""
    f = as_function(f, S.n)
    mu.check(S.n)
    P = _sigma_products(S, sigma)
    K = np.zeros((S.n, S.n), dtype=complex)
    for z, w in mu.atoms:
        K += w * f[S.array[P, z]]
    return K


def kannappan_matrix(S: FiniteSemigroup, sigma: InvolutiveAutomorphism,
                     mu: DiscreteMeasure) -> np.ndarray:
    """Matrix ``M`` of shape ``(n*n, n)`` with ``M @ f == kannappan_transform(...).ravel()``."""
    n = S.n
    mu.check(n)
    P = _sigma_products(S, sigma).ravel()
    M = np.zeros((n * n, n), dtype=complex)
    rows = np.arange(n * n)
    for z, w in mu.atoms:
        np.add.at(M, (rows, S.array[P, z]), w)
    return M


def double_moment(S: FiniteSemigroup, mu: DiscreteMeasure, h,
                  sigma: InvolutiveAutomorphism | None = None) -> complex:
    """``sum_{i,j} w_i w_j h(sigma(z_i) z_j)`` (plain products when ``sigma`` is None)."""
    h = as_function(h, S.n)
    z, w = mu.support, mu.weights
    left = z if sigma is None else sigma.array[z]
    prods = S.array[np.ix_(left, z)]
    return complex(w @ h[prods] @ w)


def sigma_pullback(f, sigma: InvolutiveAutomorphism) -> np.ndarray:
    return as_function(f, sigma.n)[sigma.array]


def multiplicative_residual(S: FiniteSemigroup, chi) -> float:
    chi = as_function(chi, S.n)
    return float(np.max(np.abs(chi[S.array] - np.outer(chi, chi))))


def is_exponential(S: FiniteSemigroup, chi, tol: ToleranceProfile = DEFAULT_TOL) -> bool:
    chi = as_function(chi, S.n)
    if np.max(np.abs(chi)) <= tol.residual_eps:
        return False
    return multiplicative_residual(S, chi) <= tol.residual_eps


@lru_cache(maxsize=64)
def enumerate_exponentials(S: FiniteSemigroup) -> tuple[Exponential, ...]:
    """Every exponential on ``S``, sorted by exact values (0 first, then by turn)."""
    n, t = S.n, S.table
    candidates: list[list[ExactValue]] = []
    for x in range(n):
        p = index_period(S, x).period
        candidates.append([None] + [RootOfUnity.of(j, p) for j in range(p)])

    found: list[tuple[ExactValue, ...]] = []
    UNSET = object()

    def propagate(vals: list, x: int, v: ExactValue) -> bool:
        stack = [(x, v)]
        while stack:
            a, va = stack.pop()
            cur = vals[a]
            if cur is not UNSET:
                if cur != va:
                    return False
                continue
            vals[a] = va
            for c in range(n):
                vc = vals[c]
                if vc is UNSET:
                    continue
                stack.append((t[a][c], _exact_mul(va, vc)))
                stack.append((t[c][a], _exact_mul(vc, va)))
        return True

    def dfs(vals: list) -> None:
        try:
            x = next(i for i, v in enumerate(vals) if v is UNSET)
        except StopIteration:
            if any(v is not None for v in vals):
                found.append(tuple(vals))
            return
        for v in candidates[x]:
            trial = vals[:]
            if propagate(trial, x, v):
                dfs(trial)

    dfs([UNSET] * n)
    exps = sorted(set(found), key=_exact_key)
    for e in exps:
        assert all(e[t[a][b]] == _exact_mul(e[a], e[b]) for a in range(n) for b in range(n))
    return tuple(Exponential(e) for e in exps)


def match_exponential(S: FiniteSemigroup, values, tol: ToleranceProfile = DEFAULT_TOL,
                      ) -> Exponential | None:
    """The enumerated exponential equal to ``values`` within tolerance, if any."""
    values = as_function(values, S.n)
    for chi in enumerate_exponentials(S):
        if np.max(np.abs(chi.values - values)) <= tol.residual_eps * (1 + np.max(np.abs(values))):
            return chi
    return None


def _chi_values(chi) -> np.ndarray:
    return chi.values if isinstance(chi, Exponential) else as_function(chi)


def sine_addition_matrix(S: FiniteSemigroup, chi) -> np.ndarray:
    """Rows ``phi(xy) - phi(x)chi(y) - chi(x)phi(y)`` for all ``(x, y)``."""
    n = S.n
    c = _chi_values(chi)
    M = np.zeros((n * n, n), dtype=complex)
    rows = np.arange(n * n)
    xs, ys = np.divmod(rows, n)
    np.add.at(M, (rows, S.array.ravel()), 1.0)
    np.add.at(M, (rows, xs), -c[ys])
    np.add.at(M, (rows, ys), -c[xs])
    return M


def solve_sine_addition_special(S: FiniteSemigroup, chi,
                                parity: tuple[InvolutiveAutomorphism, int] | None = None,
                                moments: Sequence[tuple[DiscreteMeasure, complex]] = (),
                                tol: ToleranceProfile = DEFAULT_TOL) -> AffineSolution:
    """Solutions of ``phi(xy) = phi(x)chi(y) + chi(x)phi(y)`` under optional constraints.

    ``parity=(sigma, s)`` adds ``phi o sigma = s * phi``; each ``(mu, m)`` in
    ``moments`` adds ``integral phi dmu = m``. Raises ``Inconsistent`` if the
    moment rows cannot be met.
    """
    n = S.n
    blocks = [sine_addition_matrix(S, chi)]
    rhs = [np.zeros(n * n, dtype=complex)]
    if parity is not None:
        sigma, sign = parity
        if sign not in (1, -1):
            raise ValueError("parity sign must be +1 or -1")
        P = np.zeros((n, n), dtype=complex)
        P[np.arange(n), sigma.array] += 1.0
        P[np.arange(n), np.arange(n)] -= sign
        blocks.append(P)
        rhs.append(np.zeros(n, dtype=complex))
    for mu, target in moments:
        mu.check(n)
        row = np.zeros((1, n), dtype=complex)
        np.add.at(row[0], mu.support, mu.weights)
        blocks.append(row)
        rhs.append(np.array([target], dtype=complex))
    return solve_affine(np.vstack(blocks), np.concatenate(rhs), tol)


def special_ks_addition_matrix(S: FiniteSemigroup, sigma: InvolutiveAutomorphism,
                               mu: DiscreteMeasure, chi) -> np.ndarray:
    n = S.n
    c = _chi_values(chi)
    m = integrate(mu, c)
    M = kannappan_matrix(S, sigma, mu)
    rows = np.arange(n * n)
    xs, ys = np.divmod(rows, n)
    np.add.at(M, (rows, xs), -m * c[ys])
    np.add.at(M, (rows, ys), -m * c[xs])
    return M


def solve_special_ks_addition(S: FiniteSemigroup, sigma: InvolutiveAutomorphism,
                              mu: DiscreteMeasure, chi: Exponential,
                              tol: ToleranceProfile = DEFAULT_TOL) -> list[np.ndarray]:
    """Basis of ``f`` with ``int f(x sigma(y) t) dmu(t) = [f(x)chi(y) + f(y)chi(x)] int chi dmu``."""
    m = integrate(mu, chi.values)
    if tol.is_zero(m):
        raise DegenerateMoment(f"integral of chi is {m:.3e}, expected nonzero")
    if not chi.is_sigma_invariant(sigma):
        raise SigmaMismatch("chi o sigma differs from chi")
    return nullspace(special_ks_addition_matrix(S, sigma, mu, chi), tol)


def fit_measure(S: FiniteSemigroup, constraints: Sequence[tuple[object, complex]],
                support: Sequence[int], tol: ToleranceProfile = DEFAULT_TOL) -> DiscreteMeasure:
    """Minimal-norm weights on ``support`` with ``integral h_k dmu = m_k`` for each constraint."""
    support = [int(z) for z in support]
    if not support:
        raise ValueError("support must be non-empty")
    rows = [as_function(h.values if isinstance(h, Exponential) else h, S.n)[support]
            for h, _ in constraints]
    targets = [complex(m) for _, m in constraints]
    A = np.array(rows, dtype=complex).reshape(len(rows), len(support))
    sol = solve_affine(A, targets, tol)
    return DiscreteMeasure.from_weights(support, sol.particular)
