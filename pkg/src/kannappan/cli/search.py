"""Desk-scale completeness probe for the integral Kannappan-sine laws.

For a fixed ``g`` both laws are linear in ``f``, so all ``f`` solving the law
with that ``g`` form the nullspace of one matrix. ``g`` ranges over grid
combinations of at most ``max_terms`` basis functions: the exponentials of
``S`` and the solutions of the special sine addition law for each of them.
Every pair found is classified and reconstructed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from ..algebra import FiniteSemigroup, InvolutiveAutomorphism
from ..classify import FamilyDescriptor, classify, construct
from ..equations import EquationId, NotASolution, normalize_instance, residual
from ..functions import (
    DiscreteMeasure,
    enumerate_exponentials,
    kannappan_matrix,
    solve_sine_addition_special,
)
from ..linalg import DEFAULT_TOL, ToleranceProfile, nullspace

__all__ = ["DEFAULT_GRID", "GridHit", "UnclassifiedSolution", "search_basis", "grid_completeness_search"]

DEFAULT_GRID: tuple[complex, ...] = (0, 1, -1, 1j, -1j, 0.5, -0.5)


class UnclassifiedSolution(RuntimeError):
    """A verified solution that no family reproduces."""

    def __init__(self, failures: list[dict]):
        super().__init__(f"{len(failures)} solution(s) could not be classified; first: {failures[0]}")
        self.failures = failures


@dataclass
class GridHit:
    f: np.ndarray
    g: np.ndarray
    descriptor: FamilyDescriptor
    residual: float
    round_trip: float

    def to_dict(self) -> dict:
        return {
            "f": [[v.real, v.imag] for v in self.f],
            "g": [[v.real, v.imag] for v in self.g],
            "tag": self.descriptor.tag,
            "descriptor": self.descriptor.to_dict(),
            "residual": self.residual,
            "round_trip": self.round_trip,
        }


def search_basis(S: FiniteSemigroup) -> list[np.ndarray]:
    """Exponentials of ``S`` followed by the special sine addition solutions, deduplicated."""
    out: list[np.ndarray] = []
    for chi in enumerate_exponentials(S):
        out.append(np.array(chi.values))
    for chi in enumerate_exponentials(S):
        out.extend(solve_sine_addition_special(S, chi).basis)
    unique: list[np.ndarray] = []
    for v in out:
        if np.max(np.abs(v)) > 0 and not any(np.allclose(v, u, atol=1e-12) for u in unique):
            unique.append(v)
    return unique


def _law_matrix(K: np.ndarray, g: np.ndarray, sign: int) -> np.ndarray:
    # rows (x, y): K_f[x, y] - f(x)g(y) - sign f(y)g(x)
    n = g.size
    M = K.copy()
    rows = np.arange(n * n)
    xs, ys = np.divmod(rows, n)
    np.add.at(M, (rows, xs), -g[ys])
    np.add.at(M, (rows, ys), -sign * g[xs])
    return M


def _candidates(basis: list[np.ndarray], grid, max_terms: int):
    nonzero = [c for c in grid if c != 0]
    yield np.zeros_like(basis[0])
    for k in range(1, max_terms + 1):
        for idx in itertools.combinations(range(len(basis)), k):
            for coeffs in itertools.product(nonzero, repeat=k):
                g = sum(c * basis[i] for c, i in zip(coeffs, idx))
                yield np.asarray(g, dtype=complex)


def grid_completeness_search(S: FiniteSemigroup, sigma: InvolutiveAutomorphism, mu: DiscreteMeasure,
                             eq: EquationId, grid=DEFAULT_GRID, max_terms: int = 2,
                             tol: ToleranceProfile = DEFAULT_TOL) -> list[GridHit]:
    """Solve for ``f`` over grid-built ``g`` and classify every solution found.

    Raises ``UnclassifiedSolution`` listing every pair the classifier rejects or
    fails to reproduce.
    """
    if eq not in (EquationId.KSSub, EquationId.KSAdd):
        raise ValueError("grid search covers KSSub and KSAdd only")
    sign = -1 if eq is EquationId.KSSub else 1
    K = kannappan_matrix(S, sigma, mu)
    basis = search_basis(S)
    hits: list[GridHit] = []
    failures: list[dict] = []
    seen: set[tuple] = set()
    for g in _candidates(basis, grid, max_terms):
        for f in nullspace(_law_matrix(K, g, sign), tol):
            key = tuple(np.round(np.concatenate([f, g]), 9))
            if key in seen:
                continue
            seen.add(key)
            m, fn, gn = normalize_instance(mu, f, g)
            r = residual(S, sigma, m, eq, fn, gn, tol).max_residual
            try:
                desc, _ = classify(S, sigma, m, eq, fn, gn, tol)
                F, G = construct(S, sigma, m, desc, tol)
            except (NotASolution, ValueError, RuntimeError) as exc:
                failures.append({"f": f.tolist(), "g": g.tolist(), "error": f"{type(exc).__name__}: {exc}"})
                continue
            rt = float(max(np.max(np.abs(F - fn)), np.max(np.abs(G - gn))))
            if rt > tol.residual_eps:
                failures.append({"f": f.tolist(), "g": g.tolist(), "error": f"round trip {rt:.3e}"})
                continue
            hits.append(GridHit(fn, gn, desc, r, rt))
    if failures:
        raise UnclassifiedSolution(failures)
    return hits
