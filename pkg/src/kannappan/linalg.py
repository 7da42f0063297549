"""Dense complex linear algebra with one shared tolerance policy.

Rank and nullspace use Gauss-Jordan elimination with partial pivoting, so
nullspace bases come out in a deterministic reduced-echelon form. The minimal
norm particular solution of an affine system comes from ``numpy.linalg.lstsq``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ToleranceProfile",
    "DEFAULT_TOL",
    "Inconsistent",
    "AffineSolution",
    "as_matrix",
    "rank",
    "nullspace",
    "solve_affine",
    "canonical_gauge",
]


@dataclass(frozen=True)
class ToleranceProfile:
    residual_eps: float = 1e-9
    rank_eps: float = 1e-8

    def __post_init__(self):
        if not (self.residual_eps > 0 and self.rank_eps > 0):
            raise ValueError("tolerances must be strictly positive")
        if self.residual_eps >= 1:
            raise ValueError("residual_eps must be below 1")

    def is_zero(self, value: complex, scale: float = 0.0) -> bool:
        """``|value| <= residual_eps * (1 + scale)``."""
        return abs(value) <= self.residual_eps * (1.0 + scale)


DEFAULT_TOL = ToleranceProfile()


class Inconsistent(ValueError):
    """The affine system has no solution within tolerance."""

    def __init__(self, residual: float, bound: float):
        super().__init__(f"inconsistent system: residual {residual:.3e} exceeds {bound:.3e}")
        self.residual = residual
        self.bound = bound


@dataclass
class AffineSolution:
    """``particular + span(basis)``."""

    particular: np.ndarray
    basis: list[np.ndarray] = field(default_factory=list)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def point(self, coefficients=()) -> np.ndarray:
        out = self.particular.copy()
        for c, v in zip(coefficients, self.basis):
            out = out + c * v
        return out


def as_matrix(A) -> np.ndarray:
    M = np.asarray(A, dtype=complex)
    if M.ndim == 1:
        M = M.reshape(1, -1)
    if M.ndim != 2:
        raise ValueError("expected a 2-D matrix")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    return M


def _eliminate(A: np.ndarray, tol: ToleranceProfile) -> tuple[np.ndarray, list[int], list[float]]:
    R = A.astype(complex, copy=True)
    m, n = R.shape
    scale = float(np.max(np.abs(R))) if R.size else 0.0
    pivots: list[int] = []
    magnitudes: list[float] = []
    row = 0
    for col in range(n):
        if row == m:
            break
        p = row + int(np.argmax(np.abs(R[row:, col])))
        piv = abs(R[p, col])
        if piv == 0.0 or piv <= tol.rank_eps * scale:
            continue
        if p != row:
            R[[row, p]] = R[[p, row]]
        magnitudes.append(piv)
        scale = max(scale, piv)
        R[row] /= R[row, col]
        others = np.arange(m) != row
        R[others] -= np.outer(R[others, col], R[row])
        R[others, col] = 0.0
        pivots.append(col)
        row += 1
    return R, pivots, magnitudes


def rank(A, tol: ToleranceProfile = DEFAULT_TOL) -> int:
    M = as_matrix(A)
    if M.size == 0:
        return 0
    _, _, mags = _eliminate(M, tol)
    if not mags:
        return 0
    top = max(mags)
    return sum(1 for v in mags if v >= tol.rank_eps * top)


def canonical_gauge(v: np.ndarray) -> np.ndarray:
    """Scale ``v`` to infinity-norm 1 with its first largest entry real positive."""
    v = np.asarray(v, dtype=complex)
    mags = np.abs(v)
    top = mags.max()
    if top == 0:
        return v.copy()
    lead = int(np.argmax(mags >= top * (1 - 1e-12)))
    out = v * (abs(v[lead]) / v[lead]) / top
    out[lead] = 1.0
    return out


def nullspace(A, tol: ToleranceProfile = DEFAULT_TOL) -> list[np.ndarray]:
    """Basis of ``{v : A v ~ 0}``, one vector per non-pivot column, in gauge form."""
    M = as_matrix(A)
    n = M.shape[1]
    if M.shape[0] == 0:
        return [np.eye(n, dtype=complex)[j] for j in range(n)]
    R, pivots, _ = _eliminate(M, tol)
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for j in free:
        v = np.zeros(n, dtype=complex)
        v[j] = 1.0
        for r, pc in enumerate(pivots):
            v[pc] = -R[r, j]
        basis.append(canonical_gauge(v))
    return basis


def residual_bound(A: np.ndarray, tol: ToleranceProfile, b: np.ndarray | None = None) -> float:
    scale = float(np.max(np.abs(A))) if A.size else 0.0
    if b is not None and b.size:
        scale = max(scale, float(np.max(np.abs(b))))
    return tol.residual_eps * max(1.0, scale)


def solve_affine(A, b, tol: ToleranceProfile = DEFAULT_TOL) -> AffineSolution:
    """Minimal-norm solution of ``A x = b`` plus the nullspace of ``A``.

    Raises ``Inconsistent`` when the least-squares residual exceeds the bound.
    """
    b = np.asarray(b, dtype=complex).ravel()
    M = as_matrix(A)
    if M.shape[0] != b.size:
        raise ValueError(f"right-hand side has length {b.size}, expected {M.shape[0]}")
    n = M.shape[1]
    if M.shape[0] == 0:
        return AffineSolution(np.zeros(n, dtype=complex), nullspace(M, tol))
    x, *_ = np.linalg.lstsq(M, b, rcond=tol.rank_eps)
    res = float(np.max(np.abs(M @ x - b)))
    bound = residual_bound(M, tol, b)
    if res > bound:
        raise Inconsistent(res, bound)
    return AffineSolution(x, nullspace(M, tol))
