"""Finite semigroups given by Cayley tables, and their involutive automorphisms.

Elements are the dense indices ``0..n-1``; ``table[x][y]`` is the index of the
product ``x*y``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

__all__ = [
    "SemigroupError",
    "OutOfRangeEntry",
    "NotAssociative",
    "InvalidAutomorphism",
    "FiniteSemigroup",
    "InvolutiveAutomorphism",
    "ElementCycle",
    "verify_associativity",
    "find_identity",
    "index_period",
    "enumerate_involutions",
    "direct_product",
    "lcm_of_periods",
]

# permutation scan below this size, propagating backtracking above it
_SCAN_LIMIT = 7


class SemigroupError(ValueError):
    pass


class OutOfRangeEntry(SemigroupError):
    def __init__(self, x: int, y: int, value: int):
        super().__init__(f"table[{x}][{y}] = {value} is out of range")
        self.x, self.y, self.value = x, y, value


class NotAssociative(SemigroupError):
    def __init__(self, violations: list[tuple[int, int, int]]):
        shown = ", ".join(map(str, violations[:5]))
        more = "" if len(violations) <= 5 else f" (+{len(violations) - 5} more)"
        super().__init__(f"table is not associative: {shown}{more}")
        self.violations = violations


class InvalidAutomorphism(SemigroupError):
    pass


def _as_table(table: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    rows = tuple(tuple(int(v) for v in row) for row in table)
    n = len(rows)
    for x, row in enumerate(rows):
        if len(row) != n:
            raise SemigroupError(f"row {x} has {len(row)} entries, expected {n}")
        for y, v in enumerate(row):
            if not 0 <= v < n:
                raise OutOfRangeEntry(x, y, v)
    return rows


def verify_associativity(table: Sequence[Sequence[int]]) -> list[tuple[int, int, int]]:
    """Return every triple ``(x, y, z)`` with ``(xy)z != x(yz)``, sorted.

    An empty list means the table is associative. Raises ``OutOfRangeEntry``
    for entries outside ``0..n-1``.
    """
    rows = _as_table(table)
    if not rows:
        return []
    t = np.array(rows, dtype=np.intp)
    # left[x, y, z] = (xy)z ; right[x, y, z] = x(yz)
    left = t[t, :]
    right = t[:, t]
    bad = np.argwhere(left != right)
    return [tuple(int(v) for v in triple) for triple in bad]


@dataclass(frozen=True)
class FiniteSemigroup:
    """An associative Cayley table, validated on construction."""

    table: tuple[tuple[int, ...], ...]
    name: str = field(default="", compare=False)

    def __init__(self, table: Sequence[Sequence[int]], name: str = ""):
        rows = _as_table(table)
        if not rows:
            raise SemigroupError("a semigroup needs at least one element")
        violations = verify_associativity(rows)
        if violations:
            raise NotAssociative(violations)
        object.__setattr__(self, "table", rows)
        object.__setattr__(self, "name", name)

    @property
    def n(self) -> int:
        return len(self.table)

    def __len__(self) -> int:
        return len(self.table)

    @cached_property
    def array(self) -> np.ndarray:
        arr = np.array(self.table, dtype=np.intp)
        arr.setflags(write=False)
        return arr

    @cached_property
    def identity(self) -> Optional[int]:
        return find_identity(self)

    def mul(self, x: int, y: int) -> int:
        return self.table[x][y]

    def power(self, x: int, k: int) -> int:
        if k < 1:
            raise ValueError("powers start at 1")
        p = x
        for _ in range(k - 1):
            p = self.table[p][x]
        return p

    def __repr__(self) -> str:
        label = self.name or f"n={self.n}"
        return f"FiniteSemigroup({label})"


def find_identity(S: FiniteSemigroup) -> Optional[int]:
    """The two-sided identity of ``S``, or ``None``."""
    t = S.array
    idx = np.arange(S.n)
    for e in range(S.n):
        if np.array_equal(t[e], idx) and np.array_equal(t[:, e], idx):
            return e
    return None


@dataclass(frozen=True)
class ElementCycle:
    """Index and period of an element: minimal ``(i, p)`` with ``x^(i+p) = x^i``."""

    index: int
    period: int


def index_period(S: FiniteSemigroup, x: int) -> ElementCycle:
    if not 0 <= x < S.n:
        raise IndexError(f"element {x} out of range for {S!r}")
    seen: dict[int, int] = {}
    p, k = x, 1
    while p not in seen:
        seen[p] = k
        p = S.table[p][x]
        k += 1
    i = seen[p]
    return ElementCycle(index=i, period=k - i)


@dataclass(frozen=True)
class InvolutiveAutomorphism:
    """A permutation ``sigma`` with ``sigma(xy) = sigma(x)sigma(y)`` and ``sigma o sigma = id``."""

    perm: tuple[int, ...]

    @classmethod
    def checked(cls, S: FiniteSemigroup, perm: Sequence[int]) -> "InvolutiveAutomorphism":
        perm = tuple(int(v) for v in perm)
        problems = _automorphism_problems(S, perm)
        if problems:
            raise InvalidAutomorphism("; ".join(problems))
        return cls(perm)

    @classmethod
    def identity(cls, n: int) -> "InvolutiveAutomorphism":
        return cls(tuple(range(n)))

    @property
    def n(self) -> int:
        return len(self.perm)

    @cached_property
    def array(self) -> np.ndarray:
        arr = np.array(self.perm, dtype=np.intp)
        arr.setflags(write=False)
        return arr

    def __call__(self, x: int) -> int:
        return self.perm[x]

    @property
    def is_identity(self) -> bool:
        return all(v == i for i, v in enumerate(self.perm))


def _automorphism_problems(S: FiniteSemigroup, perm: Sequence[int]) -> list[str]:
    n = S.n
    problems = []
    if len(perm) != n or sorted(perm) != list(range(n)):
        return [f"not a bijection on 0..{n - 1}"]
    if any(perm[perm[x]] != x for x in range(n)):
        problems.append("not involutive")
    t = S.table
    if any(perm[t[x][y]] != t[perm[x]][perm[y]] for x in range(n) for y in range(n)):
        problems.append("does not preserve products")
    return problems


def enumerate_involutions(S: FiniteSemigroup) -> list[InvolutiveAutomorphism]:
    """All involutive automorphisms of ``S`` in lexicographic order of ``perm``."""
    if S.n <= _SCAN_LIMIT:
        perms = _scan_involutions(S)
    else:
        perms = _search_involutions(S)
    return [InvolutiveAutomorphism(p) for p in perms]


def _scan_involutions(S: FiniteSemigroup) -> list[tuple[int, ...]]:
    t = S.array
    out = []
    for perm in itertools.permutations(range(S.n)):
        p = np.array(perm, dtype=np.intp)
        if np.array_equal(p[p], np.arange(S.n)) and np.array_equal(p[t], t[np.ix_(p, p)]):
            out.append(perm)
    return out


def _search_involutions(S: FiniteSemigroup) -> list[tuple[int, ...]]:
    n, t = S.n, S.table
    out: list[tuple[int, ...]] = []

    def propagate(perm: list[int], used: list[bool], x: int, v: int) -> bool:
        # assign perm[x] = v and close under involution and product rules
        stack = [(x, v)]
        while stack:
            a, b = stack.pop()
            if perm[a] >= 0:
                if perm[a] != b:
                    return False
                continue
            if used[b]:
                return False
            perm[a], used[b] = b, True
            stack.append((b, a))
            for c in range(n):
                pc = perm[c]
                if pc < 0:
                    continue
                stack.append((t[a][c], t[b][pc]))
                stack.append((t[c][a], t[pc][b]))
        return True

    def dfs(perm: list[int], used: list[bool]) -> None:
        try:
            x = perm.index(-1)
        except ValueError:
            out.append(tuple(perm))
            return
        for v in range(n):
            if used[v]:
                continue
            p2, u2 = perm[:], used[:]
            if propagate(p2, u2, x, v):
                dfs(p2, u2)

    dfs([-1] * n, [False] * n)
    return out


def direct_product(A: FiniteSemigroup, B: FiniteSemigroup, name: str = "") -> FiniteSemigroup:
    """Componentwise product; element ``(a, b)`` has index ``a * len(B) + b``."""
    m = B.n
    table = [
        [A.table[a1][a2] * m + B.table[b1][b2] for a2 in range(A.n) for b2 in range(m)]
        for a1 in range(A.n)
        for b1 in range(m)
    ]
    return FiniteSemigroup(table, name=name)


def lcm_of_periods(S: FiniteSemigroup) -> int:
    return math.lcm(*(index_period(S, x).period for x in range(S.n)))
