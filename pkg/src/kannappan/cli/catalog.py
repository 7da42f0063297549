"""Built-in small semigroups used by the command line and the acceptance suites."""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache

from ..algebra import (
    FiniteSemigroup,
    InvolutiveAutomorphism,
    direct_product,
    enumerate_involutions,
    verify_associativity,
)

__all__ = ["CatalogEntry", "UnknownName", "catalog", "catalog_names", "negation"]


class UnknownName(KeyError):
    pass


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    semigroup: FiniteSemigroup
    involutions: tuple[InvolutiveAutomorphism, ...]
    notes: str

    @property
    def sigma_id(self) -> InvolutiveAutomorphism:
        return InvolutiveAutomorphism.identity(self.semigroup.n)


def _cyclic(n: int) -> FiniteSemigroup:
    return FiniteSemigroup([[(x + y) % n for y in range(n)] for x in range(n)], name=f"Z{n}")


def _left_zero(n: int) -> FiniteSemigroup:
    return FiniteSemigroup([[x] * n for x in range(n)], name=f"LeftZero{n}")


def _null(n: int) -> FiniteSemigroup:
    return FiniteSemigroup([[0] * n for _ in range(n)], name=f"Null{n}")


def _trunc(k: int) -> FiniteSemigroup:
    # {0, ..., k-1} under x + y capped at k - 1
    return FiniteSemigroup([[min(x + y, k - 1) for y in range(k)] for x in range(k)], name=f"Trunc{k}")


def _trunc_sq(k: int) -> FiniteSemigroup:
    return direct_product(_trunc(k), _trunc(k), name=f"TruncSq{k}")


_BUILDERS = {
    "Z": (_cyclic, 6, "cyclic group under addition mod n"),
    "LeftZero": (_left_zero, 3, "left-zero band, x*y = x"),
    "Null": (_null, 3, "null semigroup, every product is the absorbing element 0"),
    "Trunc": (_trunc, 4, "truncated addition min(x+y, k-1) on {0..k-1}"),
    "TruncSq": (_trunc_sq, 4, "Trunc(k) x Trunc(k); element (a, b) has index a*k + b"),
}


def catalog_names() -> list[str]:
    return [f"{prefix}{k}" for prefix, (_, top, _) in _BUILDERS.items() for k in range(1, top + 1)]


@lru_cache(maxsize=None)
def catalog(name: str) -> CatalogEntry:
    """Look up and re-validate a built-in semigroup by name, e.g. ``Z3`` or ``TruncSq4``."""
    m = re.fullmatch(r"([A-Za-z]+?)(\d+)", name)
    if m is None or m.group(1) not in _BUILDERS:
        raise UnknownName(name)
    build, top, notes = _BUILDERS[m.group(1)]
    k = int(m.group(2))
    if not 1 <= k <= top:
        raise UnknownName(name)
    S = build(k)
    if verify_associativity(S.table):
        raise AssertionError(f"catalog entry {name} is not associative")
    return CatalogEntry(name, S, tuple(enumerate_involutions(S)), notes)


def negation(n: int) -> InvolutiveAutomorphism:
    return InvolutiveAutomorphism(tuple((-x) % n for x in range(n)))
