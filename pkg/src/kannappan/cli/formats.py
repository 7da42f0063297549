"""Line-oriented input formats and the deterministic JSON report writer.

Every input format allows ``#`` comments and blank lines.

* semigroup: ``n <N>``, then N rows of N indices, then optionally ``identity <k>``
* sigma: one line of N indices
* measure: lines ``<index> <re> <im>``
* function: N lines ``<re> <im>``
"""

from __future__ import annotations

import hashlib
import json
import math
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from ..algebra import FiniteSemigroup, InvolutiveAutomorphism, SemigroupError
from ..functions import DiscreteMeasure

__all__ = [
    "FormatError",
    "parse_table",
    "parse_semigroup",
    "parse_sigma",
    "parse_measure",
    "parse_function",
    "read_semigroup",
    "read_sigma",
    "read_measure",
    "read_function",
    "format_semigroup",
    "format_sigma",
    "format_measure",
    "format_function",
    "dumps_report",
    "digest",
]


class FormatError(ValueError):
    pass


def _lines(text: str) -> list[list[str]]:
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(line.split())
    return out


def _ints(tokens: Sequence[str], where: str) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise FormatError(f"{where}: expected integers, got {' '.join(tokens)!r}") from None


def _floats(tokens: Sequence[str], where: str) -> list[float]:
    try:
        return [float(t) for t in tokens]
    except ValueError:
        raise FormatError(f"{where}: expected numbers, got {' '.join(tokens)!r}") from None


def parse_table(text: str) -> tuple[list[list[int]], int | None]:
    """Raw rows and declared identity of a semigroup file, without validation."""
    lines = _lines(text)
    if not lines or lines[0][0] != "n" or len(lines[0]) != 2:
        raise FormatError("semigroup file must start with 'n <N>'")
    n = _ints(lines[0][1:], "header")[0]
    if n < 1:
        raise FormatError("n must be positive")
    body = lines[1:]
    if len(body) < n:
        raise FormatError(f"expected {n} table rows, found {len(body)}")
    rows = [_ints(tok, f"row {i}") for i, tok in enumerate(body[:n])]
    if any(len(r) != n for r in rows):
        raise FormatError(f"every table row needs {n} entries")
    identity = None
    for extra in body[n:]:
        if extra[0] == "identity" and len(extra) == 2:
            identity = _ints(extra[1:], "identity")[0]
        else:
            raise FormatError(f"unexpected line {' '.join(extra)!r}")
    return rows, identity


def parse_semigroup(text: str, name: str = "") -> FiniteSemigroup:
    rows, identity = parse_table(text)
    S = FiniteSemigroup(rows, name=name)
    if identity is not None and S.identity != identity:
        raise SemigroupError(f"declared identity {identity} is not a two-sided identity")
    return S


def parse_sigma(text: str, S: FiniteSemigroup) -> InvolutiveAutomorphism:
    lines = _lines(text)
    if len(lines) != 1:
        raise FormatError("sigma file must contain exactly one line of indices")
    return InvolutiveAutomorphism.checked(S, _ints(lines[0], "sigma"))


def parse_measure(text: str) -> DiscreteMeasure:
    atoms = []
    for i, tok in enumerate(_lines(text)):
        if len(tok) != 3:
            raise FormatError(f"measure line {i}: expected '<index> <re> <im>'")
        z = _ints(tok[:1], f"measure line {i}")[0]
        re, im = _floats(tok[1:], f"measure line {i}")
        atoms.append((z, complex(re, im)))
    if not atoms:
        raise FormatError("measure file has no atoms")
    return DiscreteMeasure(tuple(atoms))


def parse_function(text: str, n: int | None = None) -> np.ndarray:
    vals = []
    for i, tok in enumerate(_lines(text)):
        if len(tok) != 2:
            raise FormatError(f"function line {i}: expected '<re> <im>'")
        re, im = _floats(tok, f"function line {i}")
        vals.append(complex(re, im))
    if n is not None and len(vals) != n:
        raise FormatError(f"function has {len(vals)} values, semigroup has {n} elements")
    return np.array(vals, dtype=complex)


def read_semigroup(path: str | Path) -> FiniteSemigroup:
    p = Path(path)
    return parse_semigroup(p.read_text(encoding="utf-8"), name=p.stem)


def read_sigma(path: str | Path, S: FiniteSemigroup) -> InvolutiveAutomorphism:
    return parse_sigma(Path(path).read_text(encoding="utf-8"), S)


def read_measure(path: str | Path) -> DiscreteMeasure:
    return parse_measure(Path(path).read_text(encoding="utf-8"))


def read_function(path: str | Path, n: int | None = None) -> np.ndarray:
    return parse_function(Path(path).read_text(encoding="utf-8"), n)


def _num(x: float) -> str:
    return _float_token(float(x))


def format_semigroup(S: FiniteSemigroup) -> str:
    rows = "\n".join(" ".join(map(str, row)) for row in S.table)
    tail = "" if S.identity is None else f"\nidentity {S.identity}"
    return f"n {S.n}\n{rows}{tail}\n"


def format_sigma(sigma: InvolutiveAutomorphism) -> str:
    return " ".join(map(str, sigma.perm)) + "\n"


def format_measure(mu: DiscreteMeasure) -> str:
    return "".join(f"{z} {_num(w.real)} {_num(w.imag)}\n" for z, w in mu.atoms)


def format_function(f) -> str:
    return "".join(f"{_num(v.real)} {_num(v.imag)}\n" for v in np.asarray(f, dtype=complex))


# -- reports -----------------------------------------------------------------

def _float_token(x: float) -> str:
    if math.isnan(x):
        return '"NaN"'
    if math.isinf(x):
        return '"Infinity"' if x > 0 else '"-Infinity"'
    if x == 0:
        return "0.0"  # folds -0.0 as well
    s = format(x, ".17g")
    return s if any(c in s for c in ".en") else s + ".0"


def _emit(obj: Any, indent: int, out: list[str]) -> None:
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        keys = sorted(obj)
        for i, k in enumerate(keys):
            out.append(f"{pad}  {json.dumps(str(k), ensure_ascii=False)}: ")
            _emit(obj[k], indent + 1, out)
            out.append(",\n" if i < len(keys) - 1 else "\n")
        out.append(pad + "}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.append("[]")
            return
        if not any(isinstance(v, (dict, list, tuple, np.ndarray, complex, np.complexfloating)) for v in obj):
            # scalar rows stay on one line
            parts: list[str] = []
            for v in obj:
                _emit(v, 0, parts)
                parts.append(", ")
            out.append("[" + "".join(parts[:-1]) + "]")
            return
        out.append("[\n")
        for i, v in enumerate(obj):
            out.append(pad + "  ")
            _emit(v, indent + 1, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(pad + "]")
    elif isinstance(obj, (bool, np.bool_)):
        out.append("true" if obj else "false")
    elif obj is None:
        out.append("null")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(_float_token(float(obj)))
    elif isinstance(obj, (complex, np.complexfloating)):
        _emit([obj.real, obj.imag], indent, out)
    elif isinstance(obj, np.ndarray):
        _emit(obj.tolist(), indent, out)
    else:
        out.append(json.dumps(str(obj), ensure_ascii=False))


def dumps_report(obj: Any) -> str:
    """JSON with sorted keys, floats at 17 significant digits, complex as ``[re, im]``."""
    out: list[str] = []
    _emit(obj, 0, out)
    out.append("\n")
    return "".join(out)


def digest(text: str | bytes) -> str:
    data = text.encode("utf-8") if isinstance(text, str) else text
    return hashlib.sha256(data).hexdigest()
