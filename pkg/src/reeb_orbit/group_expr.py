"""Symbolic group expressions: atoms, free abelian groups, products and ``G wr_n Z``.

Text grammar (see README)::

    expr    := factor (" x " factor)*
    factor  := primary (" wr_" INT " Z")*
    primary := "1" | "Z" | "Z^" INT | ATOM | "(" expr ")"

followed by optional footnote lines ``[ATOM] descriptor``.  Atom names that
would otherwise collide get a ``#k`` suffix.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

__all__ = [
    "Trivial", "Zfree", "Atom", "Product", "WreathZ", "GroupExpr",
    "canonicalize", "abelianization", "render", "render_full", "parse",
    "phi_kernel",
]


@dataclass(frozen=True)
class Trivial:
    pass


@dataclass(frozen=True)
class Zfree:
    rank: int = 1

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("free abelian rank must be >= 1")


_RESERVED = re.compile(r"^(1|Z|Z\^\d+|x|wr_\d+)$")
_NAME = re.compile(r"^[A-Za-z][A-Za-z0-9_']*(\([^\s\[\]#]*\))?$")


@dataclass(frozen=True)
class Atom:
    """An opaque group, identified by name *and* descriptor."""

    name: str
    descriptor: str = ""

    def __post_init__(self):
        if _RESERVED.match(self.name) or not _NAME.match(self.name) or "#" in self.name:
            raise ValueError(f"bad atom name {self.name!r}")
        if "\n" in self.descriptor:
            raise ValueError("descriptor must be a single line")
        if _balance(self.name) is False:
            raise ValueError(f"unbalanced parentheses in {self.name!r}")


@dataclass(frozen=True)
class Product:
    factors: tuple = ()

    def __init__(self, factors=()):
        object.__setattr__(self, "factors", tuple(factors))


@dataclass(frozen=True)
class WreathZ:
    base: "GroupExpr"
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("wreath index must be >= 1")


GroupExpr = Union[Trivial, Zfree, Atom, Product, WreathZ]


def _balance(s: str):
    depth = 0
    for ch in s:
        depth += {"(": 1, ")": -1}.get(ch, 0)
        if depth < 0:
            return False
    return depth == 0


# -- canonical form ----------------------------------------------------

_KIND_RANK = {Atom: 0, WreathZ: 1, Product: 2, Zfree: 3, Trivial: 4}


def _sort_key(e) -> tuple:
    return (_KIND_RANK[type(e)], render_full(e))


def canonicalize(e: GroupExpr) -> GroupExpr:
    if isinstance(e, (Trivial, Zfree, Atom)):
        return e
    if isinstance(e, WreathZ):
        base = canonicalize(e.base)
        if isinstance(base, Trivial):
            return Zfree(1)
        if e.n == 1:
            return canonicalize(Product([base, Zfree(1)]))
        return WreathZ(base, e.n)
    flat, rank = [], 0
    stack = [canonicalize(f) for f in e.factors]
    while stack:
        f = stack.pop(0)
        if isinstance(f, Product):
            stack[:0] = list(f.factors)
        elif isinstance(f, Zfree):
            rank += f.rank
        elif not isinstance(f, Trivial):
            flat.append(f)
    if rank:
        flat.append(Zfree(rank))
    flat.sort(key=_sort_key)
    if not flat:
        return Trivial()
    if len(flat) == 1:
        return flat[0]
    return Product(flat)


def abelianization(e: GroupExpr) -> GroupExpr:
    """Abelianization, using ``ab(G wr_n Z) = ab(G) x Z`` (shift coinvariants)."""
    def ab(x):
        if isinstance(x, (Trivial, Zfree)):
            return x
        if isinstance(x, Atom):
            return Atom(f"ab({x.name})", x.descriptor)
        if isinstance(x, Product):
            return Product([ab(f) for f in x.factors])
        return Product([ab(x.base), Zfree(1)])
    return canonicalize(ab(e))


def phi_kernel(e: GroupExpr) -> GroupExpr:
    """Kernel of the projection onto the ``Z`` shift coordinate of a canonical answer.

    ``G wr_n Z`` maps onto ``Z`` with kernel ``G^n``; the ``n = 1`` form
    ``G x Z`` has kernel ``G``.
    """
    if isinstance(e, WreathZ):
        return Product([e.base] * e.n)
    if isinstance(e, Zfree):
        return Zfree(e.rank - 1) if e.rank > 1 else Trivial()
    if isinstance(e, Product) and any(isinstance(f, Zfree) for f in e.factors):
        out = []
        for f in e.factors:
            if isinstance(f, Zfree):
                if f.rank > 1:
                    out.append(Zfree(f.rank - 1))
            else:
                out.append(f)
        return Product(out) if len(out) != 1 else out[0]
    raise ValueError(f"no shift coordinate in {render(e)}")


# -- rendering -------------------------------------------------------------

def _atoms(e, acc):
    if isinstance(e, Atom):
        acc.setdefault(e.name, [])
        if e.descriptor not in acc[e.name]:
            acc[e.name].append(e.descriptor)
    elif isinstance(e, Product):
        for f in e.factors:
            _atoms(f, acc)
    elif isinstance(e, WreathZ):
        _atoms(e.base, acc)
    return acc


def _labels(e) -> dict:
    labels = {}
    for name, descs in _atoms(e, {}).items():
        descs = sorted(descs)
        for k, d in enumerate(descs):
            labels[(name, d)] = name if len(descs) == 1 else f"{name}#{k + 1}"
    return labels


def _render(e, labels, nested: bool) -> str:
    if isinstance(e, Trivial):
        return "1"
    if isinstance(e, Zfree):
        return "Z" if e.rank == 1 else f"Z^{e.rank}"
    if isinstance(e, Atom):
        return labels[(e.name, e.descriptor)]
    if isinstance(e, Product):
        if not e.factors:
            return "1"
        s = " x ".join(_render(f, labels, True) for f in e.factors)
    else:
        s = f"{_render(e.base, labels, True)} wr_{e.n} Z"
    return f"({s})" if nested else s


def render(e: GroupExpr) -> str:
    """One-line text of ``e``, e.g. ``pi0S'(f|Q,X) wr_3 Z``."""
    return _render(e, _labels(e), False)


def render_full(e: GroupExpr) -> str:
    """``render(e)`` followed by one footnote line per distinct atom."""
    labels = _labels(e)
    lines = [_render(e, labels, False)]
    for (name, desc), lab in sorted(labels.items(), key=lambda kv: kv[1]):
        lines.append(f"[{lab}] {desc}")
    return "\n".join(lines)


# -- parsing ---------------------------------------------------------------

_TOKEN = re.compile(r"\s*(\(|\)|Z\^\d+|wr_\d+|x(?=\s)|1(?![\w'])|Z(?![\w'^(])|[A-Za-z][A-Za-z0-9_']*(?:#\d+)?)")


def _tokenize(s: str) -> list[str]:
    out, i = [], 0
    while i < len(s):
        if s[i].isspace():
            i += 1
            continue
        m = _TOKEN.match(s, i)
        if not m:
            raise ValueError(f"cannot parse at {s[i:]!r}")
        tok = m.group(1)
        i = m.end()
        if tok[0].isalpha() and tok not in ("x", "Z") and not re.match(r"^(Z\^\d+|wr_\d+)$", tok):
            # atom names may carry a balanced parenthesised suffix, e.g. pi0S'(f|Q,X)
            if i < len(s) and s[i] == "(":
                depth, j = 0, i
                while j < len(s):
                    depth += {"(": 1, ")": -1}.get(s[j], 0)
                    j += 1
                    if depth == 0:
                        break
                tok += s[i:j]
                i = j
                k = re.match(r"#\d+", s[i:])
                if k:
                    tok += k.group(0)
                    i += k.end()
            out.append(("ATOM", tok))
        else:
            out.append((tok, tok))
    return out


def parse(text: str) -> GroupExpr:
    """Inverse of :func:`render_full` on canonical expressions."""
    lines = text.strip("\n").split("\n")
    notes = {}
    for line in lines[1:]:
        m = re.match(r"^\[([^\]]+)\] ?(.*)$", line)
        if not m:
            raise ValueError(f"bad footnote {line!r}")
        notes[m.group(1)] = m.group(2)
    toks = _tokenize(lines[0])
    pos = 0

    def peek():
        return toks[pos][0] if pos < len(toks) else None

    def take(kind=None):
        nonlocal pos
        if pos >= len(toks):
            raise ValueError(f"unexpected end of {lines[0]!r}")
        tok = toks[pos]
        if kind and tok[0] != kind:
            raise ValueError(f"expected {kind}, got {tok[1]}")
        pos += 1
        return tok

    def expr():
        fs = [factor()]
        while peek() == "x":
            take()
            fs.append(factor())
        return fs[0] if len(fs) == 1 else Product(fs)

    def factor():
        e = primary()
        while peek() is not None and peek().startswith("wr_"):
            n = int(take()[0][3:])
            if take()[0] != "Z":
                raise ValueError("expected Z after wr_n")
            e = WreathZ(e, n)
        return e

    def primary():
        kind, val = take()
        if kind == "(":
            e = expr()
            take(")")
            return e
        if kind == "1":
            return Trivial()
        if kind == "Z":
            return Zfree(1)
        if kind.startswith("Z^"):
            return Zfree(int(kind[2:]))
        if kind == "ATOM":
            name = val.split("#")[0] if "#" in val else val
            return Atom(name, notes.get(val, ""))
        raise ValueError(f"unexpected token {val!r}")

    e = expr()
    if pos != len(toks):
        raise ValueError("trailing tokens")
    return e
