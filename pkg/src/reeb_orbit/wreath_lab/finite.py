"""Finite groups as multiplication tables, plus a small corpus of groups of order <= 16."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Optional, Sequence

import numpy as np

__all__ = [
    "FiniteGroup", "GroupAxiomError", "from_generators", "cyclic", "direct_product",
    "semidirect_cyclic", "dicyclic", "symmetric", "alternating", "dihedral",
    "corpus", "isomorphic", "find_isomorphism",
]


class GroupAxiomError(ValueError):
    pass


def _dtype(n: int):
    return np.int16 if n < 2**15 else np.int32


@dataclass(eq=False)
class FiniteGroup:
    """Group on ``0..order-1`` given by its multiplication table ``table[a, b] = a*b``."""

    table: np.ndarray
    name: str = ""
    elements: Optional[tuple] = None   # optional concrete realization, e.g. permutations
    identity: int = field(init=False)
    inverse: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        t = np.asarray(self.table)
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
            raise GroupAxiomError("table must be a non-empty square array")
        n = t.shape[0]
        if t.min() < 0 or t.max() >= n:
            raise GroupAxiomError("table entries out of range")
        self.table = t.astype(_dtype(n))
        self.table.setflags(write=False)
        ar = np.arange(n)
        ids = [e for e in range(n) if (t[e] == ar).all() and (t[:, e] == ar).all()]
        if not ids:
            raise GroupAxiomError("no two-sided identity")
        self.identity = ids[0]
        hits = np.argwhere(t == self.identity)
        inv = np.full(n, -1)
        inv[hits[:, 0]] = hits[:, 1]
        if (inv < 0).any() or (t[inv, ar] != self.identity).any():
            raise GroupAxiomError("missing two-sided inverse")
        self.inverse = inv
        if not is_associative(t, self.generators()):
            raise GroupAxiomError("table is not associative")

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        out, base = self.identity, a
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def conj(self, a: int, g: int) -> int:
        """``g^-1 a g``."""
        return self.mul(self.mul(self.inv(g), a), g)

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x, k = self.mul(x, a), k + 1
        return k

    def is_abelian(self) -> bool:
        return bool((self.table == self.table.T).all())

    def closure(self, gens: Iterable[int]) -> frozenset:
        """Subgroup generated by ``gens``."""
        gens = list(dict.fromkeys(int(g) for g in gens))
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = int(self.table[x, g])
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    def generators(self) -> list[int]:
        """A small generating set, chosen greedily by descending element order."""
        n = self.order
        orders = [self.element_order(a) for a in range(n)]
        gens, span = [], frozenset([self.identity])
        for a in sorted(range(n), key=lambda a: (-orders[a], a)):
            if len(span) == n:
                break
            if a not in span:
                gens.append(a)
                span = self.closure(gens)
        return gens

    def is_subgroup(self, subset: Iterable[int]) -> bool:
        s = sorted(set(int(x) for x in subset))
        if not s or self.identity not in s:
            return False
        idx = np.array(s)
        prods = self.table[np.ix_(idx, self.inverse[idx])]
        return bool(np.isin(prods, idx).all())

    def restrict(self, subset: Iterable[int]) -> tuple["FiniteGroup", list[int]]:
        """The subgroup on ``subset`` as a standalone group, plus its element list."""
        elems = sorted(set(int(x) for x in subset))
        pos = {x: i for i, x in enumerate(elems)}
        sub = self.table[np.ix_(elems, elems)]
        try:
            t = np.vectorize(pos.__getitem__, otypes=[int])(sub)
        except KeyError:
            raise GroupAxiomError("subset is not closed") from None
        return FiniteGroup(t, f"sub({self.name})"), elems

    def order_statistics(self) -> tuple:
        return tuple(sorted(self.element_order(a) for a in range(self.order)))

    def center(self) -> frozenset:
        t = self.table
        return frozenset(a for a in range(self.order) if (t[a] == t[:, a]).all())


def is_associative(table: np.ndarray, gens: Sequence[int], exhaustive_limit: int = 200) -> bool:
    """Associativity of a table.

    Small tables are checked on all triples.  Larger ones use Light's test:
    ``(x g) y = x (g y)`` for every ``x, y`` and every ``g`` in a generating set,
    which suffices because the set of such middle elements is closed under
    products.
    """
    t = np.asarray(table)
    n = t.shape[0]
    if n <= exhaustive_limit:
        return bool((t[t] == t[:, t]).all())
    for g in gens:
        if not (t[t[:, g]][:, :] == t[:, t[g, :]]).all():
            return False
    return True


def from_generators(gens: Sequence[Hashable], mul: Callable, identity: Hashable,
                    name: str = "", limit: int = 100_000) -> FiniteGroup:
    """Close ``gens`` under ``mul`` and return the table, elements in BFS order.

    Only ``|elements| * |gens|`` products are evaluated: column ``y`` of the
    table is obtained from the column of its BFS parent ``x`` (``y = x g``) by
    right multiplication with ``g``.
    """
    elems = [identity]
    index = {identity: 0}
    parent = [(-1, -1)]
    right = [[] for _ in gens]       # right[gi][a] = index(elems[a] * gens[gi])
    a = 0
    while a < len(elems):
        x = elems[a]
        for gi, g in enumerate(gens):
            y = mul(x, g)
            if y not in index:
                index[y] = len(elems)
                elems.append(y)
                parent.append((a, gi))
                if len(elems) > limit:
                    raise GroupAxiomError("closure exceeds limit")
            right[gi].append(index[y])
        a += 1
    n = len(elems)
    R = np.array(right, dtype=np.int64).reshape(len(gens), n)
    t = np.empty((n, n), dtype=np.int64)
    t[:, 0] = np.arange(n)
    for y in range(1, n):
        x, gi = parent[y]
        t[:, y] = R[gi][t[:, x]]
    return FiniteGroup(t, name, tuple(elems))


# -- constructors --------------------------------------------------------

def cyclic(n: int) -> FiniteGroup:
    ar = np.arange(n)
    return FiniteGroup((ar[:, None] + ar[None, :]) % n, f"Z{n}", tuple(range(n)))


def direct_product(*groups: FiniteGroup) -> FiniteGroup:
    t = groups[0].table.astype(np.int64)
    for h in groups[1:]:
        m = h.order
        t = (t[:, None, :, None] * m + h.table[None, :, None, :]).reshape(
            t.shape[0] * m, t.shape[0] * m)
    return FiniteGroup(t, "x".join(g.name for g in groups))


def semidirect_cyclic(m: int, r: int, k: int, name: str = "") -> FiniteGroup:
    """``Z_m x|_r Z_k`` with ``(a, b)(c, d) = (a + r^b c, b + d)``."""
    if pow(r, k, m) != 1 % m:
        raise ValueError("r^k must be 1 mod m")
    return from_generators(
        [(1, 0), (0, 1)],
        lambda x, y: ((x[0] + pow(r, x[1], m) * y[0]) % m, (x[1] + y[1]) % k),
        (0, 0), name or f"Z{m}:{r}Z{k}")


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of the n-gon (order 2n)."""
    return semidirect_cyclic(n, n - 1, 2, f"D{n}")


def dicyclic(n: int) -> FiniteGroup:
    """Order ``4n``: ``a`` of order ``2n``, ``x^2 = a^n``, ``x a x^-1 = a^-1``."""
    m = 2 * n

    def mul(p, q):
        (i, j), (k, l) = p, q
        if j == 0:
            return ((i + k) % m, l)
        if l == 0:
            return ((i - k) % m, 1)
        return ((i - k + n) % m, 0)

    return from_generators([(1, 0), (0, 1)], mul, (0, 0), f"Dic{n}")


def _perm_mul(p, q):
    # apply p first, then q
    return tuple(q[i] for i in p)


def symmetric(n: int) -> FiniteGroup:
    ident = tuple(range(n))
    gens = [tuple([1, 0] + list(range(2, n))), tuple(list(range(1, n)) + [0])] if n > 1 else [ident]
    return from_generators(gens, _perm_mul, ident, f"S{n}")


def alternating(n: int) -> FiniteGroup:
    """Even permutations, generated by the 3-cycles ``(0 1 a)``."""
    ident = tuple(range(n))
    gens = []
    for a in range(2, n):
        p = list(range(n))
        p[0], p[1], p[a] = 1, a, 0
        gens.append(tuple(p))
    return from_generators(gens or [ident], _perm_mul, ident, f"A{n}")


def _matmul2(a, b):
    # 2x2 matrices over Z[i], entries as (re, im) pairs
    def m(x, y):
        return (x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0])

    def s(x, y):
        return (x[0] + y[0], x[1] + y[1])

    return tuple(tuple(s(m(a[r][0], b[0][c]), m(a[r][1], b[1][c])) for c in range(2))
                 for r in range(2))


def pauli() -> FiniteGroup:
    """Group generated by the Pauli matrices (order 16, central product Z4 o D4)."""
    o, one, i = (0, 0), (1, 0), (0, 1)
    X = ((o, one), (one, o))
    Z = ((one, o), (o, (-1, 0)))
    iI = ((i, o), (o, i))
    ident = ((one, o), (o, one))
    return from_generators([X, Z, iI], _matmul2, ident, "Pauli")


def _semidirect_z2(N: FiniteGroup, sigma: Sequence[int], name: str) -> FiniteGroup:
    """``N x| Z2`` for an involutive automorphism ``sigma`` given on element indices."""
    sig = list(sigma)

    def mul(x, y):
        a, s = x
        b, t = y
        return (N.mul(a, sig[b] if s else b), s ^ t)

    gens = [(g, 0) for g in N.generators()] + [(N.identity, 1)]
    return from_generators(gens, mul, (N.identity, 0), name)


def _g16_3() -> FiniteGroup:
    # (Z4 x Z2) x| Z2 with c a c = a b, c b c = b
    N = direct_product(cyclic(4), cyclic(2))   # index 2*x + y for (x, y)
    sigma = [2 * x + ((y + x) % 2) for x in range(4) for y in range(2)]
    return _semidirect_z2(N, sigma, "(Z4xZ2):Z2")


def corpus(max_order: int = 16) -> list[FiniteGroup]:
    """One representative of each isomorphism type of order <= ``max_order`` (at most 16)."""
    if max_order > 16:
        raise ValueError("corpus only covers orders up to 16")
    Z, X = cyclic, direct_product
    S3 = symmetric(3)
    D4 = dihedral(4)
    Q8 = dicyclic(2)
    Q8.name = "Q8"
    Q16 = dicyclic(4)
    Q16.name = "Q16"
    groups = [
        Z(1), Z(2), Z(3), Z(4), X(Z(2), Z(2)), Z(5), Z(6), S3, Z(7),
        Z(8), X(Z(4), Z(2)), X(Z(2), Z(2), Z(2)), D4, Q8,
        Z(9), X(Z(3), Z(3)), Z(10), dihedral(5), Z(11),
        Z(12), X(Z(6), Z(2)), alternating(4), dihedral(6), dicyclic(3),
        Z(13), Z(14), dihedral(7), Z(15),
        Z(16), X(Z(8), Z(2)), X(Z(4), Z(4)), X(Z(4), Z(2), Z(2)), X(Z(2), Z(2), Z(2), Z(2)),
        dihedral(8), Q16, semidirect_cyclic(8, 3, 2, "SD16"),
        semidirect_cyclic(8, 5, 2, "M16"), semidirect_cyclic(4, 3, 4, "Z4:Z4"),
        X(D4, Z(2)), X(Q8, Z(2)), pauli(), _g16_3(),
    ]
    return [g for g in groups if g.order <= max_order]


# -- isomorphism ---------------------------------------------------------------

def _invariants(G: FiniteGroup) -> tuple:
    C = G.center()
    Cg, _ = G.restrict(C)
    return (G.order, G.is_abelian(), G.order_statistics(), len(C), Cg.order_statistics())


def find_isomorphism(G: FiniteGroup, H: FiniteGroup) -> Optional[list[int]]:
    """Brute-force isomorphism ``G -> H`` as an element map, or ``None``.

    Images of a generating set of ``G`` are tried over all elements of ``H``
    with matching orders; each candidate is extended along a spanning tree
    of the Cayley graph and checked against the full tables.
    """
    if G.order != H.order:
        return None
    n = G.order
    gens = G.generators()
    # spanning tree: every element as parent * generator
    tree, seen, frontier = [], {G.identity}, [G.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for gi, g in enumerate(gens):
                y = G.mul(x, g)
                if y not in seen:
                    seen.add(y)
                    tree.append((y, x, gi))
                    nxt.append(y)
        frontier = nxt
    h_orders = [H.element_order(b) for b in range(n)]
    cands = [[b for b in range(n) if h_orders[b] == G.element_order(g)] for g in gens]
    Gt, Ht = G.table, H.table
    for images in itertools.product(*cands):
        phi = np.full(n, -1)
        phi[G.identity] = H.identity
        for y, x, gi in tree:
            phi[y] = Ht[phi[x], images[gi]]
        if len(set(phi.tolist())) != n:
            continue
        if (phi[Gt] == Ht[phi[:, None], phi[None, :]]).all():
            return phi.tolist()
    return None


def isomorphic(G: FiniteGroup, H: FiniteGroup) -> bool:
    if _invariants(G) != _invariants(H):
        return False
    return find_isomorphism(G, H) is not None
