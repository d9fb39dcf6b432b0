"""The semidirect product ``G wr_n Z = G^n x| Z`` with Z acting by cyclic shifts.

Multiplication is ``(b, k)(b', k') = (b . alpha(b'; k), k + k')`` where
``alpha(b; k)_i = b_{i+k}`` (indices mod n).  With this sign, conjugating the
0-th coordinate copy ``L_0`` by ``g = (e, ..., e; 1)`` gives the 1-st copy:
``g^-1 L_0 g = L_1``, and the map ``xi`` below is a homomorphism.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .finite import FiniteGroup, from_generators
from .splitting import split_report

__all__ = [
    "AlgebraMismatch", "HypothesesFail", "WreathAlgebra", "WreathElement",
    "wreath_mul", "phi_projection", "quotient_group", "permutation_ambient",
    "Xi", "xi_map", "LemmaReport", "verify_lemma_hypotheses", "find_failing_witness",
]


class AlgebraMismatch(ValueError):
    pass


class HypothesesFail(ValueError):
    def __init__(self, report: "LemmaReport"):
        failed = [name for name, ok in (("g^n centralizes ker phi", report.centralizes),
                                        ("ker phi splits", report.splits)) if not ok]
        super().__init__("hypothesis failed: " + ", ".join(failed))
        self.report = report


@dataclass(frozen=True, eq=False)
class WreathAlgebra:
    base: FiniteGroup
    n: int
    shift_sign: int = 1   # +1 is the only correct value; -1 exists for mutation tests

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")

    def element(self, comps: Sequence[int], k: int = 0) -> "WreathElement":
        comps = tuple(int(c) for c in comps)
        if len(comps) != self.n or not all(0 <= c < self.base.order for c in comps):
            raise ValueError("bad components")
        return WreathElement(self, comps, int(k))

    def identity(self) -> "WreathElement":
        return WreathElement(self, (self.base.identity,) * self.n, 0)

    def g(self) -> "WreathElement":
        return WreathElement(self, (self.base.identity,) * self.n, 1)

    def coordinate(self, i: int, h: int) -> "WreathElement":
        """``h`` placed in coordinate ``i``, shift 0."""
        comps = [self.base.identity] * self.n
        comps[i % self.n] = h
        return WreathElement(self, tuple(comps), 0)

    def mul(self, x: "WreathElement", y: "WreathElement") -> "WreathElement":
        return wreath_mul(x, y)

    def inv(self, x: "WreathElement") -> "WreathElement":
        n, G, s = self.n, self.base, self.shift_sign
        # (b, k)^-1 = (c, -k) with c_i = (b_{i - s k})^-1
        comps = tuple(G.inv(x.comps[(i - s * x.k) % n]) for i in range(n))
        return WreathElement(self, comps, -x.k)

    def power(self, x: "WreathElement", k: int) -> "WreathElement":
        if k < 0:
            x, k = self.inv(x), -k
        out = self.identity()
        while k:
            if k & 1:
                out = wreath_mul(out, x)
            x = wreath_mul(x, x)
            k >>= 1
        return out

    def random(self, rng: random.Random, kmax: int = 10**6) -> "WreathElement":
        return WreathElement(self, tuple(rng.randrange(self.base.order) for _ in range(self.n)),
                             rng.randint(-kmax, kmax))


@dataclass(frozen=True)
class WreathElement:
    algebra: WreathAlgebra
    comps: tuple
    k: int

    def __mul__(self, other: "WreathElement") -> "WreathElement":
        return wreath_mul(self, other)

    def __eq__(self, other):
        return (isinstance(other, WreathElement) and self.algebra is other.algebra
                and self.comps == other.comps and self.k == other.k)

    def __hash__(self):
        return hash((id(self.algebra), self.comps, self.k))


def wreath_mul(x: WreathElement, y: WreathElement) -> WreathElement:
    A = x.algebra
    if y.algebra is not A and (y.algebra.base is not A.base or y.algebra.n != A.n
                               or y.algebra.shift_sign != A.shift_sign):
        raise AlgebraMismatch("elements belong to different wreath algebras")
    n, t, s = A.n, A.base.table, A.shift_sign
    comps = tuple(int(t[x.comps[i], y.comps[(i + s * x.k) % n]]) for i in range(n))
    return WreathElement(A, comps, x.k + y.k)


def phi_projection(x: WreathElement) -> int:
    """The shift coordinate; a homomorphism onto Z with kernel ``G^n``."""
    return x.k


# -- finite quotients ---------------------------------------------------------

@dataclass
class Quotient:
    """``G wr_n Z`` modulo the central subgroup generated by ``(e; n*m)``."""

    algebra: WreathAlgebra
    m: int
    group: FiniteGroup
    keys: list            # element index -> (comps, k mod nm)
    index: dict

    @property
    def modulus(self) -> int:
        return self.algebra.n * self.m

    def of(self, x: WreathElement) -> int:
        return self.index[(x.comps, x.k % self.modulus)]

    def lift(self, a: int) -> WreathElement:
        comps, k = self.keys[a]
        return WreathElement(self.algebra, comps, k)

    def phi(self) -> np.ndarray:
        return np.array([k for _, k in self.keys])


def quotient_group(A: WreathAlgebra, m: int) -> Quotient:
    """Finite quotient with ``k`` taken mod ``n*m``, tabled directly from ``wreath_mul``.

    The table constructor checks identity, inverses and associativity
    (exhaustively when small, by Light's test otherwise).
    """
    N = A.n * m
    G = A.base
    keys = [(c, k) for k in range(N) for c in itertools.product(range(G.order), repeat=A.n)]
    index = {key: i for i, key in enumerate(keys)}
    size = len(keys)
    # vectorized product: comps_i = b_i * b'_{i + s k}
    comps = np.array([c for c, _ in keys], dtype=np.int64).reshape(size, A.n)
    ks = np.array([k for _, k in keys], dtype=np.int64)
    radix = G.order ** np.arange(A.n - 1, -1, -1)
    table = np.empty((size, size), dtype=np.int64)
    for a in range(size):
        shift = (np.arange(A.n) + A.shift_sign * int(ks[a])) % A.n
        prod_c = G.table[comps[a][None, :], comps[:, shift]].astype(np.int64)
        table[a] = ((ks[a] + ks) % N) * G.order ** A.n + prod_c @ radix
    return Quotient(A, m, FiniteGroup(table, f"{G.name} wr_{A.n} Z mod {N}"), keys, index)


def permutation_ambient(base: FiniteGroup, n: int, m: int):
    """Independent model of ``base^n x| Z_{nm}`` as a permutation group.

    ``base`` acts on itself by right multiplication; ``n`` copies of it sit on
    disjoint blocks and a separate cycle of length ``n*m`` carries the shift.
    Returns ``(ambient, embed, g, phi)`` where ``embed`` maps a base element
    to the ambient index of its copy in block 0, ``g`` is the shift and
    ``phi`` maps ambient indices to ``k mod nm``.
    """
    h = base.order
    d = n * h + n * m

    def block_perm(i, a):
        p = list(range(d))
        for x in range(h):
            p[i * h + x] = i * h + base.mul(x, a)
        return tuple(p)

    # with "apply p first, then q" composition, g^-1 (block 0) g acts on block 1
    g = list(range(d))
    for i in range(n):
        for x in range(h):
            g[i * h + x] = ((i + 1) % n) * h + x
    for r in range(n * m):
        g[n * h + r] = n * h + (r + 1) % (n * m)
    g = tuple(g)

    def mul(p, q):
        return tuple(q[i] for i in p)

    gens = [block_perm(0, a) for a in base.generators()] + [g]
    ambient = from_generators(gens, mul, tuple(range(d)), f"perm({base.name}^{n}:Z{n * m})")
    index = {p: i for i, p in enumerate(ambient.elements)}
    embed = [index[block_perm(0, a)] for a in range(base.order)]
    phi = np.array([(p[n * h] - n * h) % (n * m) for p in ambient.elements])
    return ambient, embed, index[g], phi


# -- xi and the lemma hypotheses ----------------------------------------------

@dataclass(frozen=True)
class LemmaReport:
    centralizes: bool        # (1) g^n commutes with ker phi
    splits: bool             # (2) ker phi = L_0 x g^-1 L_0 g x ...
    kernel_order: int
    detail: Optional[object] = None

    @property
    def ok(self) -> bool:
        return self.centralizes and self.splits


def verify_lemma_hypotheses(ambient: FiniteGroup, phi, L0, g: int, n: int,
                            modulus: Optional[int] = None) -> LemmaReport:
    """Check both hypotheses on a finite ambient group.

    ``phi`` is an array (or callable) of shift values on ambient indices; it
    must send ``g`` to 1 (mod ``modulus`` when the target is finite cyclic;
    by default the largest value of ``phi`` plus one).  ``L0`` is a subgroup of ``ker phi`` given by indices.
    """
    phi_arr = np.array([phi(a) for a in range(ambient.order)]) if callable(phi) else np.asarray(phi)
    if modulus is None:
        modulus = int(phi_arr.max()) + 1
    phi_arr = phi_arr % modulus
    if phi_arr[g] != 1 % modulus:
        raise ValueError("phi(g) must be 1")
    kernel = [int(a) for a in np.flatnonzero(phi_arr == 0)]
    gn = ambient.power(g, n)
    t = ambient.table
    ker = np.array(kernel)
    cond1 = bool((t[gn, ker] == t[ker, gn]).all())
    K, elems = ambient.restrict(kernel)
    pos = {x: i for i, x in enumerate(elems)}
    family = []
    L0 = sorted(set(int(x) for x in L0))
    for i in range(n):
        gi = ambient.power(g, i)
        try:
            family.append(sorted(pos[ambient.conj(x, gi)] for x in L0))
        except KeyError:
            return LemmaReport(cond1, False, len(kernel), "conjugate of L0 leaves ker phi")
    rep = split_report(K, family)
    return LemmaReport(cond1, rep.splits, len(kernel), rep)


class Xi:
    """``xi(b; k) = b_0 (g^-1 b_1 g) ... (g^-(n-1) b_{n-1} g^(n-1)) g^k`` in an ambient group.

    ``ambient`` needs ``mul``, ``inv`` and ``power``; ``embed`` maps base
    elements into it.  Pass ``hypotheses`` (a :class:`LemmaReport`) to refuse
    construction when they fail.
    """

    def __init__(self, ambient, embed: Callable, g, n: int,
                 hypotheses: Optional[LemmaReport] = None):
        if hypotheses is not None and not hypotheses.ok:
            raise HypothesesFail(hypotheses)
        self.ambient, self.embed, self.g, self.n = ambient, embed, g, n
        self._gpow = [ambient.power(g, i) for i in range(n)]
        self._ginv = [ambient.power(g, -i) for i in range(n)]

    def __call__(self, comps: Sequence[int], k: int):
        A = self.ambient
        out = A.power(self.g, 0)
        for i, b in enumerate(comps):
            out = A.mul(out, A.mul(A.mul(self._ginv[i], self.embed(b)), self._gpow[i]))
        return A.mul(out, A.power(self.g, k))


def xi_map(comps: Sequence[int], k: int, g, embed: Callable, ambient) -> object:
    """One-shot evaluation of :class:`Xi` (no hypothesis check)."""
    return Xi(ambient, embed, g, len(comps))(comps, k)


def find_failing_witness(A: WreathAlgebra, m: int = 1, limit: Optional[int] = None):
    """Search ``g' = g h`` (``h`` in the kernel) and ``L0`` among coordinate and
    diagonal copies of the base for a configuration violating a hypothesis.

    Returns ``(g', L0, report)`` for the first violation, or ``None``.
    """
    Q = quotient_group(A, m)
    G = A.base
    coord = sorted(Q.of(A.coordinate(0, h)) for h in range(G.order))
    diag = sorted(Q.of(A.element([h] * A.n, 0)) for h in range(G.order))
    g = Q.of(A.g())
    phi = Q.phi()
    kernel = [int(a) for a in np.flatnonzero(phi == 0)]
    for count, h in enumerate(kernel):
        if limit is not None and count >= limit:
            break
        if h == Q.group.identity:
            continue
        g2 = Q.group.mul(g, h)
        for L0 in (coord, diag):
            rep = verify_lemma_hypotheses(Q.group, phi, L0, g2, A.n)
            if not rep.ok:
                return Q.lift(g2), L0, rep
    return None
