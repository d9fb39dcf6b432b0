"""Internal direct-product splitting of a finite group into given subgroups."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import prod
from typing import Iterable, Sequence

import numpy as np

from .finite import FiniteGroup, direct_product, find_isomorphism

__all__ = [
    "NotASubgroup", "SplitReport", "subgroups", "split_report", "check_direct_product",
    "product_map_is_isomorphism", "abstractly_split", "subgroup_families",
]


class NotASubgroup(ValueError):
    def __init__(self, position: int):
        super().__init__(f"family member {position} is not a subgroup")
        self.position = position


@dataclass(frozen=True)
class SplitReport:
    d1_trivial_intersections: bool
    d2_elementwise: bool
    d2_setwise: bool
    d3_generates: bool
    order_matches: bool

    @property
    def splits(self) -> bool:
        return (self.d1_trivial_intersections and self.d2_elementwise
                and self.d3_generates and self.order_matches)


def subgroups(G: FiniteGroup) -> list[frozenset]:
    """All subgroups, as joins of cyclic subgroups, sorted by (order, elements)."""
    cyc = {G.closure([a]) for a in range(G.order)}
    found = set(cyc)
    frontier = set(cyc)
    while frontier:
        nxt = set()
        for H in frontier:
            for C in cyc:
                if not C <= H:
                    J = G.closure(H | C)
                    if J not in found:
                        found.add(J)
                        nxt.add(J)
        frontier = nxt
    return sorted(found, key=lambda H: (len(H), sorted(H)))


def _members(G: FiniteGroup, family: Sequence[Iterable[int]]) -> list[np.ndarray]:
    out = []
    for pos, H in enumerate(family):
        H = sorted(set(int(x) for x in H))
        if not G.is_subgroup(H):
            raise NotASubgroup(pos)
        out.append(np.array(H))
    return out


def split_report(G: FiniteGroup, family: Sequence[Iterable[int]]) -> SplitReport:
    """Per-condition verdicts for ``G = G_1 x ... x G_k`` (internal)."""
    hs = _members(G, family)
    t = G.table
    sets = [set(h.tolist()) for h in hs]
    d1 = all(a & b == {G.identity} for a, b in itertools.combinations(sets, 2))
    d2 = all((t[np.ix_(a, b)] == t[np.ix_(b, a)].T).all()
             for a, b in itertools.combinations(hs, 2))
    d2_set = all(set(t[np.ix_(a, b)].ravel().tolist()) == set(t[np.ix_(b, a)].ravel().tolist())
                 for a, b in itertools.combinations(hs, 2))
    gens = set().union(*sets) if sets else set()
    d3 = len(G.closure(gens)) == G.order
    return SplitReport(d1, d2, d2_set, d3, prod(len(s) for s in sets) == G.order)


def check_direct_product(G: FiniteGroup, family: Sequence[Iterable[int]]) -> bool:
    """True iff the subgroups satisfy D1, elementwise D2, D3 and ``|G| = prod |G_i|``."""
    return split_report(G, family).splits


def product_map_is_isomorphism(G: FiniteGroup, family: Sequence[Iterable[int]]) -> bool:
    """Oracle: ``(h_1, ..., h_k) -> h_1 ... h_k`` is a bijective homomorphism from the
    external product.  This is the definition of an internal direct product and
    is evaluated by exhausting the external product's table."""
    hs = [sorted(set(int(x) for x in H)) for H in family]
    t = G.table
    if not hs:
        return G.order == 1
    subs = [G.restrict(h)[0] for h in hs]
    ext = direct_product(*subs)
    # element index of the external product is mixed-radix in factor indices
    image = np.array([G.identity])
    for h in hs:
        image = t[image[:, None], np.array(h)[None, :]].ravel()
    if len(set(image.tolist())) != G.order or len(image) != G.order:
        return False
    return bool((image[ext.table] == t[image[:, None], image[None, :]]).all())


def abstractly_split(G: FiniteGroup, family: Sequence[Iterable[int]]) -> bool:
    """Whether ``G`` is isomorphic to the external product of the family at all.

    Weaker than an internal splitting (it ignores how the factors sit in ``G``);
    used as a necessary-condition diagnostic.
    """
    hs = [sorted(set(int(x) for x in H)) for H in family]
    if prod(len(h) for h in hs) != G.order:
        return False
    ext = direct_product(*[G.restrict(h)[0] for h in hs]) if hs else None
    if ext is None:
        return G.order == 1
    return find_isomorphism(ext, G) is not None


def subgroup_families(G: FiniteGroup, max_size: int = 4) -> list[tuple[frozenset, ...]]:
    """Test families: all of size 1 and 2, plus larger ones whose orders multiply to ``|G|``."""
    subs = subgroups(G)
    fams = [(H,) for H in subs]
    fams += list(itertools.combinations_with_replacement(subs, 2))
    proper = [H for H in subs if 1 < len(H) < G.order]
    for k in range(3, max_size + 1):
        for combo in itertools.combinations(proper, k):
            if prod(len(H) for H in combo) == G.order:
                fams.append(combo)
    return fams
