"""Exact level-set and band connectivity on a scaled PL circle function.

Everything here works on :class:`~reeb_orbit.torus_pl.ScaledFunction`, where the
circle has integer period ``P`` and every vertex value and edge increment is an
integer.  Inside a triangle the function is lifted to the reals with the first
vertex at its value in ``[0, P)``; a level ``c`` meets that triangle once for
every integer ``m`` with ``c + m*P`` in the triangle's lifted range.

Level points are keyed ``('v', vertex)`` or ``('e', edge, m)``; the latter is
the point of edge ``e`` whose value, lifted from the edge tail, is ``c + m*P``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .torus_pl import ScaledFunction


class UnionFind:
    def __init__(self):
        self.parent = {}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        parent = self.parent
        root = parent.setdefault(x, x)
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            if ry < rx:
                rx, ry = ry, rx
            self.parent[ry] = rx

    def groups(self) -> list[list]:
        out = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return sorted((sorted(g) for g in out.values()), key=lambda g: g[0])


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


@dataclass
class LevelSet:
    c: int
    components: list[list[tuple]]
    # (triangle, m, point, point-or-None)
    segments: list[tuple] = field(default_factory=list)

    def component_of(self) -> dict:
        out = {}
        for idx, comp in enumerate(self.components):
            for p in comp:
                out[p] = idx
        return out


def level_set(S: ScaledFunction, c: int) -> LevelSet:
    """Connected components of ``f^{-1}(c)`` for an integer level ``0 <= c < P``."""
    P = S.P
    uf = UnionFind()
    segments = []
    for tid, (verts, lifts, eds, lo, hi) in enumerate(S.tris):
        for m in range(_ceil_div(lo - c, P), (hi - c) // P + 1):
            L = c + m * P
            pts = []
            for a in range(3):
                if lifts[a] == L:
                    pts.append(("v", verts[a]))
            for e, a, b, K in eds:
                la, lb = lifts[a], lifts[b]
                if (la < L < lb) or (lb < L < la):
                    pts.append(("e", e, (L - K - c) // P))
            for p in pts:
                uf.add(p)
            if len(pts) == 2:
                uf.union(pts[0], pts[1])
                segments.append((tid, m, pts[0], pts[1]))
            else:
                segments.append((tid, m, pts[0], None))
    return LevelSet(c, uf.groups(), segments)


class Band:
    """Connectivity of ``f^{-1}([alpha, beta])`` for ``alpha <= beta < alpha + P``.

    The band is the union of convex pieces ``(triangle, m)``; pieces are glued
    through the edge pieces and vertices they share.
    """

    def __init__(self, S: ScaledFunction, alpha: int, beta: int):
        P = S.P
        if not alpha <= beta < alpha + P:
            raise ValueError("band must be shorter than one period")
        self.S, self.alpha, self.beta = S, alpha, beta
        uf = self.uf = UnionFind()
        for tid, (verts, lifts, eds, lo, hi) in enumerate(S.tris):
            for m in range(_ceil_div(lo - beta, P), (hi - alpha) // P + 1):
                a0, b0 = alpha + m * P, beta + m * P
                piece = ("T", tid, m)
                uf.add(piece)
                for a in range(3):
                    if a0 <= lifts[a] <= b0:
                        uf.union(piece, ("V", verts[a]))
                for e, a, b, K in eds:
                    la, lb = lifts[a], lifts[b]
                    if min(la, lb) <= b0 and max(la, lb) >= a0:
                        uf.union(piece, ("E", e, m - K // P))

    def locate(self, point: tuple, c: int):
        """Band component containing a level point of level ``c``."""
        if point[0] == "v":
            return self.uf.find(("V", point[1]))
        _, e, m = point
        x = c + m * self.S.P
        me = (x - self.alpha) // self.S.P
        assert x <= self.beta + me * self.S.P, "level point outside the band"
        return self.uf.find(("E", e, me))
