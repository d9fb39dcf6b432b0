"""Triangulated tori and piecewise-linear circle-valued functions on them.

The only supported triangulation is the diagonal grid: vertex ``(i, j)`` with
``i`` in ``Z_N`` (columns) and ``j`` in ``Z_M`` (rows), three edge families per
vertex (right, up, diagonal) and two triangles per grid cell.

A circle-valued function is stored as a vertex value ``theta`` in ``[0, 1)``
together with a real increment ``delta`` on every edge, oriented from tail to
head.  All values are kept as exact :class:`fractions.Fraction` objects; float
inputs are converted exactly (every float is a dyadic rational), which keeps
the cocycle sums exactly zero.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from numbers import Rational
from typing import Callable, Iterable, Sequence, Union

__all__ = [
    "TorusComplex",
    "CircleFunction",
    "VertexType",
    "DimensionTooSmall",
    "FlatEdge",
    "CocycleError",
    "build_grid_torus",
    "build_function",
    "cohomology_class",
    "classify_vertex",
    "index_sum",
    "critical_vertices",
    "to_fraction",
]

RIGHT, UP, DIAG = 0, 1, 2
FAMILY_NAMES = ("right", "up", "diag")

Number = Union[int, float, Fraction, str]


class DimensionTooSmall(ValueError):
    pass


class FlatEdge(ValueError):
    """Raised when an edge carries a zero increment.

    ``edge`` is the edge id, ``endpoints`` the two ``(i, j)`` vertex pairs.
    """

    def __init__(self, edge: int, endpoints=None):
        self.edge = edge
        self.endpoints = endpoints
        where = f" {endpoints[0]} -> {endpoints[1]}" if endpoints else ""
        super().__init__(f"flat edge {edge}{where}: zero increment")


class CocycleError(ValueError):
    pass


def to_fraction(x) -> tuple[Fraction, bool]:
    """Convert a number to an exact fraction; second item tells if it was rational."""
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, (int, Fraction)) or isinstance(x, Rational):
        return Fraction(x), True
    if isinstance(x, str):
        return Fraction(x.strip()), True
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"non-finite value {x!r}")
    return Fraction(x), False


@dataclass(frozen=True)
class TorusComplex:
    """Diagonal-grid triangulation of the torus with ``n_cols * n_rows`` vertices."""

    n_cols: int
    n_rows: int

    def __post_init__(self):
        if self.n_cols < 3 or self.n_rows < 3:
            raise DimensionTooSmall(
                f"grid must be at least 3x3, got {self.n_cols}x{self.n_rows}")

    # ids: vertex v = j*N + i; edge 3*v + family; triangle 2*v (+1 for upper)
    def vid(self, i: int, j: int) -> int:
        return (j % self.n_rows) * self.n_cols + (i % self.n_cols)

    def coords(self, v: int) -> tuple[int, int]:
        return v % self.n_cols, v // self.n_cols

    @property
    def n_vertices(self) -> int:
        return self.n_cols * self.n_rows

    @property
    def n_edges(self) -> int:
        return 3 * self.n_vertices

    @property
    def n_triangles(self) -> int:
        return 2 * self.n_vertices

    def euler_characteristic(self) -> int:
        return self.n_vertices - self.n_edges + self.n_triangles

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        """``(tail, head)`` for every edge id."""
        out = []
        for v in range(self.n_vertices):
            i, j = self.coords(v)
            out.append((v, self.vid(i + 1, j)))
            out.append((v, self.vid(i, j + 1)))
            out.append((v, self.vid(i + 1, j + 1)))
        return tuple(out)

    def edge_wrap(self, e: int) -> tuple[int, int]:
        """How many times edge ``e`` crosses the x and y seams of the fundamental domain."""
        v, fam = divmod(e, 3)
        i, j = self.coords(v)
        wx = int(fam in (RIGHT, DIAG) and i == self.n_cols - 1)
        wy = int(fam in (UP, DIAG) and j == self.n_rows - 1)
        return wx, wy

    @cached_property
    def edge_index(self) -> dict[tuple[int, int], tuple[int, int]]:
        """Map an ordered vertex pair to ``(edge id, +1 | -1)``."""
        idx = {}
        for e, (u, w) in enumerate(self.edges):
            idx[(u, w)] = (e, 1)
            idx[(w, u)] = (e, -1)
        return idx

    @cached_property
    def triangles(self) -> tuple[tuple[int, int, int], ...]:
        """Vertex triples, counter-clockwise, first vertex is the cell corner."""
        out = []
        for v in range(self.n_vertices):
            i, j = self.coords(v)
            out.append((v, self.vid(i + 1, j), self.vid(i + 1, j + 1)))
            out.append((v, self.vid(i + 1, j + 1), self.vid(i, j + 1)))
        return tuple(out)

    @cached_property
    def triangle_edges(self) -> tuple[tuple[tuple[int, int, int], ...], ...]:
        """Per triangle: ``(edge id, local tail, local head)`` for its three edges."""
        out = []
        for v in range(self.n_vertices):
            i, j = self.coords(v)
            # lower: v0=(i,j) v1=(i+1,j) v2=(i+1,j+1)
            out.append(((3 * v + RIGHT, 0, 1),
                        (3 * self.vid(i + 1, j) + UP, 1, 2),
                        (3 * v + DIAG, 0, 2)))
            # upper: v0=(i,j) v1=(i+1,j+1) v2=(i,j+1)
            out.append(((3 * v + DIAG, 0, 1),
                        (3 * self.vid(i, j + 1) + RIGHT, 2, 1),
                        (3 * v + UP, 0, 2)))
        return tuple(out)

    def link(self, v: int) -> tuple[tuple[int, int, int], ...]:
        """Cyclic (counter-clockwise) link of ``v`` as ``(neighbour, edge id, sign)``.

        ``sign`` is +1 when the edge is stored as ``v -> neighbour``.
        """
        i, j = self.coords(v)
        nbrs = [(i + 1, j), (i + 1, j + 1), (i, j + 1),
                (i - 1, j), (i - 1, j - 1), (i, j - 1)]
        out = []
        for a, b in nbrs:
            w = self.vid(a, b)
            e, s = self.edge_index[(v, w)]
            out.append((w, e, s))
        return tuple(out)

    def edge_faces(self, e: int) -> list[int]:
        return self._edge_faces[e]

    @cached_property
    def _edge_faces(self) -> list[list[int]]:
        faces = [[] for _ in range(self.n_edges)]
        for t, tedges in enumerate(self.triangle_edges):
            for e, _, _ in tedges:
                faces[e].append(t)
        return faces


def build_grid_torus(n_cols: int, n_rows: int) -> TorusComplex:
    return TorusComplex(n_cols, n_rows)


@dataclass(frozen=True)
class VertexType:
    """PL criticality of a vertex, read off the sign changes of ``delta`` around its link."""

    kind: str  # "regular" | "extremum" | "saddle"
    sign_changes: int
    direction: int = 0  # for extrema: +1 minimum (all outgoing increments > 0), -1 maximum

    @property
    def is_critical(self) -> bool:
        return self.kind != "regular"

    @property
    def label(self) -> str:
        if self.kind == "regular":
            return "regular"
        if self.kind == "extremum":
            return "min" if self.direction > 0 else "max"
        return f"saddle{self.sign_changes}"

    @property
    def index(self) -> int:
        return 1 - self.sign_changes // 2


@dataclass(frozen=True, eq=False)
class CircleFunction:
    """A PL map ``T^2 -> R/Z`` given by vertex values and an edge-lift cocycle.

    ``exact`` records whether the inputs were rational; it only affects how
    values are compared when looking for symmetries and how they are printed.
    """

    complex: TorusComplex
    theta: tuple[Fraction, ...]
    delta: tuple[Fraction, ...]
    exact: bool = True

    @classmethod
    def from_values(cls, complex: TorusComplex, theta: Sequence[Number],
                    delta: Sequence[Number], tol: float = 1e-12) -> "CircleFunction":
        """Validate and wrap explicit vertex values and edge increments.

        Edge compatibility is checked exactly for rational input and up to
        ``tol`` for floats (theta is then re-derived from the increments).
        Cocycle closure must hold exactly in either case.
        """
        if len(theta) != complex.n_vertices or len(delta) != complex.n_edges:
            raise ValueError("theta/delta sizes do not match the complex")
        exact = True
        th, dl = [], []
        for x in theta:
            q, ok = to_fraction(x)
            exact &= ok
            th.append(q)
        for x in delta:
            q, ok = to_fraction(x)
            exact &= ok
            dl.append(q)
        for e, d in enumerate(dl):
            if d == 0:
                raise FlatEdge(e, _endpoints(complex, e))
        for t, tedges in enumerate(complex.triangle_edges):
            s = _triangle_sum(tedges, dl)
            if s != 0:
                raise CocycleError(f"cocycle sum {s} != 0 on triangle {t}")
        for e, (u, w) in enumerate(complex.edges):
            r = dl[e] - (th[w] - th[u])
            if r.denominator != 1:
                off = abs(r - round(r))
                if exact or off > tol:
                    raise CocycleError(
                        f"edge {e}: increment {dl[e]} incompatible with vertex values")
        if not exact:
            th = _integrate(complex, th[0] % 1, dl)
        th = [x % 1 for x in th]
        f = cls(complex, tuple(th), tuple(dl), exact)
        cohomology_class(f)
        return f

    # -- lifts ---------------------------------------------------------
    def edge_lift(self, u: int, w: int) -> Fraction:
        """Increment along the oriented edge ``u -> w`` (either orientation)."""
        e, s = self.complex.edge_index[(u, w)]
        return self.delta[e] if s > 0 else -self.delta[e]

    def row_sum(self, row: int = 0) -> Fraction:
        c = self.complex
        return sum((self.delta[3 * c.vid(i, row) + RIGHT] for i in range(c.n_cols)), Fraction(0))

    def column_sum(self, col: int = 0) -> Fraction:
        c = self.complex
        return sum((self.delta[3 * c.vid(col, j) + UP] for j in range(c.n_rows)), Fraction(0))

    def value(self, v: int):
        """Vertex value in the number type of the input (Fraction or float)."""
        return self.theta[v] if self.exact else float(self.theta[v])

    def translated(self, di: int, dj: int) -> "CircleFunction":
        """The same function seen from a grid origin moved to ``(di, dj)``."""
        c = self.complex
        theta, delta = [], []
        for v in range(c.n_vertices):
            i, j = c.coords(v)
            w = c.vid(i + di, j + dj)
            theta.append(self.theta[w])
            delta.extend(self.delta[3 * w:3 * w + 3])
        return CircleFunction(c, tuple(theta), tuple(delta), self.exact)

    @cached_property
    def vertex_types(self) -> tuple[VertexType, ...]:
        return tuple(_classify(self, v) for v in range(self.complex.n_vertices))

    def scaled(self, extra_denominator: int = 1) -> "ScaledFunction":
        """Integer rescaling used by the level-set code; see :class:`ScaledFunction`."""
        cache = self.__dict__.setdefault("_scaled_cache", {})
        if extra_denominator not in cache:
            cache[extra_denominator] = ScaledFunction(self, extra_denominator)
        return cache[extra_denominator]


class ScaledFunction:
    """``f`` multiplied by an even integer period ``P`` so every value is an integer.

    ``P`` is twice the common denominator, hence all vertex values are even and
    midpoints of pairs of vertex values are integers.
    """

    def __init__(self, f: CircleFunction, extra_denominator: int = 1):
        den = extra_denominator
        for x in f.theta:
            den = math.lcm(den, x.denominator)
        for x in f.delta:
            den = math.lcm(den, x.denominator)
        self.f = f
        self.complex = f.complex
        self.P = P = 2 * den
        self.t = [int(x * P) for x in f.theta]
        self.d = [int(x * P) for x in f.delta]
        c = f.complex
        tris = []
        for (v0, v1, v2), tedges in zip(c.triangles, c.triangle_edges):
            verts = (v0, v1, v2)
            t0 = self.t[v0]
            lifts = [t0, None, None]
            for e, a, b in tedges:
                if a == 0:
                    lifts[b] = t0 + self.d[e]
            eds = []
            for e, a, b in tedges:
                tail = c.edges[e][0]
                eds.append((e, a, b, lifts[a] - self.t[tail]))
            tris.append((verts, tuple(lifts), tuple(eds), min(lifts), max(lifts)))
        self.tris = tris

    def to_int(self, c) -> int:
        q = Fraction(c) * self.P
        if q.denominator != 1:
            raise ValueError(f"value {c} is not representable at period {self.P}")
        return int(q)


def _endpoints(complex: TorusComplex, e: int):
    u, w = complex.edges[e]
    return complex.coords(u), complex.coords(w)


def _triangle_sum(tedges, delta) -> Fraction:
    # boundary v0 -> v1 -> v2 -> v0
    s = Fraction(0)
    for e, a, b in tedges:
        sign = 1 if (b - a) % 3 == 1 else -1
        s += sign * delta[e]
    return s


def _integrate(complex: TorusComplex, root_value, delta) -> list[Fraction]:
    """Real lift by breadth-first integration of ``delta`` from vertex 0."""
    vals = [None] * complex.n_vertices
    vals[0] = root_value
    queue = [0]
    for u in queue:
        for w, e, s in complex.link(u):
            if vals[w] is None:
                vals[w] = vals[u] + (delta[e] if s > 0 else -delta[e])
                queue.append(w)
    return vals


def _perturbation_getter(perturbation, n_cols, n_rows) -> Callable[[int, int], object]:
    if perturbation is None:
        return lambda i, j: 0
    if callable(perturbation):
        return perturbation
    if isinstance(perturbation, dict):
        return lambda i, j: perturbation.get((i, j), 0)
    rows = [list(r) for r in perturbation]
    if len(rows) != n_rows or any(len(r) != n_cols for r in rows):
        raise ValueError(f"perturbation must be {n_rows} rows of {n_cols} values")
    return lambda i, j: rows[j][i]


def build_function(complex: TorusComplex, cls: tuple[int, int] = (0, 0),
                   perturbation=None) -> CircleFunction:
    """Representative ``frac(a*i/N + b*j/M + v[i, j])`` of the class ``(a, b)``.

    ``perturbation`` is ``None``, a callable ``(i, j) -> value``, a dict keyed
    by ``(i, j)`` or ``M`` rows of ``N`` values (row index ``j`` first).
    """
    a, b = (int(x) for x in cls)
    N, M = complex.n_cols, complex.n_rows
    get = _perturbation_getter(perturbation, N, M)
    exact = True
    F = [None] * complex.n_vertices
    for v in range(complex.n_vertices):
        i, j = complex.coords(v)
        q, ok = to_fraction(get(i, j))
        exact &= ok
        F[v] = Fraction(a * i, N) + Fraction(b * j, M) + q
    delta = [None] * complex.n_edges
    for e, (u, w) in enumerate(complex.edges):
        wx, wy = complex.edge_wrap(e)
        d = F[w] - F[u] + a * wx + b * wy
        if d == 0:
            raise FlatEdge(e, _endpoints(complex, e))
        delta[e] = d
    theta = tuple(x % 1 for x in F)
    return CircleFunction(complex, theta, tuple(delta), exact)


def cohomology_class(f: CircleFunction, row: int = 0, col: int = 0) -> tuple[int, int]:
    """Integer periods of ``f`` along a row (x direction) and a column (y direction)."""
    a, b = f.row_sum(row), f.column_sum(col)
    if a.denominator != 1 or b.denominator != 1:
        raise CocycleError(f"non-integer periods {a}, {b}")
    return int(a), int(b)


def _classify(f: CircleFunction, v: int) -> VertexType:
    signs = []
    for w, e, s in f.complex.link(v):
        d = f.delta[e]
        if d == 0:
            raise FlatEdge(e, _endpoints(f.complex, e))
        signs.append((d > 0) == (s > 0))
    changes = sum(signs[k] != signs[k - 1] for k in range(len(signs)))
    if changes == 0:
        return VertexType("extremum", 0, 1 if signs[0] else -1)
    if changes == 2:
        return VertexType("regular", 2)
    return VertexType("saddle", changes)


def classify_vertex(f: CircleFunction, v: int) -> VertexType:
    return f.vertex_types[v]


def critical_vertices(f: CircleFunction) -> list[int]:
    return [v for v, t in enumerate(f.vertex_types) if t.is_critical]


def index_sum(f: CircleFunction) -> int:
    """Sum of PL indices ``1 - sign_changes/2``; zero on the torus."""
    return sum(t.index for t in f.vertex_types)
