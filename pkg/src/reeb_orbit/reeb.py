"""Kronrod-Reeb graphs of PL circle-valued functions on the torus.

Nodes are the leaves (connected components of level sets) that carry critical
vertices.  Edges are the cylinder families of regular leaves between them;
every edge runs upward from its ``lower`` node to its ``upper`` node and
records the lifted value gained on the way (``increment``, always positive).

The graph is assembled one arc of regular values at a time: the leaves over an
arc midpoint are matched to the critical leaves at both arc ends through the
connected components of the two half-arc bands.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .levels import Band, level_set
from .torus_pl import CircleFunction, critical_vertices, to_fraction

__all__ = [
    "ReebNode", "ReebEdge", "ReebGraph", "LevelPoint", "TraceStep", "LeafTrace",
    "CycleEntry", "DecoratedCycle",
    "FibrationCase", "ValueNotRegular", "NoCycle", "Disconnected", "ReebInvariantError",
    "critical_values", "level_components", "reeb_graph", "first_betti",
    "decorated_cycle", "rotation_order", "least_rotation", "value_key",
]


class FibrationCase(Exception):
    """The function has no critical points, so it is a fibration over the circle."""


class ValueNotRegular(ValueError):
    pass


class NoCycle(Exception):
    """The Reeb graph is a tree."""


class Disconnected(Exception):
    pass


class ReebInvariantError(AssertionError):
    pass


# -- graph types ---------------------------------------------------------

@dataclass(frozen=True)
class ReebNode:
    id: int
    value: Fraction
    kind: str = "critical"  # "critical" | "marker"
    types: tuple[str, ...] = ()
    vertices: tuple[int, ...] = ()

    @property
    def label(self) -> str:
        return "+".join(self.types) if self.types else self.kind


@dataclass(frozen=True)
class ReebEdge:
    id: int
    lower: int
    upper: int
    increment: Fraction
    arcs: tuple[int, ...] = ()


@dataclass
class ReebGraph:
    nodes: tuple[ReebNode, ...]
    edges: tuple[ReebEdge, ...]
    exact: bool = True
    critical_values: tuple[Fraction, ...] = ()

    def degree(self, n: int) -> int:
        return sum((e.lower == n) + (e.upper == n) for e in self.edges)

    def incident(self, n: int) -> list[tuple[ReebEdge, int, Fraction]]:
        """``(edge, other end, increment seen from n)``; loops appear twice."""
        out = []
        for e in self.edges:
            if e.lower == n:
                out.append((e, e.upper, e.increment))
            if e.upper == n:
                out.append((e, e.lower, -e.increment))
        return out

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_edges(self) -> int:
        return len(self.edges)


# -- level sets ----------------------------------------------------------

@dataclass(frozen=True)
class LevelPoint:
    kind: str  # "edge" | "vertex"
    ident: int
    m: int = 0
    position: Fraction = Fraction(0)  # along the edge from its tail


@dataclass(frozen=True)
class TraceStep:
    triangle: int
    m: int
    entry: LevelPoint
    exit: LevelPoint


@dataclass(frozen=True)
class LeafTrace:
    """A closed regular leaf as a cyclic polyline through the triangulation.

    ``steps[k]`` crosses one triangle from ``points[k]`` to ``points[k+1]``
    (indices mod the length).
    """

    value: Fraction
    points: tuple[LevelPoint, ...]
    steps: tuple[TraceStep, ...]

    @property
    def closed(self) -> bool:
        return bool(self.steps) and self.steps[-1].exit == self.steps[0].entry

    @property
    def triangles(self) -> tuple[int, ...]:
        return tuple(s.triangle for s in self.steps)


def critical_values(f: CircleFunction) -> list[Fraction]:
    """Distinct values of critical vertices, increasing in ``[0, 1)``."""
    return sorted({f.theta[v] for v in critical_vertices(f)})


def _as_level_point(S, key, c) -> LevelPoint:
    if key[0] == "v":
        return LevelPoint("vertex", key[1])
    _, e, m = key
    tail = S.complex.edges[e][0]
    pos = Fraction(c + m * S.P - S.t[tail], S.d[e])
    return LevelPoint("edge", e, m, pos)


def level_components(f: CircleFunction, c) -> list[LeafTrace]:
    """All leaves over a regular value ``c`` as closed traces."""
    c, _ = to_fraction(c)
    c %= 1
    S = f.scaled(c.denominator)
    ci = S.to_int(c)
    if any(t == ci for t in S.t):
        raise ValueNotRegular(f"value {c} is attained at a vertex")
    lev = level_set(S, ci)
    adj = {}
    for tid, m, p, q in lev.segments:
        if q is None:
            raise ValueNotRegular(f"value {c} meets triangle {tid} in a point")
        adj.setdefault(p, []).append((tid, m, q))
        adj.setdefault(q, []).append((tid, m, p))
    traces = []
    for comp in lev.components:
        start = comp[0]
        if any(len(adj[p]) != 2 for p in comp):
            raise ReebInvariantError("regular leaf is not a simple closed curve")
        first = min(adj[start])
        pts, steps = [start], []
        prev_seg, cur = (first[0], first[1]), first[2]
        steps.append((first[0], first[1], start, cur))
        while cur != start:
            pts.append(cur)
            nxt = [s for s in adj[cur] if (s[0], s[1]) != prev_seg][0]
            steps.append((nxt[0], nxt[1], cur, nxt[2]))
            prev_seg, cur = (nxt[0], nxt[1]), nxt[2]
        conv = {p: _as_level_point(S, p, ci) for p in pts}
        traces.append(LeafTrace(
            c,
            tuple(conv[p] for p in pts),
            tuple(TraceStep(t, m, conv[a], conv[b]) for t, m, a, b in steps)))
    traces.sort(key=lambda tr: min((s.triangle, s.m) for s in tr.steps))
    return traces


# -- Reeb graph ----------------------------------------------------------

def _arc(S, cvals, k, levels):
    """Leaves over the midpoint of arc ``k`` and the critical-level leaves they touch."""
    P, K = S.P, len(cvals)
    lo = cvals[k]
    hi = cvals[k + 1] if k + 1 < K else cvals[0] + P
    mid = (lo + hi) // 2
    mid_c = mid % P
    mid_level = level_set(S, mid_c)
    down, up = Band(S, lo, mid), Band(S, mid, hi)

    def roots(band, lev):
        out = {}
        for idx, comp in enumerate(lev.components):
            r = {band.locate(p, lev.c) for p in comp}
            if len(r) != 1:
                raise ReebInvariantError("leaf split across band components")
            (r,) = r
            if r in out:
                raise ReebInvariantError("two critical-level leaves share a band component")
            out[r] = idx
        return out

    low_roots = roots(down, levels[k])
    up_roots = roots(up, levels[(k + 1) % K])
    segs = []
    for comp in mid_level.components:
        p = comp[0]
        try:
            segs.append((low_roots[down.locate(p, mid_c)], up_roots[up.locate(p, mid_c)]))
        except KeyError:
            raise ReebInvariantError("regular leaf not attached to a critical level") from None
    return hi - lo, segs


def _map(fn, items, workers):
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]


def reeb_graph(f: CircleFunction, workers: int = 1) -> ReebGraph:
    """Kronrod-Reeb graph of ``f``.

    Raises :class:`FibrationCase` when ``f`` has no critical vertex.  ``workers``
    only changes how arcs are scheduled, never the result.
    """
    types = f.vertex_types
    crit = [v for v, t in enumerate(types) if t.is_critical]
    if not crit:
        raise FibrationCase("no critical points: f is a fibration over the circle")
    S = f.scaled()
    P = S.P
    cvals = sorted({S.t[v] for v in crit})
    K = len(cvals)
    levels = _map(lambda c: level_set(S, c), cvals, workers)
    arcs = _map(lambda k: _arc(S, cvals, k, levels), range(K), workers)

    critical_comp = {}
    for k, lev in enumerate(levels):
        for idx, comp in enumerate(lev.components):
            vs = sorted(p[1] for p in comp if p[0] == "v" and types[p[1]].is_critical)
            if vs:
                critical_comp[(k, idx)] = vs

    above, below = {}, {}
    for k, (_, segs) in enumerate(arcs):
        for s, (lo_idx, hi_idx) in enumerate(segs):
            above.setdefault((k, lo_idx), []).append((k, s))
            below.setdefault(((k + 1) % K, hi_idx), []).append((k, s))
    for key in set(above) | set(below):
        if key not in critical_comp and (len(above.get(key, ())) != 1 or len(below.get(key, ())) != 1):
            raise ReebInvariantError(f"regular leaf {key} is not a cylinder joint")

    order = sorted(critical_comp, key=lambda kc: (cvals[kc[0]], levels[kc[0]].components[kc[1]][0]))
    node_id = {kc: i for i, kc in enumerate(order)}
    nodes = tuple(
        ReebNode(i, Fraction(cvals[k], P), "critical",
                 tuple(sorted(types[v].label for v in critical_comp[(k, idx)])),
                 tuple(critical_comp[(k, idx)]))
        for i, (k, idx) in enumerate(order))

    used = set()
    raw_edges = []
    for start in order:
        for k, s in above.get(start, ()):
            incr, arcs_seen = 0, []
            cur_arc, cur_seg = k, s
            while True:
                used.add((cur_arc, cur_seg))
                incr += arcs[cur_arc][0]
                arcs_seen.append(cur_arc)
                top = ((cur_arc + 1) % K, arcs[cur_arc][1][cur_seg][1])
                if top in critical_comp:
                    break
                cur_arc, cur_seg = above[top][0]
            raw_edges.append((node_id[start], node_id[top], Fraction(incr, P), tuple(arcs_seen)))
    total = sum(len(segs) for _, segs in arcs)
    if len(used) != total:
        raise ReebInvariantError("cylinder chain without critical ends")
    raw_edges.sort()
    edges = tuple(ReebEdge(i, lo, hi, inc, a) for i, (lo, hi, inc, a) in enumerate(raw_edges))
    g = ReebGraph(nodes, edges, f.exact, tuple(Fraction(c, P) for c in cvals))
    if first_betti(g) > 1:
        raise ReebInvariantError("Reeb graph of a torus function has b1 > 1")
    return g


def first_betti(g: ReebGraph) -> int:
    if not g.nodes:
        raise Disconnected("empty graph")
    adj = {n.id: set() for n in g.nodes}
    for e in g.edges:
        adj[e.lower].add(e.upper)
        adj[e.upper].add(e.lower)
    seen = {g.nodes[0].id}
    stack = [g.nodes[0].id]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if len(seen) != len(g.nodes):
        raise Disconnected(f"{len(g.nodes) - len(seen)} nodes unreachable")
    return len(g.edges) - len(g.nodes) + 1


# -- decorated cycle ------------------------------------------------------

def value_key(x: Fraction, exact: bool = True) -> str:
    """Canonical text of a value: exact fraction, or rounded to 1e-9 for float input."""
    if exact:
        return str(Fraction(x))
    r = round(float(x), 9)
    return f"{r + 0.0:.9f}"


def least_rotation(seq: Sequence) -> int:
    """Start index of the lexicographically least rotation (Booth's algorithm)."""
    n = len(seq)
    if n == 0:
        return 0
    s = list(seq) + list(seq)
    fail = [-1] * len(s)
    k = 0
    for j in range(1, len(s)):
        sj = s[j]
        i = fail[j - k - 1]
        while i != -1 and sj != s[k + i + 1]:
            if sj < s[k + i + 1]:
                k = j - i - 1
            i = fail[i]
        if sj != s[k + i + 1]:
            if sj < s[k]:
                k = j
            fail[j - k] = -1
        else:
            fail[j - k] = i + 1
    return k % n


@dataclass(frozen=True)
class CycleEntry:
    node: int
    value: Fraction
    code: str
    increment: Fraction  # to the next node along the cycle

    def token(self, exact: bool = True) -> str:
        return f"{value_key(self.value, exact)};{self.code};{value_key(self.increment, exact)}"


@dataclass(frozen=True)
class DecoratedCycle:
    """The unique cycle of a Reeb graph with its hanging-forest decorations.

    Entries are listed from the canonical start (least rotation) in the
    canonical direction (positive total increment; for zero total the
    direction whose least rotation is smaller).
    """

    entries: tuple[CycleEntry, ...]
    edges: tuple[int, ...]
    exact: bool = True
    reflection_symmetric: bool = False

    @property
    def length(self) -> int:
        return len(self.entries)

    @property
    def tokens(self) -> tuple[str, ...]:
        return tuple(e.token(self.exact) for e in self.entries)

    @property
    def total_increment(self) -> Fraction:
        return sum((e.increment for e in self.entries), Fraction(0))

    def rotated(self, r: int) -> "DecoratedCycle":
        r %= self.length
        return DecoratedCycle(self.entries[r:] + self.entries[:r],
                              self.edges[r:] + self.edges[:r],
                              self.exact, self.reflection_symmetric)


def _core(g: ReebGraph) -> tuple[set, set]:
    deg = {n.id: g.degree(n.id) for n in g.nodes}
    alive_e = {e.id for e in g.edges}
    alive_n = set(deg)
    stack = [n for n, d in deg.items() if d <= 1]
    by_node = {n.id: [e for e in g.edges if n.id in (e.lower, e.upper)] for n in g.nodes}
    while stack:
        n = stack.pop()
        if n not in alive_n:
            continue
        alive_n.discard(n)
        for e in by_node[n]:
            if e.id in alive_e:
                alive_e.discard(e.id)
                other = e.upper if e.lower == n else e.lower
                deg[other] -= 1
                if deg[other] <= 1 and other in alive_n:
                    stack.append(other)
    return alive_n, alive_e


def _hanging_code(g: ReebGraph, node: int, via: Optional[int], cycle_edges: set) -> str:
    n = g.nodes[node]
    kids = []
    for e, other, inc in g.incident(node):
        if e.id in cycle_edges or e.id == via:
            continue
        kids.append(f"{value_key(inc, g.exact)}>{_hanging_code(g, other, e.id, cycle_edges)}")
    kids.sort()
    return f"[{value_key(n.value, g.exact)}:{n.label}{{{','.join(kids)}}}]"


def decorated_cycle(g: ReebGraph) -> DecoratedCycle:
    core_nodes, core_edges = _core(g)
    if not core_edges:
        raise NoCycle("the Reeb graph is a tree")
    by_id = {e.id: e for e in g.edges}
    start = min(core_nodes)
    nodes, edges, incs = [], [], []
    cur, prev_edge = start, None
    while True:
        eid = min(e.id for e in g.edges
                  if e.id in core_edges and cur in (e.lower, e.upper) and e.id != prev_edge)
        e = by_id[eid]
        if e.lower == cur:
            nxt, inc = e.upper, e.increment
        else:
            nxt, inc = e.lower, -e.increment
        nodes.append(cur)
        edges.append(eid)
        incs.append(inc)
        cur, prev_edge = nxt, eid
        if cur == start:
            break
    if len(edges) != len(core_edges):
        raise ReebInvariantError("cycle core is not a single cycle")
    codes = {n: _hanging_code(g, n, None, core_edges) for n in nodes}
    L = len(nodes)

    def entries(forward: bool):
        if forward:
            return [CycleEntry(nodes[p], g.nodes[nodes[p]].value, codes[nodes[p]], incs[p])
                    for p in range(L)], list(edges)
        out, eds = [], []
        for p in range(L):
            n = nodes[(-p) % L]
            q = (-p - 1) % L
            out.append(CycleEntry(n, g.nodes[n].value, codes[n], -incs[q]))
            eds.append(edges[q])
        return out, eds

    def canonical(forward: bool):
        ents, eds = entries(forward)
        toks = [e.token(g.exact) for e in ents]
        r = least_rotation(toks)
        return ents[r:] + ents[:r], eds[r:] + eds[:r], toks[r:] + toks[:r]

    fwd, bwd = canonical(True), canonical(False)
    total = sum(incs, Fraction(0))
    if total > 0:
        chosen = fwd
    elif total < 0:
        chosen = bwd
    else:
        chosen = min(fwd, bwd, key=lambda c: c[2])
    return DecoratedCycle(tuple(chosen[0]), tuple(chosen[1]), g.exact,
                          reflection_symmetric=fwd[2] == bwd[2])


def rotation_order(dc: DecoratedCycle) -> int:
    """Number of cyclic rotations preserving every value, code and increment."""
    toks = dc.tokens
    L = len(toks)
    return sum(1 for r in range(L) if toks[r:] + toks[:r] == toks)
