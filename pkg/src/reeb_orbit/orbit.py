"""From a circle-valued function to the symbolic fundamental group of its orbit.

The pipeline is: critical census, Kronrod-Reeb graph, decorated cycle and its
rotation order ``n``, cut into ``n`` equal segments, and finally the answer
``pi0S'(f|Q,X) wr_n Z`` as a :mod:`~reeb_orbit.group_expr` expression.
"""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .group_expr import (Atom, GroupExpr, Product, WreathZ, Zfree, canonicalize,
                         phi_kernel, render, render_full)
from .reeb import (DecoratedCycle, FibrationCase, ReebGraph, ReebInvariantError,
                   decorated_cycle, first_betti, level_components, reeb_graph,
                   rotation_order, value_key)
from .torus_pl import CircleFunction, TorusComplex, cohomology_class, index_sum

__all__ = [
    "NotNullHomotopic", "WrongBranch", "RealLift", "lift_null_homotopic",
    "Segment", "cycle_segments", "OrbitReport", "analyze", "kernel_report",
    "symbolic_phi_check", "CYLINDER_ATOM", "COMPLEMENT_ATOM",
]

CYLINDER_ATOM = "pi0S'(f|Q,X)"
COMPLEMENT_ATOM = "pi0S'(f,V)"

FIBRATION = "Fibration"
TREE = "NullHomotopicTree"
CYCLE = "CycleCase"

MODEL_NOTES = (
    "n is modeled as the rotation order of the decorated Reeb cycle",
    "cylinder atoms are opaque: only their decoration codes are compared",
    "pi_2 of the orbit vanishes; pi_k agrees with pi_k(T^2) = 0 for k >= 3",
)


class NotNullHomotopic(ValueError):
    def __init__(self, cls):
        super().__init__(f"function has cohomology class {tuple(cls)}, not (0, 0)")
        self.cls = tuple(cls)


class WrongBranch(ValueError):
    pass


# -- real lift --------------------------------------------------------------

@dataclass(frozen=True)
class RealLift:
    complex: TorusComplex
    values: tuple[Fraction, ...]

    def check(self, f: CircleFunction) -> bool:
        """``frac(F(v)) = theta(v)`` and ``F(w) - F(u) = delta(e)`` everywhere, exactly."""
        if any(F % 1 != t for F, t in zip(self.values, f.theta)):
            return False
        return all(self.values[w] - self.values[u] == f.delta[e]
                   for e, (u, w) in enumerate(self.complex.edges))


def lift_null_homotopic(f: CircleFunction, seed: Optional[int] = None) -> RealLift:
    """Integrate the edge increments along a spanning tree rooted at vertex ``(0, 0)``.

    ``seed=None`` uses breadth-first order; an integer picks a random spanning
    tree (randomized depth-first search), which must give the same lift.
    """
    cls = cohomology_class(f)
    if cls != (0, 0):
        raise NotNullHomotopic(cls)
    c = f.complex
    vals: list[Optional[Fraction]] = [None] * c.n_vertices
    vals[0] = f.theta[0]
    rng = random.Random(seed) if seed is not None else None
    frontier = [0]
    while frontier:
        u = frontier.pop(rng.randrange(len(frontier))) if rng else frontier.pop(0)
        nbrs = list(c.link(u))
        if rng:
            rng.shuffle(nbrs)
        for w, e, s in nbrs:
            if vals[w] is None:
                vals[w] = vals[u] + (f.delta[e] if s > 0 else -f.delta[e])
                frontier.append(w)
    lift = RealLift(c, tuple(vals))
    if not lift.check(f):
        raise ReebInvariantError("lift is path dependent despite class (0, 0)")
    return lift


# -- cycle segments ---------------------------------------------------------

@dataclass(frozen=True)
class Segment:
    """One of the ``n`` cylinders ``Q_i`` between consecutive cut curves.

    ``x_minus`` and ``x_plus`` mark the boundary bands as
    ``(cycle edge id, lifted offset of the cut from the edge's start)``.
    """

    index: int
    start: int                  # position in the decorated cycle
    nodes: tuple[int, ...]
    tokens: tuple[str, ...]
    edges: tuple[int, ...]
    x_minus: tuple[int, Fraction]
    x_plus: tuple[int, Fraction]

    @property
    def code(self) -> str:
        return "|".join(self.tokens)


def cycle_segments(g: ReebGraph, dc: DecoratedCycle, n: int) -> list[Segment]:
    """Cut ``dc`` at the orbit of the canonical start under rotation by ``L/n``."""
    L = dc.length
    if n < 1 or L % n:
        raise ValueError(f"n = {n} does not divide the cycle length {L}")
    step = L // n
    toks = dc.tokens
    segs = []
    for s in range(n):
        a = s * step
        idx = [(a + p) % L for p in range(step)]
        before = dc.edges[(a - 1) % L]
        last = dc.edges[idx[-1]]
        segs.append(Segment(
            s, a,
            tuple(dc.entries[p].node for p in idx),
            tuple(toks[p] for p in idx),
            tuple(dc.edges[p] for p in idx),
            (before, abs(dc.entries[(a - 1) % L].increment) / 2),
            (last, abs(dc.entries[idx[-1]].increment) / 2),
        ))
    return segs


# -- report -----------------------------------------------------------------

@dataclass
class OrbitReport:
    cls: tuple[int, int]
    census: dict
    branch: str
    reeb: Optional[dict] = None
    segments: list = field(default_factory=list)
    cut: Optional[dict] = None
    result: Optional[GroupExpr] = None
    kernel: Optional[GroupExpr] = None
    kernel_alt: Optional[GroupExpr] = None
    lift: Optional[RealLift] = None
    notes: tuple[str, ...] = MODEL_NOTES
    graph: Optional[ReebGraph] = None
    cycle: Optional[DecoratedCycle] = None
    exact: bool = True

    @property
    def n(self) -> Optional[int]:
        return self.reeb["n"] if self.reeb and "n" in self.reeb else None

    def to_dict(self) -> dict:
        """Plain, id-free data in a fixed key order (used for the text report)."""
        vk = lambda x: value_key(x, self.exact)  # noqa: E731
        out = {
            "class": list(self.cls),
            "census": dict(self.census),
            "branch": self.branch,
        }
        if self.reeb is not None:
            out["reeb"] = dict(self.reeb)
        if self.cycle is not None:
            out["cycle"] = {
                "tokens": list(self.cycle.tokens),
                "total_increment": vk(self.cycle.total_increment),
                "reflection_symmetric": self.cycle.reflection_symmetric,
            }
        if self.segments:
            out["segments"] = [
                {"index": s.index, "start": s.start, "code": s.code,
                 "x_minus_offset": vk(s.x_minus[1]), "x_plus_offset": vk(s.x_plus[1])}
                for s in self.segments]
        if self.cut is not None:
            out["cut"] = dict(self.cut)
        if self.result is not None:
            out["result"] = render(self.result)
            out["footnotes"] = render_full(self.result).splitlines()[1:]
            out["kernel"] = render(self.kernel)
            out["kernel_alt"] = render(self.kernel_alt)
        if self.lift is not None:
            out["real_lift"] = {"base_value": vk(self.lift.values[0]),
                                "range": [vk(min(self.lift.values)), vk(max(self.lift.values))]}
        out["notes"] = list(self.notes)
        return out


def _census(f: CircleFunction) -> dict:
    counts = Counter(t.label for t in f.vertex_types if t.is_critical)
    out = {k: counts[k] for k in sorted(counts)}
    out["total"] = sum(counts.values())
    out["index_sum"] = index_sum(f)
    return out


def _cut(f: CircleFunction, g: ReebGraph, dc: DecoratedCycle) -> dict:
    """A regular level on the cycle edge entering the canonical start."""
    e = next(x for x in g.edges if x.id == dc.edges[-1])
    K = len(g.critical_values)
    k = e.arcs[0]
    lo = g.critical_values[k]
    hi = g.critical_values[(k + 1) % K] + (1 if k + 1 == K else 0)
    # first gap between vertex values inside the arc, so no vertex sits on the level
    inside = sorted(_open(lo, hi, f.theta))
    pts = [lo] + inside + [hi]
    c = ((pts[0] + pts[1]) / 2) % 1
    on_cycle = sum(1 for x in g.edges if x.id in set(dc.edges) and k in x.arcs)
    return {"value": value_key(c, g.exact), "leaves": len(level_components(f, c)),
            "leaves_on_cycle": on_cycle}


def _open(lo, hi, theta) -> set:
    return {t + (1 if t < lo else 0) for t in theta if lo < t + (1 if t < lo else 0) < hi}


def analyze(f: CircleFunction, workers: int = 1) -> OrbitReport:
    cls = cohomology_class(f)
    census = _census(f)
    try:
        g = reeb_graph(f, workers=workers)
    except FibrationCase:
        return OrbitReport(cls, census, FIBRATION, exact=f.exact,
                           notes=MODEL_NOTES + ("no critical points: out of scope",))
    b1 = first_betti(g)
    summary = {"nodes": g.n_nodes, "edges": g.n_edges, "b1": b1}
    if b1 == 0:
        if cls != (0, 0):
            raise ReebInvariantError(f"tree Reeb graph for class {cls}")
        return OrbitReport(cls, census, TREE, summary, lift=lift_null_homotopic(f),
                           graph=g, exact=f.exact,
                           notes=MODEL_NOTES + ("reduce to the real-valued lift",))
    dc = decorated_cycle(g)
    n = rotation_order(dc)
    summary.update({"cycle_length": dc.length, "n": n})
    segs = cycle_segments(g, dc, n)
    if len({s.code for s in segs}) != 1:
        raise ReebInvariantError("segment codes differ")
    atom = Atom(CYLINDER_ATOM, segs[0].code)
    result = canonicalize(WreathZ(atom, n))
    kernel = canonicalize(Product([atom] * n))
    alt = canonicalize(Product([Zfree(1), Atom(COMPLEMENT_ATOM, "|".join(dc.tokens))]))
    notes = MODEL_NOTES + (
        "kernel_alt: slide factor Z times the complement stabilizer; "
        "its agreement with kernel is not checked here",)
    return OrbitReport(cls, census, CYCLE, summary, segs, _cut(f, g, dc), result, kernel,
                       alt, graph=g, cycle=dc, exact=f.exact, notes=notes)


def kernel_report(report: OrbitReport) -> GroupExpr:
    """The ``Z x pi0S'(f,V)`` presentation of the kernel of the shift map."""
    if report.branch != CYCLE:
        raise WrongBranch(f"kernel presentation needs {CYCLE}, got {report.branch}")
    return report.kernel_alt


def symbolic_phi_check(report: OrbitReport) -> bool:
    """The shift projection of ``result`` has kernel equal to the product of the ``n`` atoms."""
    if report.branch != CYCLE:
        raise WrongBranch(report.branch)
    return canonicalize(phi_kernel(report.result)) == report.kernel
