import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from reeb_orbit.corpus import random_corpus
from reeb_orbit.samples import bump_function, fibration_like, torus_height
from reeb_orbit.torus_pl import (CircleFunction, CocycleError, DimensionTooSmall, FlatEdge,
                                 build_function, build_grid_torus, classify_vertex,
                                 cohomology_class, critical_vertices, index_sum, to_fraction)


def test_grid_counts_and_euler_characteristic():
    for N, M in [(3, 3), (4, 7), (16, 5)]:
        c = build_grid_torus(N, M)
        assert (c.n_vertices, c.n_edges, c.n_triangles) == (N * M, 3 * N * M, 2 * N * M)
        assert c.euler_characteristic() == 0


def test_too_small_grid_rejected():
    with pytest.raises(DimensionTooSmall):
        build_grid_torus(2, 5)


def test_every_edge_has_two_faces_and_links_are_hexagons():
    c = build_grid_torus(4, 3)
    assert all(len(c.edge_faces(e)) == 2 for e in range(c.n_edges))
    for v in range(c.n_vertices):
        nbrs = [w for w, _, _ in c.link(v)]
        assert len(set(nbrs)) == 6
        i, j = c.coords(v)
        expected = [(i + 1, j), (i + 1, j + 1), (i, j + 1), (i - 1, j), (i - 1, j - 1), (i, j - 1)]
        assert nbrs == [c.vid(a, b) for a, b in expected]


def test_consecutive_link_vertices_span_triangles():
    c = build_grid_torus(5, 4)
    tris = {frozenset(t) for t in c.triangles}
    for v in range(c.n_vertices):
        nbrs = [w for w, _, _ in c.link(v)]
        for k in range(6):
            assert frozenset((v, nbrs[k], nbrs[(k + 1) % 6])) in tris


@pytest.mark.parametrize("cls", [(0, 0), (1, 0), (0, 1), (2, 1), (-1, 3)])
def test_cohomology_class_of_linear_representative(cls):
    f = build_function(build_grid_torus(5, 4), cls,
                       lambda i, j: Fraction(i * i + 3 * j, 1000) + Fraction(j * i, 977))
    assert cohomology_class(f) == cls
    # periods do not depend on the row or column used
    assert all(cohomology_class(f, row=r, col=r % 5) == cls for r in range(4))


def test_flat_edge_reported_with_endpoints():
    with pytest.raises(FlatEdge) as info:
        build_function(build_grid_torus(4, 4), (1, 0))
    assert info.value.edge == 1   # the "up" edge at (0, 0)
    assert "(0, 0)" in str(info.value)


def test_float_input_is_kept_exact_but_flagged():
    f = build_function(build_grid_torus(3, 3), (0, 0), lambda i, j: 0.1 * i + 0.01 * j + 0.003 * i * j)
    assert not f.exact
    q, ok = to_fraction(0.1)
    assert not ok and q == Fraction(0.1)
    assert to_fraction("3/7") == (Fraction(3, 7), True)
    with pytest.raises(ValueError):
        to_fraction(float("nan"))


def test_from_values_roundtrip_and_errors():
    f = torus_height()
    g = CircleFunction.from_values(f.complex, f.theta, f.delta)
    assert g.theta == f.theta and g.delta == f.delta
    bad = list(f.delta)
    bad[0] += 1          # breaks closure on the faces around edge 0
    with pytest.raises(CocycleError):
        CircleFunction.from_values(f.complex, f.theta, bad)
    shifted = list(f.theta)
    shifted[0] = (shifted[0] + Fraction(1, 3)) % 1
    with pytest.raises(CocycleError):
        CircleFunction.from_values(f.complex, shifted, f.delta)


def test_classification_on_cosine_sample():
    f = torus_height(8, 8)
    labels = sorted(classify_vertex(f, v).label for v in critical_vertices(f))
    assert labels == ["max", "min", "saddle4", "saddle4"]
    # the lift lies in (-1/2, 1/2), so shifting by 1/2 makes theta monotone in it
    top = max(range(f.complex.n_vertices), key=lambda v: (f.theta[v] + Fraction(1, 2)) % 1)
    assert classify_vertex(f, top).label == "max"


def test_vertex_type_index():
    f = torus_height(8, 8)
    idx = {classify_vertex(f, v).label: classify_vertex(f, v).index for v in critical_vertices(f)}
    assert idx == {"max": 1, "min": 1, "saddle4": -1}


def test_fibration_sample_has_no_critical_vertex():
    assert critical_vertices(fibration_like()) == []


def test_index_sum_zero_on_random_corpus():
    for f in random_corpus(7, 40):
        assert index_sum(f) == 0


@settings(max_examples=30, deadline=None)
@given(st.integers(3, 7), st.integers(3, 7), st.sampled_from([(0, 0), (1, 0), (1, 1), (3, -2)]),
       st.integers(0, 10**6))
def test_index_sum_property(N, M, cls, seed):
    rng = random.Random(seed)
    rows = [[Fraction(rng.randint(-999, 999), 1000) for _ in range(N)] for _ in range(M)]
    try:
        f = build_function(build_grid_torus(N, M), cls, rows)
    except FlatEdge:
        return
    assert index_sum(f) == 0
    assert cohomology_class(f) == cls


def test_translation_preserves_class_and_census():
    f = bump_function()
    g = f.translated(3, 2)
    assert cohomology_class(g) == cohomology_class(f)
    assert sorted(t.label for t in g.vertex_types) == sorted(t.label for t in f.vertex_types)
    v = f.complex.vid(3, 2)
    assert g.theta[0] == f.theta[v]


def test_scaled_values_are_even_integers():
    f = torus_height()
    S = f.scaled()
    assert S.P % 2 == 0
    assert all(t % 2 == 0 for t in S.t)
    assert all(Fraction(t, S.P) == th for t, th in zip(S.t, f.theta))
    # every triangle's local lifts agree with the edge increments
    for (verts, lifts, eds, lo, hi) in S.tris:
        for e, a, b, K in eds:
            u, w = f.complex.edges[e]
            assert lifts[b] - lifts[a] == S.d[e] * (1 if verts[a] == u else -1)
        assert lo == min(lifts) and hi == max(lifts)


def test_value_is_float_for_float_input():
    f = build_function(build_grid_torus(3, 3), (0, 0), lambda i, j: 0.25 * math.sin(i + 2.7 * j + 0.3 * i * j))
    assert isinstance(f.value(0), float)
