import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from reeb_orbit import orbit
from reeb_orbit.corpus import random_function
from reeb_orbit.group_expr import Atom, Product, WreathZ, Zfree, canonicalize, render
from reeb_orbit.orbit import (COMPLEMENT_ATOM, CYLINDER_ATOM, NotNullHomotopic, WrongBranch,
                              analyze, cycle_segments, kernel_report, lift_null_homotopic,
                              symbolic_phi_check)
from reeb_orbit.reeb import (CycleEntry, DecoratedCycle, ReebEdge, ReebGraph,
                             ReebInvariantError, ReebNode, level_components, rotation_order)
from reeb_orbit.samples import bump_function, doubled_bump, fibration_like, two_peak


def test_two_peak_report():
    r = analyze(two_peak())
    assert r.branch == "CycleCase"
    assert r.reeb["cycle_length"] == 2 and r.n == 1
    assert render(r.result) == "pi0S'(f|Q,X) x Z"
    assert render(r.kernel) == CYLINDER_ATOM
    assert r.census["index_sum"] == 0 and r.census["total"] == 4
    assert len(r.segments) == 1 and r.segments[0].start == 0


def test_doubled_bump_class_2_0_report():
    r = analyze(doubled_bump((2, 0)))
    assert r.n == 2
    assert render(r.result) == "pi0S'(f|Q,X) wr_2 Z"
    assert render(r.kernel) == "pi0S'(f|Q,X) x pi0S'(f|Q,X)"
    assert [s.start for s in r.segments] == [0, 2]
    assert r.segments[0].code == r.segments[1].code


def test_fibration_branch():
    r = analyze(fibration_like())
    assert r.branch == "Fibration" and r.result is None
    assert r.to_dict()["branch"] == "Fibration"


def test_cut_level_is_regular_and_on_the_cycle():
    for f in [two_peak(), bump_function(), doubled_bump((2, 0))]:
        r = analyze(f)
        c = Fraction(r.cut["value"])
        assert all(t != c for t in f.theta)
        assert len(level_components(f, c)) == r.cut["leaves"]
        assert r.cut["leaves_on_cycle"] >= 1


def test_report_is_translation_invariant():
    for f in [two_peak(), doubled_bump((2, 0))]:
        base = analyze(f).to_dict()
        for di, dj in [(1, 2), (5, 0)]:
            assert analyze(f.translated(di, dj)).to_dict() == base


def test_kernel_presentations():
    r = analyze(doubled_bump((2, 0)))
    alt = kernel_report(r)
    assert isinstance(alt, Product) and Zfree(1) in alt.factors
    assert any(isinstance(a, Atom) and a.name == COMPLEMENT_ATOM for a in alt.factors)
    assert symbolic_phi_check(r)
    r1 = analyze(two_peak())
    assert render(kernel_report(r1)) == "pi0S'(f,V) x Z"
    assert symbolic_phi_check(r1)
    with pytest.raises(WrongBranch):
        kernel_report(analyze(fibration_like()))
    with pytest.raises(WrongBranch):
        symbolic_phi_check(analyze(fibration_like()))


def test_result_matches_wreath_of_segment_atom():
    r = analyze(bump_function())
    atom = Atom(CYLINDER_ATOM, r.segments[0].code)
    assert r.result == canonicalize(WreathZ(atom, r.n))


# -- real lift ------------------------------------------------------------------

@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_lift_is_exact_and_independent_of_spanning_tree(seed):
    f = random_function(random.Random(seed), sizes=(3, 8), classes=[(0, 0)])
    a = lift_null_homotopic(f)
    assert a.check(f)
    assert lift_null_homotopic(f, seed=seed).values == a.values


def test_lift_refuses_nonzero_class():
    with pytest.raises(NotNullHomotopic) as info:
        lift_null_homotopic(bump_function())
    assert info.value.cls == (1, 0)


# -- tree branch (not produced by torus inputs; injected here) -------------------

def _tree(value=Fraction(0)):
    return ReebGraph((ReebNode(0, value, types=("min",)), ReebNode(1, value + Fraction(1, 2), types=("max",))),
                     (ReebEdge(0, 0, 1, Fraction(1, 2)),))


def test_tree_branch_for_null_homotopic_input(monkeypatch):
    monkeypatch.setattr(orbit, "reeb_graph", lambda f, workers=1: _tree())
    f = two_peak()
    r = analyze(f)
    assert r.branch == "NullHomotopicTree"
    assert r.lift.check(f) and r.result is None
    with pytest.raises(WrongBranch):
        kernel_report(r)


def test_tree_for_nonzero_class_is_an_invariant_violation(monkeypatch):
    monkeypatch.setattr(orbit, "reeb_graph", lambda f, workers=1: _tree())
    with pytest.raises(ReebInvariantError):
        analyze(bump_function())


# -- segments -------------------------------------------------------------------

def _cycle(codes, incs):
    entries = tuple(CycleEntry(i, Fraction(0), c, Fraction(x)) for i, (c, x) in enumerate(zip(codes, incs)))
    return DecoratedCycle(entries, tuple(range(10, 10 + len(codes))))


def test_segments_n_equal_one_is_whole_cycle():
    dc = _cycle("abc", [1, 2, 3])
    (s,) = cycle_segments(None, dc, 1)
    assert s.tokens == dc.tokens and s.start == 0
    assert s.x_minus == (12, Fraction(3, 2)) and s.x_plus == (12, Fraction(3, 2))


def test_segments_of_period_two_cycle_of_length_six():
    dc = _cycle("ababab", [1, 2] * 3)
    assert rotation_order(dc) == 3
    segs = cycle_segments(None, dc, 3)
    assert [s.start for s in segs] == [0, 2, 4]
    assert len({s.code for s in segs}) == 1
    assert [s.edges for s in segs] == [(10, 11), (12, 13), (14, 15)]
    # consecutive segments share the cut band
    for a, b in zip(segs, segs[1:] + segs[:1]):
        assert a.x_plus == b.x_minus


def test_segments_reject_non_divisor():
    with pytest.raises(ValueError):
        cycle_segments(None, _cycle("abab", [1] * 4), 3)
