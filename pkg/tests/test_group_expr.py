import pytest
from hypothesis import given, settings, strategies as st

from reeb_orbit.group_expr import (Atom, Product, Trivial, WreathZ, Zfree, abelianization,
                                   canonicalize, parse, phi_kernel, render, render_full)

A = Atom("A", "d")
Q = Atom("pi0S'(f|Q,X)", "[1/4:saddle4{}]")

atoms = st.builds(Atom, st.sampled_from(["A", "B", "pi0S'(f|Q,X)", "H_2"]),
                  st.sampled_from(["", "d", "[0:max{}]", "x y"]))
leaves = st.one_of(st.just(Trivial()), st.builds(Zfree, st.integers(1, 3)), atoms)
exprs = st.recursive(
    leaves,
    lambda inner: st.one_of(
        st.builds(Product, st.lists(inner, max_size=4)),
        st.builds(WreathZ, inner, st.integers(1, 4))),
    max_leaves=12)


def test_canonicalize_examples():
    assert canonicalize(Product([Trivial(), A])) == A
    assert canonicalize(WreathZ(Trivial(), 5)) == Zfree(1)
    assert canonicalize(WreathZ(A, 1)) == Product((A, Zfree(1)))


def test_canonical_product_flattens_and_merges_free_part():
    e = Product([Zfree(2), Product([A, Trivial(), Zfree(1)]), Product([])])
    assert canonicalize(e) == Product((A, Zfree(3)))
    assert canonicalize(Product([Trivial(), Product([])])) == Trivial()


def test_atoms_with_same_name_but_different_descriptors_stay_distinct():
    e = canonicalize(Product([Atom("A", "1"), Atom("A", "2"), Atom("A", "1")]))
    assert len(e.factors) == 3
    assert render(e) == "A#1 x A#1 x A#2"
    assert render_full(e).splitlines()[1:] == ["[A#1] 1", "[A#2] 2"]


def test_abelianization_examples():
    assert abelianization(WreathZ(Zfree(1), 2)) == Zfree(2)
    assert abelianization(Trivial()) == Trivial()
    assert abelianization(Product([Zfree(2), Zfree(3)])) == Zfree(5)
    assert abelianization(WreathZ(A, 3)) == Product((Atom("ab(A)", "d"), Zfree(1)))


def test_render_examples():
    assert render(Zfree(2)) == "Z^2"
    assert render(WreathZ(Atom("pi0S'(f|Q,X)", "d"), 3)) == "pi0S'(f|Q,X) wr_3 Z"
    assert render(Product([])) == "1"


def test_golden_strings():
    assert render(canonicalize(WreathZ(Q, 1))) == "pi0S'(f|Q,X) x Z"
    assert render_full(canonicalize(WreathZ(Q, 2))) == \
        "pi0S'(f|Q,X) wr_2 Z\n[pi0S'(f|Q,X)] [1/4:saddle4{}]"
    assert render(WreathZ(WreathZ(A, 2), 3)) == "(A wr_2 Z) wr_3 Z"
    assert render(WreathZ(Product([A, Zfree(1)]), 2)) == "(A x Z) wr_2 Z"
    assert render(Product([WreathZ(A, 2), Zfree(1)])) == "(A wr_2 Z) x Z"


def test_phi_kernel_drops_the_shift():
    assert phi_kernel(canonicalize(WreathZ(A, 3))) == Product((A, A, A))
    assert phi_kernel(canonicalize(WreathZ(A, 1))) == A
    assert phi_kernel(Zfree(1)) == Trivial()
    with pytest.raises(ValueError):
        phi_kernel(A)


@pytest.mark.parametrize("text", ["pi0S'(f|Q,X) wr_2 Z", "pi0S'(f|Q,X) x Z", "Z^2", "1", "Z",
                                  "(A x B) wr_3 Z", "ab(pi0S'(f|Q,X)) x Z"])
def test_parse_of_rendered_text(text):
    assert render(parse(text)) == text


def test_bad_inputs():
    for name in ["x", "Z", "1", "wr_2", "A#1", "A(", "2A", ""]:
        with pytest.raises(ValueError):
            Atom(name)
    with pytest.raises(ValueError):
        Zfree(0)
    with pytest.raises(ValueError):
        WreathZ(A, 0)
    for text in ["A x", "A wr_2", "(A", "A B"]:
        with pytest.raises(ValueError):
            parse(text)


@settings(max_examples=1000, deadline=None)
@given(exprs)
def test_canonicalize_is_idempotent(e):
    c = canonicalize(e)
    assert canonicalize(c) == c


@settings(max_examples=500, deadline=None)
@given(exprs)
def test_abelianization_commutes_with_canonicalize(e):
    assert abelianization(canonicalize(e)) == canonicalize(abelianization(e))


@settings(max_examples=500, deadline=None)
@given(exprs)
def test_parse_inverts_full_rendering(e):
    c = canonicalize(e)
    assert parse(render_full(c)) == c


@settings(max_examples=200, deadline=None)
@given(st.lists(exprs, min_size=2, max_size=30))
def test_render_is_injective_on_canonical_forms(es):
    seen = {}
    for e in es:
        c = canonicalize(e)
        text = render_full(c)
        assert seen.setdefault(text, c) == c
