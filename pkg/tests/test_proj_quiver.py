import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcohlab.exact_linalg import QQ, PrimeField
from qcohlab.proj_quiver import (
    PresentationError,
    TwistPresentation,
    UnsupportedPresentationError,
    Vertex,
    WindowError,
    arrows,
    block_sections,
    coker_sections,
    is_down_closed,
    make_slice,
    restriction_matrix,
    section_basis,
    supp,
    valid_at,
    vertices,
)


def brute_basis(v, d, W):
    n = v.n
    return sorted(
        a for a in itertools.product(range(-W, W + 1), repeat=n + 1)
        if sum(a) == d and all(x >= 0 or i in v for i, x in enumerate(a))
    )


def test_vertex_counts():
    for n in range(4):
        assert len(vertices(n)) == 2 ** (n + 1) - 1
    assert len(arrows(1)) == 2
    assert Vertex.full(2) == Vertex.of(2, 0, 1, 2)
    with pytest.raises(ValueError):
        Vertex.of(1, 3)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2), st.integers(-3, 3), st.integers(3, 4), st.data())
def test_section_basis_matches_enumeration(n, d, W, data):
    v = data.draw(st.sampled_from(vertices(n)))
    assert list(section_basis(v, d, W).basis) == brute_basis(v, d, W)


def test_global_sections_are_polynomials():
    # over the vertex {0} of P^1 with window 2, O(1) has x0^{1-k} x1^k, k = 0..2
    assert section_basis(Vertex.of(1, 0), 1, 2).basis == ((-1, 2), (0, 1), (1, 0))
    with pytest.raises(WindowError):
        section_basis(Vertex.of(1, 0), 3, 2)


def test_restriction_is_inclusion_and_composes():
    n, d, W = 2, 1, 3
    u, v, w = Vertex.of(n, 0), Vertex.of(n, 0, 1), Vertex.full(n)
    A = restriction_matrix(u, v, d, W)
    B = restriction_matrix(v, w, d, W)
    assert B @ A == restriction_matrix(u, w, d, W)
    with pytest.raises(ValueError):
        restriction_matrix(w, u, d, W)


def test_presentation_degree_is_checked():
    with pytest.raises(PresentationError):
        TwistPresentation(1, (0,), (-1,), ((((1, (2, 0)),),),))
    with pytest.raises(PresentationError):
        TwistPresentation(1, (0,), (-1,), ((((1, (1, 0, 0)),),),))
    with pytest.raises(PresentationError):
        TwistPresentation(1, (0, 1), (), ((),))


def test_grading_detection():
    P = TwistPresentation.monomial_quotient(2, 0, [(1, 0, 0), (0, 1, 0)])
    assert P.is_monomial
    Q = TwistPresentation(1, (0,), (-1,), ((((1, (1, 0)), (1, (0, 1))),),))
    assert not Q.is_monomial
    with pytest.raises(UnsupportedPresentationError):
        make_slice(Q, Vertex.full(1), (0, 0))


def brute_quotient_dim(n, d, monomials, v, W):
    """Monomials of degree d at v inside the window not divisible (at v) by any generator."""
    count = 0
    for a in brute_basis(v, d, W):
        if not any(valid_at([x - y for x, y in zip(a, m)], v) for m in monomials):
            count += 1
    return count


@pytest.mark.parametrize("n,d,monos", [
    (1, 0, [(1, 0)]),
    (1, 1, [(2, 0)]),
    (2, 0, [(1, 0, 0)]),
    (2, 1, [(1, 0, 0), (0, 1, 0)]),
    (2, 0, [(1, 1, 0)]),
    (2, 2, [(2, 0, 0), (0, 0, 1)]),
])
def test_monomial_quotient_sections_match_counting(n, d, monos):
    P = TwistPresentation.monomial_quotient(n, d, monos)
    W = abs(d) + 2
    for v in vertices(n):
        assert coker_sections(P, v, W).total_dim == brute_quotient_dim(n, d, monos, v, W)


def test_slice_respects_total_degree():
    # O(0) + O(1) on P^1: a fine degree of total 0 only sees the first summand
    P = TwistPresentation.twists(1, [0, 1])
    s = make_slice(P, Vertex.full(1), (1, -1))
    assert s.targets == (0,)
    s = make_slice(P, Vertex.full(1), (2, -1))
    assert s.targets == (1,)


def test_support_of_point_is_down_closed():
    # O/(x1) on P^1 is the point [1:0], which lives on vertex {0} only
    P = TwistPresentation.monomial_quotient(1, 0, [(0, 1)])
    s = supp(P, 2)
    assert s == [Vertex.of(1, 0)]
    assert is_down_closed(s)
    assert not is_down_closed([Vertex.full(1)])


def test_block_route_agrees_with_slices_on_monomial_input():
    P = TwistPresentation.monomial_quotient(2, 1, [(1, 0, 0), (0, 1, 0)])
    W = 3
    for v in vertices(2):
        assert block_sections(P, v, W).dim == coker_sections(P, v, W).total_dim


def test_non_monomial_point_has_stable_block():
    # coker(O(-1) -> O, x0 + x1) is the point [1:-1]
    P = TwistPresentation(1, (0,), (-1,), ((((1, (1, 0)), (1, (0, 1))),),))
    full = coker_sections(P, Vertex.full(1), 3)
    assert not full.monomial and full.stabilized
    assert full.total_dim == 1
    assert coker_sections(P, Vertex.of(1, 0), 3).total_dim == 1


def test_prime_field_presentation():
    F3 = PrimeField(3)
    # 3 * x0 vanishes in characteristic 3
    P = TwistPresentation(1, (0,), (-1,), ((((3, (1, 0)),),),), F3)
    assert P.matrix[0][0] == ()
    assert coker_sections(P, Vertex.of(1, 1), 2).total_dim == len(section_basis(Vertex.of(1, 1), 0, 2).basis)
    assert TwistPresentation.twist(1, 0).field == QQ


def test_documented_section_examples():
    assert set(section_basis(Vertex.full(1), 0, 2).basis) == {(0, 0), (1, -1), (-1, 1), (2, -2), (-2, 2)}
    assert set(section_basis(Vertex.of(1, 0), 2, 2).basis) == {(2, 0), (1, 1), (0, 2)}
    # (-2, 1, 1) falls outside the window, leaving three monomials
    assert set(section_basis(Vertex.of(2, 0), 0, 1).basis) == {(0, 0, 0), (-1, 1, 0), (-1, 0, 1)}
    assert [v.label() for v in vertices(1)] == ["{0}", "{1}", "{0,1}"]
    assert len(vertices(0)) == 1 and len(vertices(2)) == 7


def test_documented_restriction_example():
    # over {0} only x0 is inverted, so the nonconstant monomial is x1/x0
    src = section_basis(Vertex.of(1, 0), 0, 1).basis
    dst = section_basis(Vertex.full(1), 0, 1).basis
    assert set(src) == {(0, 0), (-1, 1)}
    assert set(dst) == {(0, 0), (1, -1), (-1, 1)}
    A = restriction_matrix(Vertex.of(1, 0), Vertex.full(1), 0, 1)
    assert A.rows == 3 and A.cols == 2 and sum(sum(1 for x in r if x) for r in A.entries) == 2


def test_skyscraper_support_and_zero_sheaf():
    sky = TwistPresentation.monomial_quotient(1, 0, [(0, 1)])
    assert supp(sky, 2) == [Vertex.of(1, 0)]
    ident = TwistPresentation(1, (0,), (0,), ((((1, (0, 0)),),),))
    assert supp(ident, 2) == []
