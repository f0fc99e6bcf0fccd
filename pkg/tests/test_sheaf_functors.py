import pytest

from corpus import decomposition_corpus
from qcohlab.proj_quiver import TwistPresentation, UnsupportedPresentationError, Vertex, valid_at, vertices
from qcohlab.sheaf_functors import (
    DvValue,
    LocalModule,
    NonCommutingMorphismError,
    ZeroModuleError,
    adjoint_transpose,
    adjunction_roundtrips,
    decomposition_sequence,
    dv_sections,
    evaluate,
    ext_against_dv,
    inverse_transpose,
    local_hom_space,
    same_morphism,
    shift_box,
    sheaf_hom_space,
    unit_morphism,
)

T = TwistPresentation


def twist_hom_oracle(n, a, b, v, s):
    """Hom(O(a)(v), O(b)(v)) in fine degree s: x_first^a x^s must be a section of O(b) at v."""
    mono = [x + (a if i == v.first else 0) for i, x in enumerate(s)]
    return int(sum(mono) == b and valid_at(mono, v))


@pytest.mark.parametrize("n,a,b", [(1, 0, 0), (1, 0, -1), (1, 1, 2), (2, 0, 1), (2, -1, -1)])
def test_hom_dims_match_oracle_on_both_sides(n, a, b):
    W = 2
    M = T.twist(n, a)
    for v in vertices(n):
        N = LocalModule(v, T.twist(n, b))
        D = DvValue(N, W)
        for s in shift_box(n, W):
            want = twist_hom_oracle(n, a, b, v, s)
            assert len(local_hom_space(M, N, s)) == want
            assert len(sheaf_hom_space(M, D, s)) == want


def test_evaluation_and_dv_sections():
    P = T.monomial_quotient(2, 0, [(0, 0, 1)])
    v = Vertex.of(2, 0)
    N = LocalModule(v, P)
    assert evaluate(P, v, 2).total_dim > 0
    # D^v(N)(w) is the chart at v ∪ w; over {2} it sees the empty chart {0,2} of a line off x2 != 0
    assert dv_sections(v, N, Vertex.of(2, 2), 2) == {}
    assert dv_sections(v, N, Vertex.of(2, 1), 2)
    with pytest.raises(ValueError):
        dv_sections(Vertex.of(2, 1), N, v, 2)


def test_unit_transposes_to_identity():
    for _name, P in decomposition_corpus()[:8]:
        for v in vertices(P.n):
            u = unit_morphism(P, v, 2)
            assert u.violations() == []
            g = adjoint_transpose(u)
            for j in range(len(P.targets)):
                s = g.image_slice(j)
                if s.dim:
                    assert g.images[j] == s.element(j)
            assert same_morphism(inverse_transpose(g, 2), u)


def test_broken_morphism_is_rejected():
    P = T.twist(1, 0)
    v = Vertex.of(1, 0)
    u = unit_morphism(P, v, 2)
    u.images[Vertex.full(1)] = [tuple(2 * x for x in u.images[Vertex.full(1)][0])]
    assert u.violations()
    with pytest.raises(NonCommutingMorphismError):
        adjoint_transpose(u)


@pytest.mark.parametrize("idx", [0, 2, 3, 5, 8, 10])
def test_roundtrips_on_corpus(idx):
    _name, P = decomposition_corpus()[idx]
    tested = 0
    for v in vertices(P.n):
        for _n2, Q in [("same", P), ("twist", T.twist(P.n, -1))]:
            res = adjunction_roundtrips(P, LocalModule(v, Q), 2, samples=1, seed=7)
            assert res["ok"], res["failures"][:3]
            tested += res["tested"]
    assert tested > 0


def test_ext_against_dv_hom_level():
    P = T.twist(1, 0)
    v = Vertex.of(1, 1)
    rows = ext_against_dv(P, v, LocalModule(v, T.twist(1, 0)), 2)
    assert rows and all(r["sheaf"] == r["local"] for r in rows)
    with pytest.raises(NotImplementedError):
        ext_against_dv(P, v, LocalModule(v, P), 2, i=1)


def test_decomposition_corpus_exact_and_strict():
    corpus = decomposition_corpus()
    assert len(corpus) >= 10
    for name, P in corpus:
        r = decomposition_sequence(P, 3)
        assert r.exact, name
        assert r.strict, name
        assert set(r.support_K) < set(r.support) and set(r.support_C) < set(r.support)
        for (K, Mdim, mid, C) in r.slice_dims.values():
            assert K - Mdim + mid - C == 0


def test_decomposition_of_point_is_unit_iso():
    r = decomposition_sequence(T.monomial_quotient(1, 0, [(0, 1)]), 3)
    assert r.unit_iso and r.maximal == [Vertex.of(1, 0)]
    assert r.as_dict()["support"] == ["{0}"]


def test_decomposition_errors():
    zero = T(1, (0,), (0,), ((((1, (0, 0)),),),))
    with pytest.raises(ZeroModuleError):
        decomposition_sequence(zero, 2)
    point = T(1, (0,), (-1,), ((((1, (1, 0)), (1, (0, 1))),),))
    with pytest.raises(UnsupportedPresentationError):
        decomposition_sequence(point, 2)
    with pytest.raises(UnsupportedPresentationError):
        LocalModule(Vertex.of(1, 0), point)
