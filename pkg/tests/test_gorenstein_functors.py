import time

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcohlab.gorenstein import (
    EnumerationBoundError,
    UnsupportedRingError,
    am_sequence_check,
    enumerate_universe,
    ext_dim,
    ext_table,
    gext_dim,
    gorenstein_predicates,
    injdim,
    parse_module,
    parse_ring,
    projdim,
    residue_module,
    tate_table,
)
from qcohlab.gorenstein.functors import ext_cochain, tate_cochain
from qcohlab.gorenstein.modules import FinModule
from qcohlab.gorenstein.predicates import INF, is_projective
from qcohlab.gorenstein.resolutions import ResolutionError

Z4 = parse_ring("Zmod:4")
DUAL = parse_ring("GF:2:x^2")
_VEC = [(a, b) for a in range(4) for b in range(4)]
z4_modules = st.lists(st.sampled_from(_VEC), max_size=2).map(lambda rels: FinModule(Z4, 2, rels))


def test_ext_of_residue_field():
    k = residue_module(Z4)
    assert ext_table(k, k, 5) == [1] * 6
    Z6 = parse_ring("Zmod:6")
    k6 = residue_module(Z6)
    assert ext_table(k6, k6, 3) == [2, 0, 0, 0]


@settings(max_examples=20, deadline=None)
@given(z4_modules, z4_modules)
def test_ext0_is_hom(M, N):
    assert ext_dim(M, N, 0) == M.hom_length(N)


@settings(max_examples=20, deadline=None)
@given(z4_modules)
def test_ring_is_injective_over_itself(M):
    R = parse_module(Z4, "R")
    assert ext_table(M, R, 3)[1:] == [0, 0, 0]


@settings(max_examples=15, deadline=None)
@given(z4_modules, z4_modules)
def test_tate_balance_and_positive_agreement(M, N):
    proj = tate_table(M, N, -3, 3, "projective")
    inj = tate_table(M, N, -3, 3, "injective")
    assert proj == inj
    ext = ext_table(M, N, 3)
    assert [r["dim"] for r in proj if r["i"] >= 1] == ext[1:]


def test_tate_window_invariance():
    k = residue_module(DUAL)
    a = {r["i"]: r["dim"] for r in tate_table(k, k, -2, 2)}
    b = {r["i"]: r["dim"] for r in tate_table(k, k, -4, 4)}
    assert all(a[i] == b[i] for i in a)


def test_tate_of_free_modules_vanishes():
    R2 = parse_module(Z4, "R^2")
    k = residue_module(Z4)
    assert all(r["dim"] == 0 for r in tate_table(R2, k, -3, 3))
    assert all(r["dim"] == 0 for r in tate_table(k, R2, -3, 3, "injective"))


def test_tate_rejects_bad_side():
    k = residue_module(Z4)
    with pytest.raises(ValueError):
        tate_cochain(k, k, 0, 1, side="left")


def test_gext_over_self_injective_ring():
    k = residue_module(Z4)
    assert gext_dim(k, k, 0) == 1
    assert [gext_dim(k, k, i) for i in range(1, 4)] == [0, 0, 0]
    trunc = parse_ring("Trunc:2:2:2")
    with pytest.raises(UnsupportedRingError):
        gext_dim(residue_module(trunc), residue_module(trunc), 1)


def test_am_sequence_for_residue_field():
    k = residue_module(DUAL)
    res = am_sequence_check(k, k, 5)
    assert res["exact"] and res["chain_map_commutes"]
    assert all(r["ext"] == r["tate"] == 1 and r["eps_image"] == 1 for r in res["rows"])


def test_ext_cochain_is_a_complex():
    k = residue_module(Z4)
    assert ext_cochain(k, k, 4).check()


def test_dimensions():
    k = residue_module(Z4)
    R = parse_module(Z4, "R")
    assert projdim(R) == 0 and projdim(k) == INF
    assert injdim(R) == 0 and injdim(k) == INF
    assert is_projective(parse_module(Z4, "R^2"))
    Z6 = parse_ring("Zmod:6")
    assert projdim(residue_module(Z6)) == 0


def test_universe_over_z4():
    U = enumerate_universe(Z4, 2, 2, 16)
    sizes = sorted(M.size for M in U.modules)
    # 0, Z/2, Z/4, (Z/2)^2, Z/2+Z/4, (Z/4)^2
    assert sizes == [1, 2, 4, 4, 8, 16]
    for a, M in enumerate(U.modules):
        for N in U.modules[a + 1:]:
            assert not M.is_isomorphic(N)
    with pytest.raises(EnumerationBoundError):
        enumerate_universe(parse_ring("Zmod:16"), 2, 2, 16, max_presentations=1000)


def test_predicates_fields_true_and_local_false():
    t0 = time.time()
    rep = gorenstein_predicates(Z4)
    assert time.time() - t0 < 60
    conds = rep["predicates"]["conditions"]
    assert set(conds.values()) == {False}
    assert rep["predicates"]["conditions_coherent"]
    assert rep["witnesses"]
    rep2 = gorenstein_predicates(parse_ring("Zmod:2"))
    assert set(rep2["predicates"]["conditions"].values()) == {True}
    assert rep2["witnesses"] == []
    with pytest.raises(UnsupportedRingError):
        gorenstein_predicates(parse_ring("Trunc:2:2:2"))
    with pytest.raises(ValueError):
        gorenstein_predicates(Z4, degree=2, fixed_i=3)


def test_tate_requires_verified_resolution(monkeypatch):
    from qcohlab.gorenstein import functors

    real = functors.complete_resolution

    def broken(M, window, verify=True):
        T = real(M, window)
        T.checks["forced"] = False
        return T

    monkeypatch.setattr(functors, "complete_resolution", broken)
    k = residue_module(Z4)
    with pytest.raises(ResolutionError):
        tate_table(k, k, -1, 1)
