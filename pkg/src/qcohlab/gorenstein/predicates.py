"""Exhaustive Gorenstein-category predicates over a small module universe.

The universe is every module R^g / U with at most ``max_gens`` generators
and ``max_rels`` relations whose carrier has at most ``size_bound``
elements, taken up to isomorphism.  Dimensions are decided with
certificates: a vanishing Ext criterion for finiteness and a syzygy
isomorphism (periodicity) for infinity.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional

from .functors import (
    UnsupportedRingError,
    ext_cochain,
    ext_dim,
    gext_dim,
    tate_cochain,
)
from .modules import FinModule, all_vectors, minimal_generators
from .resolutions import complete_resolution, proj_resolution
from .rings import FiniteRing

INF = math.inf


class EnumerationBoundError(ValueError):
    """Too many presentations to enumerate."""


class UndecidedError(RuntimeError):
    """No finiteness or periodicity certificate within the search length."""


@dataclass
class Universe:
    ring: FiniteRing
    max_gens: int
    max_rels: int
    size_bound: int
    modules: list
    presentations: int
    excluded: int

    def as_dict(self) -> dict:
        return {
            "max_gens": self.max_gens,
            "max_relations": self.max_rels,
            "size_bound": self.size_bound,
            "presentations_enumerated": self.presentations,
            "excluded_by_size": self.excluded,
            "isomorphism_classes": len(self.modules),
            "modules": [{"spec": M.spec(), "size": M.size} for M in self.modules],
        }


def enumerate_universe(R: FiniteRing, max_gens: int = 2, max_rels: int = 2, size_bound: int = 16,
                       max_presentations: int = 200_000) -> Universe:
    total = sum(
        math.comb(R.size ** g + r - 1, r) for g in range(max_gens + 1) for r in range(max_rels + 1)
    )
    if total > max_presentations:
        raise EnumerationBoundError(f"{total} presentations exceed the bound {max_presentations}")
    reps: list[FinModule] = []
    seen = excluded = 0
    for g in range(max_gens + 1):
        vectors = list(all_vectors(R, g))
        for r in range(max_rels + 1):
            for rels in itertools.combinations_with_replacement(vectors, r):
                seen += 1
                M = FinModule(R, g, rels)
                if M.size > size_bound:
                    excluded += 1
                    continue
                if not any(M.is_isomorphic(N) for N in reps):
                    reps.append(M)
    return Universe(R, max_gens, max_rels, size_bound, reps, seen, excluded)


# -- dimensions ------------------------------------------------------------------------------


def is_projective(M: FinModule) -> bool:
    """0 -> Omega M -> P_0 -> M -> 0 splits iff its class in Ext^1(M, Omega M) vanishes."""
    if M.is_zero():
        return True
    P = proj_resolution(M, 2)
    return ext_dim(M, P.syzygies[1], 1) == 0


def projdim(M: FinModule, search: int = 8) -> float:
    """First k with Omega^k M projective, or inf when a periodic tail certifies none."""
    P = proj_resolution(M, search + 1)
    for k, S in enumerate(P.syzygies):
        if is_projective(S):
            return k
        if P.periodicity and k >= sum(P.periodicity):
            return INF
    raise UndecidedError(f"no certificate for projdim of {M.spec()} within {search} steps")


def cyclic_modules(R: FiniteRing) -> list[FinModule]:
    return [FinModule(R, 1, minimal_generators(R, frozenset((a,) for a in I), 1)) for I in R.ideals]


def injdim(M: FinModule, search: int = 8) -> float:
    """Baer: injdim M <= n iff Ext^{n+1}(R/I, M) = 0 for every ideal I.

    When R/I has a periodic resolution from step a with period p, Ext^j(R/I, M)
    repeats with period p for j > a, so a nonzero value there certifies
    injdim = inf.
    """
    R = M.ring
    tables = []
    for C in cyclic_modules(R):
        P = proj_resolution(C, search + 1)
        H = ext_cochain(C, M, search)
        tables.append((P, [H.h_length(j) for j in range(search + 1)]))
    for n in range(search):
        if all(t[n + 1] == 0 for _, t in tables):
            return n
        for P, t in tables:
            if P.periodicity and n + 1 > P.periodicity[0] and t[n + 1]:
                return INF
    raise UndecidedError(f"no certificate for injdim of {M.spec()} within {search} steps")


def gorenstein_projective_dim(M: FinModule, search: int = 4) -> Optional[int]:
    """First syzygy admitting a verified complete resolution."""
    P = proj_resolution(M, search + 1)
    for k, S in enumerate(P.syzygies[: search + 1]):
        if complete_resolution(S, (-2, 2)).verified:
            return k
    return None


def gorenstein_injective_dim(M: FinModule) -> Optional[int]:
    """0 when the complete resolution of M also serves as a complete injective one.

    Over a self-injective ring the terms are injective, Hom(eR, T) exactness
    for the indecomposable injectives eR is among the checks, and M must be
    the kernel of T_-1 -> T_-2.
    """
    R = M.ring
    if not R.self_injective:
        return None
    T = complete_resolution(M, (-2, 2))
    return 0 if T.verified and T.checks.get("ker(d-1) = M", False) else None


def _finite(x) -> bool:
    return x != INF and x is not None


def _num(x):
    if x is None:
        return None
    return "inf" if x == INF else int(x)


# -- the report -------------------------------------------------------------------------------


@dataclass
class PairData:
    ext: list
    gext: list
    tate: dict


def _pair_data(M: FinModule, N: FinModule, degree: int) -> PairData:
    E = ext_cochain(M, N, degree)
    T, _ = tate_cochain(M, N, -degree, degree)
    return PairData(
        ext=[E.h_length(i) for i in range(degree + 1)],
        gext=[gext_dim(M, N, i) for i in range(degree + 1)],
        tate={i: T.h_length(i) for i in range(-degree, degree + 1)},
    )


def gorenstein_predicates(R: FiniteRing, size_bound: int = 16, max_gens: int = 2, max_rels: int = 2,
                          degree: int = 5, fixed_i: int = 0) -> dict:
    """Evaluate the Gorenstein-category predicates over the enumerated universe."""
    if not R.self_injective:
        raise UnsupportedRingError(f"{R.name} is not self-injective; Gorenstein predicates are out of scope")
    if not -degree <= fixed_i <= degree:
        raise ValueError("fixed_i must lie in [-degree, degree]")
    U = enumerate_universe(R, max_gens, max_rels, size_bound)
    mods = U.modules
    specs = [M.spec() for M in mods]
    pd = [projdim(M) for M in mods]
    idim = [injdim(M) for M in mods]
    gpd = [gorenstein_projective_dim(M) for M in mods]
    gid = [gorenstein_injective_dim(M) for M in mods]
    pairs = {(a, b): _pair_data(mods[a], mods[b], degree) for a in range(len(mods)) for b in range(len(mods))}

    witnesses: list[dict] = []

    def first_pair(cond, label):
        for (a, b), data in pairs.items():
            bad = cond(data)
            if bad is not None:
                witnesses.append({"condition": label, "X": specs[a], "Y": specs[b], **bad})
                return False
        return True

    def first_module(cond, label):
        for k, M in enumerate(mods):
            bad = cond(k)
            if bad is not None:
                witnesses.append({"condition": label, "X": specs[k], **bad})
                return False
        return True

    def iso_from(lo):
        def cond(d):
            for i in range(lo, degree + 1):
                if d.gext[i] != d.ext[i]:
                    return {"i": i, "gext": d.gext[i], "ext": d.ext[i]}
            return None
        return cond

    def tate_zero(indices):
        def cond(d):
            for i in indices:
                if d.tate[i]:
                    return {"i": i, "tate": d.tate[i]}
            return None
        return cond

    conditions = {
        "1_gext1_to_ext1_iso": first_pair(
            lambda d: None if d.gext[1] == d.ext[1] else {"i": 1, "gext": d.gext[1], "ext": d.ext[1]},
            "1"),
        "2_gext_to_ext_iso_all_i": first_pair(iso_from(1), "2"),
        "3_tate_vanishes_positive": first_pair(tate_zero(range(1, degree + 1)), "3"),
        "4_all_finite_projdim": first_module(
            lambda k: None if _finite(pd[k]) else {"projdim": _num(pd[k])}, "4"),
        "5_gorenstein_injectives_injective": first_module(
            lambda k: None if gid[k] != 0 or idim[k] == 0 else {"Gid": gid[k], "injdim": _num(idim[k])}, "5"),
        "6_gorenstein_projectives_projective": first_module(
            lambda k: None if gpd[k] != 0 or pd[k] == 0 else {"Gpd": gpd[k], "projdim": _num(pd[k])}, "6"),
        "7_tate_vanishes_all": first_pair(tate_zero(range(-degree, degree + 1)), "7"),
        f"8_tate_vanishes_at_{fixed_i}": first_pair(tate_zero([fixed_i]), "8"),
    }
    verdicts = set(conditions.values())

    finite_pd = [int(x) for x in pd if _finite(x)]
    finite_id = [int(x) for x in idim if _finite(x)]
    FPD = max(finite_pd, default=0)
    FID = max(finite_id, default=0)
    glGpd = max(gpd) if all(x is not None for x in gpd) else None
    glGid = max(gid) if all(x is not None for x in gid) else None
    free = next((k for k, M in enumerate(mods) if M.ngens == 1 and not M.relations), None)

    predicates = {
        "projdim_finite_iff_injdim_finite": all(_finite(a) == _finite(b) for a, b in zip(pd, idim)),
        # sups over a finite universe; inf only if some finite dimension were unbounded
        "FPD_and_FID_finite": FPD != INF and FID != INF,
        "generator_of_finite_projdim": free is not None and _finite(pd[free]),
        "every_module_gorenstein_projective": all(x == 0 for x in gpd),
        "every_module_gorenstein_injective": all(x == 0 for x in gid),
        "FPD": FPD,
        "FID": FID,
        "glGpd": glGpd,
        "glGid": glGid,
        "four_way_equality": glGpd is not None and FPD == FID == glGpd == glGid,
        "conditions": conditions,
        "conditions_coherent": len(verdicts) == 1,
    }
    predicates["gorenstein_category"] = (
        predicates["projdim_finite_iff_injdim_finite"]
        and predicates["FPD_and_FID_finite"]
        and predicates["generator_of_finite_projdim"]
    )
    return {
        "ring": R.describe(),
        "universe": U.as_dict(),
        "modules": [
            {"spec": s, "projdim": _num(a), "injdim": _num(b), "Gpd": c, "Gid": d}
            for s, a, b, c, d in zip(specs, pd, idim, gpd, gid)
        ],
        "predicates": predicates,
        "witnesses": witnesses,
    }
