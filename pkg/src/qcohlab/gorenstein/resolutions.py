"""Free complexes, projective resolutions and spliced complete resolutions."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

from .modules import (
    FinModule,
    all_vectors,
    combine,
    minimal_generators,
    module_from_generators,
    span,
)
from .rings import FiniteRing


class NotSelfInjectiveError(ValueError):
    """Complete resolutions by splicing need projectives to be injective."""


class ResolutionError(RuntimeError):
    """A constructed complex failed its exactness certificate."""


@dataclass(frozen=True)
class FreeMap:
    """R^cols -> R^rows; column j is the image of the j-th basis vector."""

    ring: FiniteRing
    rows: int
    cols: int
    entries: tuple

    @classmethod
    def from_columns(cls, R: FiniteRing, rows: int, columns: Sequence[Sequence[int]]) -> "FreeMap":
        cols = [tuple(c) for c in columns]
        entries = tuple(tuple(c[r] for c in cols) for r in range(rows))
        return cls(R, rows, len(cols), entries)

    @classmethod
    def zero(cls, R: FiniteRing, rows: int, cols: int) -> "FreeMap":
        return cls(R, rows, cols, tuple((0,) * cols for _ in range(rows)))

    def columns(self) -> list[tuple]:
        return [tuple(self.entries[r][c] for r in range(self.rows)) for c in range(self.cols)]

    def apply(self, v: Sequence[int]) -> tuple:
        return combine(self.ring, v, self.columns(), self.rows)

    def transpose(self) -> "FreeMap":
        return FreeMap(self.ring, self.cols, self.rows,
                       tuple(tuple(self.entries[r][c] for r in range(self.rows)) for c in range(self.cols)))

    def __matmul__(self, other: "FreeMap") -> "FreeMap":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        R = self.ring
        out = []
        for r in range(self.rows):
            row = []
            for c in range(other.cols):
                acc = 0
                for k in range(self.cols):
                    acc = R.add[acc][R.mul[self.entries[r][k]][other.entries[k][c]]]
                row.append(acc)
            out.append(tuple(row))
        return FreeMap(R, self.rows, other.cols, tuple(out))

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)

    @cached_property
    def kernel(self) -> frozenset:
        zero = (0,) * self.rows
        cols = self.columns()
        return frozenset(v for v in all_vectors(self.ring, self.cols) if combine(self.ring, v, cols, self.rows) == zero)

    @cached_property
    def image(self) -> frozenset:
        return span(self.ring, self.columns(), self.rows)

    def tolist(self) -> list:
        return [[self.ring.label(x) for x in row] for row in self.entries]


@dataclass
class ProjResolution:
    """P_len -> ... -> P_0 -> M with d_k: P_k -> P_{k-1} stored at maps[k-1]."""

    module: FinModule
    ranks: list
    maps: list
    syzygies: list  # syzygies[k] is the image of d_k, presented as coker d_{k+1}; syzygies[0] = M
    periodicity: Optional[tuple] = None
    terminated: Optional[int] = None

    @property
    def length(self) -> int:
        return len(self.maps)

    def as_dict(self) -> dict:
        return {
            "ranks": list(self.ranks),
            "maps": [m.tolist() for m in self.maps],
            "periodicity": list(self.periodicity) if self.periodicity else None,
            "terminated": self.terminated,
        }


def _first_repeat(syz: Sequence[FinModule]) -> Optional[tuple]:
    """Smallest (a, p) with a >= 1, syz[a] nonzero and syz[a] isomorphic to syz[a + p]."""
    for b in range(2, len(syz)):
        for a in range(1, b):
            if not syz[a].is_zero() and syz[a].is_isomorphic(syz[b]):
                return (a, b - a)
    return None


def proj_resolution(M: FinModule, length: int) -> ProjResolution:
    """Free resolution of M out to P_length, verified by cardinality counts.

    P_0 is free on the presentation's generators; each later term is free on
    a minimal generating set of the previous kernel.
    """
    R = M.ring
    ranks = [M.ngens]
    maps: list[FreeMap] = []
    gens = minimal_generators(R, M.submodule, M.ngens)
    terminated = None
    for k in range(1, length + 1):
        d = FreeMap.from_columns(R, ranks[-1], gens)
        maps.append(d)
        ranks.append(len(gens))
        if not gens and terminated is None:
            terminated = k - 1
        gens = minimal_generators(R, d.kernel, len(gens)) if gens else []
    syz = [M] + [FinModule(R, ranks[k], maps[k].columns()) for k in range(1, len(maps))]
    res = ProjResolution(M, ranks, maps, syz, terminated=terminated)
    _verify_resolution(res)
    if terminated is None:
        res.periodicity = _first_repeat(syz)
    return res


def _verify_resolution(res: ProjResolution) -> None:
    R, M = res.module.ring, res.module
    if res.maps:
        d1 = res.maps[0]
        if d1.image != M.submodule:
            raise ResolutionError("image of d_1 is not the relation module")
    elif M.submodule != frozenset({(0,) * M.ngens}):
        raise ResolutionError("resolution of length 0 needs a free module")
    if R.size ** M.ngens // len(M.submodule) != M.size:
        raise ResolutionError("P_0 / im d_1 has the wrong size")
    for k in range(1, len(res.maps)):
        lower, upper = res.maps[k - 1], res.maps[k]
        if not (lower @ upper).is_zero():
            raise ResolutionError(f"d_{k} d_{k + 1} != 0")
        if len(upper.image) != len(lower.kernel):
            raise ResolutionError(f"not exact at P_{k}")


@dataclass
class CompleteResolution:
    """A window T_lo-1 .. T_hi+1 of a complete resolution of M.

    T_k = P_k for k >= 0, and T_k = Hom(Q_{-k-1}, R) for k < 0 where Q
    resolves Hom(M, R).  maps[k] is d_k: T_k -> T_{k-1}.
    """

    module: FinModule
    lo: int
    hi: int
    ranks: dict
    maps: dict
    positive: ProjResolution
    negative: ProjResolution
    checks: dict = field(default_factory=dict)

    @property
    def verified(self) -> bool:
        return bool(self.checks) and all(self.checks.values())

    def rank(self, k: int) -> int:
        return self.ranks[k]

    def d(self, k: int) -> FreeMap:
        return self.maps[k]

    def certificate(self) -> dict:
        return {
            "positive_periodicity": list(self.positive.periodicity) if self.positive.periodicity else None,
            "positive_terminated": self.positive.terminated,
            "negative_periodicity": list(self.negative.periodicity) if self.negative.periodicity else None,
            "negative_terminated": self.negative.terminated,
        }

    def as_dict(self) -> dict:
        return {
            "window": [self.lo, self.hi],
            "ranks": {str(k): self.ranks[k] for k in sorted(self.ranks)},
            "maps": {str(k): self.maps[k].tolist() for k in sorted(self.maps)},
            "checks": dict(self.checks),
            "certificate": self.certificate(),
        }


def dual_module(M: FinModule) -> tuple[FinModule, list]:
    """Hom(M, R) presented on chosen generators phi_l (vectors of values on M's generators)."""
    R = M.ring
    S = M.dual_vectors()
    phis = minimal_generators(R, S, M.ngens)
    return module_from_generators(R, phis, M.ngens), phis


def complete_resolution(M: FinModule, window: tuple = (-3, 3), verify: bool = True) -> CompleteResolution:
    R = M.ring
    if not R.self_injective:
        raise NotSelfInjectiveError(f"{R.name} is not self-injective; splicing does not give a complete resolution")
    lo, hi = window
    if lo > hi:
        raise ValueError("empty window")
    top = max(hi + 2, 1)
    bottom = max(-lo + 2, 1)
    P = proj_resolution(M, top)
    Mstar, phis = dual_module(M)
    Q = proj_resolution(Mstar, bottom)
    ranks: dict[int, int] = {}
    maps: dict[int, FreeMap] = {}
    for k in range(lo - 1, hi + 2):
        ranks[k] = P.ranks[k] if k >= 0 else Q.ranks[-k - 1]
    for k in range(lo, hi + 2):
        if k >= 1:
            maps[k] = P.maps[k - 1]
        elif k == 0:
            # P_0 -> M -> M** -> Q_0*: basis e_j goes to (phi_l(e_j))_l
            maps[0] = FreeMap(R, len(phis), M.ngens, tuple(tuple(phi) for phi in phis)) if phis \
                else FreeMap.zero(R, 0, M.ngens)
        else:
            maps[k] = Q.maps[-k - 1].transpose()
    T = CompleteResolution(M, lo, hi, ranks, maps, P, Q)
    if verify:
        verify_complete_resolution(T)
    return T


def verify_complete_resolution(T: CompleteResolution) -> dict:
    """Exactness of T and of Hom(T, Q) for Q = R and each eR on the window."""
    from .functors import ModuleCochain, free_module

    R = T.module.ring
    checks: dict[str, bool] = {}
    for k in range(T.lo, T.hi + 1):
        dk, dk1 = T.maps[k], T.maps[k + 1]
        checks[f"d{k}d{k + 1}=0"] = (dk @ dk1).is_zero()
        checks[f"exact@T{k}"] = len(dk1.image) == len(dk.kernel)
    dual = ModuleCochain(
        free_module(R),
        {k: T.ranks[k] for k in T.ranks},
        {k: T.maps[k + 1].transpose() for k in range(T.lo - 1, T.hi + 1)},
    )
    for k in range(T.lo, T.hi + 1):
        checks[f"Hom(T,R) exact@{k}"] = dual.h_size(k) == 1
        for f in R.local_factors if not R.is_local else ():
            checks[f"Hom(T,{R.label(f.idempotent)}R) exact@{k}"] = dual.h_size(k, f.idempotent) == 1
    if T.lo <= -1 <= T.hi:
        gens = minimal_generators(R, T.maps[-1].kernel, T.ranks[-1])
        checks["ker(d-1) = M"] = module_from_generators(R, gens, T.ranks[-1]).is_isomorphic(T.module)
    T.checks = checks
    return checks
