"""Ext, Tate cohomology and Gorenstein relative Ext over finite rings.

Every Hom complex here has the shape C^i = B^{r_i} for one finite module B,
with differentials given by ring matrices acting on tuples.  Cohomology is
counted by brute force: |H^i| = |ker d^i| |ker d^{i-1}| / |C^{i-1}|, and
lengths come from the idempotent parts |eH^i|.
"""

from __future__ import annotations

import itertools
from typing import Callable, Optional

from .modules import FinModule
from .resolutions import (
    CompleteResolution,
    ResolutionError,
    complete_resolution,
    dual_module,
    proj_resolution,
)
from .rings import FiniteRing


class UnsupportedRingError(ValueError):
    """The requested construction is only implemented for self-injective rings."""


_FREE: dict[int, FinModule] = {}


def free_module(R: FiniteRing) -> FinModule:
    """R as a module over itself (cached per ring object)."""
    M = _FREE.get(id(R))
    if M is None or M.ring is not R:
        M = _FREE[id(R)] = FinModule(R, 1, ())
    return M


class ModuleCochain:
    """C^i = base^{r_i} with d^i: C^i -> C^{i+1} given by maps[i] (shape r_{i+1} x r_i)."""

    def __init__(self, base: FinModule, ranks: dict, maps: dict):
        self.base = base
        self.ranks = dict(ranks)
        self.maps = dict(maps)
        self._kernels: dict = {}
        for i, A in self.maps.items():
            if (A.rows, A.cols) != (self.rank(i + 1), self.rank(i)):
                raise ValueError(f"map {i} has shape {(A.rows, A.cols)}, terms have ranks "
                                 f"{self.rank(i)} -> {self.rank(i + 1)}")

    @property
    def ring(self) -> FiniteRing:
        return self.base.ring

    def rank(self, i: int) -> int:
        return self.ranks.get(i, 0)

    def _base(self, e: Optional[int]) -> list[int]:
        B = self.base
        if e is None:
            return list(range(B.size))
        return [x for x in range(B.size) if B.act(e, x) == x]

    def size(self, i: int, e: Optional[int] = None) -> int:
        return len(self._base(e)) ** self.rank(i)

    def elements(self, i: int, e: Optional[int] = None):
        return itertools.product(self._base(e), repeat=self.rank(i))

    def apply(self, i: int, x: tuple) -> tuple:
        r = self.rank(i + 1)
        if r == 0:
            return ()
        A = self.maps.get(i)
        if A is None:
            if self.rank(i):
                raise KeyError(f"no differential out of degree {i}")
            return (0,) * r
        return tuple(self.base.combine(A.entries[m], x) for m in range(r))

    def kernel(self, i: int, e: Optional[int] = None) -> list:
        key = (i, e)
        hit = self._kernels.get(key)
        if hit is None:
            zero = (0,) * self.rank(i + 1)
            hit = self._kernels[key] = [x for x in self.elements(i, e) if self.apply(i, x) == zero]
        return hit

    def image(self, i: int, e: Optional[int] = None) -> set:
        """Coboundaries in C^i."""
        return {self.apply(i - 1, x) for x in self.elements(i - 1, e)}

    def h_size(self, i: int, e: Optional[int] = None) -> int:
        z = len(self.kernel(i, e))
        b, rem = divmod(self.size(i - 1, e), len(self.kernel(i - 1, e)))
        if rem or z % b:
            raise ResolutionError("cardinality counts are inconsistent")
        return z // b

    def h_length(self, i: int) -> int:
        return self.ring.length(lambda e: self.h_size(i, e))

    def check(self) -> bool:
        for i, A in self.maps.items():
            B = self.maps.get(i + 1)
            if B is not None and not (B @ A).is_zero():
                return False
        return True


def induced_map_lengths(src: ModuleCochain, dst: ModuleCochain, i: int,
                        f: Callable[[tuple], tuple] = lambda x: x) -> tuple[int, int]:
    """(length of kernel, length of image) of H^i(src) -> H^i(dst) induced by f."""
    R = src.ring

    def ker_size(e):
        bd = dst.image(i, e)
        bs = len(src.image(i, e))
        k = sum(1 for z in src.kernel(i, e) if f(z) in bd)
        if k % bs:
            raise ResolutionError("induced map is not well defined on cohomology")
        return k // bs

    ker_len = R.length(ker_size)
    return ker_len, src.h_length(i) - ker_len


# -- Ext ------------------------------------------------------------------------------


def ext_cochain(M: FinModule, N: FinModule, top: int) -> ModuleCochain:
    """Hom(P, N) for a resolution P of M, in degrees 0..top+1."""
    P = proj_resolution(M, top + 1)
    ranks = {k: P.ranks[k] for k in range(top + 2)}
    maps = {k: P.maps[k].transpose() for k in range(top + 1)}
    return ModuleCochain(N, ranks, maps)


def ext_dim(M: FinModule, N: FinModule, i: int) -> int:
    """Length of Ext^i(M, N)."""
    if i < 0:
        raise ValueError("Ext is indexed by i >= 0")
    return ext_cochain(M, N, i).h_length(i)


def ext_table(M: FinModule, N: FinModule, top: int) -> list[int]:
    C = ext_cochain(M, N, top)
    return [C.h_length(i) for i in range(top + 1)]


# -- Tate cohomology -------------------------------------------------------------------


def tate_cochain(M: FinModule, N: FinModule, lo: int, hi: int,
                 side: str = "projective") -> tuple[ModuleCochain, CompleteResolution]:
    """Hom(T, N) for a complete resolution T of M, or Hom(M, E) for one E of N."""
    if side == "projective":
        T = complete_resolution(M, (lo, hi))
        ranks = dict(T.ranks)
        maps = {k: T.maps[k + 1].transpose() for k in range(lo - 1, hi + 1)}
        base = N
    elif side == "injective":
        # E^i = T_{-i-1}: N is the kernel of E^0 -> E^1, and Hom(M, R^r) = (M*)^r
        T = complete_resolution(N, (-hi - 1, -lo - 1))
        ranks = {i: T.ranks[-i - 1] for i in range(lo - 1, hi + 2)}
        maps = {i: T.maps[-i - 1] for i in range(lo - 1, hi + 1)}
        base = dual_module(M)[0]
    else:
        raise ValueError(f"side must be 'projective' or 'injective', not {side!r}")
    if not T.verified:
        failed = sorted(k for k, ok in T.checks.items() if not ok)
        raise ResolutionError(f"complete resolution failed checks: {failed}")
    return ModuleCochain(base, ranks, maps), T


def tate_table(M: FinModule, N: FinModule, lo: int, hi: int, side: str = "projective") -> list[dict]:
    C, _ = tate_cochain(M, N, lo, hi, side)
    return [{"i": i, "dim": C.h_length(i)} for i in range(lo, hi + 1)]


def tate_ext_dim(M: FinModule, N: FinModule, i: int, side: str = "projective") -> int:
    C, _ = tate_cochain(M, N, i, i, side)
    return C.h_length(i)


# -- Gorenstein relative Ext ----------------------------------------------------------------


def is_gorenstein_projective(M: FinModule) -> bool:
    return complete_resolution(M, (-2, 2)).verified


def gext_dim(M: FinModule, N: FinModule, i: int) -> int:
    """Length of Gext^i(M, N).

    Over a self-injective ring every module has a verified complete
    resolution, so the Gorenstein projective resolution of M is M itself in
    degree 0: Gext^0 = Hom and the rest vanish.
    """
    R = M.ring
    if not R.self_injective:
        raise UnsupportedRingError(f"Gext is only implemented over self-injective rings, not {R.name}")
    if i < 0:
        raise ValueError("Gext is indexed by i >= 0")
    if not is_gorenstein_projective(M):
        raise ResolutionError("module has no verified complete resolution")
    return _gext_gorenstein_projective(M, N, i)


def _gext_gorenstein_projective(M: FinModule, N: FinModule, i: int) -> int:
    # Hom(G, N) for the length-0 resolution G_0 = M
    return M.hom_length(N) if i == 0 else 0


# -- Avramov-Martsinkovsky sequence ---------------------------------------------------------


def am_sequence_check(M: FinModule, N: FinModule, n_max: int) -> dict:
    """Exactness of 0 -> Gext^1 -> Ext^1 -> Êxt^1 -> Gext^2 -> ... -> Êxt^n -> 0.

    The comparison Ext^i -> Êxt^i comes from the chain map P -> T that is the
    identity in degrees >= 0; its squares are checked to commute, and the
    induced map is evaluated on cohomology classes.
    """
    R = M.ring
    if not R.self_injective:
        raise UnsupportedRingError(f"AM sequences need a self-injective ring, not {R.name}")
    ext = ext_cochain(M, N, n_max)
    # tate_cochain raises unless T passes every check, so M is Gorenstein projective
    tate, T = tate_cochain(M, N, -1, n_max)
    chain_ok = all(
        T.maps[k] == ext.maps[k - 1].transpose() for k in range(1, n_max + 1)
    ) and all(ext.rank(k) == T.ranks[k] for k in range(0, n_max + 1))
    rows = []
    for i in range(1, n_max + 1):
        g = _gext_gorenstein_projective(M, N, i)
        e = ext.h_length(i)
        t = tate.h_length(i)
        ker_eps, im_eps = induced_map_lengths(ext, tate, i)
        rows.append({
            "i": i, "gext": g, "ext": e, "tate": t,
            "eps_kernel": ker_eps, "eps_image": im_eps,
            # Gext^i -> Ext^i has source 0, and Êxt^i -> Gext^{i+1} has target 0
            "exact_at_gext": g == 0,
            "exact_at_ext": ker_eps == 0,
            "exact_at_tate": im_eps == t,
        })
    alternating = sum(r["gext"] - r["ext"] + r["tate"] for r in rows)
    exact = chain_ok and all(r["exact_at_gext"] and r["exact_at_ext"] and r["exact_at_tate"] for r in rows)
    return {
        "ring": R.name,
        "module": M.spec(),
        "against": N.spec(),
        "n_max": n_max,
        "chain_map_commutes": chain_ok,
        "rows": rows,
        "alternating_sum": alternating,
        "exact": exact and alternating == 0,
    }
