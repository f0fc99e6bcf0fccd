"""Čech cohomology of presented sheaves over the standard affine cover.

C^p is the sum of the sections over all vertices of size p + 1; the
differential is the alternating sum of restriction maps, with the sign of
dropping the k-th smallest index equal to (-1)^k.  For multigraded monomial
presentations the complex splits by fine degree and each slice is a small
honest matrix computation; slices whose combinatorial type coincides give
identical matrices, so their cohomology is memoized by that type.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .exact_linalg import QQ, Complex, Matrix, cohomology_dims
from .proj_quiver import (
    TwistPresentation,
    Vertex,
    WindowError,
    block_sections,
    block_transfer,
    make_slice,
    neg_mask,
    transfer_matrix,
    vertices,
)

_SLICE_CACHE: dict = {}


def _vertices_by_size(n: int) -> list[list[Vertex]]:
    out: list[list[Vertex]] = [[] for _ in range(n + 1)]
    for v in vertices(n):
        out[len(v) - 1].append(v)
    return out


def _faces(w: Vertex) -> list[tuple[int, Vertex]]:
    """(sign, face) pairs: drop the k-th member of w with sign (-1)^k."""
    if len(w) == 1:
        return []
    return [
        (-1 if k % 2 else 1, Vertex(w.n, w.members[:k] + w.members[k + 1:]))
        for k in range(len(w))
    ]


def assemble(fld, n: int, spaces: dict, transfer) -> Complex:
    """Čech complex from per-vertex spaces and a restriction-map callback.

    ``spaces[v]`` is the dimension over vertex v; ``transfer(v, w)`` the
    restriction matrix between them.
    """
    layers = _vertices_by_size(n)
    dims = [sum(spaces[v] for v in layer) for layer in layers]
    diffs = []
    for p in range(n):
        src, dst = layers[p], layers[p + 1]
        src_off, off = {}, 0
        for v in src:
            src_off[v] = off
            off += spaces[v]
        rows = [[fld.zero] * dims[p] for _ in range(dims[p + 1])]
        r0 = 0
        for w in dst:
            for sign, v in _faces(w):
                if not spaces[v] or not spaces[w]:
                    continue
                m = transfer(v, w)
                c0 = src_off[v]
                for r in range(m.rows):
                    for c in range(m.cols):
                        x = m.entries[r][c]
                        if x:
                            rows[r0 + r][c0 + c] = x if sign > 0 else fld.neg(x)
            r0 += spaces[w]
        diffs.append(Matrix(fld, dims[p + 1], dims[p], tuple(tuple(r) for r in rows)))
    return Complex(fld, tuple(dims), tuple(diffs))


@dataclass
class CohomologyResult:
    n: int
    h: list
    window: int
    stabilized: bool
    monomial: bool = True

    def as_dict(self) -> dict:
        return {"n": self.n, "h": list(self.h), "window": self.window, "stabilized": self.stabilized}


class CechComplex:
    """Windowed Čech complex of a presented sheaf."""

    def __init__(self, P: TwistPresentation, W: int):
        if W < P.min_window():
            raise WindowError(f"window {W} smaller than max |target twist| = {P.min_window()}")
        self.presentation = P
        self.window = W
        self.n = P.n
        self.terms = _vertices_by_size(P.n)

    @property
    def field(self):
        return self.presentation.field

    # -- monomial route -------------------------------------------------------

    def slice_complex(self, delta: Sequence[int]) -> Complex:
        P = self.presentation
        slices = {v: make_slice(P, v, delta) for v in vertices(self.n)}
        c = assemble(
            P.field, self.n, {v: s.dim for v, s in slices.items()},
            lambda v, w: transfer_matrix(slices[v], slices[w]),
        )
        c.check()
        return c

    def _slice_key(self, delta: tuple) -> tuple:
        P = self.presentation
        g, h = P.grading
        total = sum(delta)

        def mask(shift, degree):
            # -1 marks a summand that has no monomials in this fine degree
            if shift is None or total + sum(shift) != degree:
                return -1
            return neg_mask([x + y for x, y in zip(delta, shift)])

        tm = tuple(mask(gj, b) for gj, b in zip(g, P.targets))
        sm = tuple(mask(hi, a) for hi, a in zip(h, P.sources))
        return tm, sm

    def _pattern(self) -> tuple:
        P = self.presentation
        coeffs = tuple(
            tuple(P.coefficient(j, i) for i in range(len(P.sources))) for j in range(len(P.targets))
        )
        return (P.n, P.field, coeffs)

    def slice_cohomology(self, delta: Sequence[int]) -> tuple:
        delta = tuple(delta)
        key = (self._pattern(), self._slice_key(delta))
        hit = _SLICE_CACHE.get(key)
        if hit is None:
            dims = cohomology_dims(self.slice_complex(delta))
            hit = _SLICE_CACHE[key] = tuple(dims[p] for p in range(self.n + 1))
        return hit

    def per_degree(self) -> dict[tuple, tuple]:
        """Nonzero cohomology contributions by fine degree."""
        out = {}
        for d in self.presentation.fine_degrees(self.window):
            h = self.slice_cohomology(d)
            if any(h):
                out[d] = h
        return out

    # -- block route --------------------------------------------------------------

    def block_complex(self, extra: Optional[int] = None) -> Complex:
        P, W = self.presentation, self.window
        blocks = {v: block_sections(P, v, W, extra) for v in vertices(self.n)}
        c = assemble(
            P.field, self.n, {v: b.dim for v, b in blocks.items()},
            lambda v, w: block_transfer(blocks[v], blocks[w]),
        )
        c.check()
        return c

    def total_complex(self) -> Complex:
        """The whole windowed complex as one matrix complex (small cases only)."""
        if not self.presentation.is_monomial:
            return self.block_complex()
        parts = [self.slice_complex(d) for d in self.presentation.fine_degrees(self.window)]
        fld = self.field
        dims = tuple(sum(c.dims[p] for c in parts) for p in range(self.n + 1))
        diffs = []
        for p in range(self.n):
            rows = [[fld.zero] * dims[p] for _ in range(dims[p + 1])]
            r0 = c0 = 0
            for c in parts:
                m = c.differentials[p]
                for r in range(m.rows):
                    for k in range(m.cols):
                        rows[r0 + r][c0 + k] = m.entries[r][k]
                r0 += m.rows
                c0 += m.cols
            diffs.append(Matrix(fld, dims[p + 1], dims[p], tuple(tuple(r) for r in rows)))
        return Complex(fld, dims, tuple(diffs))

    def cohomology(self) -> list[int]:
        if self.presentation.is_monomial:
            h = [0] * (self.n + 1)
            for d in self.presentation.fine_degrees(self.window):
                for p, x in enumerate(self.slice_cohomology(d)):
                    h[p] += x
            return h
        dims = cohomology_dims(self.block_complex())
        return [dims[p] for p in range(self.n + 1)]


def build_cech(P: TwistPresentation, W: int) -> CechComplex:
    return CechComplex(P, W)


def default_window(n: int, twists: Iterable[int]) -> int:
    return max((abs(t) for t in twists), default=0) + n + 2


def sheaf_cohomology(P: TwistPresentation, W: Optional[int] = None, check: bool = True) -> CohomologyResult:
    """All h^i of the presented sheaf, with a W vs W+2 stabilization check."""
    if W is None:
        W = default_window(P.n, P.targets + P.sources)
    h = CechComplex(P, W).cohomology()
    stabilized = True
    if check:
        stabilized = CechComplex(P, W + 2).cohomology() == h
    return CohomologyResult(P.n, h, W, stabilized, P.is_monomial)


def sheaf_cohomology_dim(P: TwistPresentation, i: int, W: Optional[int] = None) -> int:
    if not 0 <= i <= P.n:
        raise ValueError(f"cohomological degree {i} outside 0..{P.n}")
    if W is None:
        W = default_window(P.n, P.targets + P.sources)
    return CechComplex(P, W).cohomology()[i]


def ext_twists(a: int, b: int, i: int, n: int, W: Optional[int] = None, fld=QQ) -> int:
    """dim Ext^i(O(a), O(b)) on P^n, which is h^i(O(b - a))."""
    return sheaf_cohomology_dim(TwistPresentation.twist(n, b - a, fld), i, W)


def cohomology_table(n: int, d_range: Iterable[int], W: Optional[int] = None,
                     check: bool = True, fld=QQ) -> list[dict]:
    ds = list(d_range)
    need = max((abs(d) for d in ds), default=0) + n
    if W is None:
        W = need + 2
    if W < need:
        raise WindowError(f"window {W} below max|d| + n = {need}")
    rows = []
    for d in ds:
        res = sheaf_cohomology(TwistPresentation.twist(n, d, fld), W, check=check)
        rows.append({"n": n, "d": d, "h": res.h, "window": W, "stabilized": res.stabilized})
    return rows


__all__ = [
    "CechComplex", "build_cech", "sheaf_cohomology", "sheaf_cohomology_dim", "ext_twists",
    "cohomology_table", "CohomologyResult", "default_window", "assemble",
]
