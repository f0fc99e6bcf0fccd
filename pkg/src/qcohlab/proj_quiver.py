"""Quiver model of quasi-coherent sheaves on projective n-space.

Vertices are the nonempty subsets v of {0..n}; R(v) is the degree-0 part of
the Laurent ring inverting x_j for j in v, and a twist O(d) has, over v, the
basis of Laurent monomials x^a with sum(a) = d and a_i >= 0 for i not in v.
Everything is windowed by |a_i| <= W.

A presented sheaf is coker(sum O(a_i) -> sum O(b_j)).  When every matrix
entry is a single monomial and the matrix admits a Z^{n+1}-grading, the
cokernel splits into finite-dimensional *fine-degree slices*; each slice is
computed exactly (the window only chooses which slices are reported).
Other presentations go through a windowed block computation that carries a
stabilization flag.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Optional, Sequence

from .exact_linalg import QQ, Matrix, Quotient, kernel_basis

MultiDegree = tuple  # tuple[int, ...] of length n + 1


class WindowError(ValueError):
    """The exponent window is too small for the requested data."""


class PresentationError(ValueError):
    """A presentation matrix entry is not homogeneous of the forced degree."""


class UnsupportedPresentationError(ValueError):
    """The operation needs a multigraded monomial presentation."""


@dataclass(frozen=True)
class Vertex:
    """A nonempty subset of {0, ..., n}."""

    n: int
    members: tuple

    def __post_init__(self):
        members = tuple(sorted(set(self.members)))
        if not members:
            raise ValueError("a vertex is a nonempty subset")
        if members[0] < 0 or members[-1] > self.n:
            raise ValueError(f"vertex {members} is not a subset of {{0..{self.n}}}")
        object.__setattr__(self, "members", members)

    @classmethod
    def of(cls, n: int, *members: int) -> "Vertex":
        return cls(n, members)

    @classmethod
    def full(cls, n: int) -> "Vertex":
        return cls(n, tuple(range(n + 1)))

    @cached_property
    def mask(self) -> int:
        return sum(1 << i for i in self.members)

    @property
    def first(self) -> int:
        return self.members[0]

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, i: int) -> bool:
        return i in self.members

    def __le__(self, other: "Vertex") -> bool:
        return self.mask & ~other.mask == 0

    def __lt__(self, other: "Vertex") -> bool:
        return self <= other and self != other

    def __or__(self, other: "Vertex") -> "Vertex":
        return Vertex(self.n, self.members + other.members)

    @property
    def sort_key(self) -> tuple:
        return (len(self.members), self.members)

    def label(self) -> str:
        return "{" + ",".join(map(str, self.members)) + "}"

    def __repr__(self) -> str:
        return f"Vertex{self.label()}"


def vertices(n: int) -> list[Vertex]:
    """All 2^{n+1} - 1 vertices, ordered by size and then lexicographically."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    out = [
        Vertex(n, c)
        for k in range(1, n + 2)
        for c in itertools.combinations(range(n + 1), k)
    ]
    return out


def arrows(n: int) -> list[tuple[Vertex, Vertex]]:
    """Pairs (v, w) with v a proper subset of w: one arrow for each."""
    vs = vertices(n)
    return [(v, w) for v in vs for w in vs if v < w]


def neg_mask(a: Sequence[int]) -> int:
    """Bitmask of the coordinates where ``a`` is negative."""
    m = 0
    for i, x in enumerate(a):
        if x < 0:
            m |= 1 << i
    return m


def valid_at(a: Sequence[int], v: Vertex) -> bool:
    """x^a lies in the localization at v: negative exponents only inside v."""
    return neg_mask(a) & ~v.mask == 0


def _exponents(n: int, d: int, lows: Sequence[int], W: int) -> Iterator[tuple]:
    """Integer vectors of length n+1 with sum d and lows[i] <= a_i <= W."""

    def rec(i: int, remaining: int) -> Iterator[tuple]:
        if i == n:
            if lows[n] <= remaining <= W:
                yield (remaining,)
            return
        rest_lo = sum(lows[i + 1:])
        rest_hi = W * (n - i)
        lo = max(lows[i], remaining - rest_hi)
        hi = min(W, remaining - rest_lo)
        for x in range(lo, hi + 1):
            for tail in rec(i + 1, remaining - x):
                yield (x,) + tail

    return rec(0, d)


@dataclass(frozen=True)
class SectionSpace:
    """Window slice of O(d)(v): its basis of exponent vectors, lexicographic."""

    vertex: Vertex
    degree: int
    window: int
    basis: tuple

    @property
    def dim(self) -> int:
        return len(self.basis)

    @cached_property
    def index(self) -> dict:
        return {a: k for k, a in enumerate(self.basis)}


@lru_cache(maxsize=4096)
def section_basis(v: Vertex, d: int, W: int) -> SectionSpace:
    if W < abs(d):
        raise WindowError(f"window {W} smaller than |degree| = {abs(d)}")
    lows = [-W if i in v else 0 for i in range(v.n + 1)]
    basis = tuple(sorted(_exponents(v.n, d, lows, W)))
    return SectionSpace(v, d, W, basis)


def restriction_matrix(v: Vertex, w: Vertex, d: int, W: int, fld=QQ) -> Matrix:
    """Basis inclusion O(d)(v) -> O(d)(w) within the window."""
    if not v <= w:
        raise ValueError(f"{v} is not contained in {w}")
    src, dst = section_basis(v, d, W), section_basis(w, d, W)
    cols = []
    for a in src.basis:
        col = [fld.zero] * dst.dim
        col[dst.index[a]] = fld.one
        cols.append(col)
    return Matrix.from_columns(fld, cols, dst.dim)


# -- presentations -----------------------------------------------------------


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


@dataclass(frozen=True)
class TwistPresentation:
    """coker( sum_i O(sources[i]) -> sum_j O(targets[j]) ) on P^n.

    ``matrix[j][i]`` is a tuple of ``(coefficient, exponent_vector)`` terms, a
    form of degree ``targets[j] - sources[i]`` with nonnegative exponents.
    """

    n: int
    targets: tuple
    sources: tuple
    matrix: tuple
    field: object = QQ

    def __post_init__(self):
        fld = self.field
        object.__setattr__(self, "targets", tuple(int(b) for b in self.targets))
        object.__setattr__(self, "sources", tuple(int(a) for a in self.sources))
        if len(self.matrix) != len(self.targets):
            raise PresentationError("matrix needs one row per target summand")
        rows = []
        for j, row in enumerate(self.matrix):
            if len(row) != len(self.sources):
                raise PresentationError("matrix needs one column per source summand")
            new_row = []
            for i, entry in enumerate(row):
                want = self.targets[j] - self.sources[i]
                acc: dict = {}
                for coef, exps in entry:
                    exps = tuple(int(x) for x in exps)
                    if len(exps) != self.n + 1:
                        raise PresentationError(f"exponent vector {exps} has wrong length")
                    if min(exps) < 0:
                        raise PresentationError(f"negative exponent in entry ({j},{i})")
                    if sum(exps) != want:
                        raise PresentationError(
                            f"entry ({j},{i}) has degree {sum(exps)}, expected {want}"
                        )
                    acc[exps] = fld.add(acc.get(exps, fld.zero), fld(coef))
                new_row.append(tuple((acc[e], e) for e in sorted(acc) if acc[e] != 0))
            rows.append(tuple(new_row))
        object.__setattr__(self, "matrix", tuple(rows))

    @classmethod
    def twist(cls, n: int, d: int, fld=QQ) -> "TwistPresentation":
        return cls(n, (d,), (), ((),), fld)

    @classmethod
    def twists(cls, n: int, ds: Sequence[int], fld=QQ) -> "TwistPresentation":
        return cls(n, tuple(ds), (), tuple(() for _ in ds), fld)

    @classmethod
    def monomial_quotient(cls, n: int, d: int, monomials: Sequence[Sequence[int]], fld=QQ):
        """O(d) modulo the given monomials, one source per monomial."""
        sources = tuple(d - sum(m) for m in monomials)
        row = tuple(((1, tuple(m)),) for m in monomials)
        return cls(n, (d,), sources, (row,), fld)

    @property
    def is_monomial(self) -> bool:
        return self.grading is not None

    @cached_property
    def grading(self) -> Optional[tuple[tuple, tuple]]:
        """Shift vectors (g_j, h_i) making the matrix fine-degree preserving.

        A target basis element x^m in summand j has fine degree m - g_j, a
        source element x^m' in summand i has fine degree m' - h_i.  None when
        some entry has several terms or no consistent shifts exist.
        """
        zero = (0,) * (self.n + 1)
        nt, ns = len(self.targets), len(self.sources)
        for row in self.matrix:
            if any(len(e) > 1 for e in row):
                return None
        g: list = [None] * nt
        h: list = [None] * ns
        for root in range(nt):
            if g[root] is not None:
                continue
            g[root] = zero
            stack = [("t", root)]
            while stack:
                kind, k = stack.pop()
                if kind == "t":
                    for i in range(ns):
                        entry = self.matrix[k][i]
                        if not entry:
                            continue
                        hi = _sub(g[k], entry[0][1])
                        if h[i] is None:
                            h[i] = hi
                            stack.append(("s", i))
                        elif h[i] != hi:
                            return None
                else:
                    for j in range(nt):
                        entry = self.matrix[j][k]
                        if not entry:
                            continue
                        gj = _add(h[k], entry[0][1])
                        if g[j] is None:
                            g[j] = gj
                            stack.append(("t", j))
                        elif g[j] != gj:
                            return None
        # h stays None for sources with an all-zero column; they never matter
        return tuple(g), tuple(h)

    @cached_property
    def _live_sources(self) -> tuple:
        nt = len(self.targets)
        return tuple(i for i in range(len(self.sources)) if any(self.matrix[j][i] for j in range(nt)))

    def coefficient(self, j: int, i: int):
        entry = self.matrix[j][i]
        return entry[0][0] if entry else self.field.zero

    @property
    def reach(self) -> int:
        """Largest exponent appearing in any entry."""
        return max((max(e) for row in self.matrix for entry in row for _, e in entry), default=0)

    def fine_degrees(self, W: int) -> list[tuple]:
        """Fine degrees whose target monomials fall inside the window at the full vertex."""
        if not self.is_monomial:
            raise UnsupportedPresentationError("fine degrees need a multigraded monomial presentation")
        g, _ = self.grading
        full = Vertex.full(self.n)
        out = set()
        for j, b in enumerate(self.targets):
            for m in section_basis(full, b, W).basis:
                out.add(_sub(m, g[j]))
        return sorted(out)

    def min_window(self) -> int:
        return max((abs(b) for b in self.targets), default=0)


@dataclass(frozen=True)
class Slice:
    """Fine-degree slice of a presented sheaf's sections over one vertex."""

    presentation: TwistPresentation = field(repr=False)
    vertex: Vertex
    degree: tuple
    targets: tuple
    sources: tuple
    quotient: Quotient = field(repr=False, compare=False)

    @property
    def dim(self) -> int:
        return self.quotient.dim

    @cached_property
    def target_pos(self) -> dict:
        return {j: k for k, j in enumerate(self.targets)}

    def monomial(self, j: int) -> tuple:
        return _add(self.degree, self.presentation.grading[0][j])

    def representatives(self) -> list[tuple[int, tuple]]:
        """Basis of the slice as (target summand, monomial) pairs."""
        return [(self.targets[k], self.monomial(self.targets[k])) for k in self.quotient.reps]

    def element(self, j: int) -> tuple:
        """Coordinates of the target generator monomial of summand j."""
        f = self.presentation.field
        vec = [f.zero] * len(self.targets)
        vec[self.target_pos[j]] = f.one
        return self.quotient.coords(vec)


def _slice_structure(P: TwistPresentation, v: Vertex, delta: tuple) -> tuple[tuple, tuple]:
    g, h = P.grading
    vm = ~v.mask
    total = sum(delta)
    targets = tuple(
        j for j, b in enumerate(P.targets)
        if total + sum(g[j]) == b and neg_mask(_add(delta, g[j])) & vm == 0
    )
    sources = tuple(
        i for i in P._live_sources
        if total + sum(h[i]) == P.sources[i] and neg_mask(_add(delta, h[i])) & vm == 0
    )
    return targets, sources


def make_slice(P: TwistPresentation, v: Vertex, delta: Sequence[int]) -> Slice:
    """Exact slice of coker at vertex v and fine degree delta."""
    if not P.is_monomial:
        raise UnsupportedPresentationError("slices need a multigraded monomial presentation")
    delta = tuple(delta)
    targets, sources = _slice_structure(P, v, delta)
    pos = {j: k for k, j in enumerate(targets)}
    f = P.field
    vecs = []
    for i in sources:
        col = [f.zero] * len(targets)
        for j in range(len(P.targets)):
            c = P.coefficient(j, i)
            if c != 0:
                # an entry with nonzero coefficient always lands on an active target
                col[pos[j]] = c
        vecs.append(col)
    return Slice(P, v, delta, targets, sources, Quotient(f, len(targets), vecs))


def transfer_matrix(a: Slice, b: Slice) -> Matrix:
    """Map induced by sending target summand j of ``a`` to summand j of ``b``.

    This is the restriction map when b's vertex contains a's, and
    multiplication by the monomial b.degree - a.degree otherwise.
    """
    f = a.presentation.field
    cols = []
    for k in a.quotient.reps:
        j = a.targets[k]
        if j not in b.target_pos:
            raise ValueError(f"target summand {j} inactive in destination slice")
        vec = [f.zero] * len(b.targets)
        vec[b.target_pos[j]] = f.one
        cols.append(b.quotient.coords(vec))
    return Matrix.from_columns(f, cols, b.dim)


# -- the QCoh value of a presentation ------------------------------------------


class QCohValue:
    """Per-vertex windowed sections of a presented sheaf with restriction maps."""

    def __init__(self, P: TwistPresentation, W: int):
        if not P.is_monomial:
            raise UnsupportedPresentationError("QCohValue needs a multigraded monomial presentation")
        if W < P.min_window():
            raise WindowError(f"window {W} smaller than max |target twist| = {P.min_window()}")
        self.presentation = P
        self.window = W
        self._slices: dict = {}

    @property
    def n(self) -> int:
        return self.presentation.n

    @cached_property
    def degrees(self) -> list[tuple]:
        return self.presentation.fine_degrees(self.window)

    def slice(self, v: Vertex, delta: Sequence[int]) -> Slice:
        key = (v, tuple(delta))
        s = self._slices.get(key)
        if s is None:
            s = self._slices[key] = make_slice(self.presentation, v, delta)
        return s

    def sections(self, v: Vertex) -> dict[tuple, Slice]:
        return {d: self.slice(v, d) for d in self.degrees}

    def restriction(self, v: Vertex, w: Vertex, delta: Sequence[int]) -> Matrix:
        if not v <= w:
            raise ValueError(f"{v} is not contained in {w}")
        return transfer_matrix(self.slice(v, delta), self.slice(w, delta))

    def multiplication(self, v: Vertex, delta: Sequence[int], u: Sequence[int]) -> Matrix:
        """Multiplication by the monomial x^u of R(v) from slice delta to delta + u."""
        u = tuple(u)
        if sum(u) != 0 or not valid_at(u, v):
            raise ValueError(f"x^{u} is not an element of R({v.label()})")
        return transfer_matrix(self.slice(v, delta), self.slice(v, _add(tuple(delta), u)))

    def total_dim(self, v: Vertex) -> int:
        return sum(self.slice(v, d).dim for d in self.degrees)


@dataclass
class SliceInfo:
    dim: int
    representatives: list


@dataclass
class CokerSections:
    """Windowed sections of a presented sheaf over one vertex."""

    vertex: Vertex
    window: int
    monomial: bool
    slices: dict
    stabilized: bool = True

    @property
    def total_dim(self) -> int:
        return sum(s.dim for s in self.slices.values())


def coker_sections(P: TwistPresentation, v: Vertex, W: int) -> CokerSections:
    """Sections of coker(P) over vertex v in window W.

    Monomial presentations report every nonzero fine-degree slice (exact).
    Other presentations report one window block keyed by ``"block"``, computed
    with source window W + reach + 2 and checked against W + reach + 4.
    """
    if W < P.min_window():
        raise WindowError(f"window {W} smaller than max |target twist| = {P.min_window()}")
    if P.is_monomial:
        val = QCohValue(P, W)
        slices = {}
        for d in val.degrees:
            s = val.slice(v, d)
            if s.dim:
                slices[d] = SliceInfo(s.dim, s.representatives())
        return CokerSections(v, W, True, slices)
    blk = block_sections(P, v, W)
    again = block_sections(P, v, W, extra=blk.extra + 2)
    slices = {"block": SliceInfo(blk.dim, blk.representatives())} if blk.dim else {}
    return CokerSections(v, W, False, slices, stabilized=blk.dim == again.dim)


def supp(P: TwistPresentation, W: int) -> list[Vertex]:
    """Vertices carrying a nonzero section within the window."""
    return [v for v in vertices(P.n) if coker_sections(P, v, W).total_dim > 0]


def is_down_closed(vs: Iterable[Vertex]) -> bool:
    s = set(vs)
    return all(w in s for v in s for w in vertices(v.n) if w <= v)


# -- window blocks for non-monomial presentations -------------------------------


@dataclass
class Block:
    """Target window T_W(v) modulo (image of the presentation) ∩ T_W(v)."""

    vertex: Vertex
    window: int
    extra: int
    basis: list  # (target summand, monomial)
    quotient: Quotient

    @property
    def dim(self) -> int:
        return self.quotient.dim

    def representatives(self) -> list:
        return [self.basis[k] for k in self.quotient.reps]

    @cached_property
    def index(self) -> dict:
        return {b: k for k, b in enumerate(self.basis)}


def _target_basis(P: TwistPresentation, v: Vertex, W: int) -> list:
    return [(j, m) for j, b in enumerate(P.targets) for m in section_basis(v, b, W).basis]


def block_sections(P: TwistPresentation, v: Vertex, W: int, extra: Optional[int] = None) -> Block:
    """Window block of sections, valid for any homogeneous presentation.

    Images of sources from window ``W + extra`` are intersected with the
    target window W, so cancellations reaching outside the window are seen.
    """
    if extra is None:
        extra = P.reach + 2
    f = P.field
    inner = _target_basis(P, v, W)
    inner_set = set(inner)
    Ws = W + extra
    outer_extra: dict = {}
    images = []
    for i, a in enumerate(P.sources):
        for m in section_basis(v, a, max(Ws, abs(a))).basis:
            img: dict = {}
            for j in range(len(P.targets)):
                for c, e in P.matrix[j][i]:
                    key = (j, _add(m, e))
                    img[key] = f.add(img.get(key, f.zero), f(c))
            img = {k: c for k, c in img.items() if c != 0}
            if img:
                images.append(img)
                for k in img:
                    if k not in inner_set and k not in outer_extra:
                        outer_extra[k] = len(outer_extra)
    pos = {b: k for k, b in enumerate(inner)}
    n_in, n_out = len(inner), len(outer_extra)
    if not images:
        return Block(v, W, extra, inner, Quotient(f, n_in, []))
    # columns: images; rows: inner coordinates then outer coordinates
    cols_in, cols_out = [], []
    for img in images:
        ci = [f.zero] * n_in
        co = [f.zero] * n_out
        for k, c in img.items():
            if k in pos:
                ci[pos[k]] = c
            else:
                co[outer_extra[k]] = c
        cols_in.append(ci)
        cols_out.append(co)
    if n_out:
        out_mat = Matrix.from_columns(f, cols_out, n_out)
        combos = kernel_basis(out_mat).columns()
    else:
        combos = [tuple(f.one if r == k else f.zero for r in range(len(images))) for k in range(len(images))]
    in_mat = Matrix.from_columns(f, cols_in, n_in)
    vecs = [in_mat.apply(c) for c in combos]
    return Block(v, W, extra, inner, Quotient(f, n_in, vecs))


def block_transfer(a: Block, b: Block) -> Matrix:
    """Restriction between window blocks (basis inclusion on targets)."""
    f = a.quotient.field
    cols = []
    for k in a.quotient.reps:
        vec = [f.zero] * len(b.basis)
        vec[b.index[a.basis[k]]] = f.one
        cols.append(b.quotient.coords(vec))
    return Matrix.from_columns(f, cols, b.dim)


__all__ = [
    "Vertex", "vertices", "arrows", "section_basis", "SectionSpace", "restriction_matrix",
    "TwistPresentation", "Slice", "make_slice", "transfer_matrix", "QCohValue",
    "coker_sections", "CokerSections", "supp", "is_down_closed", "block_sections",
    "block_transfer", "Block", "WindowError", "PresentationError",
    "UnsupportedPresentationError", "valid_at", "neg_mask",
]
