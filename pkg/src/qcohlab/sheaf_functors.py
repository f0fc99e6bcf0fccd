"""Evaluation at a vertex, its right adjoint D^v, and the support decomposition.

Modules over R(v) are represented as the v-chart of a multigraded monomial
presentation (``LocalModule``); since R(v) contains every degree-0 monomial
unit, this loses nothing for monomial modules.  D^v(N)(w) is then the
chart of the same presentation at v ∪ w.

Morphisms are stored by the images of generators.  Over vertex w the
generator of target summand j is the monomial x_{min w}^{b_j}; any other
basis monomial x^m of that summand is u * generator for the unit-free
monomial u = m - b_j e_{min w} of R(w), which is how slice matrices are
produced.  All morphisms carry a fine-degree shift s.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

from .exact_linalg import Matrix, Quotient, kernel_basis, rank
from .proj_quiver import (
    QCohValue,
    Slice,
    TwistPresentation,
    UnsupportedPresentationError,
    Vertex,
    coker_sections,
    make_slice,
    transfer_matrix,
    vertices,
)


class NonCommutingMorphismError(ValueError):
    """Generator images violate a relation or a restriction square."""


class ZeroModuleError(ValueError):
    """The decomposition sequence needs a nonzero sheaf."""


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _unit(n: int, i: int, k: int = 1) -> tuple:
    return tuple(k if t == i else 0 for t in range(n + 1))


def evaluate(P: TwistPresentation, v: Vertex, W: int):
    """H^v(M) = M(v): the windowed sections over v."""
    return coker_sections(P, v, W)


@dataclass(frozen=True)
class LocalModule:
    """The R(v)-module given by the v-chart of a monomial presentation."""

    vertex: Vertex
    presentation: TwistPresentation

    def __post_init__(self):
        if not self.presentation.is_monomial:
            raise UnsupportedPresentationError("local modules must be of monomial type")
        if self.presentation.n != self.vertex.n:
            raise ValueError("presentation and vertex live on different P^n")

    def slice(self, delta: Sequence[int]) -> Slice:
        return make_slice(self.presentation, self.vertex, tuple(delta))


class DvValue:
    """D^v(N): over w, the localization R(v ∪ w) ⊗ N."""

    def __init__(self, N: LocalModule, W: int):
        self.base = N.vertex
        self.module = N
        self.window = W
        self._cache: dict = {}

    @property
    def presentation(self) -> TwistPresentation:
        return self.module.presentation

    def chart(self, w: Vertex) -> Vertex:
        return self.base | w

    def slice(self, w: Vertex, delta: Sequence[int]) -> Slice:
        key = (self.chart(w), tuple(delta))
        s = self._cache.get(key)
        if s is None:
            s = self._cache[key] = make_slice(self.presentation, key[0], key[1])
        return s

    def restriction(self, w1: Vertex, w2: Vertex, delta: Sequence[int]) -> Matrix:
        if not w1 <= w2:
            raise ValueError(f"{w1} is not contained in {w2}")
        return transfer_matrix(self.slice(w1, delta), self.slice(w2, delta))

    def multiplication(self, w: Vertex, delta: Sequence[int], u: Sequence[int]) -> Matrix:
        return transfer_matrix(self.slice(w, delta), self.slice(w, _add(tuple(delta), u)))

    @cached_property
    def degrees(self) -> list:
        return self.presentation.fine_degrees(self.window)

    def sections(self, w: Vertex) -> dict:
        return {d: s for d in self.degrees if (s := self.slice(w, d)).dim}


def dv_sections(v: Vertex, N: LocalModule, w: Vertex, W: int) -> dict:
    """Nonzero window slices of D^v(N)(w)."""
    if N.vertex != v:
        raise ValueError(f"N is an R({N.vertex.label()})-module, not an R({v.label()})-module")
    return DvValue(N, W).sections(w)


# -- generator bookkeeping -----------------------------------------------------


def generator_degree(P: TwistPresentation, w: Vertex, j: int) -> tuple:
    """Fine degree of the generator x_{min w}^{b_j} of target summand j over w."""
    g = P.grading[0]
    return tuple(a - b for a, b in zip(_unit(P.n, w.first, P.targets[j]), g[j]))


def relation_degree(P: TwistPresentation, w: Vertex, i: int) -> tuple:
    h = P.grading[1]
    return tuple(a - b for a, b in zip(_unit(P.n, w.first, P.sources[i]), h[i]))


class _System:
    """Homogeneous linear system assembled from blocks of unknowns."""

    def __init__(self, fld, block_dims: Sequence[int]):
        self.field = fld
        self.offsets = []
        off = 0
        for d in block_dims:
            self.offsets.append(off)
            off += d
        self.size = off
        self.dims = list(block_dims)
        self.rows: list = []

    def add(self, terms: Sequence[tuple[int, Matrix]], out_dim: int) -> None:
        f = self.field
        block = [[f.zero] * self.size for _ in range(out_dim)]
        for b, m in terms:
            o = self.offsets[b]
            for r in range(m.rows):
                for c in range(m.cols):
                    if m.entries[r][c]:
                        block[r][o + c] = f.add(block[r][o + c], m.entries[r][c])
        self.rows.extend(block)

    def matrix(self) -> Matrix:
        return Matrix(self.field, len(self.rows), self.size, tuple(tuple(r) for r in self.rows))

    def solutions(self) -> Matrix:
        return kernel_basis(self.matrix())

    def split(self, vec: Sequence) -> list[tuple]:
        return [tuple(vec[o:o + d]) for o, d in zip(self.offsets, self.dims)]


def _scaled(fld, m: Matrix, c) -> Matrix:
    return Matrix(fld, m.rows, m.cols, tuple(tuple(fld.mul(c, x) for x in r) for r in m.entries))


# -- morphisms ---------------------------------------------------------------------


@dataclass
class LocalMorphism:
    """R(v)-linear map M(v) -> N of fine degree ``shift``, by generator images."""

    source: TwistPresentation
    target: LocalModule
    shift: tuple
    images: list  # per target summand of source: coordinates in N's slice

    @property
    def vertex(self) -> Vertex:
        return self.target.vertex

    def image_slice(self, j: int) -> Slice:
        return self.target.slice(_add(generator_degree(self.source, self.vertex, j), self.shift))

    def check(self) -> None:
        M, v, f = self.source, self.vertex, self.source.field
        for i in M._live_sources:
            out = self.target.slice(_add(relation_degree(M, v, i), self.shift))
            acc = [f.zero] * out.dim
            for j in range(len(M.targets)):
                c = M.coefficient(j, i)
                if c == 0:
                    continue
                m = transfer_matrix(self.image_slice(j), out).apply(self.images[j])
                acc = [f.add(a, f.mul(c, x)) for a, x in zip(acc, m)]
            if any(acc):
                raise NonCommutingMorphismError(f"relation {i} not respected over {v.label()}")

    def slice_matrix(self, delta: Sequence[int]) -> Matrix:
        """Action on the slice M(v)_delta -> N_{delta + shift}."""
        return _slice_action(self.source, self.vertex, delta, self.shift,
                             self.images, self.image_slice, self.target.slice)

    def localize(self, u: Vertex) -> "LocalMorphism":
        """R(u) ⊗ g for u containing the base vertex."""
        v = self.vertex
        if not v <= u:
            raise ValueError(f"{u} does not contain {v}")
        N2 = LocalModule(u, self.target.presentation)
        images = []
        for j, b in enumerate(self.source.targets):
            src = self.image_slice(j)
            mid = make_slice(N2.presentation, u, src.degree)
            y = transfer_matrix(src, mid).apply(self.images[j])
            dst = N2.slice(_add(generator_degree(self.source, u, j), self.shift))
            images.append(transfer_matrix(mid, dst).apply(y))
        return LocalMorphism(self.source, N2, self.shift, images)


@dataclass
class MorphismData:
    """Sheaf morphism M -> D^v(N) of fine degree ``shift``, by generator images per vertex."""

    source: TwistPresentation
    target: DvValue
    shift: tuple
    images: dict  # vertex -> list of coordinate tuples, one per target summand

    def image_slice(self, w: Vertex, j: int) -> Slice:
        return self.target.slice(w, _add(generator_degree(self.source, w, j), self.shift))

    def violations(self) -> list[str]:
        M, D, f = self.source, self.target, self.source.field
        bad = []
        for w in vertices(M.n):
            for i in M._live_sources:
                out = D.slice(w, _add(relation_degree(M, w, i), self.shift))
                acc = [f.zero] * out.dim
                for j in range(len(M.targets)):
                    c = M.coefficient(j, i)
                    if c == 0:
                        continue
                    m = transfer_matrix(self.image_slice(w, j), out).apply(self.images[w][j])
                    acc = [f.add(a, f.mul(c, x)) for a, x in zip(acc, m)]
                if any(acc):
                    bad.append(f"relation {i} over {w.label()}")
        for w1, w2 in _covering_arrows(M.n):
            for j in range(len(M.targets)):
                out = D.slice(w2, _add(generator_degree(M, w1, j), self.shift))
                lhs = transfer_matrix(self.image_slice(w1, j), out).apply(self.images[w1][j])
                rhs = transfer_matrix(self.image_slice(w2, j), out).apply(self.images[w2][j])
                if lhs != rhs:
                    bad.append(f"restriction {w1.label()}->{w2.label()} on summand {j}")
        return bad

    def check(self) -> None:
        bad = self.violations()
        if bad:
            raise NonCommutingMorphismError("; ".join(bad))

    def slice_matrix(self, w: Vertex, delta: Sequence[int]) -> Matrix:
        """Action on the slice M(w)_delta -> D^v(N)(w)_{delta + shift}."""
        return _slice_action(self.source, w, delta, self.shift, self.images[w],
                             lambda j: self.image_slice(w, j),
                             lambda d: self.target.slice(w, d))


def _slice_action(M, w, delta, shift, images, image_slice, target_slice) -> Matrix:
    f = M.field
    src = make_slice(M, w, tuple(delta))
    out = target_slice(_add(tuple(delta), shift))
    cols = []
    for j, _m in src.representatives():
        cols.append(transfer_matrix(image_slice(j), out).apply(images[j]))
    return Matrix.from_columns(f, cols, out.dim)


def _covering_arrows(n: int) -> list[tuple[Vertex, Vertex]]:
    vs = vertices(n)
    return [(v, w) for v in vs for w in vs if v < w and len(w) == len(v) + 1]


def _require_monomial(P: TwistPresentation) -> None:
    if not P.is_monomial:
        raise UnsupportedPresentationError("the adjunction is implemented for monomial presentations")


def adjoint_transpose(f: MorphismData) -> LocalMorphism:
    """Hom(M, D^v N) -> Hom(M(v), N): evaluate at the base vertex."""
    f.check()
    v = f.target.base
    return LocalMorphism(f.source, f.target.module, f.shift, list(f.images[v]))


def inverse_transpose(g: LocalMorphism, W: int) -> MorphismData:
    """Hom(M(v), N) -> Hom(M, D^v N): over w, restrict to v ∪ w and apply R(v ∪ w) ⊗ g."""
    g.check()
    M, v = g.source, g.vertex
    D = DvValue(g.target, W)
    out = MorphismData(M, D, g.shift, {})
    for w in vertices(M.n):
        u = v | w
        local = g.localize(u)
        # generator of w over u: x_{min w}^b = (x_{min w} / x_{min u})^b * x_{min u}^b
        out.images[w] = [
            transfer_matrix(local.image_slice(j), out.image_slice(w, j)).apply(local.images[j])
            for j in range(len(M.targets))
        ]
    return out


def unit_morphism(P: TwistPresentation, v: Vertex, W: int) -> MorphismData:
    """The unit M -> D^v(M(v)): restriction from w to v ∪ w."""
    _require_monomial(P)
    D = DvValue(LocalModule(v, P), W)
    zero = (0,) * (P.n + 1)
    images = {}
    for w in vertices(P.n):
        images[w] = [D.slice(w, generator_degree(P, w, j)).element(j) for j in range(len(P.targets))]
    return MorphismData(P, D, zero, images)


# -- Hom spaces ------------------------------------------------------------------------


def sheaf_hom_space(M: TwistPresentation, D: DvValue, shift: Sequence[int]):
    """Basis of Hom(M, D^v N) in fine degree ``shift`` (as MorphismData)."""
    _require_monomial(M)
    shift = tuple(shift)
    f = M.field
    nt = len(M.targets)
    vs = vertices(M.n)
    slots, dims = [], []
    for w in vs:
        for j in range(nt):
            s = D.slice(w, _add(generator_degree(M, w, j), shift))
            slots.append((w, j, s))
            dims.append(s.dim)
    index = {(w, j): k for k, (w, j, _s) in enumerate(slots)}
    system = _System(f, dims)
    for w in vs:
        for i in M._live_sources:
            out = D.slice(w, _add(relation_degree(M, w, i), shift))
            terms = []
            for j in range(nt):
                c = M.coefficient(j, i)
                if c != 0:
                    k = index[(w, j)]
                    terms.append((k, _scaled(f, transfer_matrix(slots[k][2], out), c)))
            system.add(terms, out.dim)
    for w1, w2 in _covering_arrows(M.n):
        for j in range(nt):
            out = D.slice(w2, _add(generator_degree(M, w1, j), shift))
            k1, k2 = index[(w1, j)], index[(w2, j)]
            system.add(
                [(k1, transfer_matrix(slots[k1][2], out)),
                 (k2, _scaled(f, transfer_matrix(slots[k2][2], out), f.neg(f.one)))],
                out.dim,
            )
    basis = []
    for vec in system.solutions().columns():
        parts = system.split(vec)
        images = {w: [parts[index[(w, j)]] for j in range(nt)] for w in vs}
        basis.append(MorphismData(M, D, shift, images))
    return basis


def local_hom_space(M: TwistPresentation, N: LocalModule, shift: Sequence[int]):
    """Basis of Hom_{R(v)}(M(v), N) in fine degree ``shift`` (as LocalMorphism)."""
    _require_monomial(M)
    shift = tuple(shift)
    f = M.field
    v = N.vertex
    nt = len(M.targets)
    slots = [N.slice(_add(generator_degree(M, v, j), shift)) for j in range(nt)]
    system = _System(f, [s.dim for s in slots])
    for i in M._live_sources:
        out = N.slice(_add(relation_degree(M, v, i), shift))
        terms = []
        for j in range(nt):
            c = M.coefficient(j, i)
            if c != 0:
                terms.append((j, _scaled(f, transfer_matrix(slots[j], out), c)))
        system.add(terms, out.dim)
    return [LocalMorphism(M, N, shift, system.split(vec)) for vec in system.solutions().columns()]


def shift_box(n: int, W: int):
    return list(itertools.product(range(-W, W + 1), repeat=n + 1))


def ext_against_dv(P: TwistPresentation, v: Vertex, N: LocalModule, W: int, i: int = 0) -> list[dict]:
    """Hom(M, D^v N) vs Hom(M(v), N), fine degree by fine degree over |s_k| <= W.

    Only i = 0 is computable here; higher Ext needs resolutions over R(v).
    """
    if i != 0:
        raise NotImplementedError("only the Hom level (i = 0) is computed")
    if N.vertex != v:
        raise ValueError("N must be a module over R(v)")
    D = DvValue(N, W)
    rows = []
    for s in shift_box(P.n, W):
        a = len(sheaf_hom_space(P, D, s))
        b = len(local_hom_space(P, N, s))
        if a or b:
            rows.append({"shift": list(s), "sheaf": a, "local": b})
    return rows


def random_combination(basis: list, rng: random.Random, fld):
    """Random linear combination of Hom-space basis elements (all coefficients nonzero-biased)."""
    if not basis:
        return None
    coeffs = [fld(rng.randint(-5, 5)) for _ in basis]
    if all(c == 0 for c in coeffs):
        coeffs[0] = fld.one
    first = basis[0]

    def combine(vectors):
        out = [fld.zero] * len(vectors[0])
        for c, vec in zip(coeffs, vectors):
            out = [fld.add(a, fld.mul(c, x)) for a, x in zip(out, vec)]
        return tuple(out)

    if isinstance(first, MorphismData):
        images = {
            w: [combine([b.images[w][j] for b in basis]) for j in range(len(first.images[w]))]
            for w in first.images
        }
        return MorphismData(first.source, first.target, first.shift, images)
    images = [combine([b.images[j] for b in basis]) for j in range(len(first.images))]
    return LocalMorphism(first.source, first.target, first.shift, images)


def same_morphism(a, b) -> bool:
    if isinstance(a, MorphismData):
        return a.shift == b.shift and all(
            tuple(a.images[w]) == tuple(b.images[w]) for w in a.images
        )
    return a.shift == b.shift and tuple(a.images) == tuple(b.images)


def adjunction_roundtrips(M: TwistPresentation, N: LocalModule, W: int, samples: int = 2,
                          seed: int = 0, shifts: Optional[Sequence] = None) -> dict:
    """Round trips of the transpose maps on Hom bases and random combinations.

    For every fine degree with a nonzero local Hom space, each basis element
    and ``samples`` random combinations g satisfy adjoint(inverse(g)) = g, and
    the same holds from the sheaf side.  Hom dimensions are compared too.
    """
    rng = random.Random(seed)
    D = DvValue(N, W)
    fld = M.field
    tested = 0
    failures = []
    for s in (shift_box(M.n, W) if shifts is None else shifts):
        local = local_hom_space(M, N, s)
        if not local:
            continue
        sheaf = sheaf_hom_space(M, D, s)
        if len(sheaf) != len(local):
            failures.append({"shift": list(s), "reason": f"dims {len(sheaf)} != {len(local)}"})
        gs = local + [random_combination(local, rng, fld) for _ in range(samples)]
        fs = sheaf + [random_combination(sheaf, rng, fld) for _ in range(samples if sheaf else 0)]
        for g in gs:
            tested += 1
            f = inverse_transpose(g, W)
            if f.violations() or not same_morphism(adjoint_transpose(f), g):
                failures.append({"shift": list(s), "reason": "local -> sheaf -> local"})
        for f in fs:
            tested += 1
            if not same_morphism(inverse_transpose(adjoint_transpose(f), W), f):
                failures.append({"shift": list(s), "reason": "sheaf -> local -> sheaf"})
    return {"tested": tested, "failures": failures, "ok": not failures}


# -- support decomposition -------------------------------------------------------------


def maximal(vs: Sequence[Vertex]) -> list[Vertex]:
    s = list(vs)
    return [v for v in s if not any(v < w for w in s)]


@dataclass
class DecompositionResult:
    """0 -> K -> M -> ⊕_{v in B} D^v(M(v)) -> C -> 0, slice by slice."""

    window: int
    support: list
    maximal: list
    support_K: list
    support_C: list
    exact: bool
    strict: bool
    unit_iso: bool
    slice_dims: dict = field(repr=False)  # (w, delta) -> (dimK, dimM, dimMid, dimC)
    warnings: list = field(default_factory=list)

    def as_dict(self) -> dict:
        lab = lambda vs: [v.label() for v in vs]  # noqa: E731
        return {
            "window": self.window,
            "support": lab(self.support),
            "maximal": lab(self.maximal),
            "support_K": lab(self.support_K),
            "support_C": lab(self.support_C),
            "exact": self.exact,
            "strict": self.strict,
            "unit_iso": self.unit_iso,
            "warnings": list(self.warnings),
        }


def _support(val: QCohValue) -> list[Vertex]:
    return [v for v in vertices(val.n) if val.total_dim(v)]


def decomposition_sequence(P: TwistPresentation, W: int) -> DecompositionResult:
    _require_monomial(P)
    M = QCohValue(P, W)
    sup = _support(M)
    if not sup:
        raise ZeroModuleError("Supp(M) is empty, so M = 0")
    B = maximal(sup)
    f = P.field
    dims = {}
    sK, sC = set(), set()
    exact = True
    for w in vertices(P.n):
        for d in M.degrees:
            src = M.slice(w, d)
            parts = [M.slice(v | w, d) for v in B]
            mid = sum(p.dim for p in parts)
            rows = []
            for p in parts:
                rows.extend(transfer_matrix(src, p).entries)
            phi = Matrix(f, mid, src.dim, tuple(rows))
            K = kernel_basis(phi)
            r = rank(phi)
            C = Quotient(f, mid, phi.columns())
            ok = (
                (phi @ K).is_zero()
                and rank(K) == K.cols
                and K.cols == src.dim - r
                and C.dim == mid - r
                and K.cols - src.dim + mid - C.dim == 0
            )
            exact &= ok
            dims[(w, d)] = (K.cols, src.dim, mid, C.dim)
            if K.cols:
                sK.add(w)
            if C.dim:
                sC.add(w)
    key = lambda v: v.sort_key  # noqa: E731
    sup_set = set(sup)
    strict = sK < sup_set and sC < sup_set
    warnings = []
    if _support(QCohValue(P, W + 2)) != sup:
        warnings.append(f"support changes between window {W} and {W + 2}")
    return DecompositionResult(
        W, sup, B, sorted(sK, key=key), sorted(sC, key=key), exact, strict,
        not sK and not sC, dims, warnings,
    )


__all__ = [
    "evaluate", "LocalModule", "DvValue", "dv_sections", "LocalMorphism", "MorphismData",
    "adjoint_transpose", "inverse_transpose", "unit_morphism", "sheaf_hom_space",
    "local_hom_space", "ext_against_dv", "adjunction_roundtrips", "decomposition_sequence", "DecompositionResult",
    "NonCommutingMorphismError", "ZeroModuleError", "random_combination", "same_morphism",
]
