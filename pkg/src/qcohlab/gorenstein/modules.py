"""Finitely presented modules over finite rings, handled by brute force.

A module is R^g / U with U spanned by the relation vectors.  Every element
of R^g is assigned to its coset once, and the smallest vector of the coset
(in enumeration order) is the canonical representative.
"""

from __future__ import annotations

import itertools
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .rings import FiniteRing, RingSpecError

Vec = tuple

MAX_AMBIENT = 1 << 17


class ModuleSizeError(ValueError):
    """The ambient free module is too large to enumerate."""


def all_vectors(R: FiniteRing, rank: int) -> Iterable[Vec]:
    if R.size ** rank > MAX_AMBIENT:
        raise ModuleSizeError(f"R^{rank} has {R.size ** rank} elements; limit is {MAX_AMBIENT}")
    return itertools.product(range(R.size), repeat=rank)


def vadd(R: FiniteRing, u: Vec, v: Vec) -> Vec:
    return tuple(R.add[a][b] for a, b in zip(u, v))


def vscale(R: FiniteRing, a: int, v: Vec) -> Vec:
    return tuple(R.mul[a][b] for b in v)


def combine(R: FiniteRing, coeffs: Sequence[int], vectors: Sequence[Vec], rank: int) -> Vec:
    out = (0,) * rank
    for a, v in zip(coeffs, vectors):
        if a:
            out = vadd(R, out, vscale(R, a, v))
    return out


def span(R: FiniteRing, gens: Sequence[Vec], rank: int) -> frozenset:
    S = {(0,) * rank}
    for g in gens:
        multiples = {vscale(R, a, g) for a in R.elements()}
        S = {vadd(R, s, m) for s in S for m in multiples}
    return frozenset(S)


def kernel(R: FiniteRing, columns: Sequence[Vec], rank: int) -> frozenset:
    """{a in R^s : sum a_i c_i = 0} for the columns c_1..c_s of R^s -> R^rank."""
    zero = (0,) * rank
    return frozenset(a for a in all_vectors(R, len(columns)) if combine(R, a, columns, rank) == zero)


def minimal_generators(R: FiniteRing, S: frozenset, rank: int) -> list[Vec]:
    """A generating set of the submodule S of R^rank.

    Over a local ring the lift of a basis of S/mS is chosen (minimal by
    Nakayama).  Otherwise greedy selection is followed by pruning.
    """
    order = sorted(S)
    if R.is_local:
        mS = span(R, [vscale(R, m, s) for m in R.radical for s in order if m], rank)
        chosen: list[Vec] = []
        T = mS
        for s in order:
            if s not in T:
                chosen.append(s)
                T = _grow(R, T, s)
                if len(T) == len(S):
                    break
        return chosen
    chosen = []
    T = frozenset({(0,) * rank})
    while len(T) < len(S):
        best = max(order, key=lambda s: (len(_grow(R, T, s)), [-x for x in s]))
        chosen.append(best)
        T = _grow(R, T, best)
    for g in list(chosen):
        rest = [h for h in chosen if h != g]
        if len(span(R, rest, rank)) == len(S):
            chosen = rest
    return chosen


def _grow(R: FiniteRing, T: frozenset, s: Vec) -> frozenset:
    multiples = {vscale(R, a, s) for a in R.elements()}
    return frozenset(vadd(R, t, m) for t in T for m in multiples)


class FinModule:
    """R^ngens / span(relations)."""

    def __init__(self, ring: FiniteRing, ngens: int, relations: Sequence[Sequence[int]] = ()):
        rels = tuple(tuple(int(x) for x in r) for r in relations)
        for r in rels:
            if len(r) != ngens:
                raise ValueError(f"relation {r} has length {len(r)}, expected {ngens}")
            if any(not 0 <= x < ring.size for x in r):
                raise ValueError(f"relation {r} has entries outside the ring")
        self.ring = ring
        self.ngens = ngens
        self.relations = rels
        self.submodule = span(ring, rels, ngens)
        index: dict[Vec, int] = {}
        reps: list[Vec] = []
        for v in all_vectors(ring, ngens):
            if v in index:
                continue
            k = len(reps)
            reps.append(v)
            for u in self.submodule:
                index[vadd(ring, v, u)] = k
        self.index = index
        self.elements = reps

    def __repr__(self) -> str:
        return f"FinModule({self.ring.name}, gens={self.ngens}, relations={list(self.relations)}, size={self.size})"

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def zero(self) -> int:
        return 0

    def spec(self) -> str:
        rows = ";".join(",".join(self.ring.label(x) for x in r) for r in self.relations)
        return f"pres:{self.ngens}:{rows}"

    def cls(self, v: Vec) -> int:
        return self.index[tuple(v)]

    @cached_property
    def add_table(self) -> tuple:
        R = self.ring
        return tuple(
            tuple(self.index[vadd(R, u, v)] for v in self.elements) for u in self.elements
        )

    @cached_property
    def act_table(self) -> tuple:
        R = self.ring
        return tuple(tuple(self.index[vscale(R, a, v)] for v in self.elements) for a in R.elements())

    def add(self, x: int, y: int) -> int:
        return self.add_table[x][y]

    def act(self, a: int, x: int) -> int:
        return self.act_table[a][x]

    def combine(self, coeffs: Sequence[int], xs: Sequence[int]) -> int:
        out = 0
        for a, x in zip(coeffs, xs):
            if a and x:
                out = self.add_table[out][self.act_table[a][x]]
        return out

    def generator(self, k: int) -> int:
        return self.index[tuple(1 if i == k else 0 for i in range(self.ngens))]

    def part_size(self, e: int) -> int:
        return sum(1 for x in range(self.size) if self.act(e, x) == x)

    def length(self) -> int:
        return self.ring.length(self.part_size)

    def is_zero(self) -> bool:
        return self.size == 1

    def is_free_presentation(self) -> bool:
        return not self.submodule - {(0,) * self.ngens}

    # -- maps --------------------------------------------------------------------------

    def homs_to(self, N: "FinModule", restrict: Optional[int] = None) -> list[tuple]:
        """All module maps self -> N as tuples of images of the generators.

        With ``restrict = e`` only maps landing in eN are listed.
        """
        targets = range(N.size) if restrict is None else [x for x in range(N.size) if N.act(restrict, x) == x]
        out = []
        for images in itertools.product(targets, repeat=self.ngens):
            if all(N.combine(r, images) == 0 for r in self.relations):
                out.append(images)
        return out

    def hom_length(self, N: "FinModule") -> int:
        return self.ring.length(lambda e: len(self.homs_to(N, restrict=e)))

    @cached_property
    def invariant(self) -> tuple:
        R = self.ring
        torsion = tuple(sum(1 for x in range(self.size) if self.act(a, x) == 0) for a in R.elements())
        images = tuple(len({self.act(a, x) for x in range(self.size)}) for a in R.elements())
        return (self.size, torsion, images)

    def isomorphism_to(self, N: "FinModule") -> Optional[tuple]:
        if self.invariant != N.invariant:
            return None
        for images in self.homs_to(N):
            hit = {self._image(images, N, v) for v in self.elements}
            if len(hit) == N.size:
                return images
        return None

    def is_isomorphic(self, N: "FinModule") -> bool:
        return self.isomorphism_to(N) is not None

    def _image(self, images: tuple, N: "FinModule", v: Vec) -> int:
        return N.combine(v, images)

    # -- duality ----------------------------------------------------------------------

    def dual_vectors(self) -> frozenset:
        """Hom(M, R) as the vectors phi in R^g killing every relation."""
        R = self.ring
        return frozenset(
            phi for phi in all_vectors(R, self.ngens)
            if all(_dot(R, r, phi) == 0 for r in self.relations)
        )


def _dot(R: FiniteRing, u: Vec, v: Vec) -> int:
    out = 0
    for a, b in zip(u, v):
        out = R.add[out][R.mul[a][b]]
    return out


def module_from_generators(R: FiniteRing, gens: Sequence[Vec], rank: int) -> FinModule:
    """The submodule of R^rank spanned by gens, presented as R^s / syzygies."""
    syz = kernel(R, gens, rank)
    return FinModule(R, len(gens), minimal_generators(R, syz, len(gens)))


def residue_module(R: FiniteRing) -> FinModule:
    """k = R / J(R)."""
    J = frozenset((a,) for a in R.radical)
    return FinModule(R, 1, minimal_generators(R, J, 1))


def parse_module(R: FiniteRing, text: str) -> FinModule:
    """Module from "0", "R", "R^n", "k" or "pres:g:r11,r12;r21,r22"."""
    t = text.strip()
    if t == "0":
        return FinModule(R, 0, ())
    if t == "R":
        return FinModule(R, 1, ())
    if t.startswith("R^"):
        try:
            n = int(t[2:])
        except ValueError:
            raise RingSpecError(f"bad free module {text!r}") from None
        return FinModule(R, n, ())
    if t == "k":
        return residue_module(R)
    if t.startswith("pres:"):
        parts = t.split(":", 2)
        try:
            g = int(parts[1])
        except (IndexError, ValueError):
            raise RingSpecError(f"bad presentation {text!r}") from None
        rows = []
        body = parts[2] if len(parts) > 2 else ""
        for row in filter(None, body.split(";")):
            entries = [R.element(x) for x in row.split(",")]
            if len(entries) != g:
                raise RingSpecError(f"row {row!r} needs {g} entries")
            rows.append(entries)
        return FinModule(R, g, rows)
    raise RingSpecError(f"bad module spec {text!r}; use 0, R, R^n, k or pres:g:rows")
