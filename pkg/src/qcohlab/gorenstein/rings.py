"""Finite commutative rings given by full addition and multiplication tables.

Elements are the integers 0..size-1.  Polynomial quotients F_p[x]/(f) and
truncated polynomial algebras encode an element by its coefficient vector
read in base p.  The local decomposition (primitive idempotents, residue
fields, socles) is computed from the tables, so self-injectivity is a
derived fact about the ring rather than an input.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

MAX_RING_SIZE = 256


class RingSpecError(ValueError):
    """Malformed ring or element description."""


class RingAxiomError(RuntimeError):
    """The generated tables are not a commutative ring (internal bug guard)."""


@dataclass(frozen=True)
class LocalFactor:
    idempotent: int
    size: int          # |eR|
    residue_size: int  # |eR / m_e|
    maximal: tuple     # elements of m_e
    socle_size: int

    @property
    def self_injective(self) -> bool:
        return self.socle_size == self.residue_size


@dataclass(eq=False)
class FiniteRing:
    name: str
    add: tuple
    mul: tuple
    one: int
    labels: tuple
    parse_label: Callable[[str], int] = field(repr=False, default=None)

    zero = 0

    def __post_init__(self):
        self.size = len(self.add)
        self.neg = tuple(row.index(0) for row in self.add)
        self._verify()

    def __repr__(self) -> str:
        return f"FiniteRing({self.name!r}, size={self.size})"

    def _verify(self) -> None:
        q = self.size
        if q > MAX_RING_SIZE:
            raise RingSpecError(f"ring of size {q} exceeds the table limit {MAX_RING_SIZE}")
        A = np.array(self.add, dtype=np.int32)
        M = np.array(self.mul, dtype=np.int32)
        r = np.arange(q)
        if not (A == A.T).all() or not (M == M.T).all():
            raise RingAxiomError("tables are not commutative")
        if not (A[0] == r).all() or not (M[self.one] == r).all():
            raise RingAxiomError("0 or 1 is not neutral")
        if not (A[A[:, :, None], r[None, None, :]] == A[r[:, None, None], A[None, :, :]]).all():
            raise RingAxiomError("addition is not associative")
        if not (M[M[:, :, None], r[None, None, :]] == M[r[:, None, None], M[None, :, :]]).all():
            raise RingAxiomError("multiplication is not associative")
        # a(b + c) == ab + ac
        left = M[r[:, None, None], A[None, :, :]]
        right = A[M[:, :, None], M[:, None, :]]
        if not (left == right).all():
            raise RingAxiomError("multiplication does not distribute over addition")

    # -- arithmetic ---------------------------------------------------------------

    def elements(self) -> range:
        return range(self.size)

    def element(self, text) -> int:
        """Parse an element label ("3", "x+1", ...)."""
        if isinstance(text, int):
            text = str(text)
        try:
            return self.parse_label(text.strip())
        except RingSpecError:
            raise
        except Exception as exc:
            raise RingSpecError(f"cannot read {text!r} as an element of {self.name}") from exc

    def label(self, a: int) -> str:
        return self.labels[a]

    def sub(self, a: int, b: int) -> int:
        return self.add[a][self.neg[b]]

    def is_unit(self, a: int) -> bool:
        return self.one in self.mul[a]

    # -- structure ------------------------------------------------------------------

    @cached_property
    def idempotents(self) -> tuple:
        return tuple(e for e in self.elements() if self.mul[e][e] == e)

    @cached_property
    def primitive_idempotents(self) -> tuple:
        out = []
        for e in self.idempotents:
            if e == 0:
                continue
            if all(f in (0, e) for f in self.idempotents if self.mul[f][e] == f):
                out.append(e)
        return tuple(out)

    @cached_property
    def local_factors(self) -> tuple:
        factors = []
        for e in self.primitive_idempotents:
            eR = sorted(set(self.mul[e]))
            units = [a for a in eR if e in (self.mul[a][b] for b in eR)]
            maximal = tuple(a for a in eR if a not in set(units))
            ms = set(maximal)
            if any(self.add[a][b] not in ms for a in maximal for b in maximal):
                raise RingAxiomError(f"non-units of the factor at idempotent {e} are not an ideal")
            socle = [a for a in eR if all(self.mul[a][m] == 0 for m in maximal)]
            factors.append(LocalFactor(e, len(eR), len(eR) // len(maximal), maximal, len(socle)))
        return tuple(factors)

    @property
    def is_local(self) -> bool:
        return len(self.primitive_idempotents) == 1

    @property
    def is_field(self) -> bool:
        return all(len(f.maximal) == 1 for f in self.local_factors)

    @property
    def self_injective(self) -> bool:
        return all(f.self_injective for f in self.local_factors)

    @cached_property
    def radical(self) -> tuple:
        """The Jacobson radical; for a finite commutative ring, the nilpotents."""
        out = []
        for a in self.elements():
            x = a
            for _ in range(self.size):
                if x == 0:
                    out.append(a)
                    break
                x = self.mul[x][a]
        return tuple(out)

    @cached_property
    def ideals(self) -> tuple:
        """All ideals, each as a sorted tuple: principal ones closed under sums."""
        found = {self.span([a]) for a in self.elements()}
        frontier = set(found)
        while frontier:
            new = set()
            for I in frontier:
                for J in found:
                    S = tuple(sorted({self.add[a][b] for a in I for b in J}))
                    if S not in found:
                        new.add(S)
            found |= new
            frontier = new
        return tuple(sorted(found, key=lambda I: (len(I), I)))

    def span(self, gens: Sequence[int]) -> tuple:
        S = {0}
        for g in gens:
            S = {self.add[s][self.mul[a][g]] for s in S for a in self.elements()}
        return tuple(sorted(S))

    def length(self, size_of_part: Callable[[int], int]) -> int:
        """Composition length from the sizes |eH| of the idempotent parts."""
        total = 0
        for f in self.local_factors:
            total += exact_log(size_of_part(f.idempotent), f.residue_size)
        return total

    def describe(self) -> dict:
        return {
            "name": self.name,
            "size": self.size,
            "local": self.is_local,
            "field": self.is_field,
            "self_injective": self.self_injective,
            "residue_sizes": [f.residue_size for f in self.local_factors],
        }


def exact_log(n: int, base: int) -> int:
    k = 0
    while n > 1:
        if n % base:
            raise ValueError(f"{n} is not a power of {base}")
        n //= base
        k += 1
    return k


# -- constructors ---------------------------------------------------------------------


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p ** 0.5) + 1))


def zmod(m: int) -> FiniteRing:
    if m < 2:
        raise RingSpecError("Zmod needs modulus >= 2")
    add = tuple(tuple((a + b) % m for b in range(m)) for a in range(m))
    mul = tuple(tuple((a * b) % m for b in range(m)) for a in range(m))

    def parse(text: str) -> int:
        return int(text) % m

    return FiniteRing(f"Zmod:{m}", add, mul, 1 % m, tuple(str(a) for a in range(m)), parse)


def _algebra(name: str, p: int, monomials: list, product: Callable, one: tuple,
             parse: Callable) -> FiniteRing:
    d = len(monomials)
    q = p ** d
    vecs = [tuple((a // p ** i) % p for i in range(d)) for a in range(q)]

    def enc(v) -> int:
        return sum(c * p ** i for i, c in enumerate(v))

    add = tuple(tuple(enc([(x + y) % p for x, y in zip(vecs[a], vecs[b])]) for b in range(q)) for a in range(q))
    mul = tuple(tuple(enc(product(vecs[a], vecs[b])) for b in range(q)) for a in range(q))
    labels = tuple(_poly_label(v, monomials) for v in vecs)
    return FiniteRing(name, add, mul, enc(one), labels, lambda t: enc(parse(t)))


def _poly_label(v, monomials) -> str:
    terms = []
    for c, mono in zip(v, monomials):
        if not c:
            continue
        if mono == "1":
            terms.append(str(c))
        else:
            terms.append(mono if c == 1 else f"{c}{mono}")
    return "+".join(reversed(terms)) or "0"


_TERM = re.compile(r"^([+-]?)(\d*)\*?(?:([a-z]\w*)(?:\^(\d+))?)?$")


def _split_terms(text: str) -> list[str]:
    text = text.replace(" ", "")
    if not text:
        raise RingSpecError("empty polynomial")
    return re.findall(r"[+-]?[^+-]+", text)


def parse_univariate(text: str, p: int, var: str = "x") -> dict[int, int]:
    """Coefficients {exponent: coef mod p} of a polynomial in one variable."""
    out: dict[int, int] = {}
    for t in _split_terms(text):
        m = _TERM.match(t)
        if not m or (m.group(3) and m.group(3) != var) or (not m.group(2) and not m.group(3)):
            raise RingSpecError(f"bad polynomial term {t!r}")
        sign = -1 if m.group(1) == "-" else 1
        coef = int(m.group(2)) if m.group(2) else 1
        exp = (int(m.group(4)) if m.group(4) else 1) if m.group(3) else 0
        out[exp] = (out.get(exp, 0) + sign * coef) % p
    return {e: c for e, c in out.items() if c}


def poly_quotient(p: int, f: dict[int, int], text: str = None) -> FiniteRing:
    """F_p[x] / (f)."""
    if not _is_prime(p):
        raise RingSpecError(f"{p} is not prime")
    if not f or max(f) == 0:
        raise RingSpecError("modulus polynomial must have positive degree")
    d = max(f)
    inv = pow(f[d], -1, p)
    monic = {e: (c * inv) % p for e, c in f.items()}

    def reduce(coeffs: list) -> tuple:
        coeffs = list(coeffs)
        for e in range(len(coeffs) - 1, d - 1, -1):
            c = coeffs[e]
            if c:
                for k, a in monic.items():
                    coeffs[e - d + k] = (coeffs[e - d + k] - c * a) % p
        return tuple(coeffs[:d]) + (0,) * max(0, d - len(coeffs))

    def product(a, b):
        out = [0] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] = (out[i + j] + x * y) % p
        return reduce(out)

    def parse(t: str):
        c = parse_univariate(t, p)
        return reduce([c.get(e, 0) for e in range(max(c, default=0) + 1)] or [0])

    monomials = ["1"] + [("x" if e == 1 else f"x^{e}") for e in range(1, d)]
    name = f"GF:{p}:{text}" if text else f"GF:{p}:" + "+".join(
        ("x" if e == 1 else f"x^{e}" if e else "1") if c == 1 else f"{c}x^{e}" for e, c in sorted(f.items(), reverse=True)
    )
    return _algebra(name, p, monomials, product, (1,) + (0,) * (d - 1), parse)


def truncated_polynomial_ring(p: int, nvars: int, degree: int) -> FiniteRing:
    """F_p[x0..x_{nvars-1}] modulo all monomials of total degree >= degree.

    With nvars >= 2 and degree >= 2 the socle has dimension > 1, so this is the
    stock example of a ring that is not self-injective.
    """
    if not _is_prime(p):
        raise RingSpecError(f"{p} is not prime")
    if nvars < 1 or degree < 1:
        raise RingSpecError("need nvars >= 1 and degree >= 1")
    exps = sorted(
        (e for e in itertools.product(range(degree), repeat=nvars) if sum(e) < degree),
        key=lambda e: (sum(e), tuple(-x for x in e)),
    )
    index = {e: i for i, e in enumerate(exps)}

    def product(a, b):
        out = [0] * len(exps)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        e = tuple(u + v for u, v in zip(exps[i], exps[j]))
                        if e in index:
                            out[index[e]] = (out[index[e]] + x * y) % p
        return tuple(out)

    def mono(e) -> str:
        parts = [f"x{i}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k]
        return "*".join(parts) or "1"

    names = [mono(e) for e in exps]

    def parse(t: str):
        out = [0] * len(exps)
        for term in _split_terms(t):
            sign = -1 if term.startswith("-") else 1
            term = term.lstrip("+-")
            coef, e = 1, [0] * nvars
            for factor in term.split("*"):
                if re.fullmatch(r"\d+", factor):
                    coef *= int(factor)
                    continue
                m = re.fullmatch(r"x(\d+)(?:\^(\d+))?", factor)
                if not m or int(m.group(1)) >= nvars:
                    raise RingSpecError(f"bad factor {factor!r}")
                e[int(m.group(1))] += int(m.group(2) or 1)
            if tuple(e) in index:
                out[index[tuple(e)]] = (out[index[tuple(e)]] + sign * coef) % p
        return tuple(out)

    return _algebra(f"Trunc:{p}:{nvars}:{degree}", p, names, product, (1,) + (0,) * (len(exps) - 1), parse)


def parse_ring(spec: str) -> FiniteRing:
    """Ring from "Zmod:m", "GF:p:f(x)" or "Trunc:p:nvars:degree"."""
    parts = spec.strip().split(":")
    try:
        if parts[0] == "Zmod" and len(parts) == 2:
            return zmod(int(parts[1]))
        if parts[0] == "GF" and len(parts) == 3:
            p = int(parts[1])
            return poly_quotient(p, parse_univariate(parts[2], p), parts[2].replace(" ", ""))
        if parts[0] == "Trunc" and len(parts) == 4:
            return truncated_polynomial_ring(int(parts[1]), int(parts[2]), int(parts[3]))
    except RingSpecError:
        raise
    except ValueError as exc:
        raise RingSpecError(f"malformed ring spec {spec!r}: {exc}") from exc
    raise RingSpecError(f"malformed ring spec {spec!r}; expected Zmod:m, GF:p:f(x) or Trunc:p:n:d")
