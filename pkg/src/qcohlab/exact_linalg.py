"""Exact linear algebra over prime fields and the rationals.

Everything here is exact: F_p elements are reduced ints, rationals are
``fractions.Fraction``.  Matrices are small and dense; the sheaf engines
split their work into per-multidegree slices so nothing large is ever
eliminated at once.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence


class MalformedComplexError(ValueError):
    """Raised when consecutive differentials do not compose to zero."""


class PrimeField:
    """The field F_p."""

    def __init__(self, p: int):
        if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.zero = 0
        self.one = 1

    def __repr__(self) -> str:
        return f"PrimeField({self.p})"

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("F", self.p))

    @property
    def name(self) -> str:
        return f"F{self.p}"

    def __call__(self, x) -> int:
        if isinstance(x, Fraction):
            return self(x.numerator) * self.inv(self(x.denominator)) % self.p
        if isinstance(x, str):
            return self(Fraction(x))
        return int(x) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of 0 in F_p")
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return a * self.inv(b) % self.p


class Rationals:
    """The field Q, with always-reduced ``Fraction`` elements."""

    zero = Fraction(0)
    one = Fraction(1)
    name = "Q"

    def __repr__(self) -> str:
        return "Rationals()"

    def __eq__(self, other) -> bool:
        return isinstance(other, Rationals)

    def __hash__(self) -> int:
        return hash("Q")

    def __call__(self, x) -> Fraction:
        return Fraction(x)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in Q")
        return 1 / Fraction(a)

    def div(self, a, b):
        return Fraction(a) / b


QQ = Rationals()


def field_from_name(name: str | int):
    """``"Q"`` gives the rationals, ``"7"``/``"F7"``/``7`` gives F_7."""
    if isinstance(name, int):
        return PrimeField(name)
    name = name.strip()
    if name.upper() in ("Q", "QQ"):
        return QQ
    if name.upper().startswith("F"):
        name = name[1:]
    return PrimeField(int(name))


@dataclass(frozen=True)
class Matrix:
    """Dense matrix over an exact field; ``entries`` is a tuple of row tuples."""

    field: object
    rows: int
    cols: int
    entries: tuple = field(repr=False)

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("entry count inconsistent with dimensions")

    @classmethod
    def from_rows(cls, fld, rows: Sequence[Sequence], cols: Optional[int] = None) -> "Matrix":
        rows = [tuple(fld(x) for x in r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(fld, len(rows), cols, tuple(rows))

    @classmethod
    def from_columns(cls, fld, columns: Sequence[Sequence], rows: int) -> "Matrix":
        cols = [tuple(c) for c in columns]
        entries = tuple(tuple(c[i] for c in cols) for i in range(rows))
        return cls(fld, rows, len(cols), entries)

    @classmethod
    def zeros(cls, fld, rows: int, cols: int) -> "Matrix":
        return cls(fld, rows, cols, tuple((fld.zero,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, fld, n: int) -> "Matrix":
        return cls(
            fld, n, n,
            tuple(tuple(fld.one if i == j else fld.zero for j in range(n)) for i in range(n)),
        )

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.entries)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "Matrix":
        if not self.rows:
            return Matrix(self.field, self.cols, 0, tuple(() for _ in range(self.cols)))
        return Matrix(self.field, self.cols, self.rows, tuple(zip(*self.entries)))

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.entries for x in r)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        f = self.field
        # row i of the product is sum_k a_ik * (row k of other), skipping zeros
        orows = [[(j, b) for j, b in enumerate(r) if b] for r in other.entries]
        out = []
        for r in self.entries:
            acc: dict = {}
            for k, a in enumerate(r):
                if a:
                    for j, b in orows[k]:
                        acc[j] = f.add(acc.get(j, f.zero), f.mul(a, b))
            out.append(tuple(acc.get(j, f.zero) for j in range(other.cols)))
        return Matrix(f, self.rows, other.cols, tuple(out))

    def apply(self, vec: Sequence) -> tuple:
        if len(vec) != self.cols:
            raise ValueError("vector length does not match column count")
        f = self.field
        out = []
        for r in self.entries:
            s = f.zero
            for a, b in zip(r, vec):
                if a and b:
                    s = f.add(s, f.mul(a, b))
            out.append(s)
        return tuple(out)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Matrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def tolist(self) -> list[list]:
        return [list(r) for r in self.entries]


def block_rows(fld, blocks: Sequence[Matrix], cols: int) -> Matrix:
    """Stack matrices with a common column count vertically."""
    rows = []
    for b in blocks:
        if b.cols != cols:
            raise ValueError("column mismatch in vertical stack")
        rows.extend(b.entries)
    return Matrix(fld, len(rows), cols, tuple(rows))


def hstack(fld, blocks: Sequence[Matrix], rows: int) -> Matrix:
    out = [[] for _ in range(rows)]
    for b in blocks:
        if b.rows != rows:
            raise ValueError("row mismatch in horizontal stack")
        for i, r in enumerate(b.entries):
            out[i].extend(r)
    cols = sum(b.cols for b in blocks)
    return Matrix(fld, rows, cols, tuple(tuple(r) for r in out))


def rref(m: Matrix) -> tuple[list[list], list[int]]:
    """Reduced row echelon form: (nonzero rows, pivot columns)."""
    f = m.field
    # sparse rows: Čech differentials are mostly zeros
    rows = [{c: x for c, x in enumerate(r) if x != 0} for r in m.entries]
    rows = [r for r in rows if r]
    done: list[tuple[int, dict]] = []
    for c in range(m.cols):
        hits = [i for i, r in enumerate(rows) if c in r]
        if not hits:
            continue
        # the sparsest candidate keeps fill-in down; the final form is unique anyway
        k = min(hits, key=lambda i: len(rows[i]))
        piv = rows.pop(k)
        inv = f.inv(piv[c])
        piv = {j: f.mul(x, inv) for j, x in piv.items()}

        def eliminate(r: dict) -> dict:
            t = r[c]
            for j, y in piv.items():
                v = f.sub(r.get(j, f.zero), f.mul(t, y))
                if v != 0:
                    r[j] = v
                else:
                    r.pop(j, None)
            return r

        rows = [r for r in (eliminate(r) if c in r else r for r in rows) if r]
        for _pc, r in done:
            if c in r:
                eliminate(r)
        done.append((c, piv))
        if not rows:
            break
    out = [[r.get(j, f.zero) for j in range(m.cols)] for _pc, r in done]
    return out, [pc for pc, _r in done]


def rank(m: Matrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    return len(rref(m)[1])


def kernel_basis(m: Matrix) -> Matrix:
    """Columns form a basis of {x : m x = 0}."""
    f = m.field
    rows, pivots = rref(m)
    free = [c for c in range(m.cols) if c not in set(pivots)]
    basis = []
    for fc in free:
        v = [f.zero] * m.cols
        v[fc] = f.one
        for r, pc in zip(rows, pivots):
            v[pc] = f.neg(r[fc])
        basis.append(tuple(v))
    return Matrix.from_columns(f, basis, m.cols)


def solve(m: Matrix, b: Sequence) -> Optional[tuple]:
    """A solution of m x = b, or None when b is outside the column space."""
    if len(b) != m.rows:
        raise ValueError(f"right-hand side has length {len(b)}, expected {m.rows}")
    f = m.field
    aug = Matrix(f, m.rows, m.cols + 1, tuple(tuple(r) + (f(x),) for r, x in zip(m.entries, b)))
    rows, pivots = rref(aug)
    if pivots and pivots[-1] == m.cols:
        return None
    x = [f.zero] * m.cols
    for r, pc in zip(rows, pivots):
        x[pc] = r[m.cols]
    return tuple(x)


class Quotient:
    """The quotient k^dim / span(vectors) with a basis of standard-vector representatives.

    Representatives are the coordinates that are not pivots of the row-reduced
    spanning set; ``coords`` reduces a vector against the spanning set and
    reads off those coordinates.
    """

    def __init__(self, fld, dim: int, vectors: Iterable[Sequence]):
        self.field = fld
        self.ambient = dim
        vecs = [tuple(v) for v in vectors]
        if vecs and dim:
            self._rows, self._pivots = rref(Matrix(fld, len(vecs), dim, tuple(vecs)))
        else:
            self._rows, self._pivots = [], []
        piv = set(self._pivots)
        self.reps = [i for i in range(dim) if i not in piv]
        self._rep_pos = {r: k for k, r in enumerate(self.reps)}

    @property
    def dim(self) -> int:
        return len(self.reps)

    @property
    def relations_rank(self) -> int:
        return len(self._pivots)

    def reduce(self, vec: Sequence) -> list:
        f = self.field
        v = list(vec)
        for r, pc in zip(self._rows, self._pivots):
            if v[pc] != 0:
                t = v[pc]
                v = [f.sub(x, f.mul(t, y)) for x, y in zip(v, r)]
        return v

    def coords(self, vec: Sequence) -> tuple:
        v = self.reduce(vec)
        return tuple(v[i] for i in self.reps)

    def lift(self, coords: Sequence) -> tuple:
        f = self.field
        v = [f.zero] * self.ambient
        for c, i in zip(coords, self.reps):
            v[i] = c
        return tuple(v)


@dataclass(frozen=True)
class Complex:
    """A finite cochain complex of vector spaces.

    ``dims[k]`` is the dimension of the space in degree ``start + k``;
    ``differentials[k]`` maps degree ``start + k`` to ``start + k + 1``.
    Degrees outside the stored range are zero.
    """

    field: object
    dims: tuple
    differentials: tuple
    start: int = 0

    def __post_init__(self):
        if len(self.differentials) != max(len(self.dims) - 1, 0):
            raise ValueError("need exactly one differential between consecutive spaces")
        for k, d in enumerate(self.differentials):
            if d.cols != self.dims[k] or d.rows != self.dims[k + 1]:
                raise ValueError(f"differential {self.start + k} has wrong shape")

    def dim(self, i: int) -> int:
        k = i - self.start
        return self.dims[k] if 0 <= k < len(self.dims) else 0

    def differential(self, i: int) -> Matrix:
        """d^i : C^i -> C^{i+1} (a zero matrix outside the stored range)."""
        k = i - self.start
        if 0 <= k < len(self.differentials):
            return self.differentials[k]
        return Matrix.zeros(self.field, self.dim(i + 1), self.dim(i))

    def check(self) -> None:
        for k in range(len(self.differentials) - 1):
            comp = self.differentials[k + 1] @ self.differentials[k]
            if not comp.is_zero():
                raise MalformedComplexError(f"d^{self.start + k + 1} d^{self.start + k} != 0")

    @property
    def degrees(self) -> range:
        return range(self.start, self.start + len(self.dims))


def cohomology_dim(c: Complex, i: int) -> int:
    """dim ker d^i - rank d^{i-1}."""
    din, dout = c.differential(i - 1), c.differential(i)
    if din.cols and dout.rows and c.dim(i):
        if not (dout @ din).is_zero():
            raise MalformedComplexError(f"d^{i} d^{i-1} != 0")
    return c.dim(i) - rank(dout) - rank(din)


def cohomology_dims(c: Complex) -> dict[int, int]:
    c.check()
    ranks = {i: rank(c.differential(i)) for i in range(c.start - 1, c.start + len(c.dims))}
    return {i: c.dim(i) - ranks[i] - ranks[i - 1] for i in c.degrees}
