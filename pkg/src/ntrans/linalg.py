"""Exact dense linear algebra over the rationals and prime fields.

Vectors are plain lists of field scalars and matrices are lists of rows.
Rationals use :class:`fractions.Fraction`; residues mod a prime use
:class:`Mod`, a tiny value type with the usual operators.  Every routine is
a pure function and never mutates its arguments.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import gcd
from typing import Hashable, Iterable, Sequence


class InconsistentSystemError(ValueError):
    """Raised by :func:`solve` when the right-hand side is not in the column span."""


class DimensionMismatchError(ValueError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class Mod:
    """Residue class modulo a prime, stored in [0, p)."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, Mod):
            if other.p != self.p:
                raise ValueError("mixing residues of different primes")
            return other.v
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(self.v * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Mod(-self.v, self.p)

    def inverse(self) -> "Mod":
        if self.v == 0:
            raise ZeroDivisionError("inverse of zero residue")
        return Mod(pow(self.v, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * Mod(o, self.p).inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(o, self.p) * self.inverse()

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return (self.v - o) % self.p == 0

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return f"Mod({self.v}, {self.p})"

    def __str__(self):
        return str(self.v)


@dataclass(frozen=True)
class Field:
    """Field descriptor: ``Field()`` is the rationals, ``Field(p)`` is GF(p)."""

    p: int = 0

    def __post_init__(self):
        if self.p and not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @property
    def is_rational(self) -> bool:
        return self.p == 0

    def __call__(self, x):
        if self.p == 0:
            if isinstance(x, Mod):
                raise TypeError("cannot lift a residue to the rationals")
            return Fraction(x)
        if isinstance(x, Mod):
            if x.p != self.p:
                raise ValueError("residue of a different prime")
            return x
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, Fraction):
            return Mod(x.numerator, self.p) / Mod(x.denominator, self.p)
        return Mod(int(x), self.p)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def describe(self) -> str:
        return "rational" if self.p == 0 else f"gf {self.p}"

    def __str__(self):
        return "Q" if self.p == 0 else f"GF({self.p})"


QQ = Field()


def format_scalar(c) -> str:
    if isinstance(c, Fraction) and c.denominator == 1:
        return str(c.numerator)
    return str(c)


@dataclass(frozen=True)
class Matrix:
    """A dense matrix with optional row/column labels.

    ``entries`` is a tuple of row tuples already coerced into ``field``.
    """

    entries: tuple
    ncols: int
    field: Field = QQ
    row_labels: tuple | None = None
    col_labels: tuple | None = None

    def __post_init__(self):
        for r in self.entries:
            if len(r) != self.ncols:
                raise DimensionMismatchError("ragged matrix")
        for labels, n in ((self.row_labels, self.nrows), (self.col_labels, self.ncols)):
            if labels is not None:
                if len(labels) != n:
                    raise DimensionMismatchError("label count does not match axis")
                if len(set(labels)) != n:
                    raise ValueError("labels must be unique")

    @classmethod
    def of(cls, rows: Iterable[Sequence], field: Field = QQ, ncols: int | None = None,
           row_labels=None, col_labels=None) -> "Matrix":
        rows = [tuple(field(x) for x in r) for r in rows]
        if ncols is None:
            if not rows:
                raise ValueError("ncols required for an empty matrix")
            ncols = len(rows[0])
        return cls(tuple(rows), ncols, field,
                   None if row_labels is None else tuple(row_labels),
                   None if col_labels is None else tuple(col_labels))

    @classmethod
    def identity(cls, n: int, field: Field = QQ) -> "Matrix":
        return cls.of([[1 if i == j else 0 for j in range(n)] for i in range(n)], field, n)

    @property
    def nrows(self) -> int:
        return len(self.entries)

    def rows(self) -> list[list]:
        return [list(r) for r in self.entries]

    def __matmul__(self, v: Sequence) -> list:
        if len(v) != self.ncols:
            raise DimensionMismatchError("vector length does not match columns")
        return [sum((a * b for a, b in zip(r, v) if a and b), self.field.zero) for r in self.entries]


# -- elimination core -----------------------------------------------------------
# Rows are eliminated as sparse integer dicts: rationals are cleared of
# denominators and kept primitive, residues are lifted to plain ints.  This keeps
# Fraction arithmetic out of the inner loops.

def _field_of(rows) -> int:
    for r in rows:
        for x in (r.values() if isinstance(r, dict) else r):
            return x.p if isinstance(x, Mod) else 0
    return 0


def _to_int(v: dict, p: int) -> dict:
    if p:
        return {k: int(x) for k, x in v.items() if x}
    den = 1
    for x in v.values():
        if x and not isinstance(x, int):
            d = x.denominator
            den = den * d // gcd(den, d)
    return {k: int(x * den) for k, x in v.items() if x}


def _primitive(v: dict) -> dict:
    g = 0
    for x in v.values():
        g = gcd(g, x)
        if g == 1:
            return v
    return {k: x // g for k, x in v.items()} if g > 1 else v


def _combine(a: int, v: dict, b: int, w: dict, p: int) -> dict:
    """a·v − b·w (mod p when p > 0)."""
    out = {k: a * x for k, x in v.items()} if a != 1 else dict(v)
    for k, y in w.items():
        x = out.get(k, 0) - b * y
        if p:
            x %= p
        if x:
            out[k] = x
        else:
            out.pop(k, None)
    return out


def _eliminate(v: dict, piv: dict, c: int, p: int) -> dict:
    """Clear column c of v using the row piv (piv[c] ≠ 0)."""
    if p:
        return _combine(1, v, v[c] * pow(piv[c], -1, p) % p, piv, p)
    return _primitive(_combine(piv[c], v, v[c], piv, 0))


def _rref_int(rows: Iterable[dict], p: int) -> dict[int, dict]:
    """Fully reduced echelon form {pivot column: integer row}."""
    ech: dict[int, dict] = {}
    for v in rows:
        for c in [c for c in v if c in ech]:
            if v.get(c):
                v = _eliminate(v, ech[c], c, p)
        if not v:
            continue
        lead = min(v)
        if p:
            inv = pow(v[lead], -1, p)
            v = {k: x * inv % p for k, x in v.items()}
        else:
            if v[lead] < 0:
                v = {k: -x for k, x in v.items()}
            v = _primitive(v)
        for c, row in list(ech.items()):
            if row.get(lead):
                ech[c] = _eliminate(row, v, lead, p)
        ech[lead] = v
    return ech


def _from_int(row: dict, c: int, p: int) -> dict:
    if p:
        return {k: Mod(x, p) for k, x in row.items()}
    a = row[c]
    return {k: Fraction(x, a) for k, x in row.items()}


def rref_sparse(rows: Iterable[dict], field: Field) -> tuple[list[dict], list[int]]:
    """rref of sparse rows {int column: scalar}; returns (rows, pivot columns)."""
    p = field.p
    ech = _rref_int((_to_int(r, p) for r in rows), p)
    pivots = sorted(ech)
    return [_from_int(ech[c], c, p) for c in pivots], pivots


def rank_sparse(rows: Iterable[dict], field: Field) -> int:
    """Rank of sparse rows with arbitrary hashable keys."""
    order: dict = {}
    p = field.p
    ech: dict[int, dict] = {}
    for r in rows:
        v = {order.setdefault(k, len(order)): x for k, x in _to_int(r, p).items()}
        while v:
            c = min(v)
            piv = ech.get(c)
            if piv is None:
                ech[c] = v
                break
            v = _eliminate(v, piv, c, p)
    return len(ech)


def kernel_sparse(rows: Iterable[dict], ncols: int, field: Field) -> list[dict]:
    """Canonical basis of {x : r·x = 0 for every sparse row r}, as sparse vectors."""
    p = field.p
    ech = _rref_int((_to_int(r, p) for r in rows), p)
    basis = []
    for f in range(ncols):
        if f in ech:
            continue
        v = {f: 1}
        for c, row in ech.items():
            x = row.get(f)
            if x:
                v[c] = (-x * pow(row[c], -1, p)) % p if p else Fraction(-x, row[c])
        basis.append(v)
    if p:
        basis = [{k: Mod(x, p) for k, x in v.items()} for v in basis]
    else:
        basis = [{k: Fraction(x) for k, x in v.items()} for v in basis]
    return rref_sparse(basis, field)[0]


class SparseEchelon:
    """Incremental echelon basis of sparse vectors {int column: scalar}, for span tests."""

    def __init__(self, field: Field):
        self.p = field.p
        self.rows: dict[int, dict] = {}

    def __len__(self):
        return len(self.rows)

    def _reduce(self, v: dict) -> dict:
        while v:
            c = min(v)
            piv = self.rows.get(c)
            if piv is None:
                return v
            v = _eliminate(v, piv, c, self.p)
        return v

    def contains(self, v: dict) -> bool:
        return not self._reduce(_to_int(v, self.p))

    def add(self, v: dict) -> bool:
        """Insert v; True when it was independent of the rows so far."""
        w = self._reduce(_to_int(v, self.p))
        if not w:
            return False
        self.rows[min(w)] = w
        return True


# -- dense row-list wrappers ------------------------------------------------------
# These work on lists of rows whose entries are already field scalars.

def _sparse(r: Sequence) -> dict:
    return {c: x for c, x in enumerate(r) if x}


def rref_rows(rows: Sequence[Sequence], ncols: int) -> tuple[list[list], list[int]]:
    """Reduced row-echelon form of ``rows``; returns (nonzero reduced rows, pivot columns)."""
    p = _field_of(rows)
    ech = _rref_int((_to_int(_sparse(r), p) for r in rows), p)
    pivots = sorted(ech)
    zero = Mod(0, p) if p else Fraction(0)
    out = []
    for c in pivots:
        dense = [zero] * ncols
        for k, x in _from_int(ech[c], c, p).items():
            dense[k] = x
        out.append(dense)
    return out, pivots


def rank_rows(rows: Sequence[Sequence], ncols: int) -> int:
    p = _field_of(rows)
    return rank_sparse((_sparse(r) for r in rows), Field(p))


def kernel_rows(rows: Sequence[Sequence], ncols: int, field: Field) -> list[list]:
    """Canonical (rref) basis of {x : rows · x = 0}."""
    out = []
    for v in kernel_sparse((_sparse(r) for r in rows), ncols, field):
        dense = [field.zero] * ncols
        for k, x in v.items():
            dense[k] = x
        out.append(dense)
    return out


def reduce_vector(v: Sequence, basis: Sequence[Sequence], pivots: Sequence[int]) -> list:
    """Reduce ``v`` modulo an rref ``basis``; the result is zero iff v is in the span."""
    w = list(v)
    for row, c in zip(basis, pivots):
        f = w[c]
        if f:
            w = [a - f * b if b else a for a, b in zip(w, row)]
    return w


def intersect_rows(a: Sequence[Sequence], b: Sequence[Sequence], n: int, field: Field) -> list[list]:
    """Canonical basis of span(a) ∩ span(b) by the Zassenhaus trick."""
    zero = field.zero
    stacked = [list(r) + list(r) for r in a] + [list(r) + [zero] * n for r in b]
    red, pivots = rref_rows(stacked, 2 * n)
    inter = [row[n:] for row, c in zip(red, pivots) if c >= n]
    return rref_rows(inter, n)[0]


# -- public operations ----------------------------------------------------------

def rref(m: Matrix) -> tuple[int, Matrix, list[int]]:
    red, pivots = rref_rows(m.entries, m.ncols)
    zero = m.field.zero
    full = red + [[zero] * m.ncols for _ in range(m.nrows - len(red))]
    out = Matrix(tuple(tuple(r) for r in full), m.ncols, m.field, None, m.col_labels)
    return len(pivots), out, pivots


def kernel(m: Matrix) -> list[list]:
    return kernel_rows(m.entries, m.ncols, m.field)


def _check_lengths(vectors, n):
    for v in vectors:
        if len(v) != n:
            raise DimensionMismatchError(f"vector of length {len(v)} in ambient dimension {n}")


def intersect(a: Sequence[Sequence], b: Sequence[Sequence], ambient_dim: int, field: Field = QQ) -> list[list]:
    _check_lengths(a, ambient_dim)
    _check_lengths(b, ambient_dim)
    a = [[field(x) for x in v] for v in a]
    b = [[field(x) for x in v] for v in b]
    return intersect_rows(a, b, ambient_dim, field)


def solve(m: Matrix, rhs: Sequence) -> list:
    """Solve m·x = rhs, setting free variables to zero."""
    if len(rhs) != m.nrows:
        raise DimensionMismatchError("rhs length must equal the number of rows")
    f = m.field
    aug = [list(r) + [f(b)] for r, b in zip(m.entries, rhs)]
    red, pivots = rref_rows(aug, m.ncols + 1)
    if pivots and pivots[-1] == m.ncols:
        raise InconsistentSystemError("inconsistent")
    x = [f.zero] * m.ncols
    for row, c in zip(red, pivots):
        x[c] = row[-1]
    return x


@dataclass(frozen=True)
class Subspace:
    """A subspace of field^dim held by its canonical rref basis."""

    dim_ambient: int
    basis: tuple
    pivots: tuple
    field: Field = QQ

    @classmethod
    def span(cls, vectors: Iterable[Sequence], dim_ambient: int, field: Field = QQ) -> "Subspace":
        vectors = [list(v) for v in vectors]
        _check_lengths(vectors, dim_ambient)
        red, piv = rref_rows(vectors, dim_ambient)
        return cls(dim_ambient, tuple(tuple(r) for r in red), tuple(piv), field)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: Sequence) -> bool:
        return not any(reduce_vector(v, self.basis, self.pivots))

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(list(self.basis) + list(other.basis), self.dim_ambient, self.field)

    def __and__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(intersect_rows(self.basis, other.basis, self.dim_ambient, self.field),
                             self.dim_ambient, self.field)


@dataclass
class LabeledSpace:
    """Coordinates for vectors indexed by hashable labels (paths, word pairs)."""

    labels: list = dc_field(default_factory=list)
    index: dict = dc_field(default_factory=dict)

    def add(self, label: Hashable) -> int:
        i = self.index.get(label)
        if i is None:
            i = len(self.labels)
            self.index[label] = i
            self.labels.append(label)
        return i

    def dense(self, sparse: dict, field: Field) -> list:
        v = [field.zero] * len(self.labels)
        for k, c in sparse.items():
            v[self.index[k]] = c
        return v


def rank_of_sparse(rows: Sequence[dict], field: Field) -> int:
    """Rank of vectors given as {label: coefficient} dictionaries."""
    return rank_sparse(rows, field)
