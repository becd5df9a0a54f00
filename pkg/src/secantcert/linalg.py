"""Exact linear algebra over the Gaussian rationals Q(i).

Every routine here is exact: vanishing tests compare against zero with no
tolerance.  Elimination is fraction-free.  Denominators are cleared before
elimination, so real inputs are handled entirely with Python ``int``
arithmetic, and complex inputs with integral :class:`GaussianRational`
values.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator, Sequence, Union

__all__ = [
    "GaussianRational",
    "Matrix",
    "IndexSet",
    "DimensionError",
    "PreconditionError",
    "det",
    "rank",
    "adjugate",
    "compound",
    "signed_compound",
    "nullspace",
    "rref",
    "cofactor_nullvector",
    "inverse",
    "as_scalar",
]


class DimensionError(ValueError):
    """Operand shapes are incompatible with the requested operation."""


class PreconditionError(ValueError):
    """A documented precondition of an operation does not hold."""


_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def _parse_rational(text: str) -> Fraction:
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise ValueError(f"not a rational literal: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def _fraction_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


class GaussianRational:
    """An element ``re + im*i`` of Q(i) with both parts in lowest terms."""

    __slots__ = ("re", "im")

    def __init__(self, re: Union[int, Fraction, str] = 0, im: Union[int, Fraction, str] = 0):
        self.re = _parse_rational(re) if isinstance(re, str) else Fraction(re)
        self.im = _parse_rational(im) if isinstance(im, str) else Fraction(im)

    # construction helpers -------------------------------------------------
    @classmethod
    def _raw(cls, re: Fraction, im: Fraction) -> "GaussianRational":
        obj = object.__new__(cls)
        obj.re = re
        obj.im = im
        return obj

    @classmethod
    def parse(cls, re: str, im: str = "0") -> "GaussianRational":
        return cls._raw(_parse_rational(re), _parse_rational(im))

    def is_real(self) -> bool:
        return self.im == 0

    def is_integral(self) -> bool:
        return self.re.denominator == 1 and self.im.denominator == 1

    def conjugate(self) -> "GaussianRational":
        return GaussianRational._raw(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def to_strings(self) -> tuple[str, str]:
        return _fraction_str(self.re), _fraction_str(self.im)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        o = as_scalar(other)
        return GaussianRational._raw(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = as_scalar(other)
        return GaussianRational._raw(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return as_scalar(other) - self

    def __neg__(self):
        return GaussianRational._raw(-self.re, -self.im)

    def __pos__(self):
        return self

    def __mul__(self, other):
        o = as_scalar(other)
        if not self.im and not o.im:
            return GaussianRational._raw(self.re * o.re, Fraction(0))
        return GaussianRational._raw(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = as_scalar(other)
        if not o:
            raise ZeroDivisionError("division by zero in Q(i)")
        if not o.im:
            return GaussianRational._raw(self.re / o.re, self.im / o.re)
        n = o.norm()
        return GaussianRational._raw(
            (self.re * o.re + self.im * o.im) / n, (self.im * o.re - self.re * o.im) / n
        )

    def __rtruediv__(self, other):
        return as_scalar(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return (1 / self) ** (-k)
        result = GaussianRational._raw(Fraction(1), Fraction(0))
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # comparison -----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return f"GaussianRational({str(self)!r})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


Scalar = Union[GaussianRational, int, Fraction]

_ZERO = GaussianRational._raw(Fraction(0), Fraction(0))
_ONE = GaussianRational._raw(Fraction(1), Fraction(0))


def as_scalar(x) -> GaussianRational:
    """Coerce ints, Fractions, complex numbers with integral parts and rational strings."""
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, (int, Fraction)):
        return GaussianRational._raw(Fraction(x), Fraction(0))
    if isinstance(x, str):
        return GaussianRational._raw(_parse_rational(x), Fraction(0))
    if isinstance(x, complex):
        if x.real != int(x.real) or x.imag != int(x.imag):
            raise TypeError("only complex numbers with integral parts convert exactly")
        return GaussianRational._raw(Fraction(int(x.real)), Fraction(int(x.imag)))
    raise TypeError(f"cannot convert {type(x).__name__} to GaussianRational")


class Matrix:
    """Immutable dense ``rows x cols`` matrix over Q(i), stored row-major."""

    __slots__ = ("rows", "cols", "entries", "_hash")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        entries = tuple(as_scalar(e) for e in entries)
        if rows < 0 or cols < 0 or len(entries) != rows * cols:
            raise DimensionError(f"{len(entries)} entries do not fill a {rows}x{cols} matrix")
        self.rows = rows
        self.cols = cols
        self.entries = entries
        self._hash = None

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "Matrix":
        rows = [list(r) for r in rows]
        if not rows:
            return cls(0, 0, ())
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise DimensionError("ragged rows")
        return cls(len(rows), width, [e for r in rows for e in r])

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols, [0] * (rows * cols))

    @classmethod
    def column_vector(cls, values: Sequence) -> "Matrix":
        return cls(len(values), 1, values)

    @classmethod
    def outer(cls, u: Sequence, v: Sequence) -> "Matrix":
        u = [as_scalar(a) for a in u]
        v = [as_scalar(b) for b in v]
        return cls(len(u), len(v), [a * b for a in u for b in v])

    # access -------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij: tuple[int, int]) -> GaussianRational:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"({i}, {j}) outside {self.rows}x{self.cols}")
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[GaussianRational, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def column(self, j: int) -> tuple[GaussianRational, ...]:
        return self.entries[j :: self.cols] if self.cols else ()

    def to_rows(self) -> list[list[GaussianRational]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        """0-based row/column selection, order preserved."""
        c = self.cols
        e = self.entries
        return Matrix(len(rows), len(cols), [e[i * c + j] for i in rows for j in cols])

    def vec(self) -> tuple[GaussianRational, ...]:
        """Row-major vectorisation."""
        return self.entries

    @property
    def T(self) -> "Matrix":
        return Matrix(self.cols, self.rows, [self[i, j] for j in range(self.cols) for i in range(self.rows)])

    def is_zero(self) -> bool:
        return not any(self.entries)

    def is_symmetric(self) -> bool:
        return self.is_square() and self == self.T

    def trace(self) -> GaussianRational:
        if not self.is_square():
            raise DimensionError("trace of a non-square matrix")
        return sum((self[i, i] for i in range(self.rows)), _ZERO)

    # arithmetic ---------------------------------------------------------
    def _check_same_shape(self, other: "Matrix") -> None:
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        return Matrix(self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        return Matrix(self.rows, self.cols, [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self) -> "Matrix":
        return Matrix(self.rows, self.cols, [-a for a in self.entries])

    def scale(self, s) -> "Matrix":
        s = as_scalar(s)
        return Matrix(self.rows, self.cols, [s * a for a in self.entries])

    def __mul__(self, s) -> "Matrix":
        if isinstance(s, Matrix):
            raise TypeError("use @ for matrix products")
        return self.scale(s)

    __rmul__ = __mul__

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        a = self.to_rows()
        bt = [other.column(j) for j in range(other.cols)]
        out = []
        for r in a:
            for c in bt:
                acc = _ZERO
                for x, y in zip(r, c):
                    if x and y:
                        acc = acc + x * y
                out.append(acc)
        return Matrix(self.rows, other.cols, out)

    def apply(self, v: Sequence) -> tuple[GaussianRational, ...]:
        """Matrix-vector product."""
        if len(v) != self.cols:
            raise DimensionError("vector length does not match column count")
        v = [as_scalar(x) for x in v]
        return tuple(
            sum((a * b for a, b in zip(self.row(i), v) if a and b), _ZERO) for i in range(self.rows)
        )

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self.entries))
        return self._hash

    def __repr__(self):
        body = "; ".join(", ".join(str(x) for x in self.row(i)) for i in range(self.rows))
        return f"Matrix({self.rows}x{self.cols}: [{body}])"


class IndexSet:
    """Strictly increasing 1-based subset ``alpha`` of ``{1, ..., ambient}``."""

    __slots__ = ("ambient", "members")

    def __init__(self, ambient: int, members: Iterable[int]):
        members = tuple(members)
        if any(b <= a for a, b in zip(members, members[1:])):
            raise ValueError(f"index set {members} is not strictly increasing")
        if members and (members[0] < 1 or members[-1] > ambient):
            raise ValueError(f"index set {members} outside 1..{ambient}")
        self.ambient = ambient
        self.members = members

    @classmethod
    def all(cls, ambient: int, k: int) -> list["IndexSet"]:
        """All k-subsets in lexicographic order."""
        return [cls(ambient, c) for c in combinations(range(1, ambient + 1), k)]

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def weight(self) -> int:
        """Sum of the members, the exponent used in signed compounds."""
        return sum(self.members)

    def complement(self) -> "IndexSet":
        s = set(self.members)
        return IndexSet(self.ambient, [i for i in range(1, self.ambient + 1) if i not in s])

    def zero_based(self) -> tuple[int, ...]:
        return tuple(i - 1 for i in self.members)

    def __eq__(self, other):
        return isinstance(other, IndexSet) and (self.ambient, self.members) == (other.ambient, other.members)

    def __hash__(self):
        return hash((self.ambient, self.members))

    def __repr__(self):
        return f"IndexSet({self.ambient}, {self.members})"


# ---------------------------------------------------------------------------
# Fraction-free kernel.  Works on lists of lists of "ring elements": Python
# ints for real data, integral GaussianRationals otherwise.


def _lcm_denominator(entries: Iterable[GaussianRational]) -> int:
    den = 1
    for e in entries:
        den = math.lcm(den, e.re.denominator, e.im.denominator)
    return den


def to_ring(entries: Sequence[GaussianRational], scale: int | None = None) -> tuple[list, int]:
    """Clear denominators: returns ring elements ``scale * e`` and ``scale``."""
    if scale is None:
        scale = _lcm_denominator(entries)
    if all(not e.im for e in entries):
        return [int(e.re * scale) for e in entries], scale
    return [GaussianRational._raw(e.re * scale, e.im * scale) for e in entries], scale


def _ring_rows(a: Matrix) -> tuple[list[list], int]:
    flat, scale = to_ring(a.entries)
    c = a.cols
    return [flat[i * c : (i + 1) * c] for i in range(a.rows)], scale


def exact_div(a, b):
    """Division known to be exact in the ambient ring."""
    if type(a) is int and type(b) is int:
        q, r = divmod(a, b)
        if r:
            raise ArithmeticError("inexact fraction-free division")
        return q
    return a / b


def bareiss_det(m: list[list]):
    """Determinant of a square ring matrix (rows are copied)."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(r) for r in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if not a[k][k]:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        p = a[k][k]
        rk = a[k]
        for i in range(k + 1, n):
            ri = a[i]
            aik = ri[k]
            for j in range(k + 1, n):
                ri[j] = exact_div(p * ri[j] - aik * rk[j], prev)
            ri[k] = 0
        prev = p
    d = a[n - 1][n - 1]
    return d if sign > 0 else -d


def ff_rref(m: list[list]) -> tuple[list[list], list[int], object]:
    """Fraction-free Gauss-Jordan elimination.

    Returns ``(E, pivots, d)`` where ``E`` is ``d`` times the reduced row
    echelon form of ``m`` (rows beyond the rank are zero) and ``pivots`` lists
    the pivot columns.
    """
    a = [list(r) for r in m]
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    pivots: list[int] = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if a[i][c]), None)
        if piv is None:
            continue
        if piv != r:
            a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        rr = a[r]
        for i in range(nrows):
            if i == r:
                continue
            ri = a[i]
            aic = ri[c]
            for j in range(ncols):
                if j == c:
                    continue
                ri[j] = exact_div(p * ri[j] - aic * rr[j], prev)
            ri[c] = 0
        prev = p
        pivots.append(c)
        r += 1
    return a, pivots, prev


def ring_rank(m: list[list]) -> int:
    if not m or not m[0]:
        return 0
    return len(ff_rref(m)[1])


def _from_ring(x, scale: int = 1) -> GaussianRational:
    if type(x) is int:
        return GaussianRational._raw(Fraction(x, scale), Fraction(0))
    return x / scale if scale != 1 else x


# ---------------------------------------------------------------------------
# public operations


def det(a: Matrix) -> GaussianRational:
    """Exact determinant by fraction-free elimination."""
    if not a.is_square():
        raise DimensionError(f"determinant of a {a.rows}x{a.cols} matrix")
    rows, scale = _ring_rows(a)
    d = bareiss_det(rows)
    return _from_ring(d, scale ** a.rows)


def rank(a: Matrix) -> int:
    if a.rows == 0 or a.cols == 0:
        return 0
    rows, _ = _ring_rows(a)
    return ring_rank(rows)


def adjugate(a: Matrix) -> Matrix:
    """Transpose of the cofactor matrix; ``[[1]]`` for 1x1 input."""
    if not a.is_square():
        raise DimensionError("adjugate of a non-square matrix")
    m = a.rows
    if m == 1:
        return Matrix.identity(1)
    rows, scale = _ring_rows(a)
    out = [[None] * m for _ in range(m)]
    for i in range(m):
        for j in range(m):
            minor = [r[:j] + r[j + 1 :] for k, r in enumerate(rows) if k != i]
            c = bareiss_det(minor)
            out[j][i] = c if (i + j) % 2 == 0 else -c
    s = scale ** (m - 1)
    return Matrix(m, m, [_from_ring(x, s) for r in out for x in r])


def inverse(a: Matrix) -> Matrix:
    d = det(a)
    if not d:
        raise PreconditionError("matrix is singular")
    return adjugate(a).scale(1 / d)


def _minor_table(rows: list[list], ri: Sequence[int], ci: Sequence[int]):
    return bareiss_det([[rows[i][j] for j in ci] for i in ri])


def compound(a: Matrix, p: int) -> Matrix:
    """p-th compound: all p x p minors, rows/columns in lexicographic order."""
    if not 1 <= p <= min(a.rows, a.cols):
        raise ValueError(f"compound order {p} outside 1..{min(a.rows, a.cols)}")
    rows, scale = _ring_rows(a)
    rsets = list(combinations(range(a.rows), p))
    csets = list(combinations(range(a.cols), p))
    s = scale ** p
    out = [_from_ring(_minor_table(rows, r, c), s) for r in rsets for c in csets]
    return Matrix(len(rsets), len(csets), out)


def signed_compound(a: Matrix, p: int) -> Matrix:
    """Signed complementary compound: (-1)^(|alpha|+|beta|) det A[alpha^c, beta^c]."""
    if not a.is_square():
        raise DimensionError("signed compound of a non-square matrix")
    m = a.rows
    if not 1 <= p <= m - 1:
        raise ValueError(f"signed compound order {p} outside 1..{m - 1}")
    rows, scale = _ring_rows(a)
    sets = list(combinations(range(m), p))
    full = set(range(m))
    s = scale ** (m - p)
    out = []
    for al in sets:
        alc = sorted(full - set(al))
        for be in sets:
            bec = sorted(full - set(be))
            v = _minor_table(rows, alc, bec)
            # 0-based sums differ from 1-based ones by 2p, same parity
            if (sum(al) + sum(be)) % 2:
                v = -v
            out.append(_from_ring(v, s))
    return Matrix(len(sets), len(sets), out)


def rref(a: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form with zero rows dropped, and the pivot columns."""
    if a.rows == 0 or a.cols == 0:
        return Matrix.zeros(0, a.cols), []
    rows, _ = _ring_rows(a)
    e, pivots, d = ff_rref(rows)
    dd = _from_ring(d)
    out = [_from_ring(x) / dd for r in e[: len(pivots)] for x in r]
    return Matrix(len(pivots), a.cols, out), pivots


def nullspace(a: Matrix) -> list[tuple[GaussianRational, ...]]:
    """Basis of {x : A x = 0}, one vector per free column (that entry equal to 1)."""
    if a.cols == 0:
        return []
    if a.rows == 0:
        return [tuple(_ONE if k == j else _ZERO for k in range(a.cols)) for j in range(a.cols)]
    rows, _ = _ring_rows(a)
    e, pivots, d = ff_rref(rows)
    free = [j for j in range(a.cols) if j not in set(pivots)]
    basis = []
    for f in free:
        v = [_ZERO] * a.cols
        v[f] = _ONE
        for i, pc in enumerate(pivots):
            v[pc] = -_from_ring(e[i][f]) / _from_ring(d)
        basis.append(tuple(v))
    return basis


def cofactor_nullvector(a: Matrix, alpha: IndexSet, beta: IndexSet) -> tuple[GaussianRational, ...]:
    """Signed-minor null vector x(alpha, beta) for a matrix of rank <= k = |alpha|.

    ``x_j = 0`` off ``beta`` and ``x_{beta_i} = (-1)^(i-1) det A[alpha, beta - beta_i]``.
    """
    k = len(alpha)
    if len(beta) != k + 1:
        raise ValueError("beta must have one more member than alpha")
    if alpha.ambient != a.rows or beta.ambient != a.cols:
        raise DimensionError("index sets do not match the matrix shape")
    if not k < a.cols:
        raise PreconditionError("need k < number of columns")
    if rank(a) > k:
        raise PreconditionError(f"rank exceeds {k}")
    rows, scale = _ring_rows(a)
    ai = alpha.zero_based()
    bi = beta.zero_based()
    x = [_ZERO] * a.cols
    s = scale ** k
    for i, bj in enumerate(bi):
        cols = bi[:i] + bi[i + 1 :]
        v = _from_ring(_minor_table(rows, ai, cols), s)
        x[bj] = v if i % 2 == 0 else -v
    return tuple(x)
