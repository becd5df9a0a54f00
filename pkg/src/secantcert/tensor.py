"""Dense 3-tensors over Q(i), their slices, slice spaces and basis changes.

Slices are numbered from 1 like the modes: ``slice(T, 3, k)`` is the matrix
``[t_ijk]`` with the third index fixed to ``k``.  Entries are stored in
lexicographic ``(i, j, k)`` order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .linalg import (
    DimensionError,
    GaussianRational,
    Matrix,
    as_scalar,
    inverse,
    nullspace,
    rank,
)

__all__ = [
    "Tensor3",
    "SliceSpace",
    "ReductionRecord",
    "slice",
    "slices",
    "slice_space",
    "change_basis",
    "permute_modes",
    "inverse_perm",
    "common_left_kernel",
    "common_right_kernel",
    "reduce_to_334",
    "expand_from_334",
]

_builtin_slice = slice


class Tensor3:
    """An ``m x n x l`` array of Gaussian rationals."""

    __slots__ = ("m", "n", "l", "entries")

    def __init__(self, m: int, n: int, l: int, entries: Iterable):
        entries = tuple(as_scalar(e) for e in entries)
        if min(m, n, l) < 1 or len(entries) != m * n * l:
            raise DimensionError(f"{len(entries)} entries do not fill {m}x{n}x{l}")
        self.m, self.n, self.l = m, n, l
        self.entries = entries

    @classmethod
    def zeros(cls, m: int, n: int, l: int) -> "Tensor3":
        return cls(m, n, l, [0] * (m * n * l))

    @classmethod
    def from_nested(cls, data: Sequence[Sequence[Sequence]]) -> "Tensor3":
        """Build from ``data[i][j][k]``."""
        m, n, l = len(data), len(data[0]), len(data[0][0])
        return cls(m, n, l, [data[i][j][k] for i in range(m) for j in range(n) for k in range(l)])

    @classmethod
    def from_slices(cls, slices: Sequence[Matrix]) -> "Tensor3":
        """Stack matrices as the mode-3 slices ``T_1, ..., T_l``."""
        m, n = slices[0].shape
        if any(s.shape != (m, n) for s in slices):
            raise DimensionError("slices of unequal shape")
        l = len(slices)
        return cls(m, n, l, [slices[k][i, j] for i in range(m) for j in range(n) for k in range(l)])

    @classmethod
    def rank_one(cls, u: Sequence, v: Sequence, w: Sequence) -> "Tensor3":
        u = [as_scalar(x) for x in u]
        v = [as_scalar(x) for x in v]
        w = [as_scalar(x) for x in w]
        return cls(len(u), len(v), len(w), [a * b * c for a in u for b in v for c in w])

    @classmethod
    def from_factors(cls, factors: Sequence[tuple[Sequence, Sequence, Sequence]]) -> "Tensor3":
        total = None
        for u, v, w in factors:
            t = cls.rank_one(u, v, w)
            total = t if total is None else total + t
        if total is None:
            raise ValueError("no factors given")
        return total

    @property
    def dims(self) -> tuple[int, int, int]:
        return self.m, self.n, self.l

    def _index(self, i: int, j: int, k: int) -> int:
        return (i * self.n + j) * self.l + k

    def __getitem__(self, ijk: tuple[int, int, int]) -> GaussianRational:
        i, j, k = ijk
        if not (0 <= i < self.m and 0 <= j < self.n and 0 <= k < self.l):
            raise IndexError(f"{ijk} outside {self.dims}")
        return self.entries[self._index(i, j, k)]

    def to_nested(self) -> list[list[list[GaussianRational]]]:
        return [[[self[i, j, k] for k in range(self.l)] for j in range(self.n)] for i in range(self.m)]

    def is_zero(self) -> bool:
        return not any(self.entries)

    def is_real(self) -> bool:
        return all(not e.im for e in self.entries)

    def __add__(self, other: "Tensor3") -> "Tensor3":
        if self.dims != other.dims:
            raise DimensionError("tensor shape mismatch")
        return Tensor3(*self.dims, [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: "Tensor3") -> "Tensor3":
        if self.dims != other.dims:
            raise DimensionError("tensor shape mismatch")
        return Tensor3(*self.dims, [a - b for a, b in zip(self.entries, other.entries)])

    def scale(self, s) -> "Tensor3":
        s = as_scalar(s)
        return Tensor3(*self.dims, [s * a for a in self.entries])

    def __eq__(self, other):
        return isinstance(other, Tensor3) and self.dims == other.dims and self.entries == other.entries

    def __hash__(self):
        return hash((self.dims, self.entries))

    def __repr__(self):
        return f"Tensor3({self.m}x{self.n}x{self.l})"


@dataclass(frozen=True)
class SliceSpace:
    """The raw p-slices of a tensor (possibly dependent) and the dimension of their span."""

    mode: int
    slices: tuple[Matrix, ...]
    span_dim: int

    @property
    def shape(self) -> tuple[int, int]:
        return self.slices[0].shape

    def element(self, coeffs: Sequence) -> Matrix:
        """The span element ``sum_k coeffs[k] * slices[k]``."""
        if len(coeffs) != len(self.slices):
            raise DimensionError("coefficient vector length does not match slice count")
        r, c = self.shape
        acc = [GaussianRational()] * (r * c)
        for a, s in zip(coeffs, self.slices):
            a = as_scalar(a)
            if a:
                acc = [x + a * y for x, y in zip(acc, s.entries)]
        return Matrix(r, c, acc)

    def independent_indices(self) -> list[int]:
        """Indices of a maximal linearly independent subset of the raw slices (greedy, in order)."""
        chosen: list[int] = []
        rows: list = []
        for k, s in enumerate(self.slices):
            trial = rows + [s.entries]
            if rank(Matrix.from_rows(trial)) > len(rows):
                rows = trial
                chosen.append(k)
        return chosen


def _check_mode(mode: int) -> None:
    if mode not in (1, 2, 3):
        raise ValueError(f"mode must be 1, 2 or 3, got {mode}")


def slice(t: Tensor3, mode: int, k: int) -> Matrix:  # noqa: A001 - mirrors the mathematical name
    """The k-th mode-``mode`` slice, ``1 <= k <= extent``."""
    _check_mode(mode)
    extent = t.dims[mode - 1]
    if not 1 <= k <= extent:
        raise IndexError(f"slice {k} outside 1..{extent} for mode {mode}")
    k -= 1
    if mode == 3:
        return Matrix(t.m, t.n, [t[i, j, k] for i in range(t.m) for j in range(t.n)])
    if mode == 1:
        return Matrix(t.n, t.l, [t[k, j, c] for j in range(t.n) for c in range(t.l)])
    return Matrix(t.m, t.l, [t[i, k, c] for i in range(t.m) for c in range(t.l)])


def slices(t: Tensor3, mode: int) -> tuple[Matrix, ...]:
    return tuple(slice(t, mode, k) for k in range(1, t.dims[mode - 1] + 1))


def _span_dim(mats: Sequence[Matrix]) -> int:
    return rank(Matrix.from_rows([s.entries for s in mats]))


def slice_space(t: Tensor3, mode: int) -> SliceSpace:
    ss = slices(t, mode)
    return SliceSpace(mode, ss, _span_dim(ss))


def _mode_product(t: Tensor3, a: Matrix, mode: int) -> Tensor3:
    """Apply ``a`` along one mode: new index ``x'`` gets ``sum_x a[x', x] * t[..x..]``."""
    dims = list(t.dims)
    if a.cols != dims[mode - 1]:
        raise DimensionError(f"matrix {a.shape} does not act on mode {mode} of extent {dims[mode - 1]}")
    new_dims = list(dims)
    new_dims[mode - 1] = a.rows
    m, n, l = new_dims
    arows = a.to_rows()
    out = []
    zero = GaussianRational()
    for i in range(m):
        for j in range(n):
            for k in range(l):
                idx = [i, j, k]
                target = idx[mode - 1]
                acc = zero
                for x, coef in enumerate(arows[target]):
                    if coef:
                        idx[mode - 1] = x
                        v = t.entries[(idx[0] * t.n + idx[1]) * t.l + idx[2]]
                        if v:
                            acc = acc + coef * v
                out.append(acc)
    return Tensor3(m, n, l, out)


def change_basis(t: Tensor3, p: Matrix, q: Matrix, r: Matrix) -> Tensor3:
    """``T(P, Q, R)``: ``t'_{i'j'k'} = sum p_{i'i} q_{j'j} r_{k'k} t_{ijk}``.

    The factors need not be square or invertible; only ``P.cols == m`` etc. is required.
    """
    out = t
    for mode, a in ((1, p), (2, q), (3, r)):
        if a.is_square() and a == Matrix.identity(a.rows):
            if a.rows != t.dims[mode - 1]:
                raise DimensionError(f"factor for mode {mode} has wrong size")
            continue
        out = _mode_product(out, a, mode)
    return out


def _validate_perm(perm: Sequence[int]) -> tuple[int, int, int]:
    perm = tuple(perm)
    if sorted(perm) != [1, 2, 3]:
        raise ValueError(f"{perm} is not a permutation of (1, 2, 3)")
    return perm  # type: ignore[return-value]


def permute_modes(t: Tensor3, perm: Sequence[int]) -> Tensor3:
    """Move old mode ``p`` to position ``perm[p-1]``."""
    perm = _validate_perm(perm)
    old = t.dims
    new = [0, 0, 0]
    for p in range(3):
        new[perm[p] - 1] = old[p]
    m, n, l = new
    out = [None] * (m * n * l)
    for i in range(t.m):
        for j in range(t.n):
            for k in range(t.l):
                idx = [0, 0, 0]
                for p, v in enumerate((i, j, k)):
                    idx[perm[p] - 1] = v
                out[(idx[0] * n + idx[1]) * l + idx[2]] = t.entries[(i * t.n + j) * t.l + k]
    return Tensor3(m, n, l, out)


def inverse_perm(perm: Sequence[int]) -> tuple[int, int, int]:
    perm = _validate_perm(perm)
    inv = [0, 0, 0]
    for p in range(3):
        inv[perm[p] - 1] = p + 1
    return tuple(inv)  # type: ignore[return-value]


def common_left_kernel(space: SliceSpace) -> list[tuple[GaussianRational, ...]]:
    """Basis of ``{u : u^T A = 0 for every slice A}``."""
    rows = [list(s.column(j)) for s in space.slices for j in range(s.cols)]
    return nullspace(Matrix.from_rows(rows))


def common_right_kernel(space: SliceSpace) -> list[tuple[GaussianRational, ...]]:
    """Basis of ``{u : A u = 0 for every slice A}``."""
    rows = [list(s.row(i)) for s in space.slices for i in range(s.rows)]
    return nullspace(Matrix.from_rows(rows))


@dataclass(frozen=True)
class ReductionRecord:
    """How a 4x4x4 tensor was turned into a 3x3x4 one.

    ``reduced = restrict(permute_modes(change_basis(T, P, Q, R), perm))`` where the
    restriction keeps indices ``< 3`` in the first two modes.
    """

    p: Matrix
    q: Matrix
    r: Matrix
    perm: tuple[int, int, int]
    reduced_modes: tuple[int, int]


def _killing_basis_change(space: SliceSpace) -> Matrix:
    """Invertible matrix whose last row is a null combination of the slices."""
    stacked = Matrix.from_rows([s.entries for s in space.slices]).T
    null = nullspace(stacked)
    if not null:
        raise ValueError("slices are linearly independent")
    c = null[0]
    size = len(c)
    pivot = next(j for j, x in enumerate(c) if x)
    rows = [[1 if a == j else 0 for a in range(size)] for j in range(size) if j != pivot]
    rows.append(list(c))
    return Matrix.from_rows(rows)


def reduce_to_334(t: Tensor3) -> Optional[tuple[Tensor3, ReductionRecord]]:
    """View a 4x4x4 tensor as 3x3x4 when two modes have slice spans of dimension <= 3."""
    if t.dims != (4, 4, 4):
        raise DimensionError("reduce_to_334 expects a 4x4x4 tensor")
    small = [p for p in (1, 2, 3) if slice_space(t, p).span_dim <= 3]
    if len(small) < 2:
        return None
    a, b = small[0], small[1]
    factors = {1: Matrix.identity(4), 2: Matrix.identity(4), 3: Matrix.identity(4)}
    cur = t
    for mode in (a, b):
        g = _killing_basis_change(slice_space(cur, mode))
        factors[mode] = g
        cur = _mode_product(cur, g, mode)
    rest = ({1, 2, 3} - {a, b}).pop()
    perm = [0, 0, 0]
    perm[a - 1], perm[b - 1], perm[rest - 1] = 1, 2, 3
    perm_t = tuple(perm)
    moved = permute_modes(cur, perm_t)
    reduced = Tensor3(3, 3, 4, [moved[i, j, k] for i in range(3) for j in range(3) for k in range(4)])
    record = ReductionRecord(factors[1], factors[2], factors[3], perm_t, (a, b))
    return reduced, record


def expand_from_334(reduced: Tensor3, record: ReductionRecord) -> Tensor3:
    """Invert :func:`reduce_to_334`: zero-pad, undo the permutation and the basis change."""
    if reduced.dims != (3, 3, 4):
        raise DimensionError("expected a 3x3x4 tensor")
    zero = GaussianRational()
    padded = Tensor3(
        4,
        4,
        4,
        [reduced[i, j, k] if i < 3 and j < 3 else zero for i in range(4) for j in range(4) for k in range(4)],
    )
    back = permute_modes(padded, inverse_perm(record.perm))
    return change_basis(back, inverse(record.p), inverse(record.q), inverse(record.r))
