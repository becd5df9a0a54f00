"""Exact polynomial expansion of minors over a span of square matrices.

For a basis ``B_1..B_d`` of m x m matrices, ``X(x) = sum x_k B_k`` has minors
that are homogeneous polynomials in ``x``.  Compounds of ``X(x)`` are then
matrix-valued polynomials ``sum_a x^a A_a``; the ``A_a`` are stored as numpy
object arrays of ring elements (ints for real data).
"""

from __future__ import annotations

from itertools import combinations, product
from typing import Sequence

import numpy as np

from .linalg import Matrix, to_ring

Poly = dict  # exponent tuple -> ring element


def ring_matrices(mats: Sequence[Matrix]) -> list[list[list]]:
    """Clear a common denominator across all matrices (homogeneous tests are scale-free)."""
    if not mats:
        return []
    flat = [e for m in mats for e in m.entries]
    ring, _ = to_ring(flat)
    out = []
    pos = 0
    for m in mats:
        rows = []
        for _ in range(m.rows):
            rows.append(ring[pos : pos + m.cols])
            pos += m.cols
        out.append(rows)
    return out


def _mul(f: Poly, g: Poly) -> Poly:
    out: Poly = {}
    for ea, ca in f.items():
        for eb, cb in g.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            v = out.get(e, 0) + ca * cb
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


def _add_into(acc: Poly, f: Poly, sign: int) -> None:
    for e, c in f.items():
        v = acc.get(e, 0) + (c if sign > 0 else -c)
        if v:
            acc[e] = v
        else:
            acc.pop(e, None)


class SpanMinors:
    """Memoised minors of ``X(x) = sum_k x_k B_k`` as polynomials in ``x``."""

    def __init__(self, basis: Sequence[list[list]]):
        self.d = len(basis)
        self.m = len(basis[0])
        d = self.d
        self._lin = [
            [
                {tuple(1 if t == k else 0 for t in range(d)): b[i][j] for k, b in enumerate(basis) if b[i][j]}
                for j in range(self.m)
            ]
            for i in range(self.m)
        ]
        self._memo: dict[tuple[tuple[int, ...], tuple[int, ...]], Poly] = {}

    def minor(self, rows: tuple[int, ...], cols: tuple[int, ...]) -> Poly:
        if not rows:
            return {(0,) * self.d: 1}
        key = (rows, cols)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        if len(rows) == 1:
            out = dict(self._lin[rows[0]][cols[0]])
        else:
            out: Poly = {}
            last = rows[-1]
            k = len(rows)
            for t, c in enumerate(cols):
                entry = self._lin[last][c]
                if not entry:
                    continue
                sub = self.minor(rows[:-1], cols[:t] + cols[t + 1 :])
                if not sub:
                    continue
                _add_into(out, _mul(entry, sub), 1 if (k - 1 + t) % 2 == 0 else -1)
        self._memo[key] = out
        return out

    def _collect(self, cells: list[list[Poly]]) -> dict[tuple[int, ...], np.ndarray]:
        r = len(cells)
        c = len(cells[0])
        out: dict[tuple[int, ...], np.ndarray] = {}
        for i in range(r):
            for j in range(c):
                for e, v in cells[i][j].items():
                    arr = out.get(e)
                    if arr is None:
                        arr = np.zeros((r, c), dtype=object)
                        out[e] = arr
                    arr[i, j] = v
        return dict(sorted(out.items()))

    def compound(self, p: int) -> dict[tuple[int, ...], np.ndarray]:
        sets = list(combinations(range(self.m), p))
        return self._collect([[self.minor(a, b) for b in sets] for a in sets])

    def signed_compound(self, p: int) -> dict[tuple[int, ...], np.ndarray]:
        sets = list(combinations(range(self.m), p))
        full = tuple(range(self.m))
        cells = []
        for a in sets:
            ac = tuple(x for x in full if x not in a)
            row = []
            for b in sets:
                bc = tuple(x for x in full if x not in b)
                f = self.minor(ac, bc)
                if (sum(a) + sum(b)) % 2:
                    f = {e: -v for e, v in f.items()}
                row.append(f)
            cells.append(row)
        return self._collect(cells)


def _any_nonzero(arr: np.ndarray) -> bool:
    return any(x != 0 for x in arr.flat)


def first_defect(
    comp: dict[tuple[int, ...], np.ndarray], signed: dict[tuple[int, ...], np.ndarray]
) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]] | None:
    """First monomial triple (a, b, c) with ``A_a N_b^T A_c != A_c N_b^T A_a``, or None."""
    keys = list(comp)
    if len(keys) < 2:
        return None
    stack = np.stack([comp[k] for k in keys])
    for b, nb in signed.items():
        k = np.matmul(nb.T, stack)  # K_c = N_b^T A_c
        prod = np.matmul(stack[:, None], k[None, :])  # P[a, c] = A_a K_c
        diff = prod - prod.transpose(1, 0, 2, 3)
        for ia in range(len(keys)):
            for ic in range(ia + 1, len(keys)):
                if _any_nonzero(diff[ia, ic]):
                    return keys[ia], b, keys[ic]
    return None


def evaluate(poly_mat: dict[tuple[int, ...], np.ndarray], point: Sequence) -> np.ndarray:
    acc = None
    for e, arr in poly_mat.items():
        w = 1
        for x, k in zip(point, e):
            if k:
                w = w * x**k
        if not w:
            continue
        term = arr * w
        acc = term if acc is None else acc + term
    if acc is None:
        shape = next(iter(poly_mat.values())).shape if poly_mat else (0, 0)
        acc = np.zeros(shape, dtype=object)
    return acc


def defect_at(comp, signed, x, y, z) -> np.ndarray:
    cx = evaluate(comp, x)
    cz = evaluate(comp, z)
    ny = evaluate(signed, y).T
    return cx.dot(ny).dot(cz) - cz.dot(ny).dot(cx)


def _monomial(x: Sequence, e: tuple[int, ...]):
    out = 1
    for v, k in zip(x, e):
        if k:
            out *= v**k
    return out


def invertible_on_grid(mats: Sequence[Matrix], grid: Sequence[int]) -> tuple[int, ...] | None:
    """First point of ``grid^r`` where ``det(sum x_k M_k) != 0``, or None if the det form is zero.

    The form is expanded exactly, so None means the span has no invertible
    element.  A grid with ``deg + 1`` values per coordinate always finds one
    otherwise.
    """
    sm = SpanMinors(ring_matrices(mats))
    full = tuple(range(sm.m))
    poly = sm.minor(full, full)
    if not poly:
        return None
    for x in product(grid, repeat=len(mats)):
        if sum(c * _monomial(x, e) for e, c in poly.items()):
            return x
    raise ValueError("grid too small for the determinant form")
