"""Seeded test tensors: witnessed low-rank tensors and adversarial families.

"Generic" always means: seeded integers, resampled until the named
degeneracy predicates listed in each docstring are avoided.  Every generator
is a pure function of its arguments; the random stream is :class:`SplitMix64`.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .linalg import GaussianRational, Matrix, det, rank
from .rng import SplitMix64
from .strassen import strassen_commutator
from .tensor import Tensor3, slice, slice_space

__all__ = [
    "WitnessedTensor",
    "random_rank_r",
    "salmon_counterexample",
    "block_diag_334",
    "generic_tensor",
    "symmetric_slices_333",
    "diagonal_family",
    "rank_l_case1",
    "rank_l_case2",
    "embed",
]

Factor = tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]


@dataclass(frozen=True)
class WitnessedTensor:
    tensor: Tensor3
    factors: tuple[Factor, ...]
    claimed_rank_bound: int

    def reconstruct(self) -> Tensor3:
        return Tensor3.from_factors(self.factors)


def _witnessed(m: int, n: int, l: int, factors: Sequence[Factor]) -> WitnessedTensor:
    factors = tuple((tuple(u), tuple(v), tuple(w)) for u, v, w in factors)
    t = Tensor3.from_factors(factors) if factors else Tensor3.zeros(m, n, l)
    return WitnessedTensor(t, factors, len(factors))


def random_rank_r(m: int, n: int, l: int, r: int, seed: int, bound: int = 3) -> WitnessedTensor:
    """Sum of ``r`` rank-one terms with nonzero integer factor vectors in ``{-bound..bound}``."""
    if r < 1 or bound < 1:
        raise ValueError("need r >= 1 and bound >= 1")
    g = SplitMix64(seed)
    factors = [(g.nonzero_vector(m, bound), g.nonzero_vector(n, bound), g.nonzero_vector(l, bound)) for _ in range(r)]
    return _witnessed(m, n, l, factors)


def _salmon_slices(g: SplitMix64, bound: int) -> list[Matrix]:
    out = []
    for _ in range(4):
        first_row = [g.nonzero(bound) for _ in range(4)]
        first_col = [g.nonzero(bound) for _ in range(3)]
        rows = [first_row] + [[c, 0, 0, 0] for c in first_col]
        out.append(Matrix.from_rows(rows))
    return out


def salmon_counterexample(seed: int, bound: int = 3) -> Tensor3:
    """4x4x4 tensor whose mode-3 slices vanish where ``min(i, j) >= 2``.

    Parameters are nonzero integers.  Resampled until

    * the first mode-1 slice is invertible,
    * some pair ``2 <= i < j <= 4`` of mode-1 slices fails ``X adj(T_1) Z = Z adj(T_1) X``
      (equivalently the vectors ``T_1^{-1} T_i e_1`` are not collinear),
    * every mode's slices are linearly independent.

    Such tensors have border rank 5 while their mode-3 span satisfies every
    compound commutation condition.
    """
    if bound < 1:
        raise ValueError("bound must be at least 1")
    g = SplitMix64(seed)
    while True:
        t = Tensor3.from_slices(_salmon_slices(g, bound))
        y = slice(t, 1, 1)
        if not det(y):
            continue
        xs = [slice(t, 1, i) for i in (2, 3, 4)]
        if all(strassen_commutator(a, y, b).is_zero() for a, b in combinations(xs, 2)):
            continue
        if any(slice_space(t, mode).span_dim != 4 for mode in (1, 2, 3)):
            continue
        return t


def block_diag_334(seed: int, bound: int = 3) -> Tensor3:
    """3x3x4 tensor with slices ``[[a, b, 0], [c, d, 0], [0, 0, e]]``.

    Resampled until the four upper-left 2x2 blocks are linearly independent
    and some ``e`` is nonzero.  The span is then a 4-dimensional subspace of
    the 5-dimensional block pattern that does not contain ``e_3 e_3^T``; if it
    did, it would be spanned by rank-one matrices.
    """
    g = SplitMix64(seed)
    while True:
        params = [[g.symmetric(bound) for _ in range(5)] for _ in range(4)]
        if rank(Matrix.from_rows([p[:4] for p in params])) < 4 or not any(p[4] for p in params):
            continue
        mats = [Matrix.from_rows([[a, b, 0], [c, d, 0], [0, 0, e]]) for a, b, c, d, e in params]
        return Tensor3.from_slices(mats)


def generic_tensor(m: int, n: int, l: int, seed: int, bound: int = 3) -> Tensor3:
    """I.i.d. integer entries in ``{-bound..bound}``; no resampling."""
    g = SplitMix64(seed)
    return Tensor3(m, n, l, g.vector(m * n * l, bound))


def symmetric_slices_333(seed: int, bound: int = 3) -> Tensor3:
    """Three random symmetric 3x3 mode-3 slices."""
    g = SplitMix64(seed)
    mats = []
    for _ in range(3):
        rows = [[0] * 3 for _ in range(3)]
        for i in range(3):
            for j in range(i, 3):
                rows[i][j] = rows[j][i] = g.symmetric(bound)
        mats.append(Matrix.from_rows(rows))
    return Tensor3.from_slices(mats)


def _unit(size: int, i: int) -> list[int]:
    return [1 if k == i else 0 for k in range(size)]


def diagonal_family(l: int, m: int | None = None, n: int | None = None) -> WitnessedTensor:
    """``T_k = e_k e_k^T`` for ``k = 1..l`` inside ``m x n`` (defaults ``m = n = l``)."""
    m = l if m is None else m
    n = l if n is None else n
    if l > min(m, n):
        raise ValueError("need l <= min(m, n)")
    return _witnessed(m, n, l, [(_unit(m, k), _unit(n, k), _unit(l, k)) for k in range(l)])


def _rank_l_from_uv(us, vs, m: int, n: int, l: int) -> WitnessedTensor:
    # mode-3 slice k is u_k v_k^T
    return _witnessed(m, n, l, [(u, v, _unit(l, k)) for k, (u, v) in enumerate(zip(us, vs))])


def rank_l_case1(m: int, n: int, l: int, seed: int, bound: int = 3) -> WitnessedTensor:
    """Slices ``u_k v_k^T`` with independent ``u_1..u_l`` and independent ``v_1..v_l`` (``l <= m, n``)."""
    if not 2 <= l <= min(m, n):
        raise ValueError("need 2 <= l <= min(m, n)")
    g = SplitMix64(seed)
    while True:
        us = [g.vector(m, bound) for _ in range(l)]
        vs = [g.vector(n, bound) for _ in range(l)]
        if rank(Matrix.from_rows(us)) == l and rank(Matrix.from_rows(vs)) == l:
            return _rank_l_from_uv(us, vs, m, n, l)


def rank_l_case2(l: int, seed: int | None = None, bound: int = 3) -> WitnessedTensor:
    """``m = n = l - 1``, slices ``u_k v_k^T`` with every ``l - 1`` of the u's (and of the v's) independent.

    ``seed=None`` gives the fixed instance ``u_k = v_k = e_k`` for ``k < l`` and
    ``u_l = v_l`` the all-ones vector.
    """
    s = l - 1
    if s < 3:
        raise ValueError("need l >= 4")
    if seed is None:
        us = [_unit(s, k) for k in range(s)] + [[1] * s]
        return _rank_l_from_uv(us, us, s, s, l)
    g = SplitMix64(seed)

    def general(vecs) -> bool:
        return all(det(Matrix.from_rows(list(c))) != 0 for c in combinations(vecs, s))

    while True:
        us = [g.vector(s, bound) for _ in range(l)]
        vs = [g.vector(s, bound) for _ in range(l)]
        if general(us) and general(vs):
            return _rank_l_from_uv(us, vs, s, s, l)


def embed(t: Tensor3, m: int, n: int, l: int) -> Tensor3:
    """Zero-pad ``t`` into a larger ``m x n x l`` tensor."""
    if t.m > m or t.n > n or t.l > l:
        raise ValueError("target dims must dominate the tensor's dims")
    zero = GaussianRational()
    return Tensor3(
        m,
        n,
        l,
        [
            t[i, j, k] if i < t.m and j < t.n and k < t.l else zero
            for i in range(m)
            for j in range(n)
            for k in range(l)
        ],
    )
