"""Symmetrizer systems C_L / C_R and the 3x3x4 border-rank-4 decision.

``C_R(T_1..T_r)`` collects the linear conditions on ``R`` making every
``T_k R`` symmetric; ``C_L`` does the same for ``L T_k``.  Rows are ordered by
slice ``k`` first, then by the strict upper-triangle position ``(i, j)``
lexicographically; columns follow ``vec`` of the unknown in row-major order.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from typing import Literal, NamedTuple, Optional, Sequence

from .linalg import DimensionError, GaussianRational, Matrix, nullspace, rank
from .tensor import Tensor3, slices
from .verdict import Outcome, Reason, Verdict

__all__ = [
    "SymmetrizerSystem",
    "Candidates",
    "build_system",
    "extract_candidates",
    "check_RL_identity",
    "decide_334",
    "DIAGNOSTICS",
]

log = logging.getLogger(__name__)

Side = Literal["L", "R"]

#: Observed instances where both ranks are <= 8 but the L/R identity fails.
DIAGNOSTICS: Counter = Counter()


@dataclass(frozen=True)
class SymmetrizerSystem:
    side: Side
    m: int
    r: int
    coeff: Matrix
    row_index: tuple[tuple[int, tuple[int, int]], ...]
    col_index: tuple[tuple[int, int], ...]

    @property
    def size(self) -> int:
        """Side length ``m - 1`` of the unknown matrix."""
        return self.m - 1

    def unknown(self, x: Sequence) -> Matrix:
        s = self.size
        return Matrix(s, s, x)


class Candidates(NamedTuple):
    rank: int
    candidates: list[Matrix]
    #: The value the signed-minor recipe produces: the unique solution at
    #: corank one, the zero matrix at larger corank, None at full rank.
    minor_solution: Optional[Matrix]


def build_system(mats: Sequence[Matrix], side: Side) -> SymmetrizerSystem:
    if side not in ("L", "R"):
        raise ValueError("side must be 'L' or 'R'")
    if not mats:
        raise ValueError("need at least one slice")
    s = mats[0].rows
    if any(t.shape != (s, s) for t in mats):
        raise DimensionError("slices must be square and of equal size")
    zero = GaussianRational()
    rows = []
    row_index = []
    for k, t in enumerate(mats):
        for i in range(s):
            for j in range(i + 1, s):
                row = [zero] * (s * s)
                for b in range(s):
                    if side == "R":
                        # (T R)_{ij} - (R^T T^T)_{ij} = sum_b T_ib x_bj - T_jb x_bi
                        row[b * s + j] = row[b * s + j] + t[i, b]
                        row[b * s + i] = row[b * s + i] - t[j, b]
                    else:
                        # (L T)_{ij} - (T^T L^T)_{ij} = sum_b x_ib T_bj - T_bi x_jb
                        row[i * s + b] = row[i * s + b] + t[b, j]
                        row[j * s + b] = row[j * s + b] - t[b, i]
                rows.append(row)
                row_index.append((k + 1, (i + 1, j + 1)))
    coeff = Matrix(len(rows), s * s, [e for r in rows for e in r]) if rows else Matrix.zeros(0, s * s)
    col_index = tuple((a + 1, b + 1) for a in range(s) for b in range(s))
    return SymmetrizerSystem(side, s + 1, len(mats), coeff, tuple(row_index), col_index)


def extract_candidates(system: SymmetrizerSystem) -> Candidates:
    s = system.size
    full = s * s
    rk = rank(system.coeff)
    if rk == full:
        return Candidates(rk, [], None)
    basis = [system.unknown(v) for v in nullspace(system.coeff)]
    if rk == full - 1:
        return Candidates(rk, basis, basis[0])
    return Candidates(rk, basis, Matrix.zeros(s, s))


def check_RL_identity(l_mat: Matrix, r_mat: Matrix) -> bool:
    """``L R^T = R^T L = tr(L R^T)/s * I`` exactly."""
    if l_mat.shape != r_mat.shape or not l_mat.is_square():
        raise DimensionError("L and R must be square of the same size")
    s = l_mat.rows
    lr = l_mat @ r_mat.T
    rl = r_mat.T @ l_mat
    target = Matrix.identity(s).scale(lr.trace() / s)
    return lr == target and rl == target


def decide_334(t: Tensor3) -> Verdict:
    """Border rank <= 4 test for a 3x3x4 tensor from its four mode-3 slices."""
    if t.dims != (3, 3, 4):
        raise DimensionError(f"decide_334 expects 3x3x4, got {t.dims}")
    mats = slices(t, 3)
    reasons = []
    found = {}
    for side in ("L", "R"):
        cand = extract_candidates(build_system(mats, side))
        found[side] = cand
        reasons.append(
            Reason("symmetrizer_rank", cand.rank <= 8, 3, {"side": side, "rank": cand.rank, "bound": 8})
        )
    witnesses = {
        "rank_CL": found["L"].rank,
        "rank_CR": found["R"].rank,
        "L": found["L"].minor_solution,
        "R": found["R"].minor_solution,
    }
    if not all(r.holds for r in reasons):
        return Verdict(Outcome.REJECT, tuple(reasons), witnesses)
    l_val, r_val = found["L"].minor_solution, found["R"].minor_solution
    ok = check_RL_identity(l_val, r_val)
    reasons.append(Reason("rl_identity", ok, 3, {"L": l_val, "R": r_val}))
    if not ok:
        DIAGNOSTICS["ranks_ok_identity_fails"] += 1
        log.info("symmetrizer ranks <= 8 but the L/R identity fails (ranks %d, %d)", found["L"].rank, found["R"].rank)
        return Verdict(Outcome.REJECT, tuple(reasons), witnesses)
    return Verdict(Outcome.ACCEPT, tuple(reasons), witnesses)
