"""Border rank <= 4 for 4x4x4 tensors.

:func:`decide_444` is the deterministic decision: commutation in every mode
and compound level, then an invertible span element, then the reduction to
3x3x4.  :func:`check_equations_444` is the sampled certificate: it tests the
defining equations at pseudo-random points, so a violation proves border
rank > 4 while a clean run is only evidence.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

from . import _polyspan
from .linalg import DimensionError, Matrix, det
from .rng import SplitMix64, derive_seed
from .strassen import CommutationReport, record_p1_implication, span_commutation_ok, strassen_commutator
from .symmetrize import build_system, check_RL_identity, decide_334, extract_candidates
from .tensor import ReductionRecord, SliceSpace, Tensor3, change_basis, reduce_to_334, slice_space, slices
from .verdict import Outcome, Reason, Verdict

__all__ = [
    "Decision444Trace",
    "decide_444",
    "invertible_witness",
    "equations_at",
    "check_equations_444",
    "DIAGNOSTICS",
    "GRID",
]

log = logging.getLogger(__name__)

#: Rule-(iv) acceptances whose numeric cross-check did not confirm them.
DIAGNOSTICS: Counter = Counter()

#: Per-coefficient grid for the invertibility search; det has degree 4, so 5 values suffice.
GRID = range(5)


@dataclass(frozen=True)
class Decision444Trace:
    reports: dict[int, tuple[CommutationReport, ...]]
    span_dims: dict[int, int]
    invertible: Optional[tuple[int, tuple[int, ...]]]
    reduction: Optional[tuple[Tensor3, ReductionRecord]]
    rule: str
    verdict: Verdict
    notes: tuple[str, ...] = field(default=())

    @property
    def outcome(self) -> Outcome:
        return self.verdict.outcome


def _require_444(t: Tensor3, who: str) -> None:
    if t.dims != (4, 4, 4):
        raise DimensionError(f"{who} expects a 4x4x4 tensor, got {t.dims}")


def invertible_witness(space: SliceSpace) -> Optional[tuple[int, ...]]:
    """First point of ``GRID^r`` whose span element is invertible; None means there is none."""
    x = _polyspan.invertible_on_grid(space.slices, GRID)
    if x is not None:
        assert det(space.element(x)) != 0
    return x


def decide_444(t: Tensor3, seed: int = 0, cross_check: bool = True) -> Decision444Trace:
    _require_444(t, "decide_444")
    spaces = {mode: slice_space(t, mode) for mode in (1, 2, 3)}
    dims = {mode: s.span_dim for mode, s in spaces.items()}
    reports: dict[int, tuple[CommutationReport, ...]] = {}
    reasons: list[Reason] = []
    for mode, space in spaces.items():
        reps = tuple(span_commutation_ok(space, p, seed) for p in (1, 2, 3))
        reports[mode] = reps
        record_p1_implication(reps)
        for rep in reps:
            reasons.append(Reason("span_commutation", rep.holds, mode, {"p": rep.p, "witness": rep.witness}))

    failing = [rep for mode in (1, 2, 3) for rep in reports[mode] if not rep.holds]
    if failing:
        first = failing[0]
        verdict = Verdict(
            Outcome.REJECT,
            tuple(reasons),
            {"mode": first.mode, "p": first.p, "witness": first.witness, "defect": first.defect},
        )
        return Decision444Trace(reports, dims, None, None, "commutation", verdict)

    for mode, space in spaces.items():
        x = invertible_witness(space)
        if x is not None:
            reasons.append(Reason("invertible_element", True, mode, {"coeffs": x}))
            verdict = Verdict(Outcome.ACCEPT, tuple(reasons), {"mode": mode, "coeffs": x})
            return Decision444Trace(reports, dims, (mode, x), None, "invertible", verdict)
        reasons.append(Reason("invertible_element", False, mode, {}))

    red = reduce_to_334(t)
    if red is not None:
        reduced, record = red
        sub = decide_334(reduced)
        reasons.extend(Reason(r.condition, r.holds, r.mode, {**r.data, "on": "reduced"}) for r in sub.reasons)
        verdict = Verdict(sub.outcome, tuple(reasons), {**sub.witnesses, "reduction": record})
        return Decision444Trace(reports, dims, None, red, "reduction", verdict)

    notes: tuple[str, ...] = ()
    if cross_check:
        from .secant import approximate_numeric, decompose_numeric

        if decompose_numeric(t, 4, 1e-8) is None and approximate_numeric(t, 4, 1e-6, seed) is None:
            DIAGNOSTICS["rule_iv_numeric_unconfirmed"] += 1
            log.warning("dichotomy acceptance without numeric confirmation")
            notes = ("numeric cross-check did not confirm a rank-4 approximation",)
    reasons.append(Reason("dichotomy", True, None, {"span_dims": dims}))
    verdict = Verdict(Outcome.ACCEPT, tuple(reasons), {"span_dims": dims})
    return Decision444Trace(reports, dims, None, None, "dichotomy", verdict, notes)


def _truncated_slices(u: Tensor3, mode: int) -> list[Matrix]:
    return [s.submatrix(range(3), range(3)) for s in slices(u, mode)]


def equations_at(t: Tensor3, p1: Matrix, p2: Matrix, p3: Matrix) -> list[Reason]:
    """The rank and L/R conditions for ``T(P_1, P_2, P_3)`` in each mode."""
    _require_444(t, "equations_at")
    u = change_basis(t, p1, p2, p3)
    out = []
    for mode in (1, 2, 3):
        mats = _truncated_slices(u, mode)
        cands = {side: extract_candidates(build_system(mats, side)) for side in ("L", "R")}
        ranks_ok = all(c.rank <= 8 for c in cands.values())
        out.append(
            Reason("truncated_ranks", ranks_ok, mode, {"rank_CL": cands["L"].rank, "rank_CR": cands["R"].rank})
        )
        if ranks_ok:
            ok = check_RL_identity(cands["L"].minor_solution, cands["R"].minor_solution)
            out.append(Reason("truncated_rl_identity", ok, mode, {}))
    return out


def _sampled_commutation(t: Tensor3, rng: SplitMix64, bound: int) -> list[Reason]:
    out = []
    for mode in (1, 2, 3):
        space = slice_space(t, mode)
        x, y, z = (tuple(rng.vector(4, bound)) for _ in range(3))
        holds = strassen_commutator(space.element(x), space.element(y), space.element(z)).is_zero()
        out.append(Reason("sampled_commutation", holds, mode, {"x": x, "y": y, "z": z}))
    return out


def check_equations_444(
    t: Tensor3, trials: int = 20, seed: int = 0, bound: int = 5, commutation: bool = True
) -> Verdict:
    """Sampled certificate for border rank <= 4.

    Each trial draws ``P_1, P_2, P_3`` with entries in ``{-bound..bound}`` and
    checks the truncated symmetrizer conditions in every mode.  With
    ``commutation`` (default) it also evaluates the degree-5 commutation
    equations at one random triple per mode.  The first violation (lowest
    trial index) is returned as a REJECT; otherwise ACCEPT up to sampling.
    """
    _require_444(t, "check_equations_444")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    for trial in range(trials):
        rng = SplitMix64(derive_seed(seed, trial))
        if commutation:
            for r in _sampled_commutation(t, rng, bound):
                if not r.holds:
                    return Verdict(Outcome.REJECT, (r,), {"trial": trial, **r.data, "mode": r.mode})
        ps = tuple(Matrix(4, 4, rng.vector(16, bound)) for _ in range(3))
        for r in equations_at(t, *ps):
            if not r.holds:
                data = {**r.data, "trial": trial, "P": ps}
                return Verdict(Outcome.REJECT, (Reason(r.condition, False, r.mode, data),), data)
    note = f"no violation in {trials} trials; evidence, not proof"
    return Verdict(Outcome.ACCEPT, (Reason("sampled_equations", True, None, {"trials": trials}, note),), {})
