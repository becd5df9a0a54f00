"""Re-check the reasons recorded in a :class:`Verdict`.

Each recorded condition name maps to a function that recomputes it from the
tensor and the reason's data and reports whether the recorded ``holds``
value is reproduced.
"""

from __future__ import annotations

from typing import Callable

from . import _polyspan
from .certify444 import GRID, equations_at
from .linalg import Matrix, det, rank
from .secant import char_poly, discriminant, quadric_space
from .strassen import compound_commutator, span_commutation_ok
from .symmetrize import build_system, check_RL_identity
from .tensor import SliceSpace, Tensor3, reduce_to_334, slice_space, slices
from .verdict import Reason, Verdict

__all__ = ["replay_reason", "replay_verdict", "CHECKERS"]


def _span_commutation(t: Tensor3, r: Reason) -> bool:
    space = slice_space(t, r.mode)
    w = r.data.get("witness")
    if w is None:
        return span_commutation_ok(space, r.data["p"]).holds == r.holds
    x, y, z = (space.element(v) for v in w)
    return (not compound_commutator(x, y, z, r.data["p"]).is_zero()) and not r.holds


def _invertible(t: Tensor3, r: Reason) -> bool:
    space = slice_space(t, r.mode)
    if r.holds:
        return det(space.element(r.data["coeffs"])) != 0
    return _polyspan.invertible_on_grid(space.slices, GRID) is None


def _sym_rank(t: Tensor3, r: Reason) -> bool:
    rk = rank(build_system(slices(t, 3), r.data["side"]).coeff)
    return rk == r.data["rank"] and (rk <= r.data["bound"]) == r.holds


def _rl(t: Tensor3, r: Reason) -> bool:
    return check_RL_identity(r.data["L"], r.data["R"]) == r.holds


def _strassen(t: Tensor3, r: Reason) -> bool:
    d = det(build_system(list(slices(t, 3)), "R").coeff)
    return d == r.data["det_CR"] and (d == 0) == r.holds


def _dichotomy(t: Tensor3, r: Reason) -> bool:
    return {m: slice_space(t, m).span_dim for m in (1, 2, 3)} == r.data["span_dims"]


def _truncated(t: Tensor3, r: Reason) -> bool:
    found = [x for x in equations_at(t, *r.data["P"]) if x.mode == r.mode and x.condition == r.condition]
    return bool(found) and found[0].holds == r.holds


def _sampled(t: Tensor3, r: Reason) -> bool:
    from .strassen import strassen_commutator

    space = slice_space(t, r.mode)
    x, y, z = (space.element(r.data[k]) for k in ("x", "y", "z"))
    return strassen_commutator(x, y, z).is_zero() == r.holds


def _perp(t: Tensor3) -> SliceSpace:
    qs = quadric_space(slices(t, 3))
    return SliceSpace(3, qs.perp_basis, len(qs.perp_basis))


def _perp_invertible(t: Tensor3, r: Reason) -> bool:
    perp = _perp(t)
    if r.holds:
        return det(perp.element(r.data["coeffs"])) != 0
    return _polyspan.invertible_on_grid(perp.slices, range(t.l + 1)) is None


def _perp_commutation(t: Tensor3, r: Reason) -> bool:
    perp = _perp(t)
    w = r.data.get("witness")
    if w is None:
        return span_commutation_ok(perp, 1).holds == r.holds
    x, y, z = (perp.element(v) for v in w)
    return not compound_commutator(x, y, z, 1).is_zero() and not r.holds


def _eigen(t: Tensor3, r: Reason) -> bool:
    if not r.holds:
        return True  # an exhausted search is not a claim that can be replayed
    from .linalg import adjugate

    perp = _perp(t)
    m: Matrix = perp.element(r.data["a"]) @ adjugate(perp.element(r.data["b"]))
    return discriminant(char_poly(m)) == r.data["discriminant"] != 0


def _mode3_dim(t: Tensor3, r: Reason) -> bool:
    return (slice_space(t, 3).span_dim == r.data["expected"]) == r.holds


def _perp_dim(t: Tensor3, r: Reason) -> bool:
    return len(quadric_space(slices(t, 3)).perp_basis) == r.data["dim"] and not r.holds


CHECKERS: dict[str, Callable[[Tensor3, Reason], bool]] = {
    "span_commutation": _span_commutation,
    "invertible_element": _invertible,
    "symmetrizer_rank": _sym_rank,
    "rl_identity": _rl,
    "strassen_invariant": _strassen,
    "dichotomy": _dichotomy,
    "truncated_ranks": _truncated,
    "truncated_rl_identity": _truncated,
    "sampled_commutation": _sampled,
    "perp_invertible": _perp_invertible,
    "perp_commutation": _perp_commutation,
    "distinct_eigenvalues": _eigen,
    "mode3_dim": _mode3_dim,
    "perp_dim": _perp_dim,
}


def replay_reason(t: Tensor3, reason: Reason) -> bool:
    """Does recomputing ``reason`` on ``t`` reproduce its recorded outcome?"""
    checker = CHECKERS.get(reason.condition)
    if checker is None:
        raise KeyError(f"no checker for condition {reason.condition!r}")
    return checker(t, reason)


def replay_verdict(t: Tensor3, verdict: Verdict) -> bool:
    """Replay every reason; reasons tagged ``on="reduced"`` run on the 3x3x4 reduction of ``t``."""
    reduced = None
    for r in verdict.reasons:
        if r.condition == "sampled_equations":
            continue
        target = t
        if r.data.get("on") == "reduced":
            if reduced is None:
                red = reduce_to_334(t)
                if red is None:
                    return False
                reduced = red[0]
            target = reduced
        if not replay_reason(target, r):
            return False
    return True
