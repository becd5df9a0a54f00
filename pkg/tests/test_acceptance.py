"""Acceptance suite.  Each test records one PASS/FAIL line, repeated in the terminal summary."""

import time
from functools import cache
from math import comb

from conftest import int_matrix, invertible_matrix
from secantcert.certify444 import check_equations_444, decide_444
from secantcert.generators import (
    block_diag_334,
    diagonal_family,
    generic_tensor,
    random_rank_r,
    rank_l_case2,
    salmon_counterexample,
    symmetric_slices_333,
)
from secantcert.linalg import Matrix, adjugate, compound, det, inverse, signed_compound
from secantcert.rng import SplitMix64
from secantcert.secant import decide_rank_l, decompose_numeric, numeric_residual, quadric_space, rank_bound_check
from secantcert.secant import segre_degree, veronese_degree
from secantcert.strassen import compound_commutator, decide_333_br3, decide_333_br4, span_commutation_ok
from secantcert.strassen import strassen_s_oracle
from secantcert.symmetrize import build_system, decide_334
from secantcert.tensor import Tensor3, change_basis, permute_modes, slice_space, slices
from secantcert.verdict import Outcome

N_WITNESSED = 100


@cache
def rank4_444():
    return [random_rank_r(4, 4, 4, 4, seed).tensor for seed in range(N_WITNESSED)]


@cache
def salmon():
    return [salmon_counterexample(seed) for seed in range(N_WITNESSED)]


@cache
def decisions_444():
    return [decide_444(t) for t in rank4_444()], [decide_444(t) for t in salmon()]


def _dets(t: Tensor3):
    mats = list(slices(t, 3))
    return det(build_system(mats, "R").coeff), det(build_system(mats, "L").coeff), strassen_s_oracle(*mats)


# 1 ---------------------------------------------------------------------------------


def test_criterion_1_compound_identities(criterion):
    g = SplitMix64(1001)
    fails = {"cauchy_binet": 0, "laplace": 0, "inverse_compound": 0, "adjugate": 0}
    for _ in range(500):
        m, n, l = g.integer(1, 5), g.integer(1, 5), g.integer(1, 5)
        a, b = int_matrix(g, m, n), int_matrix(g, n, l)
        p = g.integer(1, min(m, n, l))
        fails["cauchy_binet"] += compound(a @ b, p) != compound(a, p) @ compound(b, p)
    for _ in range(500):
        n = g.integer(2, 5)
        a = int_matrix(g, n, n)
        p = g.integer(1, n - 1)
        scaled = Matrix.identity(comb(n, p)).scale(det(a))
        ca, na = compound(a, p), signed_compound(a, p).T
        fails["laplace"] += not (ca @ na == scaled and na @ ca == scaled)
    for _ in range(500):
        n = g.integer(2, 5)
        a = invertible_matrix(g, n)
        p = g.integer(1, n - 1)
        fails["inverse_compound"] += compound(inverse(a), p) != signed_compound(a, p).T.scale(1 / det(a))
    for _ in range(500):
        n = g.integer(1, 5)
        a = int_matrix(g, n, n)
        fails["adjugate"] += a @ adjugate(a) != Matrix.identity(n).scale(det(a))
    ok = not any(fails.values())
    criterion(1, ok, f"500 matrices per identity, failures {fails}")
    assert ok


# 2 ---------------------------------------------------------------------------------


def test_criterion_2_strassen(criterion):
    witnessed = [random_rank_r(3, 3, 3, 1 + seed % 4, seed).tensor for seed in range(200)]
    generic = [generic_tensor(3, 3, 3, seed, bound=9) for seed in range(200)]
    w_bad = g_bad = cross_bad = checked = 0
    for t in witnessed:
        cr, cl, s = _dets(t)
        w_bad += bool(cr or cl)
        if s is not None:
            checked += 1
            cross_bad += (s == 0) != (cr == 0)
    for t in generic:
        cr, _, s = _dets(t)
        g_bad += cr == 0
        if s is not None:
            checked += 1
            cross_bad += (s == 0) != (cr == 0)
    ok = w_bad == g_bad == cross_bad == 0 and checked > 0
    criterion(
        2,
        ok,
        f"witnessed nonvanishing {w_bad}/200, generic vanishing {g_bad}/200, "
        f"cross-route mismatches {cross_bad}/{checked}",
    )
    assert ok


# 3 ---------------------------------------------------------------------------------


def test_criterion_3_proportionality(criterion):
    ratios_r, ratios_l = set(), set()
    samples = 0
    for seed in range(60):
        cr, cl, s = _dets(generic_tensor(3, 3, 3, seed, bound=9))
        if s is None or not (s and cr and cl):
            continue
        samples += 1
        ratios_r.add(cr / s)
        ratios_l.add(cl / s)
    ok = samples >= 20 and len(ratios_r) == len(ratios_l) == 1
    ratios = f"C_R {sorted(map(str, ratios_r))}, C_L {sorted(map(str, ratios_l))}"
    criterion(3, ok, f"{samples} samples, distinct ratios {ratios}")
    assert ok


# 4 ---------------------------------------------------------------------------------


def test_criterion_4_decide_334(criterion):
    start = time.perf_counter()
    acc = sum(decide_334(random_rank_r(3, 3, 4, 1 + seed % 4, seed).tensor).accepted for seed in range(100))
    rej = sum(decide_334(generic_tensor(3, 3, 4, seed)).rejected for seed in range(100))
    block = sum(decide_334(block_diag_334(seed)).rejected for seed in range(100))
    elapsed = time.perf_counter() - start
    ok = acc == rej == block == 100 and elapsed < 60
    criterion(
        4,
        ok,
        f"witnessed accepted {acc}/100, generic rejected {rej}/100, "
        f"block-diagonal rejected {block}/100, {elapsed:.1f}s",
    )
    assert ok


# 5 ---------------------------------------------------------------------------------


def test_criterion_5_decide_444(criterion):
    start = time.perf_counter()
    good, bad = decisions_444()
    elapsed = time.perf_counter() - start
    acc = sum(tr.outcome is Outcome.ACCEPT for tr in good)
    rej = 0
    for t, tr in zip(salmon(), bad):
        w = tr.verdict.witnesses
        if tr.outcome is not Outcome.REJECT or w.get("mode") != 1:
            continue
        space = slice_space(t, 1)
        x, y, z = (space.element(v) for v in w["witness"])
        mode3 = all(rep.holds for rep in tr.reports[3]) and [rep.p for rep in tr.reports[3]] == [1, 2, 3]
        rej += mode3 and not compound_commutator(x, y, z, w["p"]).is_zero()
    ok = acc == rej == N_WITNESSED and elapsed < 120
    criterion(
        5,
        ok,
        f"rank-4 accepted {acc}/100, counterexamples rejected with mode-1 witness "
        f"and mode-3 passing {rej}/100, {elapsed:.1f}s",
    )
    assert ok


# 6 ---------------------------------------------------------------------------------


def test_criterion_6_sampled_certificate(criterion):
    good, _ = decisions_444()
    start = time.perf_counter()
    caught = sum(check_equations_444(t, trials=20).rejected for t in salmon())
    accepted = [t for t, tr in zip(rank4_444(), good) if tr.outcome is Outcome.ACCEPT]
    clean = sum(check_equations_444(t, trials=20).accepted for t in accepted)
    elapsed = time.perf_counter() - start
    ok = caught == N_WITNESSED and clean == len(accepted) and elapsed < 120
    criterion(6, ok, f"violations found {caught}/100, clean on accepted {clean}/{len(accepted)}, {elapsed:.1f}s")
    assert ok


# 7 ---------------------------------------------------------------------------------


def test_criterion_7_rank_l(criterion):
    problems = []
    for name, w in (("diagonal", diagonal_family(4)), ("case2", rank_l_case2(4))):
        t, l = w.tensor, w.tensor.l
        qs = quadric_space(slices(t, 3))
        if (qs.dim_span, qs.dim_perp) != (comb(l, 2), l):
            problems.append(f"{name} dims {qs.dim_span},{qs.dim_perp}")
        v = decide_rank_l(t)
        conds = {r.condition: r.holds for r in v.reasons}
        if v.outcome is not Outcome.ACCEPT or not all(
            conds.get(c) for c in ("perp_invertible", "perp_commutation", "distinct_eigenvalues")
        ):
            problems.append(f"{name} verdict {v.outcome.value}")
        if not rank_bound_check(t, l):
            problems.append(f"{name} rank bound")
    if segre_degree(3, 3) != 6 or veronese_degree(3) != 4:
        problems.append("degrees")
    ok = not problems
    criterion(7, ok, "diagonal and case-2 families, degree helpers" + (f": {problems}" if problems else ""))
    assert ok


# 8 ---------------------------------------------------------------------------------


CUBIC = [(1, 2, 3), (2, 1, 3), (3, 1, 2), (2, 3, 1), (1, 3, 2), (3, 2, 1)]
FLAT = [(1, 2, 3), (2, 1, 3)]  # permutations that keep the third mode in place

FIXTURE_CLASSES = {
    "br3-333 rank 3": (lambda s: random_rank_r(3, 3, 3, 3, s).tensor, decide_333_br3, CUBIC),
    "br3-333 generic": (lambda s: generic_tensor(3, 3, 3, s), decide_333_br3, CUBIC),
    "br4-333 symmetric": (lambda s: symmetric_slices_333(s), decide_333_br4, CUBIC),
    "br4-333 generic": (lambda s: generic_tensor(3, 3, 3, s, bound=9), decide_333_br4, CUBIC),
    "br4-334 rank 4": (lambda s: random_rank_r(3, 3, 4, 4, s).tensor, decide_334, FLAT),
    "br4-334 generic": (lambda s: generic_tensor(3, 3, 4, s), decide_334, FLAT),
    "br4-334 block": (lambda s: block_diag_334(s), decide_334, FLAT),
    "br4-444 rank 4": (lambda s: random_rank_r(4, 4, 4, 4, s).tensor, lambda t: decide_444(t).verdict, CUBIC),
    "br4-444 counterexample": (lambda s: salmon_counterexample(s), lambda t: decide_444(t).verdict, CUBIC),
    "rank-l diagonal": (lambda s: diagonal_family(3).tensor, decide_rank_l, FLAT),
    "rank-l case2": (lambda s: rank_l_case2(4, s).tensor, decide_rank_l, FLAT),
}

CONJUGATES = 50


def test_criterion_8_invariance(criterion):
    start = time.perf_counter()
    changed = {}
    for index, (name, (make, decide, perms)) in enumerate(FIXTURE_CLASSES.items()):
        g = SplitMix64(1008 + index)
        changed[name] = 0
        for k in range(CONJUGATES):
            t = make(k)
            base = decide(t).outcome
            moved = change_basis(t, *(invertible_matrix(g, d, bound=2) for d in t.dims))
            moved = permute_modes(moved, perms[k % len(perms)])
            changed[name] += decide(moved).outcome is not base
    elapsed = time.perf_counter() - start
    bad = {k: v for k, v in changed.items() if v}
    ok = not bad and elapsed < 120
    summary = f"{len(FIXTURE_CLASSES)} fixture classes x {CONJUGATES} conjugates"
    criterion(8, ok, f"{summary}, changed verdicts {bad or 0}, {elapsed:.1f}s")
    assert ok


# 9 ---------------------------------------------------------------------------------


def test_criterion_9_low_dimensional_mode3(criterion):
    g = SplitMix64(1009)
    failures = 0
    for seed in range(30):
        d = 2 + seed % 2  # dim T_3 in {2, 3}
        base = [int_matrix(g, 4, 4) for _ in range(d)]
        mats = base + [
            sum((b.scale(c) for b, c in zip(base, g.vector(d, 3))), Matrix.zeros(4, 4)) for _ in range(4 - d)
        ]
        t = Tensor3.from_slices(mats)
        t = change_basis(t, invertible_matrix(g, 4), invertible_matrix(g, 4), invertible_matrix(g, 4))
        assert slice_space(t, 3).span_dim == d
        for mode in (1, 2):
            failures += sum(not span_commutation_ok(slice_space(t, mode), p).holds for p in (1, 2, 3))
    ok = failures == 0
    criterion(9, ok, f"30 tensors with dim T_3 <= 3, modes 1 and 2, p = 1,2,3: failures {failures}")
    assert ok


# 10 --------------------------------------------------------------------------------


def test_criterion_10_numeric_cross_check(criterion):
    good, _ = decisions_444()
    accepted = [t for t, tr in zip(rank4_444(), good) if tr.outcome is Outcome.ACCEPT]
    hits = 0
    for t in accepted:
        f = decompose_numeric(t, 4)
        hits += f is not None and numeric_residual(t, f) < 1e-8
    misses = sum(decompose_numeric(t, 4) is None for t in salmon())
    rate = hits / len(accepted)
    ok = rate >= 0.95 and misses == N_WITNESSED
    criterion(
        10, ok, f"advisory: residual < 1e-8 on {hits}/{len(accepted)} accepted, fails on {misses}/100 counterexamples"
    )
    assert ok
