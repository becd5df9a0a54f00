from math import comb

import numpy as np
import pytest
import sympy

from conftest import from_sympy, int_matrix
from secantcert.generators import diagonal_family, generic_tensor, random_rank_r, rank_l_case1, rank_l_case2
from secantcert.generators import salmon_counterexample
from secantcert.linalg import Matrix, PreconditionError, rank
from secantcert.rng import SplitMix64
from secantcert.secant import (
    MinorIndex,
    b_minor,
    char_poly,
    decide_rank_l,
    decompose_numeric,
    discriminant,
    numeric_residual,
    quadric_space,
    rank_bound_check,
    segre_degree,
    veronese_degree,
)
from secantcert.tensor import Tensor3, slices
from secantcert.verdict import Outcome


def test_b_minor_polarises_the_2x2_minor():
    # det of the 2x2 submatrix of sum x_p T_p is sum_{p,q} x_p x_q b_pq
    g = SplitMix64(51)
    mats = [int_matrix(g, 3, 3) for _ in range(3)]
    x = g.vector(3, 4)
    a = sum((m.scale(c) for m, c in zip(mats, x)), Matrix.zeros(3, 3))
    for idx in MinorIndex.all(3, 3):
        (i1, i2), (j1, j2) = idx.alpha.zero_based(), idx.beta.zero_based()
        want = a[i1, j1] * a[i2, j2] - a[i1, j2] * a[i2, j1]
        got = sum(x[p] * x[q] * b_minor(mats[p], mats[q], idx) for p in range(3) for q in range(3))
        assert got == want


def test_quadric_forms_evaluate_minors():
    g = SplitMix64(52)
    mats = [int_matrix(g, 2, 3) for _ in range(3)]
    qs = quadric_space(mats)
    x = Matrix.column_vector(g.vector(3, 4))
    a = sum((m.scale(c[0]) for m, c in zip(mats, x.to_rows())), Matrix.zeros(2, 3))
    for idx, s in qs.quadrics.items():
        (i1, i2), (j1, j2) = idx.alpha.zero_based(), idx.beta.zero_based()
        assert (x.T @ s @ x)[0, 0] == a[i1, j1] * a[i2, j2] - a[i1, j2] * a[i2, j1]
        assert s.is_symmetric()


@pytest.mark.parametrize("l", [2, 3, 4])
def test_diagonal_family_counts(l):
    t = diagonal_family(l).tensor
    qs = quadric_space(slices(t, 3))
    assert qs.dim_span == comb(l, 2) and qs.dim_perp == l
    assert rank_bound_check(t, l)
    assert decide_rank_l(t).outcome is Outcome.ACCEPT


def test_case2_fixed_instance():
    t = rank_l_case2(4).tensor
    qs = quadric_space(slices(t, 3))
    assert qs.dim_span == 6 and qs.dim_perp == 4
    v = decide_rank_l(t)
    assert v.outcome is Outcome.ACCEPT
    assert [r.condition for r in v.reasons] == ["perp_invertible", "perp_commutation", "distinct_eigenvalues"]


def test_seeded_rank_l_cases():
    for seed in range(5):
        assert decide_rank_l(rank_l_case1(4, 5, 3, seed).tensor).outcome is Outcome.ACCEPT
        assert decide_rank_l(rank_l_case2(4, seed).tensor).outcome is Outcome.ACCEPT


def test_rank_l_not_applicable_cases():
    v = decide_rank_l(generic_tensor(4, 4, 4, 0))
    assert v.outcome is Outcome.NOT_APPLICABLE and v.reasons[0].condition == "perp_dim"
    dependent = Tensor3.from_slices([Matrix.identity(3)] * 3)
    assert decide_rank_l(dependent).outcome is Outcome.NOT_APPLICABLE
    with pytest.raises(PreconditionError):
        rank_bound_check(dependent, 3)


def test_char_poly_matches_sympy():
    g = SplitMix64(53)
    lam = sympy.Symbol("lam")
    for n in range(1, 5):
        a = int_matrix(g, n, n)
        want = sympy.Poly(sympy.Matrix(n, n, [int(x.re) for x in a.entries]).charpoly(lam).as_expr(), lam)
        coeffs = [from_sympy(c) for c in reversed(want.all_coeffs())]
        assert char_poly(a) == coeffs


def test_discriminant_detects_repeated_roots():
    assert discriminant(char_poly(Matrix.from_rows([[1, 0], [0, 1]]))) == 0
    assert discriminant(char_poly(Matrix.from_rows([[1, 0], [0, 2]]))) != 0
    a = Matrix.from_rows([[2, 1, 0], [0, 2, 0], [0, 0, 5]])
    assert discriminant(char_poly(a)) == 0
    lam = sympy.Symbol("lam")
    p = lam**3 - 2 * lam + 7
    assert discriminant(char_poly(Matrix.from_rows([[0, 0, -7], [1, 0, 2], [0, 1, 0]]))) == from_sympy(
        sympy.discriminant(p, lam)
    )


def test_degree_formulas():
    assert segre_degree(3, 3) == 6
    assert veronese_degree(3) == 4
    assert [veronese_degree(m) for m in range(2, 9)] == [2**k for k in range(1, 8)]
    assert segre_degree(2, 5) == 5
    with pytest.raises(ValueError):
        veronese_degree(1)


def test_decompose_numeric():
    t = random_rank_r(4, 4, 4, 4, 3).tensor
    f = decompose_numeric(t, 4)
    assert f is not None and numeric_residual(t, f) < 1e-8
    assert decompose_numeric(salmon_counterexample(0), 4) is None
    assert decompose_numeric(t, 3) is None


def test_residual_of_exact_factors_is_zero():
    w = random_rank_r(2, 3, 4, 2, 1)
    factors = [tuple(np.array(v, dtype=complex) for v in f) for f in w.factors]
    assert numeric_residual(w.tensor, factors) == 0.0


def test_rank_bound_fails_for_generic_slices():
    t = generic_tensor(3, 3, 3, 4)
    assert rank(quadric_space(slices(t, 3)).coeff) == 6
    assert not rank_bound_check(t, 3)


def test_rank_l_families_accepted_at_scale():
    bad1 = [s for s in range(100) if decide_rank_l(rank_l_case1(4, 4, 3, s).tensor).outcome is not Outcome.ACCEPT]
    bad2 = [s for s in range(100) if decide_rank_l(rank_l_case2(4, s).tensor).outcome is not Outcome.ACCEPT]
    assert bad1 == bad2 == []
