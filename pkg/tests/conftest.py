import itertools

import pytest
import sympy
from hypothesis import strategies as st

from secantcert.linalg import GaussianRational, Matrix
from secantcert.rng import SplitMix64


def int_matrix(g: SplitMix64, rows: int, cols: int, bound: int = 3) -> Matrix:
    return Matrix(rows, cols, g.vector(rows * cols, bound))


def gauss_matrix(g: SplitMix64, rows: int, cols: int, bound: int = 3) -> Matrix:
    return Matrix(rows, cols, [GaussianRational(g.symmetric(bound), g.symmetric(bound)) for _ in range(rows * cols)])


def invertible_matrix(g: SplitMix64, n: int, bound: int = 3) -> Matrix:
    while True:
        a = int_matrix(g, n, n, bound)
        if sympy_matrix(a).det() != 0:
            return a


def sympy_matrix(a: Matrix):
    """Independent representation for oracle checks."""
    return sympy.Matrix(
        a.rows, a.cols, [sympy.Rational(x.re.numerator, x.re.denominator)
                         + sympy.I * sympy.Rational(x.im.numerator, x.im.denominator) for x in a.entries]
    )


def leibniz_det(a: Matrix) -> GaussianRational:
    n = a.rows
    total = GaussianRational()
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = GaussianRational(1)
        for i in range(n):
            term = term * a[i, perm[i]]
        total = total - term if inv % 2 else total + term
    return total


small_ints = st.integers(-3, 3)
fractions = st.fractions(min_value=-5, max_value=5, max_denominator=7)
gaussians = st.builds(GaussianRational, fractions, fractions)


@st.composite
def square_matrices(draw, min_size=1, max_size=4, elements=small_ints):
    n = draw(st.integers(min_size, max_size))
    return Matrix(n, n, draw(st.lists(elements, min_size=n * n, max_size=n * n)))


@pytest.fixture
def rng():
    return SplitMix64(20240501)


def from_sympy(x) -> GaussianRational:
    re, im = sympy.nsimplify(x).as_real_imag()
    return GaussianRational(str(re), str(im))


_ACCEPTANCE = pytest.StashKey[dict]()


@pytest.fixture
def criterion(request):
    """Record one acceptance line: call with (number, passed, detail)."""
    lines = request.config.stash.setdefault(_ACCEPTANCE, {})

    def record(number: int, passed: bool, detail: str) -> bool:
        lines[number] = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}"
        print(lines[number])
        return passed

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, {})
    if lines:
        terminalreporter.section("acceptance criteria")
        for k in sorted(lines):
            terminalreporter.write_line(lines[k])
