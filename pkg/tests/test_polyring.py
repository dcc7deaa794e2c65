import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from divstage.polyring import (InexactDivision, NotASquare, SparsePoly, bareiss_determinant, constant_matrix,
                               homogeneous_sqrt, poly_from_dict)


def y(s, i):
    return SparsePoly.variable(s, i)


def leibniz(matrix):
    """Permutation expansion; the slow oracle for small matrices."""
    n = len(matrix)
    s = matrix[0][0].s if n else 1
    total = SparsePoly.zero(s)
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = SparsePoly.constant(s, -1 if inv % 2 else 1)
        for i, j in enumerate(perm):
            term = term * matrix[i][j]
        total = total + term
    return total


def evaluate(p, point):
    total = 0
    for exps, c in p.terms().items():
        v = c
        for x, e in zip(point, exps):
            v *= x ** e
        total += v
    return total


def fraction_det(rows):
    """Gaussian elimination over the rationals."""
    a = [[Fraction(v) for v in row] for row in rows]
    n = len(a)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return 0
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        for r in range(col + 1, n):
            f = a[r][col] / a[col][col]
            for c in range(col, n):
                a[r][c] -= f * a[col][c]
    return det


def random_poly(rng, s, n_terms, degree=None, span=5):
    terms = {}
    for _ in range(n_terms):
        if degree is None:
            exps = tuple(rng.randint(0, 2) for _ in range(s))
        else:
            cut = sorted(rng.randint(0, degree) for _ in range(s - 1))
            exps = tuple(b - a for a, b in zip([0] + cut, cut + [degree]))
        terms[exps] = terms.get(exps, 0) + rng.randint(-span, span)
    return poly_from_dict(s, terms)


homog = st.builds(lambda seed, s, n, d: random_poly(random.Random(seed), s, n, d),
                  st.integers(0, 10**6), st.integers(1, 4), st.integers(1, 6), st.integers(0, 4))


def test_identity_determinant():
    for n in range(1, 6):
        eye = constant_matrix([[int(i == j) for j in range(n)] for i in range(n)], 2)
        assert bareiss_determinant(eye) == SparsePoly.constant(2, 1)


def test_two_by_two_skew():
    s = 1
    zero = SparsePoly.zero(s)
    m = [[zero, y(s, 0)], [-y(s, 0), zero]]
    assert bareiss_determinant(m) == y(s, 0) ** 2


@pytest.mark.parametrize("seed", range(20))
def test_integer_determinant_matches_cofactor_expansion(seed):
    rng = random.Random(seed)
    rows = [[rng.randint(-9, 9) for _ in range(4)] for _ in range(4)]
    det = bareiss_determinant(constant_matrix(rows))
    assert det == leibniz(constant_matrix(rows))
    assert det == int(fraction_det(rows))


@pytest.mark.parametrize("seed", range(15))
def test_polynomial_determinant_matches_leibniz_and_evaluation(seed):
    rng = random.Random(seed)
    s, n = 2, rng.randint(1, 4)
    m = [[random_poly(rng, s, rng.randint(0, 2)) for _ in range(n)] for _ in range(n)]
    det = bareiss_determinant(m)
    assert det == leibniz(m)
    point = (rng.randint(-3, 3), rng.randint(-3, 3))
    assert evaluate(det, point) == fraction_det([[evaluate(e, point) for e in row] for row in m])


@pytest.mark.parametrize("seed", range(20))
def test_determinant_is_multiplicative(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 4)
    a = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)]
    b = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)]
    ab = [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    det = lambda rows: bareiss_determinant(constant_matrix(rows))
    assert det(ab) == det(a) * det(b)


def test_singular_matrix_has_zero_determinant():
    assert bareiss_determinant(constant_matrix([[1, 2], [2, 4]])).is_zero()
    assert bareiss_determinant(constant_matrix([[0, 0, 1], [0, 0, 2], [3, 4, 5]])).is_zero()


def test_nonsquare_matrix_rejected():
    with pytest.raises(ValueError):
        bareiss_determinant(constant_matrix([[1, 2]]))
    with pytest.raises(ValueError):
        bareiss_determinant([])


def test_sqrt_examples():
    s = 2
    p = y(s, 0) ** 2 + 2 * y(s, 0) * y(s, 1) + y(s, 1) ** 2
    assert homogeneous_sqrt(p) == y(s, 0) + y(s, 1)
    assert homogeneous_sqrt(SparsePoly.zero(3)).is_zero()


def test_sqrt_of_constant_term_square():
    s = 1
    q = 3 + 2 * y(s, 0) - y(s, 0) ** 2
    assert homogeneous_sqrt(q * q) in (q, -q)


@pytest.mark.parametrize("seed", range(10))
def test_sqrt_five_term_degree_four(seed):
    q = random_poly(random.Random(seed), 3, 5, 4)
    r = homogeneous_sqrt(q * q)
    assert r == q or r == -q


@given(homog)
def test_sqrt_round_trip(q):
    r = homogeneous_sqrt(q * q)
    assert r == q or r == -q


@given(homog, st.integers(1, 5))
def test_non_squares_rejected(q, bump):
    assert q.is_homogeneous()
    p = q * q
    exps = [0] * q.s
    exps[0] = 2 * max(q.total_degree(), 0) + 1  # odd degree in one variable
    bad = p + poly_from_dict(q.s, {tuple(exps): bump})
    with pytest.raises(NotASquare):
        homogeneous_sqrt(bad)


def test_specific_non_squares():
    s = 2
    with pytest.raises(NotASquare):
        homogeneous_sqrt(2 * y(s, 0) ** 2)
    with pytest.raises(NotASquare):
        homogeneous_sqrt(-(y(s, 0) ** 2))
    with pytest.raises(NotASquare):
        homogeneous_sqrt(y(s, 0) ** 2 + y(s, 1) ** 2)
    with pytest.raises(NotASquare):
        homogeneous_sqrt(y(s, 0) * y(s, 1))


@given(homog, homog, homog)
def test_ring_axioms(a, b, c):
    if not (a.s == b.s == c.s):
        return
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a
    assert a * b == b * a
    assert a - a == 0


def test_exact_division():
    s = 2
    a = y(s, 0) + 3 * y(s, 1)
    b = y(s, 0) ** 2 - y(s, 1)
    assert (a * b).exact_div(b) == a
    with pytest.raises(InexactDivision):
        (a * b + 1).exact_div(y(s, 0))


def test_terms_are_sorted_and_nonzero():
    p = poly_from_dict(2, {(1, 0): 2, (0, 1): 0, (0, 0): -1})
    assert p.terms() == {(0, 0): -1, (1, 0): 2}
    assert p.coefficient((0, 1)) == 0
    assert p.total_degree() == 1
    assert not p.is_homogeneous()
