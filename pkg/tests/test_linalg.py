import random
from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, strategies as st

from _support import naive_det, naive_rank, naive_rref
from cgl.linalg import int_det, kernel_basis, mod_det, mod_kernel_basis, rank, zpoly_det


def random_matrix(rng, rows, cols):
    # low-rank products and repeated rows keep kernels nontrivial
    kind = rng.random()
    if kind < 0.4:
        k = rng.randint(0, min(rows, cols))
        left = [[rng.randint(-4, 4) for _ in range(k)] for _ in range(rows)]
        right = [[rng.randint(-4, 4) for _ in range(cols)] for _ in range(k)]
        return [[sum(l[i] * right[i][j] for i in range(k)) for j in range(cols)] for l in left]
    if kind < 0.5:
        return [[Fraction(rng.randint(-9, 9), rng.randint(1, 6)) for _ in range(cols)] for _ in range(rows)]
    return [[rng.randint(-6, 6) for _ in range(cols)] for _ in range(rows)]


def test_kernel_exact_on_1000_random_matrices():
    rng = random.Random(20240611)
    for _ in range(1000):
        rows, cols = rng.randint(1, 7), rng.randint(1, 9)
        m = random_matrix(rng, rows, cols)
        basis = kernel_basis(m, cols)
        assert len(basis) == cols - naive_rank(m, cols)
        for v in basis:
            assert all(sum(Fraction(a) * b for a, b in zip(row, v)) == 0 for row in m)
            assert gcd(*v) == 1
            assert next(x for x in v if x) > 0
        if basis:
            assert naive_rank(basis, cols) == len(basis)


def test_kernel_matches_naive_rref_span():
    m = [[1, 2, 3, 4], [2, 4, 6, 8], [1, 0, 1, 0]]
    basis = kernel_basis(m)
    rref, pivots = naive_rref(m, 4)
    assert len(basis) == 4 - len(pivots)
    # every naive null vector lies in the span of the returned basis
    free = [c for c in range(4) if c not in pivots]
    for f in free:
        v = [Fraction(0)] * 4
        v[f] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -rref[r][f]
        assert naive_rank(basis + [v], 4) == len(basis)


def test_kernel_of_empty_matrix_needs_width():
    assert kernel_basis([], 3) == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    assert rank([], 0) == 0


square = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=n, max_size=n)
)


@given(square)
def test_bareiss_determinant_matches_fraction_elimination(m):
    assert int_det(m) == naive_det(m)


@given(square, st.sampled_from([2, 3, 7, 101]))
def test_mod_det_is_reduction_of_integer_det(m, p):
    assert mod_det(m, p) == int_det(m) % p


@given(square, st.integers(-5, 5))
def test_polynomial_determinant_specializes(m, t):
    # entries a + b*t with b from a shifted copy of the matrix
    n = len(m)
    pm = [[[m[i][j], m[(i + 1) % n][j]] for j in range(n)] for i in range(n)]
    d = zpoly_det(pm)
    at_t = [[m[i][j] + t * m[(i + 1) % n][j] for j in range(n)] for i in range(n)]
    assert sum(c * t**k for k, c in enumerate(d)) == int_det(at_t)


@pytest.mark.parametrize("p", [5, 7, 13])
def test_mod_kernel_basis_annihilates(p):
    rng = random.Random(p)
    for _ in range(50):
        rows, cols = rng.randint(1, 6), rng.randint(1, 8)
        m = [[rng.randrange(p) for _ in range(cols)] for _ in range(rows)]
        basis = mod_kernel_basis(m, cols, p)
        for v in basis:
            assert all(sum(a * b for a, b in zip(row, v)) % p == 0 for row in m)
        assert len(basis) == cols - rank_mod(m, cols, p)


def rank_mod(m, cols, p):
    a = [list(r) for r in m]
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, len(a)) if a[i][c] % p), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], -1, p)
        a[r] = [x * inv % p for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] % p:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        r += 1
    return r
