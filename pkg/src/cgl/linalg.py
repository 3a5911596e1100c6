"""Exact linear algebra on integer/rational matrices (lists of rows)."""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Callable, Sequence, TypeVar

from .poly import z_content, z_exact_div, z_mul, z_sub

T = TypeVar("T")


def _integer_rows(m: Sequence[Sequence]) -> list[list[int]]:
    rows = []
    for row in m:
        fr = [Fraction(x) for x in row]
        den = lcm(1, *(x.denominator for x in fr))
        rows.append([int(x * den) for x in fr])
    return rows


def _echelon(m: Sequence[Sequence], ncols: int) -> tuple[list[list[int]], list[int], int]:
    """Fraction-free Gauss-Jordan elimination.

    Returns ``(rows, pivot_columns, d)`` where the first ``len(pivot_columns)``
    rows are in reduced form scaled by the common pivot value ``d``: row ``r``
    holds ``d`` at its pivot column and 0 at every other pivot column. Every
    division below is exact (each entry is a minor of the input).
    """
    a = _integer_rows(m)
    nrows = len(a)
    pivots: list[int] = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        pv = a[r][c]
        for i in range(nrows):
            if i == r:
                continue
            f = a[i][c]
            row_i = a[i]
            row_r = a[r]
            new = []
            for j in range(ncols):
                q, rem = divmod(pv * row_i[j] - f * row_r[j], prev)
                if rem:
                    raise ArithmeticError("non-exact fraction-free step")
                new.append(q)
            a[i] = new
        prev = pv
        pivots.append(c)
        r += 1
    # earlier pivot rows have been updated with the later pivots; their pivot
    # entries all equal the final ``prev`` now.
    return a, pivots, prev


def rank(m: Sequence[Sequence], ncols: int | None = None) -> int:
    if not m:
        return 0
    ncols = len(m[0]) if ncols is None else ncols
    return len(_echelon(m, ncols)[1])


def _normalize_vector(v: list[int]) -> tuple[int, ...]:
    g = z_content(v)
    v = [x // g for x in v]
    first = next(x for x in v if x)
    if first < 0:
        v = [-x for x in v]
    return tuple(v)


def kernel_basis(m: Sequence[Sequence], ncols: int | None = None) -> list[tuple[int, ...]]:
    """Basis of the right kernel of ``m``.

    Each vector is primitive with first nonzero entry positive, one per free
    column (in column order). ``ncols`` is required when ``m`` has no rows.
    """
    if ncols is None:
        if not m:
            raise ValueError("ncols required for a matrix without rows")
        ncols = len(m[0])
    if any(len(row) != ncols for row in m):
        raise ValueError("ragged matrix")
    if not m:
        rows, pivots, d = [], [], 1
    else:
        rows, pivots, d = _echelon(m, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = d
        for r, pc in enumerate(pivots):
            v[pc] = -rows[r][f]
        basis.append(_normalize_vector(v))
    return basis


def bareiss_det(
    m: Sequence[Sequence[T]],
    *,
    sub: Callable[[T, T], T],
    mul: Callable[[T, T], T],
    exact_div: Callable[[T, T], T],
    is_zero: Callable[[T], bool],
    one: T,
    neg: Callable[[T], T],
) -> T:
    """Bareiss determinant over any integral domain with exact division."""
    a = [list(row) for row in m]
    n = len(a)
    if n == 0:
        return one
    sign = False
    prev = one
    for k in range(n - 1):
        if is_zero(a[k][k]):
            swap = next((i for i in range(k + 1, n) if not is_zero(a[i][k])), None)
            if swap is None:
                return a[k][k]  # zero column below the diagonal: singular
            a[k], a[swap] = a[swap], a[k]
            sign = not sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            for j in range(k + 1, n):
                a[i][j] = exact_div(sub(mul(akk, a[i][j]), mul(aik, a[k][j])), prev)
        prev = akk
    d = a[n - 1][n - 1]
    return neg(d) if sign else d


def int_det(m: Sequence[Sequence[int]]) -> int:
    """Determinant of an integer matrix."""

    def exact(a: int, b: int) -> int:
        q, r = divmod(a, b)
        if r:
            raise ArithmeticError("non-exact Bareiss step")
        return q

    return bareiss_det(
        m,
        sub=lambda a, b: a - b,
        mul=lambda a, b: a * b,
        exact_div=exact,
        is_zero=lambda a: a == 0,
        one=1,
        neg=lambda a: -a,
    )


def zpoly_det(m: Sequence[Sequence[list[int]]]) -> list[int]:
    """Determinant of a matrix with entries in Z[t] (coefficient lists)."""
    return bareiss_det(
        m,
        sub=z_sub,
        mul=z_mul,
        exact_div=z_exact_div,
        is_zero=lambda a: not a,
        one=[1],
        neg=lambda a: [-c for c in a],
    )


def mod_det(m: Sequence[Sequence[int]], p: int) -> int:
    """Determinant over F_p by ordinary elimination."""
    a = [[x % p for x in row] for row in m]
    n = len(a)
    det = 1
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k]), None)
        if piv is None:
            return 0
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det = det * a[k][k] % p
        inv = pow(a[k][k], -1, p)
        for i in range(k + 1, n):
            f = a[i][k] * inv % p
            if f:
                for j in range(k, n):
                    a[i][j] = (a[i][j] - f * a[k][j]) % p
    return det % p


def mod_kernel_basis(m: Sequence[Sequence[int]], ncols: int, p: int) -> list[list[int]]:
    """Right kernel over F_p (reduced echelon, one vector per free column)."""
    a = [[x % p for x in row] for row in m]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], -1, p)
        a[r] = [x * inv % p for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    basis = []
    for f in (c for c in range(ncols) if c not in pivots):
        v = [0] * ncols
        v[f] = 1
        for row, pc in enumerate(pivots):
            v[pc] = -a[row][f] % p
        basis.append(v)
    return basis
