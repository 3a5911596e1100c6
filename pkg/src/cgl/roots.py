"""Exact rational-root detection for integer polynomials.

Candidates ``a/b`` satisfy ``b | lc(f)``. Each real root is isolated with a
Sturm sequence and refined by bisection until its interval is narrower than
``1 / (2 lc**2)``; two distinct fractions with denominators at most ``|lc|``
are at least ``1 / lc**2`` apart, so the best approximation of the midpoint
with denominator ``<= |lc|`` is the only possible rational root there.
A cheap mod-p pre-filter proves there is no rational root whenever some good
prime has no linear factor.
"""

from __future__ import annotations

from fractions import Fraction
from math import ceil, gcd, lcm
from typing import Sequence

from .galois import distinct_degree_pattern, integer_coeffs
from .poly import UniPoly, subresultant_gcd, z_exact_div
from .primes import primes_up_to


def _sign_changes(values: Sequence[int]) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(a != b for a, b in zip(signs, signs[1:]))


def _scaled(f: UniPoly) -> list[int]:
    """Integer coefficients of a positive multiple of ``f`` (signs of values preserved)."""
    den = lcm(1, *(c.denominator for c in f.coeffs))
    ints = [int(c * den) for c in f.coeffs]
    g = gcd(*ints) or 1
    return [c // g for c in ints]


def _sign_at(c: Sequence[int], x: Fraction) -> int:
    """Sign of ``f(x)``; integer homogeneous Horner on ``num / den``."""
    num, den = x.numerator, x.denominator
    acc = c[-1]
    dp = 1
    for ci in reversed(c[:-1]):
        dp *= den
        acc = acc * num + ci * dp
    return (acc > 0) - (acc < 0)


def sturm_sequence(f: UniPoly) -> list[UniPoly]:
    seq = [f, f.derivative()]
    while not seq[-1].is_zero() and seq[-1].degree > 0:
        seq.append(-(seq[-2] % seq[-1]))
    if seq[-1].is_zero():
        seq.pop()
    return seq


def real_root_intervals(f: UniPoly) -> list[tuple[Fraction, Fraction]]:
    """Disjoint half-open intervals ``(lo, hi]`` each holding one real root of squarefree ``f``."""
    if f.degree < 1:
        return []
    seq = [_scaled(p) for p in sturm_sequence(f)]
    lc = f.lc
    bound = 1 + max(abs(c / lc) for c in f.coeffs[:-1])
    bound = Fraction(ceil(bound))

    def variations(x: Fraction) -> int:
        return _sign_changes([_sign_at(p, x) for p in seq])

    out = []
    stack = [(-bound, bound)]
    while stack:
        lo, hi = stack.pop()
        n = variations(lo) - variations(hi)
        if n == 0:
            continue
        if n == 1:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        stack.append((lo, mid))
        stack.append((mid, hi))
    return sorted(out)


def _squarefree_part(c: list[int]) -> list[int]:
    deriv = [i * c[i] for i in range(1, len(c))]
    g = subresultant_gcd(c, deriv)
    return c if len(g) <= 1 else z_exact_div(c, g)


def has_root_mod_some_prime_filter(c: list[int], max_primes: int = 60, limit: int = 2000) -> bool | None:
    """False if some good prime shows no linear factor (so no rational root); else None."""
    used = 0
    for p in primes_up_to(limit):
        ct = distinct_degree_pattern(c, p)
        if ct is None:
            continue
        if 1 not in ct.partition:
            return False
        used += 1
        if used >= max_primes:
            break
    return None


def rational_roots(f) -> list[Fraction]:
    """All rational roots of ``f`` (each listed once), found exactly."""
    c = integer_coeffs(f)
    if len(c) < 2:
        return []
    roots: list[Fraction] = []
    while c and c[0] == 0:
        c = c[1:]
        if Fraction(0) not in roots:
            roots.append(Fraction(0))
    c = _squarefree_part(c)
    if len(c) < 2:
        return roots
    if len(c) > 2 and has_root_mod_some_prime_filter(c) is False:
        return sorted(roots)
    g = UniPoly(tuple(c))
    lead = abs(c[-1])
    tol = Fraction(1, 2 * lead * lead)
    for lo, hi in real_root_intervals(g):
        # intervals are (lo, hi] with one simple root; lo may be a neighbouring root, so track hi
        shi = _sign_at(c, hi)
        if shi == 0:
            lo = hi
        while hi - lo >= tol:
            mid = (lo + hi) / 2
            sm = _sign_at(c, mid)
            if sm == 0:
                lo = hi = mid
                break
            if sm == shi:
                hi = mid
            else:
                lo = mid
        cand = ((lo + hi) / 2).limit_denominator(lead)
        if _sign_at(c, cand) == 0 and cand not in roots:
            roots.append(cand)
    return sorted(roots)
