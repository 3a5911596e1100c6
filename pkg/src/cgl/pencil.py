"""Pencils of plane cubics through 8 points and their degree-12 discriminant.

A ternary cubic is singular exactly when its three partial derivatives have a
common projective zero, so the discriminant used here is the Macaulay
resultant Res(f_x, f_y, f_z): a 15x15 determinant over the degree-4
monomials divided by the 3x3 extraneous minor.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from itertools import product
from math import lcm
from typing import Iterable, Sequence

from .errors import DegenerateError, DuplicatePointError
from .linalg import int_det, kernel_basis, mod_det, mod_kernel_basis, rank, zpoly_det
from .points import ProjPoint
from .poly import (
    UniPoly,
    format_terms,
    poly_gcd,
    z_add,
    parse_poly,
    parse_terms,
    z_exact_div,
    z_trim,
)

VARIABLES = ("x", "y", "z")


def _monomials(degree: int) -> tuple[tuple[int, int, int], ...]:
    mons = [e for e in product(range(degree, -1, -1), repeat=3) if sum(e) == degree]
    return tuple(sorted(mons, reverse=True))


# x^3, x^2y, x^2z, xy^2, xyz, xz^2, y^3, y^2z, yz^2, z^3
CUBIC_MONOMIALS = _monomials(3)
QUARTIC_MONOMIALS = _monomials(4)
WEIGHT = 12  # disc(f o M) = det(M)**WEIGHT * disc(f)


def _macaulay_template():
    """Sparse description of the Macaulay matrix as a linear function of f.

    Row ``r`` belongs to the quartic monomial ``m`` and holds ``(m / x_i^2) * f_i``
    where ``i`` is the first variable with exponent >= 2 in ``m``.
    """
    col = {m: j for j, m in enumerate(QUARTIC_MONOMIALS)}
    entries = []  # (row, col, cubic coefficient index, multiplier)
    for r, m in enumerate(QUARTIC_MONOMIALS):
        i = next(v for v in range(3) if m[v] >= 2)
        shift = list(m)
        shift[i] -= 2
        for k, e in enumerate(CUBIC_MONOMIALS):
            if e[i] == 0:
                continue
            target = tuple(shift[v] + e[v] - (v == i) for v in range(3))
            entries.append((r, col[target], k, e[i]))
    minor = [j for j, m in enumerate(QUARTIC_MONOMIALS) if sum(x >= 2 for x in m) >= 2]
    return tuple(entries), tuple(minor)


_ENTRIES, _MINOR = _macaulay_template()


def macaulay_matrix(coeffs: Sequence[int]) -> list[list[int]]:
    """15x15 integer Macaulay matrix of the partials of an integer cubic."""
    n = len(QUARTIC_MONOMIALS)
    m = [[0] * n for _ in range(n)]
    for r, c, k, mult in _ENTRIES:
        m[r][c] += mult * coeffs[k]
    return m


def _submatrix(m, idx):
    return [[m[r][c] for c in idx] for r in idx]


# ---------------------------------------------------------------------------
# cubic forms


def _linear_substitute(coeffs: Sequence, mat: Sequence[Sequence]) -> list:
    """Coefficients of ``f(M v)`` for a cubic ``f`` (exact, any numeric type)."""
    lin = [list(row) for row in mat]  # x_i -> sum_j M[i][j] v_j

    def mul(p: dict, q: dict) -> dict:
        out: dict = {}
        for e1, c1 in p.items():
            for e2, c2 in q.items():
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
                out[e] = out.get(e, 0) + c1 * c2
        return out

    linear = [{(1, 0, 0): r[0], (0, 1, 0): r[1], (0, 0, 1): r[2]} for r in lin]
    out = {e: 0 for e in CUBIC_MONOMIALS}
    for c, e in zip(coeffs, CUBIC_MONOMIALS):
        if not c:
            continue
        term = {(0, 0, 0): c}
        for v in range(3):
            for _ in range(e[v]):
                term = mul(term, linear[v])
        for k, val in term.items():
            out[k] += val
    return [out[e] for e in CUBIC_MONOMIALS]


@dataclass(frozen=True)
class TernaryCubic:
    """Cubic form with coefficients in the order of ``CUBIC_MONOMIALS``."""

    coeffs: tuple

    def __post_init__(self):
        cs = tuple(Fraction(c) for c in self.coeffs)
        if len(cs) != 10:
            raise ValueError("a ternary cubic has exactly 10 coefficients")
        if not any(cs):
            raise ValueError("the zero form is not a cubic")
        object.__setattr__(self, "coeffs", cs)

    @classmethod
    def from_terms(cls, terms: dict) -> "TernaryCubic":
        """Build from ``{(a, b, c): coeff}``; lower-degree terms are homogenized with z."""
        cs = {e: Fraction(0) for e in CUBIC_MONOMIALS}
        for (a, b, c), v in terms.items():
            if a + b + c > 3:
                raise ValueError("degree exceeds 3")
            cs[(a, b, 3 - a - b)] += Fraction(v)
        return cls(tuple(cs[e] for e in CUBIC_MONOMIALS))

    @classmethod
    def parse(cls, text: str) -> "TernaryCubic":
        return cls.from_terms(parse_terms(text, VARIABLES))

    def terms(self) -> dict:
        return {e: c for e, c in zip(CUBIC_MONOMIALS, self.coeffs) if c}

    def __call__(self, x, y, z):
        return sum(c * x ** e[0] * y ** e[1] * z ** e[2] for c, e in zip(self.coeffs, CUBIC_MONOMIALS))

    def __add__(self, other: "TernaryCubic") -> "TernaryCubic":
        return TernaryCubic(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def scale(self, lam) -> "TernaryCubic":
        return TernaryCubic(tuple(Fraction(lam) * c for c in self.coeffs))

    def substitute(self, mat: Sequence[Sequence]) -> "TernaryCubic":
        """The form ``v -> f(M v)``."""
        return TernaryCubic(tuple(_linear_substitute(self.coeffs, mat)))

    def integer_coeffs(self) -> tuple[list[int], int]:
        """``(c, L)`` with ``c = L * coeffs`` integral and ``L`` the least such."""
        den = lcm(*(c.denominator for c in self.coeffs))
        return [int(c * den) for c in self.coeffs], den

    def __str__(self) -> str:
        return format_terms(self.terms(), VARIABLES)


# ---------------------------------------------------------------------------
# discriminant


def _unimodular(rng: random.Random) -> list[list[int]]:
    m = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    for _ in range(6):
        i, j = rng.sample(range(3), 2)
        k = rng.choice((-2, -1, 1, 2))
        m[i] = [a + k * b for a, b in zip(m[i], m[j])]
    return m


def _det3(m) -> int:
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def _partials_rank(coeffs: Sequence) -> int:
    """Rank of the 3x6 coefficient matrix of (f_x, f_y, f_z)."""
    quad = _monomials(2)
    idx = {e: j for j, e in enumerate(quad)}
    rows = []
    for i in range(3):
        row = [0] * 6
        for c, e in zip(coeffs, CUBIC_MONOMIALS):
            if e[i]:
                q = tuple(e[v] - (v == i) for v in range(3))
                row[idx[q]] += e[i] * c
        rows.append(row)
    return rank(rows, 6)


def macaulay_resultant(coeffs: Sequence[int]) -> int | None:
    """Res(f_x, f_y, f_z) for an integer cubic, or None if the minor vanishes."""
    m = macaulay_matrix(coeffs)
    minor = int_det(_submatrix(m, _MINOR))
    if minor == 0:
        return None
    q, r = divmod(int_det(m), minor)
    if r:
        raise ArithmeticError("Macaulay quotient is not integral")
    return q


def integer_discriminant(coeffs: Sequence[int], seed: int = 0, max_tries: int = 200) -> int:
    """Discriminant of an integer cubic, retrying through unimodular changes of variables."""
    res = macaulay_resultant(coeffs)
    if res is not None:
        return res
    if _partials_rank(coeffs) <= 1:
        return 0  # a triple line: singular, and every Macaulay minor vanishes
    rng = random.Random(seed)
    for _ in range(max_tries):
        mat = _unimodular(rng)
        res = macaulay_resultant(_linear_substitute(coeffs, mat))
        if res is not None:
            d = _det3(mat) ** WEIGHT
            return res // d
    raise ArithmeticError("no nonvanishing Macaulay minor found")


def ternary_cubic_discriminant(f: TernaryCubic) -> Fraction:
    """Macaulay resultant of the partials; zero iff the cubic is singular."""
    ints, den = f.integer_coeffs()
    return Fraction(integer_discriminant(ints), den**WEIGHT)


def mod_discriminant(coeffs: Sequence[int], p: int, seed: int = 0, max_tries: int = 200) -> int:
    """Discriminant of an integer cubic reduced mod a prime p (p >= 5)."""
    cs = [c % p for c in coeffs]
    if not any(cs):
        return 0
    rng = random.Random(seed)
    cur = cs
    for attempt in range(max_tries + 1):
        m = macaulay_matrix(cur)
        minor = mod_det(_submatrix(m, _MINOR), p)
        if minor:
            return mod_det(m, p) * pow(minor, -1, p) % p
        if attempt == 0 and _partials_rank_mod(cs, p) <= 1:
            return 0
        cur = [c % p for c in _linear_substitute(cs, _unimodular(rng))]
    raise ArithmeticError("no nonvanishing Macaulay minor mod p")


def _partials_rank_mod(coeffs, p) -> int:
    quad = _monomials(2)
    idx = {e: j for j, e in enumerate(quad)}
    rows = []
    for i in range(3):
        row = [0] * 6
        for c, e in zip(coeffs, CUBIC_MONOMIALS):
            if e[i]:
                q = tuple(e[v] - (v == i) for v in range(3))
                row[idx[q]] = (row[idx[q]] + e[i] * c) % p
        rows.append(row)
    return 6 - len(mod_kernel_basis(rows, 6, p))


# ---------------------------------------------------------------------------
# pencils


@dataclass(frozen=True)
class Pencil:
    """The line of cubics ``a + t*b``."""

    a: TernaryCubic
    b: TernaryCubic

    def __post_init__(self):
        if rank([list(self.a.coeffs), list(self.b.coeffs)], 10) < 2:
            raise DegenerateError("pencil members are proportional")

    def member(self, t) -> TernaryCubic:
        return self.a + self.b.scale(t)

    def integer_pair(self) -> tuple[list[int], list[int]]:
        """Common-denominator integer scalings of ``a`` and ``b``."""
        den = lcm(*(c.denominator for c in self.a.coeffs + self.b.coeffs))
        return [int(c * den) for c in self.a.coeffs], [int(c * den) for c in self.b.coeffs]


def evaluation_matrix(points: Sequence[ProjPoint]) -> list[list[int]]:
    return [[x**e[0] * y**e[1] * z**e[2] for e in CUBIC_MONOMIALS] for (x, y, z) in points]


def _as_points(points: Iterable) -> list[ProjPoint]:
    out = []
    for p in points:
        out.append(p if isinstance(p, ProjPoint) else ProjPoint(tuple(p)))
    for pt in out:
        if len(pt) != 3:
            raise ValueError("points must lie in P^2")
    return out


def cubics_through_points(points: Sequence) -> Pencil:
    """Pencil spanned by the kernel of the 8x10 cubic-monomial evaluation matrix."""
    pts = _as_points(points)
    if len(pts) != 8:
        raise ValueError(f"need 8 points, got {len(pts)}")
    if len(set(pts)) != len(pts):
        raise DuplicatePointError("two input points coincide in P^2")
    basis = kernel_basis(evaluation_matrix(pts), 10)
    if len(basis) != 2:
        raise DegenerateError(f"cubics through the points form a {len(basis)}-dimensional space")
    return Pencil(TernaryCubic(basis[0]), TernaryCubic(basis[1]))


def _interpolate(xs: Sequence[int], ys: Sequence) -> UniPoly:
    """Newton interpolation through ``(xs[i], ys[i])`` over Q."""
    n = len(xs)
    coef = [Fraction(y) for y in ys]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = UniPoly((coef[-1],))
    for i in range(n - 2, -1, -1):
        poly = poly * UniPoly((-xs[i], 1)) + coef[i]
    return poly


def delta_by_interpolation(pencil: Pencil) -> UniPoly:
    """Delta(t) of the integer-scaled pencil from 13 exact evaluations."""
    a, b = pencil.integer_pair()
    ts = list(range(WEIGHT + 1))
    values = [integer_discriminant([x + t * y for x, y in zip(a, b)], seed=t) for t in ts]
    return _interpolate(ts, values)


def delta_symbolic(pencil: Pencil, seed: int = 0, max_tries: int = 50) -> UniPoly:
    """Delta(t) of the integer-scaled pencil by Bareiss elimination over Z[t]."""
    a, b = pencil.integer_pair()
    rng = random.Random(seed)
    mat = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    for _ in range(max_tries):
        ca, cb = _linear_substitute(a, mat), _linear_substitute(b, mat)
        n = len(QUARTIC_MONOMIALS)
        m = [[[0, 0] for _ in range(n)] for _ in range(n)]
        for r, c, k, mult in _ENTRIES:
            m[r][c][0] += mult * ca[k]
            m[r][c][1] += mult * cb[k]
        m = [[z_trim(e) for e in row] for row in m]
        minor = zpoly_det(_submatrix(m, _MINOR))
        if minor:
            q = z_exact_div(zpoly_det(m), minor)
            d = _det3(mat) ** WEIGHT
            return UniPoly(tuple(Fraction(c, d) for c in q))
        mat = _unimodular(rng)
    raise ArithmeticError("Macaulay minor vanishes identically along the pencil")


@dataclass
class DiscriminantReport:
    pencil: Pencil
    delta: UniPoly  # primitive integer coefficients, positive leading coefficient
    degree: int
    scalar_vs_reference: Fraction | None = None
    proportional_to_reference: bool | None = None
    infinity_member_singular: bool | None = None
    schema_version: int = 1

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "basis": [str(self.pencil.a), str(self.pencil.b)],
            "delta": [str(int(c)) for c in self.delta.coeffs],
            "degree": self.degree,
            "scalar_vs_reference": None if self.scalar_vs_reference is None else str(self.scalar_vs_reference),
            "proportional_to_reference": self.proportional_to_reference,
            "infinity_member_singular": self.infinity_member_singular,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "DiscriminantReport":
        s = d.get("scalar_vs_reference")
        return cls(
            pencil=Pencil(TernaryCubic.parse(d["basis"][0]), TernaryCubic.parse(d["basis"][1])),
            delta=UniPoly(tuple(int(c) for c in d["delta"])),
            degree=d["degree"],
            scalar_vs_reference=None if s is None else Fraction(s),
            proportional_to_reference=d.get("proportional_to_reference"),
            infinity_member_singular=d.get("infinity_member_singular"),
            schema_version=d.get("schema_version", 1),
        )


def proportionality_scalar(delta: UniPoly, reference: UniPoly) -> Fraction | None:
    """``s`` with ``reference == s * delta`` coefficientwise, else None."""
    if delta.degree != reference.degree or delta.is_zero():
        return None
    s = Fraction(reference.lc) / Fraction(delta.lc)
    if all(Fraction(r) == s * d for r, d in zip(reference.coeffs, delta.coeffs)):
        return s
    return None


def pencil_discriminant(
    pencil: Pencil, reference: UniPoly | None = None, method: str = "both"
) -> DiscriminantReport:
    """Delta(t) = disc(a + t*b), normalized to a primitive integer polynomial.

    ``method`` is ``"interpolation"``, ``"symbolic"`` or ``"both"`` (which
    raises if the two routes disagree).
    """
    if method == "interpolation":
        raw = delta_by_interpolation(pencil)
    elif method == "symbolic":
        raw = delta_symbolic(pencil)
    elif method == "both":
        raw = delta_by_interpolation(pencil)
        if raw.primitive() != delta_symbolic(pencil).primitive():
            raise ArithmeticError("interpolated and symbolic discriminants differ")
    else:
        raise ValueError(f"unknown method {method!r}")
    delta = raw.primitive()
    report = DiscriminantReport(pencil=pencil, delta=delta, degree=delta.degree)
    if delta.degree < WEIGHT:
        # the leading coefficient of Delta is disc(b): the t = infinity member
        report.infinity_member_singular = ternary_cubic_discriminant(pencil.b) == 0
    if reference is not None:
        s = proportionality_scalar(delta, reference)
        report.scalar_vs_reference = s
        report.proportional_to_reference = s is not None
    return report


def common_zeros(a: TernaryCubic, b: TernaryCubic, bound: int) -> list[ProjPoint]:
    """Projective points with ``max|coord| <= bound`` on both cubics (brute force)."""
    ia, _ = a.integer_coeffs()
    ib, _ = b.integer_coeffs()
    found = []
    rng = range(-bound, bound + 1)
    for x, y, z in product(rng, rng, rng):
        if (x, y, z) == (0, 0, 0):
            continue
        first = x or y or z
        if first < 0:
            continue
        mons = [x**e[0] * y**e[1] * z**e[2] for e in CUBIC_MONOMIALS]
        if sum(c * m for c, m in zip(ia, mons)) == 0 and sum(c * m for c, m in zip(ib, mons)) == 0:
            pt = ProjPoint((x, y, z))
            if pt.coords == (x, y, z):
                found.append(pt)
    return sorted(found)


def _coeffs_in_x(coeffs: Sequence[int], y: int | None, z: int | None) -> list:
    """Coefficients in x, low degree first, with y, z fixed; ``y=None`` keeps y as a Z[y] list."""
    out: list = [[] for _ in range(4)] if y is None else [0] * 4
    for c, (i, j, k) in zip(coeffs, CUBIC_MONOMIALS):
        if not c:
            continue
        if y is None:
            # z = 1: the x**i coefficient is a polynomial in y
            out[i] = z_add(out[i], [0] * j + [c])
        else:
            out[i] += c * y**j * z**k
    return out


def _sylvester(f: list[list[int]], g: list[list[int]]) -> list[list[list[int]]]:
    """Sylvester matrix of two cubics in x whose coefficients lie in Z[y]."""
    rows = []
    for src in (f, g):
        hi = list(reversed(src))
        for shift in range(3):
            rows.append([[] for _ in range(shift)] + hi + [[] for _ in range(2 - shift)])
    return rows


def rational_base_points(pencil: Pencil) -> list[ProjPoint]:
    """All points of P^2(Q) on every member of the pencil, found exactly.

    After a shear making the x**3 coefficient of ``a`` nonzero, the resultant
    in x vanishes exactly at the (y : z) projections of common zeros; its
    rational roots are lifted through the gcd of the two cubics in x.
    """
    from .roots import rational_roots

    ia, ib = pencil.integer_pair()
    shear = next(
        (k, l) for k, l in product(range(4), repeat=2)
        if TernaryCubic(tuple(ia))(1, k, l) != 0
    )
    k, l = shear
    mat = [[1, 0, 0], [k, 1, 0], [l, 0, 1]]
    sa = [int(c) for c in _linear_substitute(ia, mat)]
    sb = [int(c) for c in _linear_substitute(ib, mat)]

    res = zpoly_det(_sylvester(_coeffs_in_x(sa, None, 1), _coeffs_in_x(sb, None, 1)))
    if not z_trim(res):
        raise DegenerateError("the pencil members share a component")
    fibers = [(y0, Fraction(1)) for y0 in rational_roots(UniPoly(tuple(res)))]
    fibers.append((Fraction(1), Fraction(0)))  # the line z = 0
    found = set()
    for y0, z0 in fibers:
        den = lcm(y0.denominator, z0.denominator)
        yi, zi = int(y0 * den), int(z0 * den)
        fa = UniPoly(tuple(_coeffs_in_x(sa, yi, zi)))
        fb = UniPoly(tuple(_coeffs_in_x(sb, yi, zi)))
        g = poly_gcd(fa, fb) if not fb.is_zero() else fa
        if g.degree < 1:
            continue
        for x0 in rational_roots(g):
            v = (x0, Fraction(yi), Fraction(zi))
            # undo the shear: the original point is M v
            orig = [sum(Fraction(mat[r][c]) * v[c] for c in range(3)) for r in range(3)]
            found.add(ProjPoint.from_rationals(orig))
    pts = sorted(found)
    for p in pts:
        if TernaryCubic(tuple(ia))(*p.coords) or TernaryCubic(tuple(ib))(*p.coords):
            raise ArithmeticError(f"base point {p} fails verification")
    return pts


def recover_eighth_point(pencil: Pencil, known: Sequence) -> list[ProjPoint]:
    """Rational base points of the pencil not already in ``known``.

    Whatever is returned is a *recovered* candidate, not given data; an empty
    list means the remaining base points are not rational.
    """
    have = set(_as_points(known))
    return [p for p in rational_base_points(pencil) if p not in have]


# ---------------------------------------------------------------------------
# the worked degree-3 example shipped with the package


@dataclass(frozen=True)
class WorkedExample:
    listed_points: tuple[ProjPoint, ...]  # as listed, including the repeated point
    pencil: Pencil
    reference_delta: UniPoly

    @property
    def distinct_points(self) -> list[ProjPoint]:
        return sorted(set(self.listed_points))


def _data(name: str) -> str:
    return resources.files("cgl").joinpath("data", name).read_text()


def load_points(text: str) -> list[ProjPoint]:
    """One point per line as ``x y z`` integers; ``#`` starts a comment."""
    pts = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            pts.append(ProjPoint(tuple(int(v) for v in line.split())))
    return pts


def load_cubics(text: str) -> Pencil:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if len(lines) != 2:
        raise ValueError("a cubics file holds exactly two cubics")
    return Pencil(TernaryCubic.parse(lines[0]), TernaryCubic.parse(lines[1]))


def worked_example() -> WorkedExample:
    return WorkedExample(
        listed_points=tuple(load_points(_data("example_points.txt"))),
        pencil=load_cubics(_data("example_cubics.txt")),
        reference_delta=parse_poly(_data("example_delta.txt")),
    )
