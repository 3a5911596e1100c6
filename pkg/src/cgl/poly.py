"""Dense univariate polynomials over Q and over F_p, plus the text format.

Coefficient lists are stored low degree first: ``coeffs[i]`` multiplies ``t**i``.
The zero polynomial is the empty tuple.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

from .primes import require_prime


# ---------------------------------------------------------------------------
# raw list helpers over F_p (ints in [0, p))


def fp_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def fp_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return fp_trim([c % p for c in out])


def fp_divmod(a: Sequence[int], b: Sequence[int], p: int) -> tuple[list[int], list[int]]:
    b = z_trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = z_trim(list(a))
    db = len(b) - 1
    inv = pow(b[-1], -1, p)
    if len(r) <= db:
        return [], fp_trim(r)
    q = [0] * (len(r) - db)
    for k in range(len(r) - 1, db - 1, -1):
        c = r[k] * inv % p
        if c:
            q[k - db] = c
            off = k - db
            for j in range(db + 1):
                r[off + j] = (r[off + j] - c * b[j]) % p
    return fp_trim(q), fp_trim(r[:db])


def fp_rem(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    db = len(b) - 1
    if len(a) <= db:
        return fp_trim(list(a))
    r = list(a)
    inv = pow(b[-1], -1, p)
    for k in range(len(r) - 1, db - 1, -1):
        c = r[k] * inv % p
        if c:
            off = k - db
            for j in range(db + 1):
                r[off + j] = (r[off + j] - c * b[j]) % p
    return fp_trim(r[:db])


def fp_monic(a: Sequence[int], p: int) -> list[int]:
    if not a:
        return []
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def fp_gcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    """Monic gcd by plain Euclid (coefficients never grow mod p)."""
    a, b = fp_trim(list(a)), fp_trim(list(b))
    while b:
        a, b = b, fp_rem(a, b, p)
    return fp_monic(a, p)


def fp_mulmod(a: Sequence[int], b: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    return fp_rem(fp_mul(a, b, p), m, p)


def fp_powmod(base: Sequence[int], e: int, m: Sequence[int], p: int) -> list[int]:
    result = fp_rem([1], m, p)
    b = fp_rem(list(base), m, p)
    while e:
        if e & 1:
            result = fp_mulmod(result, b, m, p)
        e >>= 1
        if e:
            b = fp_mulmod(b, b, m, p)
    return result


def fp_derivative(a: Sequence[int], p: int) -> list[int]:
    return fp_trim([i * a[i] % p for i in range(1, len(a))])


# ---------------------------------------------------------------------------
# raw list helpers over Z (used by the subresultant scheme and by Bareiss in Z[t])


def z_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def z_add(a: Sequence[int], b: Sequence[int]) -> list[int]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return z_trim(out)


def z_sub(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = list(a) + [0] * max(0, len(b) - len(a))
    for i, c in enumerate(b):
        out[i] -= c
    return z_trim(out)


def z_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return z_trim(out)


def z_scale(a: Sequence[int], c: int) -> list[int]:
    return z_trim([c * x for x in a])


def z_exact_div(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Quotient ``a / b`` in Z[t]; raises ArithmeticError if not exact."""
    b = z_trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = z_trim(list(a))
    db = len(b) - 1
    if not r:
        return []
    if len(r) <= db:
        raise ArithmeticError("inexact polynomial division")
    q = [0] * (len(r) - db)
    lb = b[-1]
    for k in range(len(r) - 1, db - 1, -1):
        if r[k]:
            c, rem = divmod(r[k], lb)
            if rem:
                raise ArithmeticError("inexact polynomial division")
            q[k - db] = c
            off = k - db
            for j in range(db + 1):
                r[off + j] -= c * b[j]
    if any(r[:db]):
        raise ArithmeticError("inexact polynomial division")
    return z_trim(q)


def z_prem(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Pseudo-remainder: ``lc(b)**(deg a - deg b + 1) * a mod b``."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    delta = len(r) - 1 - db
    if delta < 0:
        return z_trim(r)
    for _ in range(delta + 1):
        if len(r) - 1 < db:
            r = [lb * c for c in r]
            continue
        c = r[-1]
        r = [lb * x for x in r]
        off = len(r) - 1 - db
        for j in range(db + 1):
            r[off + j] -= c * b[j]
        r.pop()
        z_trim(r)
    return z_trim(r)


def z_content(a: Iterable[int]) -> int:
    g = 0
    for c in a:
        g = gcd(g, c)
    return g


def z_primitive(a: Sequence[int]) -> list[int]:
    """Divide by content and make the leading coefficient positive."""
    a = z_trim(list(a))
    if not a:
        return []
    g = z_content(a)
    if a[-1] < 0:
        g = -g
    return [c // g for c in a]


def subresultant_gcd(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Primitive gcd of two integer polynomials via the subresultant PRS."""
    a, b = z_trim(list(a)), z_trim(list(b))
    if not a:
        return z_primitive(b)
    if not b:
        return z_primitive(a)
    if len(a) < len(b):
        a, b = b, a
    a, b = z_primitive(a), z_primitive(b)
    g = h = 1
    while True:
        delta = len(a) - len(b)
        r = z_prem(a, b)
        if not r:
            return z_primitive(b)
        if len(r) == 1:
            return [1]
        a, b = b, [c // (g * h**delta) for c in r]
        g = a[-1]
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = g**delta // h ** (delta - 1)


# ---------------------------------------------------------------------------
# the polynomial type


@dataclass(frozen=True)
class UniPoly:
    """Univariate polynomial over Q (``p is None``) or over F_p."""

    coeffs: tuple = ()
    p: int | None = None

    def __post_init__(self):
        if self.p is None:
            cs = [Fraction(c) for c in self.coeffs]
        else:
            cs = [int(c) % self.p for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def monomial(cls, degree: int, coeff=1, p: int | None = None) -> "UniPoly":
        return cls((0,) * degree + (coeff,), p)

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def _check(self, other: "UniPoly") -> None:
        if self.p != other.p:
            raise ValueError("polynomials over different coefficient domains")

    def _lift(self, other) -> "UniPoly":
        if isinstance(other, UniPoly):
            self._check(other)
            return other
        return UniPoly((other,), self.p)

    def __add__(self, other):
        other = self._lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return UniPoly(tuple(x + y for x, y in zip(a, b)), self.p)

    __radd__ = __add__

    def __neg__(self):
        return UniPoly(tuple(-c for c in self.coeffs), self.p)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        if self.p is not None:
            return UniPoly(tuple(fp_mul(self.coeffs, other.coeffs, self.p)), self.p)
        if not self.coeffs or not other.coeffs:
            return UniPoly((), None)
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UniPoly(tuple(out))

    __rmul__ = __mul__

    def __divmod__(self, other):
        other = self._lift(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if self.p is not None:
            q, r = fp_divmod(self.coeffs, other.coeffs, self.p)
            return UniPoly(tuple(q), self.p), UniPoly(tuple(r), self.p)
        r = list(self.coeffs)
        db = other.degree
        if len(r) <= db:
            return UniPoly(()), self
        q = [Fraction(0)] * (len(r) - db)
        lb = other.coeffs[-1]
        for k in range(len(r) - 1, db - 1, -1):
            c = r[k] / lb
            if c:
                q[k - db] = c
                for j in range(db + 1):
                    r[k - db + j] -= c * other.coeffs[j]
        return UniPoly(tuple(q)), UniPoly(tuple(r[:db]))

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __pow__(self, e: int):
        out = UniPoly((1,), self.p)
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        if self.p is not None:
            acc %= self.p
        return acc

    def derivative(self) -> "UniPoly":
        return UniPoly(tuple(i * self.coeffs[i] for i in range(1, len(self.coeffs))), self.p)

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        if self.p is not None:
            return UniPoly(tuple(fp_monic(self.coeffs, self.p)), self.p)
        lc = self.coeffs[-1]
        return UniPoly(tuple(c / lc for c in self.coeffs))

    def reduce(self, p: int) -> "UniPoly":
        """Reduction mod p of a polynomial with p-integral rational coefficients."""
        if self.p is not None:
            raise ValueError("already a prime-field polynomial")
        cs = []
        for c in self.coeffs:
            if c.denominator % p == 0:
                raise ValueError(f"coefficient {c} is not {p}-integral")
            cs.append(c.numerator * pow(c.denominator, -1, p))
        return UniPoly(tuple(cs), p)

    def integer_coeffs(self) -> list[int]:
        """Primitive integer coefficients (content 1, positive leading term)."""
        if self.p is not None:
            raise ValueError("only defined over Q")
        if not self.coeffs:
            return []
        den = lcm(*(c.denominator for c in self.coeffs))
        return z_primitive([int(c * den) for c in self.coeffs])

    def primitive(self) -> "UniPoly":
        return UniPoly(tuple(self.integer_coeffs()))

    def __str__(self) -> str:
        return format_poly(self)


# ---------------------------------------------------------------------------
# operations named by the build contract


def poly_gcd(f: UniPoly, g: UniPoly) -> UniPoly:
    """Monic gcd; gcd(0, 0) = 0.

    Over Q the integer primitive parts go through the subresultant PRS, so
    intermediate coefficients stay bounded by subdeterminants of the Sylvester
    matrix. Over F_p plain Euclid is used.
    """
    f._check(g)
    if f.p is not None:
        return UniPoly(tuple(fp_gcd(f.coeffs, g.coeffs, f.p)), f.p)
    if f.is_zero() and g.is_zero():
        return UniPoly(())
    h = subresultant_gcd(f.integer_coeffs(), g.integer_coeffs())
    return UniPoly(tuple(h)).monic()


def poly_powmod(base: UniPoly, exponent: int, modulus: UniPoly, p: int) -> UniPoly:
    """``base**exponent mod (modulus, p)`` by square-and-multiply."""
    require_prime(p)
    if exponent < 0:
        raise ValueError("exponent must be nonnegative")
    b = base.reduce(p) if base.p is None else base
    m = modulus.reduce(p) if modulus.p is None else modulus
    if b.p != p or m.p != p:
        raise ValueError("prime mismatch")
    if m.degree < 1:
        raise ValueError("modulus must be nonconstant mod p")
    return UniPoly(tuple(fp_powmod(b.coeffs, exponent, m.coeffs, p)), p)


# ---------------------------------------------------------------------------
# text format: sums of terms ``c*x^i*y^j``; juxtaposition (``5/74y^3``) is accepted

_NUMBER = re.compile(r"\d+(?:/\d+)?")


def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def parse_terms(text: str, variables: Sequence[str]) -> dict[tuple[int, ...], Fraction]:
    """Parse a polynomial in ``variables`` into ``{exponents: coefficient}``."""
    s = "".join(text.split())
    if not s:
        raise ValueError("empty polynomial text")
    var_re = re.compile(
        "(" + "|".join(re.escape(v) for v in sorted(variables, key=len, reverse=True)) + r")(?:\^(\d+))?"
    )
    index = {v: i for i, v in enumerate(variables)}
    terms: dict[tuple[int, ...], Fraction] = {}
    pos = 0
    while pos < len(s):
        sign = 1
        while pos < len(s) and s[pos] in "+-":
            if s[pos] == "-":
                sign = -sign
            pos += 1
        coeff = Fraction(sign)
        exps = [0] * len(variables)
        seen = False
        while pos < len(s) and s[pos] not in "+-":
            if s[pos] == "*":
                pos += 1
                continue
            m = _NUMBER.match(s, pos)
            if m:
                coeff *= Fraction(m.group())
                pos = m.end()
                seen = True
                continue
            m = var_re.match(s, pos)
            if m:
                exps[index[m.group(1)]] += int(m.group(2) or 1)
                pos = m.end()
                seen = True
                continue
            raise ValueError(f"cannot parse polynomial near {s[pos:pos + 12]!r}")
        if not seen:
            raise ValueError(f"dangling sign in {text!r}")
        key = tuple(exps)
        terms[key] = terms.get(key, Fraction(0)) + coeff
    return {k: v for k, v in terms.items() if v}


def format_terms(terms: Mapping[tuple[int, ...], Fraction], variables: Sequence[str]) -> str:
    """Inverse of :func:`parse_terms`, with terms in decreasing lexicographic order."""
    parts = []
    for exps in sorted(terms, reverse=True):
        c = Fraction(terms[exps])
        if not c:
            continue
        mono = "*".join(f"{v}^{e}" for v, e in zip(variables, exps) if e)
        body = _format_coeff(abs(c)) + ("*" + mono if mono else "")
        parts.append(("-" if c < 0 else "+", body))
    if not parts:
        return "0"
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def parse_poly(text: str, var: str = "t", p: int | None = None) -> UniPoly:
    """Parse ``-5/74*t^3 + 1*t^0`` style text (``0`` is the zero polynomial)."""
    if text.strip() == "0":
        return UniPoly((), p)
    terms = parse_terms(text, [var])
    deg = max((e[0] for e in terms), default=-1)
    cs = [Fraction(0)] * (deg + 1)
    for (e,), c in terms.items():
        cs[e] += c
    if p is not None:
        return UniPoly(tuple(cs)).reduce(p)
    return UniPoly(tuple(cs))


def format_poly(f: UniPoly, var: str = "t") -> str:
    """Print every term as ``c*t^i`` (constant term included as ``c*t^0``)."""
    if f.is_zero():
        return "0"
    parts = []
    for i in range(f.degree, -1, -1):
        c = Fraction(f.coeffs[i])
        if not c:
            continue
        parts.append(("-" if c < 0 else "+", f"{_format_coeff(abs(c))}*{var}^{i}"))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out
