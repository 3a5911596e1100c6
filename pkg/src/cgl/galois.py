"""Frobenius cycle types via distinct-degree factorization, and S_n certificates.

By Dedekind's theorem, for a prime p not dividing lc(f) with f squarefree mod p,
the degrees of the irreducible factors of f mod p are the cycle lengths of a
Frobenius element of Gal(f). Three such patterns settle S_n:

* an n-cycle      -> f is irreducible over Q, so the group is transitive;
* an (n-1)-cycle  -> a point stabilizer is transitive, so the group is 2-transitive;
* a transposition -> a 2-transitive group with a transposition is S_n.

A pure transposition pattern [2, 1, ..., 1] has density 1/(2 (n-2)!) in S_n,
hopeless to meet by scanning primes for n = 12. Any Frobenius with exactly one
2-cycle and all other cycles odd has an odd power that is a transposition, so
that wider pattern class serves as the transposition witness.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, prod
from typing import Callable, Iterator, Sequence

from .errors import NotSquarefreeError
from .poly import (
    UniPoly,
    fp_divmod,
    fp_gcd,
    fp_derivative,
    fp_monic,
    fp_mulmod,
    fp_powmod,
    fp_trim,
    subresultant_gcd,
    z_primitive,
)
from .primes import primes_up_to, require_prime

SYMMETRIC = "SYMMETRIC"
INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class CycleType:
    partition: tuple[int, ...]  # decreasing
    prime: int

    def __post_init__(self):
        object.__setattr__(self, "partition", tuple(sorted(self.partition, reverse=True)))

    def to_dict(self) -> dict:
        return {"prime": self.prime, "partition": list(self.partition)}

    @classmethod
    def from_dict(cls, d: dict) -> "CycleType":
        return cls(tuple(d["partition"]), d["prime"])


def integer_coeffs(f) -> list[int]:
    """Primitive integer coefficient list of a UniPoly over Q or a list of ints."""
    if isinstance(f, UniPoly):
        return f.integer_coeffs()
    return z_primitive([int(c) for c in f])


def frobenius_degrees(f: Sequence[int], p: int) -> list[int]:
    """Irreducible-factor degrees of a squarefree ``f`` over F_p (distinct-degree).

    ``t**(p**k) mod f`` is obtained by applying the Frobenius matrix (rows
    ``t**(i*p) mod f``) to the previous power, so only one powmod is needed.
    """
    f = fp_monic(fp_trim([c % p for c in f]), p)
    n = len(f) - 1
    if n <= 1:
        return [1] * n
    xp = fp_powmod([0, 1], p, f, p)
    rows = [[1]]
    for _ in range(1, n):
        rows.append(fp_mulmod(rows[-1], xp, f, p))

    def frob(h: list[int]) -> list[int]:
        out = [0] * n
        for i, hi in enumerate(h):
            if hi:
                for j, r in enumerate(rows[i]):
                    out[j] += hi * r
        return fp_trim([c % p for c in out])

    degrees: list[int] = []
    rest = f
    h = [0, 1]
    k = 0
    while len(rest) - 1 >= 2 * (k + 1):
        k += 1
        h = frob(h)
        hx = list(h) + [0] * max(0, 2 - len(h))
        hx[1] = (hx[1] - 1) % p
        g = fp_gcd(rest, fp_trim(hx), p)
        dg = len(g) - 1
        if dg > 0:
            degrees.extend([k] * (dg // k))
            rest = fp_divmod(rest, g, p)[0]
    if len(rest) > 1:
        degrees.append(len(rest) - 1)
    return degrees


def distinct_degree_pattern(f, p: int) -> CycleType | None:
    """Cycle type of Frobenius at p, or None (SKIP) when p | lc(f) or f mod p is not squarefree."""
    require_prime(p)
    c = integer_coeffs(f)
    if len(c) < 2:
        raise ValueError("polynomial must be nonconstant")
    if c[-1] % p == 0:
        return None
    fp = [x % p for x in c]
    if len(fp_gcd(fp, fp_derivative(fp, p), p)) > 1:
        return None
    return CycleType(tuple(frobenius_degrees(fp, p)), p)


def yields_transposition(partition: Sequence[int]) -> bool:
    """Exactly one 2-cycle and every other cycle odd."""
    return list(partition).count(2) == 1 and all(x % 2 for x in partition if x != 2)


def required_patterns(n: int) -> dict[str, Callable[[tuple[int, ...]], bool]]:
    """Named tests on cycle types whose joint success proves Gal = S_n.

    n = 2 needs only irreducibility; n = 3 an n-cycle and a transposition;
    n >= 4 all three witnesses.
    """
    if n < 2:
        raise ValueError("degree must be at least 2")
    full = lambda part: part == (n,)  # noqa: E731
    if n == 2:
        return {"full_cycle": full}
    need = {"full_cycle": full}
    if n >= 4:
        need["n_minus_1_cycle"] = lambda part: part == (n - 1, 1)
    need["transposition"] = yields_transposition
    return need


def sn_class_density(partition: Sequence[int]) -> Fraction:
    """Proportion of S_n with the given cycle type: 1 / prod(i**m_i * m_i!)."""
    mult = Counter(partition)
    return Fraction(1, prod(i**m * factorial(m) for i, m in mult.items()))


def partitions(n: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


@dataclass
class CycleTypeCensus:
    degree: int
    prime_bound: int
    counts: dict[tuple[int, ...], int] = field(default_factory=dict)
    primes_used: int = 0
    skipped: int = 0

    @property
    def primes_scanned(self) -> int:
        return self.primes_used + self.skipped

    def add(self, ct: CycleType | None) -> None:
        if ct is None:
            self.skipped += 1
        else:
            self.primes_used += 1
            self.counts[ct.partition] = self.counts.get(ct.partition, 0) + 1

    def merge(self, other: "CycleTypeCensus") -> None:
        self.primes_used += other.primes_used
        self.skipped += other.skipped
        for k, v in other.counts.items():
            self.counts[k] = self.counts.get(k, 0) + v

    def frequency(self, partition: Sequence[int]) -> float:
        if not self.primes_used:
            return 0.0
        return self.counts.get(tuple(partition), 0) / self.primes_used

    @property
    def shows_symmetric(self) -> bool:
        if self.degree < 2:
            return self.degree == 1
        return all(
            any(test(part) for part in self.counts) for test in required_patterns(self.degree).values()
        )

    def rows(self) -> list[dict]:
        sym = self.shows_symmetric
        out = []
        for part in sorted(self.counts, key=lambda q: (-self.counts[q], q)):
            row = {
                "partition": list(part),
                "count": self.counts[part],
                "frequency": self.frequency(part),
            }
            if sym:
                row["sn_density"] = str(sn_class_density(part))
            out.append(row)
        return out

    def to_dict(self) -> dict:
        return {
            "schema_version": 1,
            "degree": self.degree,
            "prime_bound": self.prime_bound,
            "primes_used": self.primes_used,
            "skipped": self.skipped,
            "symmetric_evidence": self.shows_symmetric,
            "rows": self.rows(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CycleTypeCensus":
        return cls(
            degree=d["degree"],
            prime_bound=d["prime_bound"],
            counts={tuple(r["partition"]): r["count"] for r in d["rows"]},
            primes_used=d["primes_used"],
            skipped=d["skipped"],
        )


@dataclass
class GaloisCertificate:
    degree: int
    conclusion: str
    witnesses: dict[str, CycleType]
    census: CycleTypeCensus

    @property
    def witness_full_cycle(self) -> CycleType | None:
        return self.witnesses.get("full_cycle")

    @property
    def witness_n_minus_1_cycle(self) -> CycleType | None:
        return self.witnesses.get("n_minus_1_cycle")

    @property
    def witness_transposition(self) -> CycleType | None:
        return self.witnesses.get("transposition")

    def to_dict(self) -> dict:
        return {
            "schema_version": 1,
            "degree": self.degree,
            "conclusion": self.conclusion,
            "witnesses": {k: v.to_dict() for k, v in self.witnesses.items()},
            "census": self.census.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GaloisCertificate":
        return cls(
            degree=d["degree"],
            conclusion=d["conclusion"],
            witnesses={k: CycleType.from_dict(v) for k, v in d["witnesses"].items()},
            census=CycleTypeCensus.from_dict(d["census"]),
        )


def _require_squarefree(c: list[int]) -> None:
    deriv = [i * c[i] for i in range(1, len(c))]
    if len(subresultant_gcd(c, deriv)) > 1:
        raise NotSquarefreeError("polynomial is not squarefree over Q")


def certify_symmetric(f, prime_bound: int) -> GaloisCertificate:
    """Scan primes in increasing order until the three S_n witnesses appear.

    The witnesses are the smallest primes showing each required pattern.
    """
    c = integer_coeffs(f)
    n = len(c) - 1
    if n < 2:
        raise ValueError("degree must be at least 2")
    _require_squarefree(c)
    need = required_patterns(n)
    census = CycleTypeCensus(degree=n, prime_bound=prime_bound)
    witnesses: dict[str, CycleType] = {}
    for p in primes_up_to(prime_bound):
        ct = distinct_degree_pattern(c, p)
        census.add(ct)
        if ct is None:
            continue
        for name, test in need.items():
            if name not in witnesses and test(ct.partition):
                witnesses[name] = ct
        if len(witnesses) == len(need):
            return GaloisCertificate(n, SYMMETRIC, witnesses, census)
    return GaloisCertificate(n, INCONCLUSIVE, witnesses, census)


def _census_chunk(args) -> CycleTypeCensus:
    c, primes, bound = args
    census = CycleTypeCensus(degree=len(c) - 1, prime_bound=bound)
    for p in primes:
        census.add(distinct_degree_pattern(c, p))
    return census


def chebotarev_census(f, prime_bound: int, workers: int = 1) -> CycleTypeCensus:
    """Frequencies of Frobenius cycle types over all primes up to ``prime_bound``.

    With ``workers > 1`` the prime range is split into stripes; counts are
    order-independent sums so the result does not depend on ``workers``.
    """
    c = integer_coeffs(f)
    if len(c) < 2:
        raise ValueError("polynomial must be nonconstant")
    if len(c) > 2:
        _require_squarefree(c)
    primes = primes_up_to(prime_bound)
    if workers <= 1:
        return _census_chunk((c, primes, prime_bound))
    stripes = [(c, primes[i::workers], prime_bound) for i in range(workers)]
    total = CycleTypeCensus(degree=len(c) - 1, prime_bound=prime_bound)
    with ProcessPoolExecutor(max_workers=workers) as ex:
        for part in ex.map(_census_chunk, stripes):
            total.merge(part)
    return total
