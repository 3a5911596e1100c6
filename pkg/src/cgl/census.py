"""Rational points of bounded height on P^2 and on tuples, and the transitivity experiment.

Heights are anticanonical: ``H(x) = ||x||_inf**3`` for a primitive integer
representative, and a tuple has the product height. Counts are of points of
P^2(Q), i.e. primitive vectors up to sign (half the primitive-vector count).
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .config import budget
from .errors import DegenerateError, DuplicatePointError, TooLargeError
from .galois import certify_symmetric
from .pencil import Pencil, cubics_through_points, pencil_discriminant
from .points import ProjPoint
from .poly import format_poly, subresultant_gcd
from .primes import mobius_table
from .rng import SplitMix64
from .roots import rational_roots

DEFAULT_SUPPORT_CAP = 2 * 10**6

# flag taxonomy, in the order the tests are applied
DEGREE_DROP = "DEGREE_DROP"
NOT_SQUAREFREE = "NOT_SQUAREFREE"
RATIONAL_ROOT = "RATIONAL_ROOT"
IRREDUCIBLE_CERTIFIED = "IRREDUCIBLE_CERTIFIED"
UNRESOLVED = "UNRESOLVED"
FLAGS = (DEGREE_DROP, RATIONAL_ROOT, NOT_SQUAREFREE, IRREDUCIBLE_CERTIFIED, UNRESOLVED)
NONTRANSITIVE_FLAGS = (DEGREE_DROP, RATIONAL_ROOT, NOT_SQUAREFREE)
DEGENERATE = "DEGENERATE"


def icbrt(n: int) -> int:
    """Largest ``r`` with ``r**3 <= n``."""
    if n < 0:
        raise ValueError("negative input")
    if n < 2:
        return n
    r = 1 << ((n.bit_length() + 2) // 3)  # an upper bound; Newton descends from it
    while True:
        s = (2 * r + n // (r * r)) // 3
        if s >= r:
            break
        r = s
    while r**3 > n:
        r -= 1
    while (r + 1) ** 3 <= n:
        r += 1
    return r


def count_p2_points(B: int) -> int:
    """Number of points of P^2(Q) with ``H <= B``.

    With ``R = icbrt(B)``, Moebius inversion over the common divisor gives
    ``sum_d mu(d) * ((2*(R//d) + 1)**3 - 1)`` primitive vectors; halve for sign.
    """
    if B < 1:
        raise ValueError("B must be at least 1")
    R = icbrt(B)
    mu = mobius_table(R)
    total = sum(mu[d] * ((2 * (R // d) + 1) ** 3 - 1) for d in range(1, R + 1) if mu[d])
    return total // 2


def points_by_norm(R: int) -> list[int]:
    """``c[r]`` = number of points of P^2(Q) whose primitive representative has norm ``r``."""
    # nonzero vectors of norm exactly s: (2s+1)^3 - (2s-1)^3; primitive ones by Moebius
    shell = [0] + [(2 * s + 1) ** 3 - (2 * s - 1) ** 3 for s in range(1, R + 1)]
    mu = mobius_table(R)
    c = [0] * (R + 1)
    for d in range(1, R + 1):
        if mu[d]:
            for m in range(1, R // d + 1):
                c[d * m] += mu[d] * shell[m]
    return [v // 2 for v in c]


def count_tuples(B: int, k: int, support_cap: int | None = None) -> int:
    """Number of k-tuples of points of P^2(Q) with product height ``<= B``.

    ``prod ||x_j||**3 <= B`` iff ``prod ||x_j|| <= icbrt(B)``, so the count is
    the summatory function of the k-fold Dirichlet convolution of the
    per-norm counts, truncated at ``icbrt(B)``.
    """
    if B < 1 or k < 1:
        raise ValueError("B and k must be at least 1")
    R = icbrt(B)
    cap = budget(DEFAULT_SUPPORT_CAP) if support_cap is None else support_cap
    if R > cap:
        raise TooLargeError(f"per-factor support {R} exceeds cap {cap}")
    c = points_by_norm(R)
    acc = list(c)
    for _ in range(k - 1):
        nxt = [0] * (R + 1)
        for d in range(1, R + 1):
            a = acc[d]
            if a:
                for m in range(1, R // d + 1):
                    nxt[d * m] += a * c[m]
        acc = nxt
    return sum(acc)


def census_table(bounds: Iterable[int], k: int = 1) -> list[tuple[int, int]]:
    """Rows ``(B, count)`` for each bound."""
    return [(B, count_p2_points(B) if k == 1 else count_tuples(B, k)) for B in bounds]


@dataclass(frozen=True)
class HeightedTuple:
    points: tuple[ProjPoint, ...]
    height: int

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        if self.height != tuple_height(self.points):
            raise ValueError("stored height differs from the product of cubed norms")

    @classmethod
    def of(cls, points: Sequence) -> "HeightedTuple":
        pts = tuple(_point(p) for p in points)
        return cls(pts, tuple_height(pts))

    def to_dict(self) -> dict:
        return {"points": [list(p.coords) for p in self.points], "height": str(self.height)}

    @classmethod
    def from_dict(cls, d: dict) -> "HeightedTuple":
        return cls(tuple(ProjPoint(tuple(p)) for p in d["points"]), int(d["height"]))


def _point(p) -> ProjPoint:
    return p if isinstance(p, ProjPoint) else ProjPoint(tuple(p))


def tuple_height(points: Iterable[ProjPoint]) -> int:
    h = 1
    for p in points:
        h *= p.height()
    return h


def sample_tuples(e: int, H_coord: int, K: int, seed: int) -> list[HeightedTuple]:
    """K tuples of ``3e - 1`` distinct points with coordinates in ``[-H_coord, H_coord]``.

    Coordinates are drawn from ``SplitMix64(seed)``; zero vectors and repeats
    within a tuple are redrawn. Tuples are independent, so the same tuple may
    occur twice when few are available.
    """
    if e != 3:
        raise ValueError("only cubics (e = 3) have a full pipeline")
    if H_coord < 2:
        raise ValueError("H_coord must be at least 2")
    if K < 0:
        raise ValueError("K must be nonnegative")
    rng = SplitMix64(seed)
    size = 3 * e - 1
    out = []
    for _ in range(K):
        pts: list[ProjPoint] = []
        while len(pts) < size:
            v = tuple(rng.integer(-H_coord, H_coord) for _ in range(3))
            if not any(v):
                continue
            p = ProjPoint(v)
            if p not in pts:
                pts.append(p)
        out.append(HeightedTuple.of(pts))
    return out


@dataclass
class TupleRecord:
    index: int
    flag: str
    degree: int | None = None
    delta: str | None = None
    root: Fraction | None = None
    witness_prime: int | None = None
    galois: str | None = None
    error: str | None = None

    def to_dict(self) -> dict:
        d = {"index": self.index, "flag": self.flag}
        for key in ("degree", "delta", "witness_prime", "galois", "error"):
            if getattr(self, key) is not None:
                d[key] = getattr(self, key)
        if self.root is not None:
            d["root"] = str(self.root)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "TupleRecord":
        kw = dict(d)
        if "root" in kw:
            kw["root"] = Fraction(kw["root"])
        return cls(**kw)


def classify_pencil(pencil: Pencil, prime_bound: int, index: int = 0) -> TupleRecord:
    """Flag one pencil by the first applicable test in ``FLAGS`` order."""
    delta = pencil_discriminant(pencil).delta
    rec = TupleRecord(index=index, flag=UNRESOLVED, degree=delta.degree, delta=format_poly(delta))
    if delta.degree < 12:  # includes Delta = 0, a fixed singular component
        rec.flag = DEGREE_DROP
        return rec
    roots = rational_roots(delta)
    if roots:
        rec.flag = RATIONAL_ROOT
        rec.root = roots[0]
        return rec
    c = delta.integer_coeffs()
    if len(subresultant_gcd(c, [i * c[i] for i in range(1, len(c))])) > 1:
        rec.flag = NOT_SQUAREFREE
        return rec
    cert = certify_symmetric(delta, prime_bound)
    rec.galois = cert.conclusion
    if cert.witness_full_cycle is not None:
        rec.flag = IRREDUCIBLE_CERTIFIED
        rec.witness_prime = cert.witness_full_cycle.prime
    return rec


def classify_tuple(points: Sequence, prime_bound: int, index: int = 0) -> TupleRecord:
    try:
        pencil = cubics_through_points(points)
    except (DegenerateError, DuplicatePointError) as exc:
        return TupleRecord(index=index, flag=DEGENERATE, error=exc.code)
    return classify_pencil(pencil, prime_bound, index)


def _classify_job(args) -> TupleRecord:
    index, points, prime_bound = args
    return classify_tuple(points, prime_bound, index)


@dataclass
class CensusReport:
    B: int
    M_B: int | None
    samples_tested: int
    nontransitive_flagged: int
    degenerate: int = 0
    flag_counts: dict[str, int] = field(default_factory=dict)
    records: list[TupleRecord] = field(default_factory=list)
    schema_version: int = 1

    def __post_init__(self):
        if min(self.samples_tested, self.nontransitive_flagged, self.degenerate) < 0:
            raise ValueError("counts must be nonnegative")
        if self.nontransitive_flagged > self.samples_tested:
            raise ValueError("more flagged tuples than tested ones")

    @property
    def ratio(self) -> Fraction:
        if not self.samples_tested:
            return Fraction(0)
        return Fraction(self.nontransitive_flagged, self.samples_tested)

    def fraction(self, flag: str) -> Fraction:
        if not self.samples_tested:
            return Fraction(0)
        return Fraction(self.flag_counts.get(flag, 0), self.samples_tested)

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "B": str(self.B),
            "M_B": None if self.M_B is None else str(self.M_B),
            "samples_tested": self.samples_tested,
            "nontransitive_flagged": self.nontransitive_flagged,
            "ratio": str(self.ratio),
            "degenerate": self.degenerate,
            "flag_counts": dict(self.flag_counts),
            "records": [r.to_dict() for r in self.records],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CensusReport":
        return cls(
            B=int(d["B"]),
            M_B=None if d["M_B"] is None else int(d["M_B"]),
            samples_tested=d["samples_tested"],
            nontransitive_flagged=d["nontransitive_flagged"],
            degenerate=d["degenerate"],
            flag_counts=dict(d["flag_counts"]),
            records=[TupleRecord.from_dict(r) for r in d["records"]],
            schema_version=d["schema_version"],
        )


def transitivity_experiment(
    tuples: Sequence, prime_bound: int, workers: int = 1
) -> CensusReport:
    """Classify every tuple; tuples without a pencil are counted as degenerate.

    ``B`` is the largest tuple height seen. ``M_B`` is left empty since the
    support ``icbrt(B)`` of a sampled 8-tuple is far beyond exact counting.
    """
    pts = [t.points if isinstance(t, HeightedTuple) else tuple(_point(q) for q in t) for t in tuples]
    jobs = [(i, p, prime_bound) for i, p in enumerate(pts)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            records = list(ex.map(_classify_job, jobs))
    else:
        records = [_classify_job(j) for j in jobs]
    records.sort(key=lambda r: r.index)
    counts = {f: 0 for f in FLAGS}
    degenerate = 0
    for r in records:
        if r.flag == DEGENERATE:
            degenerate += 1
        else:
            counts[r.flag] += 1
    return CensusReport(
        B=max((tuple_height(p) for p in pts), default=0),
        M_B=None,
        samples_tested=len(records) - degenerate,
        nontransitive_flagged=sum(counts[f] for f in NONTRANSITIVE_FLAGS),
        degenerate=degenerate,
        flag_counts=counts,
        records=records,
    )

