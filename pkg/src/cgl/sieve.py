"""Per-prime sieve densities, the squarefree sieve sum G(Q), and local point-count checks.

Counting is over the affine cone: residue vectors ``x`` mod ``p**m`` with
``x`` not divisible by ``p`` and ``F(x) = 0`` mod ``p**m``. The zero form
stands for the whole ambient space. Enumeration is vectorized with numpy in
stripes of fixed leading coordinate, so memory stays at ``q**(vars - 1)``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Iterator, Mapping, Sequence

import numpy as np

from .config import budget
from .errors import DegenerateModelError, SingularReductionError, TooLargeError
from .linalg import mod_kernel_basis
from .pencil import CUBIC_MONOMIALS, mod_discriminant
from .poly import format_terms, parse_terms
from .primes import primes_up_to, require_prime, smallest_prime_factors

TYPE_I = "TYPE_I"
TYPE_II = "TYPE_II"
PREDICATES = ("ratio-is-square", "delta-has-root")

# evaluating a form mod q in int64 needs q**2 well below 2**63
_MAX_MODULUS = 2**30


def _variables(n: int) -> list[str]:
    return [f"x{i}" for i in range(n)]


@dataclass(frozen=True)
class Form:
    """Integer polynomial in ``x0 .. x{nvars-1}``; ``terms`` maps exponent tuples to ints."""

    terms: tuple[tuple[tuple[int, ...], int], ...]
    nvars: int

    @classmethod
    def from_dict(cls, terms: Mapping[tuple[int, ...], int], nvars: int) -> "Form":
        clean = tuple(sorted((tuple(e), int(c)) for e, c in terms.items() if c))
        if any(len(e) != nvars for e, _ in clean):
            raise ValueError("exponent length differs from the number of variables")
        return cls(clean, nvars)

    @classmethod
    def parse(cls, text: str, nvars: int | None = None) -> "Form":
        """Parse ``x0^3 + x1^3 + x2^3``; denominators are cleared (the zero set is unchanged)."""
        found = [int(i) for i in re.findall(r"x(\d+)", text)]
        n = nvars if nvars is not None else (max(found) + 1 if found else 1)
        if found and max(found) >= n:
            raise ValueError(f"variable x{max(found)} outside x0..x{n - 1}")
        if text.strip() == "0":
            return cls((), n)
        raw = parse_terms(text, _variables(n))
        den = math.lcm(1, *(c.denominator for c in raw.values()))
        return cls.from_dict({e: int(c * den) for e, c in raw.items()}, n)

    @classmethod
    def zero(cls, nvars: int) -> "Form":
        return cls((), nvars)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((sum(e) for e, _ in self.terms), default=-1)

    def partial(self, i: int) -> "Form":
        out: dict[tuple[int, ...], int] = {}
        for e, c in self.terms:
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = out.get(tuple(f), 0) + c * e[i]
        return Form.from_dict(out, self.nvars)

    def __call__(self, *x: int) -> int:
        return sum(c * math.prod(v**k for v, k in zip(x, e)) for e, c in self.terms)

    def eval_mod(self, X: np.ndarray, q: int) -> np.ndarray:
        """Values mod q at the rows of the integer array ``X`` (entries in ``[0, q)``)."""
        if q > _MAX_MODULUS:
            raise TooLargeError(f"modulus {q} too large for vectorized evaluation")
        acc = np.zeros(len(X), dtype=np.int64)
        for e, c in self.terms:
            term = np.full(len(X), c % q, dtype=np.int64)
            for i, k in enumerate(e):
                for _ in range(k):
                    term = term * X[:, i] % q
            acc = (acc + term) % q
        return acc

    def __str__(self) -> str:
        return format_terms({e: Fraction(c) for e, c in self.terms}, _variables(self.nvars))


def _as_form(F, nvars: int | None = None) -> Form:
    if isinstance(F, Form):
        return F
    return Form.parse(str(F), nvars)


# ---------------------------------------------------------------------------
# thin-set models


@dataclass(frozen=True)
class ThinSetModel:
    """TYPE_I: the zero set of ``form`` (on the first factor).

    TYPE_II: a named predicate on residue classes. ``ratio-is-square``
    asks that ``x0 * x1`` be a square on the first factor; ``delta-has-root``
    asks that the pencil through an 8-tuple of plane points have a singular
    member over F_p.
    """

    kind: str
    form: Form | None = None
    predicate: str | None = None

    def __post_init__(self):
        if self.kind == TYPE_I:
            if self.form is None or self.form.is_zero():
                raise ValueError("a type I model needs a nonzero form")
        elif self.kind == TYPE_II:
            if self.predicate not in PREDICATES:
                raise ValueError(f"unknown predicate {self.predicate!r}; known: {', '.join(PREDICATES)}")
        else:
            raise ValueError(f"unknown model kind {self.kind!r}")

    @classmethod
    def parse(cls, text: str) -> "ThinSetModel":
        """``type1 form=<poly>`` or ``type2 predicate=<name>``."""
        head, _, rest = text.strip().partition(" ")
        key, _, value = rest.strip().partition("=")
        if head == "type1" and key == "form":
            return cls(TYPE_I, form=Form.parse(value))
        if head == "type2" and key == "predicate":
            return cls(TYPE_II, predicate=value.strip())
        raise ValueError(f"cannot parse thin-set model {text!r}")

    def __str__(self) -> str:
        if self.kind == TYPE_I:
            return f"type1 form={self.form}"
        return f"type2 predicate={self.predicate}"

    @property
    def factors(self) -> int | None:
        """Number of factors the predicate reads, when it is fixed."""
        return 8 if self.predicate == "delta-has-root" else None


@dataclass(frozen=True)
class SieveDensity:
    p: int
    omega_p: Fraction
    numerator_count: int
    denominator_count: int

    def __post_init__(self):
        if self.omega_p != 1 - Fraction(self.numerator_count, self.denominator_count):
            raise ValueError("omega_p does not match the counts")
        if not 0 <= self.omega_p < 1:
            raise ValueError("omega_p must lie in [0, 1)")

    @property
    def ratio(self) -> Fraction:
        """``omega_p / (1 - omega_p)``."""
        return self.omega_p / (1 - self.omega_p)

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "omega_p": str(self.omega_p),
            "numerator_count": self.numerator_count,
            "denominator_count": self.denominator_count,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SieveDensity":
        return cls(d["p"], Fraction(d["omega_p"]), d["numerator_count"], d["denominator_count"])


# ---------------------------------------------------------------------------
# enumeration


def _grid_rows(nvars: int, q: int) -> np.ndarray:
    """All of ``(Z/q)**nvars`` as rows, last coordinate varying fastest."""
    return np.indices((q,) * nvars, dtype=np.int64).reshape(nvars, -1).T


def _check_budget(evaluations: int, what: str) -> None:
    cap = budget()
    if evaluations > cap:
        raise TooLargeError(f"{what} needs {evaluations} evaluations, budget is {cap}")


def _stripe_values(F: Form, lead: int, q: int, powers: dict) -> np.ndarray:
    """``F(lead, y)`` mod q over the grid ``y in (Z/q)**(nvars-1)``, by broadcasting."""
    rest = F.nvars - 1
    acc = np.zeros((q,) * rest, dtype=np.int64)
    for e, c in F.terms:
        term = np.int64(c * pow(lead, e[0], q) % q)
        for axis, k in enumerate(e[1:]):
            if k:
                shape = [1] * rest
                shape[axis] = q
                term = term * powers[k].reshape(shape) % q
        acc = (acc + term) % q
    return acc


def cone_points(F: Form, p: int, m: int = 1) -> Iterator[np.ndarray]:
    """Cone points mod ``p**m`` (not all coordinates divisible by p, ``F = 0``),
    in stripes of fixed leading coordinate."""
    q = p**m
    if q > _MAX_MODULUS:
        raise TooLargeError(f"modulus {q} too large for vectorized evaluation")
    n = F.nvars
    if n == 1:
        X = np.arange(q, dtype=np.int64).reshape(-1, 1)
        keep = X[:, 0] % p != 0
        if not F.is_zero():
            keep &= F.eval_mod(X, q) == 0
        yield X[keep]
        return
    base = np.arange(q, dtype=np.int64)
    powers = {k: _power_table(base, k, q) for k in {e for t, _ in F.terms for e in t}}
    grid = _grid_rows(n - 1, q)
    unit_rest = (grid % p != 0).any(axis=1)
    for lead in range(q):
        keep = np.ones(len(grid), dtype=bool) if lead % p else unit_rest.copy()
        if not F.is_zero():
            keep &= _stripe_values(F, lead, q, powers).reshape(-1) == 0
        rows = grid[keep]
        yield np.hstack([np.full((len(rows), 1), lead, dtype=np.int64), rows])


def _power_table(base: np.ndarray, k: int, q: int) -> np.ndarray:
    out = np.ones_like(base)
    for _ in range(k):
        out = out * base % q
    return out


def count_cone(F: Form, p: int, m: int = 1) -> int:
    require_prime(p)
    _check_budget((p**m) ** F.nvars, "cone enumeration")
    return sum(len(b) for b in cone_points(F, p, m))


def _squares_mod(q: int) -> np.ndarray:
    table = np.zeros(q, dtype=bool)
    table[(np.arange(q, dtype=np.int64) ** 2) % q] = True
    return table


def _first_factor_counts(model: ThinSetModel, F: Form, p: int, m: int) -> tuple[int, int]:
    """(#points in the model's classes, #cone points) on a single factor."""
    q = p**m
    _check_budget(q**F.nvars, "residue enumeration")
    if model.kind == TYPE_I:
        if model.form.nvars > F.nvars:
            raise ValueError("the model's form uses more variables than the hypersurface")
        aux = model.form
        test: Callable[[np.ndarray], np.ndarray] = lambda X: aux.eval_mod(X[:, : aux.nvars], q) == 0  # noqa: E731
    else:
        if F.nvars < 2:
            raise ValueError("ratio-is-square needs at least two coordinates")
        squares = _squares_mod(q)
        test = lambda X: squares[X[:, 0] * X[:, 1] % q]  # noqa: E731
    hit = total = 0
    for block in cone_points(F, p, m):
        total += len(block)
        hit += int(test(block).sum())
    return hit, total


def _pencil_has_singular_member(points: Sequence[tuple[int, ...]], p: int) -> bool:
    rows = [[math.prod(c**k for c, k in zip(pt, mono)) % p for mono in CUBIC_MONOMIALS] for pt in points]
    basis = mod_kernel_basis(rows, len(CUBIC_MONOMIALS), p)
    if len(basis) != 2:
        return True  # the classes where the pencil degenerates are kept in the closure
    a, b = basis
    if mod_discriminant(list(b), p) == 0:
        return True
    return any(mod_discriminant([(x + t * y) % p for x, y in zip(a, b)], p) == 0 for t in range(p))


def _delta_root_counts(F: Form, p: int, m: int) -> tuple[int, int]:
    if m != 1 or F.nvars != 3 or not F.is_zero():
        raise ValueError("delta-has-root is defined on 8-tuples of points of P^2 mod p")
    if p < 5:
        raise ValueError("delta-has-root needs p >= 5")
    single = p**3 - 1
    _check_budget(single**8, "8-tuple enumeration")
    pts = [v for v in product(range(p), repeat=3) if any(v)]
    hit = sum(_pencil_has_singular_member(t, p) for t in product(pts, repeat=8))
    return hit, single**8


def omega_from_model(
    model: ThinSetModel, F, p: int, m: int = 1, n: int = 1
) -> SieveDensity:
    """Exact ``omega_p = 1 - #Omega / #cone**n`` for the model's residue classes.

    Predicates that read only the first factor give ``#Omega = hit * cone**(n-1)``,
    so ``omega_p`` does not depend on ``n`` for them.
    """
    require_prime(p)
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    F = _as_form(F)
    if model.predicate == "delta-has-root":
        num, den = _delta_root_counts(F, p, m)
    else:
        hit, total = _first_factor_counts(model, F, p, m)
        num, den = hit * total ** (n - 1), total**n
    if den == 0:
        raise DegenerateModelError(f"the cone of {F} has no points mod {p}**{m}")
    if num == 0:
        raise DegenerateModelError(f"model {model} selects no residue classes mod {p}**{m}")
    return SieveDensity(p, 1 - Fraction(num, den), num, den)


# ---------------------------------------------------------------------------
# the sieve sum


def _ratios(densities) -> dict[int, Fraction]:
    if isinstance(densities, Mapping):
        out = {}
        for p, w in densities.items():
            w = Fraction(w)
            if not 0 <= w < 1:
                raise ValueError("omega_p must lie in [0, 1)")
            out[int(p)] = w / (1 - w)
        return out
    return {d.p: d.ratio for d in densities}


def g_of_q(densities, Q: int) -> Fraction:
    """``G(Q) = sum over squarefree q <= Q of prod_{p | q} omega_p / (1 - omega_p)``.

    ``densities`` is a list of :class:`SieveDensity` or a mapping ``p -> omega_p``;
    primes without a density contribute 0.
    """
    if Q < 1:
        return Fraction(0)
    r = _ratios(densities)
    spf = smallest_prime_factors(Q)
    h: list[Fraction | int] = [0] * (Q + 1)
    h[1] = 1
    total = Fraction(1)
    for k in range(2, Q + 1):
        p = spf[k]
        rest = k // p
        if rest % p == 0 or not h[rest]:
            continue
        v = h[rest] * r.get(p, 0)
        if v:
            h[k] = v
            total += v
    return total


def _fit(xs: Sequence[float], ys: Sequence[float]) -> float | None:
    if len(xs) < 2:
        return None
    return float(np.polyfit(xs, ys, 1)[0])


def _joint_fit(lq: Sequence[float], llq: Sequence[float], ys: Sequence[float]) -> tuple[float, float] | None:
    if len(ys) < 3:
        return None
    A = np.column_stack([lq, llq, np.ones(len(ys))])
    coef, *_ = np.linalg.lstsq(A, np.asarray(ys), rcond=None)
    return float(coef[0]), float(coef[1])


@dataclass
class GrowthRow:
    Q: int
    G: Fraction
    local_exponent: float | None

    def to_dict(self) -> dict:
        return {"Q": self.Q, "G": str(self.G), "local_exponent": self.local_exponent}


@dataclass
class GrowthReport:
    model: str
    rows: list[GrowthRow] = field(default_factory=list)
    exponent: float | None = None
    joint_exponent: float | None = None
    joint_loglog: float | None = None
    densities: list[SieveDensity] = field(default_factory=list)
    schema_version: int = 1

    def plot_points(self) -> list[tuple[float, float]]:
        return [(math.log(r.Q), math.log(r.G)) for r in self.rows if r.G > 0]

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "model": self.model,
            "rows": [r.to_dict() for r in self.rows],
            "exponent": self.exponent,
            "joint_exponent": self.joint_exponent,
            "joint_loglog": self.joint_loglog,
            "densities": [d.to_dict() for d in self.densities],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GrowthReport":
        return cls(
            model=d["model"],
            rows=[GrowthRow(r["Q"], Fraction(r["G"]), r["local_exponent"]) for r in d["rows"]],
            exponent=d["exponent"],
            joint_exponent=d["joint_exponent"],
            joint_loglog=d["joint_loglog"],
            densities=[SieveDensity.from_dict(x) for x in d["densities"]],
            schema_version=d["schema_version"],
        )


def g_growth_report(model, F, Q_list: Sequence[int], m: int = 1) -> GrowthReport:
    """G(Q) along ``Q_list`` with least-squares exponents.

    ``model`` is a :class:`ThinSetModel` (densities computed for every prime up
    to ``max(Q_list)``) or a constant ``omega`` applied at every prime.
    ``exponent`` fits ``log G ~ a log Q``; the joint fit adds a ``log log Q`` term.
    """
    Q_list = list(Q_list)
    if any(b <= a for a, b in zip(Q_list, Q_list[1:])):
        raise ValueError("Q_list must be increasing")
    if isinstance(model, ThinSetModel):
        label = str(model)
        top = Q_list[-1] if Q_list else 1
        dens = [omega_from_model(model, F, p, m) for p in primes_up_to(top)]
        source = dens
    else:
        w = Fraction(model)
        label = f"constant omega={w}"
        dens = []
        source = {p: w for p in primes_up_to(Q_list[-1] if Q_list else 1)}
    report = GrowthReport(model=label, densities=dens)
    prev = None
    for Q in Q_list:
        G = g_of_q(source, Q)
        local = None
        if prev is not None and prev[1] > 0 and G > 0:
            local = (math.log(G) - math.log(prev[1])) / (math.log(Q) - math.log(prev[0]))
        report.rows.append(GrowthRow(Q, G, local))
        prev = (Q, G)
    pts = [(r.Q, r.G) for r in report.rows if r.G > 0 and r.Q > 1]
    lq = [math.log(q) for q, _ in pts]
    ys = [math.log(g) for _, g in pts]
    report.exponent = _fit(lq, ys)
    joint = _joint_fit(lq, [math.log(x) for x in lq], ys) if all(q > math.e for q, _ in pts) else None
    if joint:
        report.joint_exponent, report.joint_loglog = joint
    return report


# ---------------------------------------------------------------------------
# local identities


def _singular_point_mod_p(F: Form, p: int) -> tuple[int, ...] | None:
    """An F_p-point of the cone where F and all partials vanish, if any."""
    partials = [F.partial(i) for i in range(F.nvars)]
    for block in cone_points(F, p, 1):
        if not len(block):
            continue
        bad = np.ones(len(block), dtype=bool)
        for g in partials:
            bad &= g.eval_mod(block, p) == 0
        if bad.any():
            return tuple(int(v) for v in block[bad][0])
    return None


def require_smooth_reduction(F: Form, p: int) -> None:
    _check_budget(p**F.nvars, "smoothness search")
    pt = _singular_point_mod_p(F, p)
    if pt is not None:
        raise SingularReductionError(f"{F} is singular mod {p} at {pt}")


@dataclass
class HenselResult:
    holds: bool
    p: int
    ell: int
    count_lower: int
    count_upper: int
    expected_ratio: int

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.count_upper, self.count_lower) if self.count_lower else Fraction(0)

    def __bool__(self) -> bool:
        return self.holds

    def to_dict(self) -> dict:
        return {
            "schema_version": 1,
            "holds": self.holds,
            "p": self.p,
            "ell": self.ell,
            "count_lower": self.count_lower,
            "count_upper": self.count_upper,
            "ratio": str(self.ratio),
            "expected_ratio": self.expected_ratio,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "HenselResult":
        return cls(d["holds"], d["p"], d["ell"], d["count_lower"], d["count_upper"], d["expected_ratio"])


def hensel_check(F, p: int, ell: int) -> HenselResult:
    """Count cone points mod ``p**ell`` by lifting those mod ``p**(ell-1)``.

    For a smooth reduction each point lifts to exactly ``p**(vars - 1)`` points.
    """
    require_prime(p)
    if ell < 2:
        raise ValueError("ell must be at least 2 (the identity relates consecutive lifts)")
    F = _as_form(F)
    if F.is_zero():
        raise ValueError("the zero form defines no hypersurface")
    require_smooth_reduction(F, p)
    # cone points mod p**level, built level by level from those mod p
    base = np.concatenate(list(cone_points(F, p, 1)) or [np.zeros((0, F.nvars), dtype=np.int64)])
    digits = _grid_rows(F.nvars, p)
    counts = [len(base)]
    work = len(base)
    for level in range(2, ell + 1):
        work += len(base) * len(digits)
        _check_budget(work, "Hensel lifting")
        step = p ** (level - 1)
        mod = step * p
        rows = max(1, 2**20 // len(digits))
        lifted = []
        for start in range(0, len(base), rows):
            chunk = base[start : start + rows]
            cand = (chunk[:, None, :] + step * digits[None, :, :]).reshape(-1, F.nvars)
            lifted.append(cand[F.eval_mod(cand, mod) == 0])
        base = np.concatenate(lifted) if lifted else base[:0]
        counts.append(len(base))
    expected = p ** (F.nvars - 1)
    lower, upper = counts[-2], counts[-1]
    return HenselResult(upper == expected * lower, p, ell, lower, upper, expected)


def middle_betti(d: int, N: int) -> int:
    """Primitive middle Betti number of a smooth degree-d hypersurface in P^N."""
    return ((d - 1) ** (N + 1) + (-1) ** (N + 1) * (d - 1)) // d


@dataclass
class DeligneReport:
    p: int
    cone_count: int
    main_term: int
    gap: int
    normalized_gap: float
    betti_constant: int

    def to_dict(self) -> dict:
        return {"schema_version": 1, **self.__dict__}

    @classmethod
    def from_dict(cls, d: dict) -> "DeligneReport":
        return cls(**{k: v for k, v in d.items() if k != "schema_version"})


def deligne_gap(F, p: int) -> DeligneReport:
    """Cone count mod p against ``p**N - 1``, the count for a hyperplane in P^N.

    The gap is normalized by ``p**((N+1)/2)``; for a smooth hypersurface its
    absolute value stays below the middle Betti number.
    """
    require_prime(p)
    F = _as_form(F)
    if F.is_zero():
        raise ValueError("the zero form defines no hypersurface")
    require_smooth_reduction(F, p)
    N = F.nvars - 1
    count = count_cone(F, p)
    main = p**N - 1
    gap = count - main
    return DeligneReport(
        p=p,
        cone_count=count,
        main_term=main,
        gap=gap,
        normalized_gap=gap / p ** ((N + 1) / 2),
        betti_constant=middle_betti(F.degree, N),
    )


# ---------------------------------------------------------------------------
# hypersurface parameters


@dataclass
class ParamCheck:
    N: int
    d: int
    e: int
    n: int | None
    conditions: dict[str, bool]

    def __post_init__(self):
        if self.n is not None and (self.N + 1 - self.d) * self.e + (self.N - 4) + self.n != self.n * (self.N - 1):
            raise ValueError("n does not satisfy the dimension count")

    def to_dict(self) -> dict:
        return {"schema_version": 1, "N": self.N, "d": self.d, "e": self.e, "n": self.n, "conditions": self.conditions}

    @classmethod
    def from_dict(cls, d: dict) -> "ParamCheck":
        return cls(d["N"], d["d"], d["e"], d["n"], dict(d["conditions"]))


def parameter_check(N: int, d: int, e: int) -> ParamCheck:
    """Number of points ``n`` making curves of degree e in a degree-d hypersurface
    in P^N through n points a finite problem, plus the low-degree conditions."""
    if N < 3 or d < 1 or e < 1:
        raise ValueError("need N >= 3, d >= 1, e >= 1")
    num = (N + 1 - d) * e + N - 4
    n = num // (N - 2) if num >= 0 and num % (N - 2) == 0 else None
    conditions = {
        "thin_set_range": (d - 1) * 2**d < N,
        "browning_sawin": (2 * d - 1) * 2 ** (d - 1) < N,
        "riedl_yang": d + 2 < N,
        "birch": N > 2**d * (d - 1),
    }
    return ParamCheck(N, d, e, n, conditions)
