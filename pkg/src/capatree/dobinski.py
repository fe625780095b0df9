"""Limsup run sets: classification, capacity bounds, and the dimension bracket.

A sequence of run lengths kappa_n defines the limsup set of boundary points
that begin a run of kappa_n zeros right after position n.  Whether such a
set carries positive capacity is decided by one of four sufficient
conditions, depending on the branch of a*p:

    critical (ap = 1):   (i)  limsup 2**n / kappa_n**(p-1) > 0   -> positive
                         (ii) sum   2**n / kappa_n**(p-1) < inf  -> zero
    subcritical (ap<1):  (a)  limsup (ap*n - (1-ap)*kappa_n) > -inf -> positive
                         (b)  sum 2**(ap*n - (1-ap)*kappa_n) < inf  -> zero

The conditions leave a gap, so `Indeterminate` is a first-class verdict.
All symbolic families are normalized to kappa_n = ceil(C * n**beta * 2**(gamma*n))
and classified by exact rational comparison of growth exponents, never by
numeric truncation of tails.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping, Sequence, Union

from .capacity import BoundKind, CapacityReport, Method, cap_component
from .errors import DomainError
from .exponents import Exponents, LogValue, RationalLike, as_fraction

_LN2 = math.log(2.0)


# ----------------------------------------------------------------------
# Sequence families
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class Geometric:
    """kappa_n = ceil(2**n / m) for a positive integer m."""

    m: int

    def __post_init__(self) -> None:
        if not isinstance(self.m, int) or self.m < 1:
            raise DomainError(f"geometric family needs a positive integer m, got {self.m}")


@dataclass(frozen=True)
class Power:
    """kappa_n = ceil(C * n**beta)."""

    C: Fraction
    beta: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "C", as_fraction(self.C))
        object.__setattr__(self, "beta", as_fraction(self.beta))
        if self.C <= 0:
            raise DomainError(f"power family needs C > 0, got {self.C}")


@dataclass(frozen=True)
class Linear:
    """kappa_n = ceil(C * n)."""

    C: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "C", as_fraction(self.C))
        if self.C <= 0:
            raise DomainError(f"linear family needs C > 0, got {self.C}")


@dataclass(frozen=True)
class Growth:
    """General symbolic family kappa_n = ceil(C * n**beta * 2**(gamma*n)).

    Subsumes the named families (geometric: C=1/m, beta=0, gamma=1) and
    expresses mixed rules such as kappa_n = n * 2**n.
    """

    C: Fraction
    beta: Fraction
    gamma: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "C", as_fraction(self.C))
        object.__setattr__(self, "beta", as_fraction(self.beta))
        object.__setattr__(self, "gamma", as_fraction(self.gamma))
        if self.C <= 0:
            raise DomainError(f"growth family needs C > 0, got {self.C}")


@dataclass(frozen=True)
class Custom:
    """Finitely many tabulated values with a symbolic tail rule.

    Classification is a tail property, so the verdict comes from the tail
    rule alone; the table only affects pointwise kappa lookups.
    """

    table: tuple[tuple[int, int], ...]
    tail_rule: Union[Geometric, Power, Linear, Growth]

    def __post_init__(self) -> None:
        if self.tail_rule is None:
            raise DomainError("custom family requires an explicit tail rule")
        seen = set()
        for n, k in self.table:
            if n < 1 or k < 1:
                raise DomainError(f"table entries need n >= 1 and kappa >= 1, got ({n}, {k})")
            if n in seen:
                raise DomainError(f"duplicate table entry for n={n}")
            seen.add(n)
        object.__setattr__(self, "table", tuple((int(n), int(k)) for n, k in self.table))


SequenceSpec = Union[Geometric, Power, Linear, Growth, Custom]


def to_growth(spec: SequenceSpec) -> Growth:
    """Normalize any family to the general (C, beta, gamma) form."""
    if isinstance(spec, Geometric):
        return Growth(Fraction(1, spec.m), Fraction(0), Fraction(1))
    if isinstance(spec, Power):
        return Growth(spec.C, spec.beta, Fraction(0))
    if isinstance(spec, Linear):
        return Growth(spec.C, Fraction(1), Fraction(0))
    if isinstance(spec, Growth):
        return spec
    if isinstance(spec, Custom):
        return to_growth(spec.tail_rule)
    raise DomainError(f"unknown sequence family: {spec!r}")


def _iroot_floor(x: int, k: int) -> int:
    """floor(x ** (1/k)) for nonnegative integers, by integer Newton."""
    if x < 0 or k < 1:
        raise DomainError("iroot needs x >= 0 and k >= 1")
    if x == 0 or k == 1:
        return x
    r = 1 << -(-x.bit_length() // k)  # upper estimate
    while True:
        nr = ((k - 1) * r + x // r ** (k - 1)) // k
        if nr >= r:
            return r
        r = nr


def kappa_value(spec: SequenceSpec, n: int) -> int:
    """Exact kappa_n as an integer (arbitrary precision; never truncated)."""
    if n < 1:
        raise DomainError(f"sequences are indexed from n = 1, got n={n}")
    if isinstance(spec, Custom):
        for tn, tk in spec.table:
            if tn == n:
                return tk
        return kappa_value(spec.tail_rule, n)
    g = to_growth(spec)
    exp2 = g.gamma * n
    if g.beta.denominator == 1 and exp2.denominator == 1:
        x = g.C * Fraction(n) ** int(g.beta) * Fraction(2) ** int(exp2)
        return max(1, -((-x.numerator) // x.denominator))
    # irrational value: ceil via an exact integer root of x**L
    L = lcm(g.beta.denominator, exp2.denominator)
    xl = g.C ** L * Fraction(n) ** int(g.beta * L) * Fraction(2) ** int(exp2 * L)
    a, b = xl.numerator, xl.denominator
    k = _iroot_floor(a // b, L)
    m = k if k >= 1 and k ** L * b >= a else k + 1
    return max(1, m)


# ----------------------------------------------------------------------
# Verdicts
# ----------------------------------------------------------------------

class Outcome(enum.Enum):
    POSITIVE = "Positive"
    ZERO = "Zero"
    INDETERMINATE = "Indeterminate"


@dataclass(frozen=True)
class Verdict:
    outcome: Outcome
    condition: str | None
    evidence: dict

    def to_json(self) -> dict:
        # the wire format carries the numeric trace as the evidence array,
        # with the symbolic reasoning alongside
        analysis = {k: v for k, v in self.evidence.items() if k != "trace"}
        return {
            "outcome": self.outcome.value,
            "condition": self.condition,
            "evidence": self.evidence.get("trace", []),
            "analysis": analysis,
        }


def _trace(spec: SequenceSpec, e: Exponents, count: int = 16) -> list[dict]:
    """Finite-window values of the decisive statistic, for the evidence field."""
    rows = []
    for n in range(1, count + 1):
        kappa = kappa_value(spec, n)
        log2_kappa = math.log2(kappa)
        if e.is_critical:
            stat = n - float(e.p - 1) * log2_kappa  # log2 of 2**n " kappa**-(p-1)
            rows.append({"n": n, "log2_stat": stat})
        else:
            stat = float(e.ap) * n - float(1 - e.ap) * kappa
            rows.append({"n": n, "exponent": stat})
    return rows


def classify(spec: SequenceSpec, e: Exponents) -> Verdict:
    """Decide positive / zero / indeterminate capacity for the limsup set.

    The decision compares exact rational growth exponents of the family, so
    it reflects the true tail behaviour rather than any finite horizon.
    """
    g = to_growth(spec)
    evidence: dict = {
        "family": spec_to_json(spec),
        "normalized": {"C": str(g.C), "beta": str(g.beta), "gamma": str(g.gamma)},
        "branch": "critical" if e.is_critical else "subcritical",
        "trace": _trace(spec, e),
    }
    if isinstance(spec, Custom):
        evidence["note"] = "table entries are a finite prefix and cannot affect the verdict"

    if e.is_critical:
        p = e.p
        slope = 1 - (p - 1) * g.gamma  # per-n log2 growth of the condition statistic
        evidence["slope_log2"] = str(slope)
        if slope > 0:
            return Verdict(Outcome.POSITIVE, "(i)", evidence | {"limsup": "+inf"})
        if slope < 0:
            return Verdict(Outcome.ZERO, "(ii)", evidence | {"series": "geometric, convergent"})
        # balanced exponential growth; the polynomial factor decides
        if g.beta < 0:
            return Verdict(Outcome.POSITIVE, "(i)", evidence | {"limsup": "+inf"})
        if g.beta == 0:
            limit = g.C ** -(p - 1) if (p - 1).denominator == 1 else None
            return Verdict(
                Outcome.POSITIVE,
                "(i)",
                evidence | {"limsup": str(limit) if limit is not None else "positive constant"},
            )
        if (p - 1) * g.beta > 1:
            return Verdict(Outcome.ZERO, "(ii)", evidence | {"series": "p-series, convergent"})
        return Verdict(
            Outcome.INDETERMINATE,
            None,
            evidence
            | {
                "limsup": "0",
                "series": "p-series with exponent <= 1, divergent",
            },
        )

    # subcritical branch
    ap, b = e.ap, 1 - e.ap
    if g.gamma > 0:
        return Verdict(Outcome.ZERO, "(b)", evidence | {"series": "super-exponentially convergent"})
    if g.gamma < 0 or g.beta < 1:
        return Verdict(Outcome.POSITIVE, "(a)", evidence | {"limsup": "+inf"})
    if g.beta > 1:
        return Verdict(Outcome.ZERO, "(b)", evidence | {"series": "convergent (superlinear run lengths)"})
    slope = ap - b * g.C  # beta == 1, gamma == 0
    evidence["slope"] = str(slope)
    if slope > 0:
        return Verdict(Outcome.POSITIVE, "(a)", evidence | {"limsup": "+inf"})
    if slope == 0:
        return Verdict(
            Outcome.POSITIVE,
            "(a)",
            evidence | {"limsup": f"bounded in [{-float(b):.6g}, 0] by the ceiling offset"},
        )
    return Verdict(Outcome.ZERO, "(b)", evidence | {"series": "geometric, convergent"})


def dobinski_full(e: Exponents) -> Verdict:
    """Verdict for the union over m of both run halves (zeros and ones).

    The halves are bit-flip images of each other, so they classify
    identically; positivity of any geometric component is inherited by the
    union, and countable subadditivity passes zero capacity to it.
    """
    verdicts = [classify(Geometric(m), e) for m in (1, 2, 3)]
    outcomes = {v.outcome for v in verdicts}
    if len(outcomes) != 1:
        # cannot happen for geometric families (the verdict is m-free), but
        # keep the combination rule explicit
        outcome = Outcome.POSITIVE if Outcome.POSITIVE in outcomes else Outcome.INDETERMINATE
        condition = next((v.condition for v in verdicts if v.outcome is outcome), None)
    else:
        outcome = verdicts[0].outcome
        condition = verdicts[0].condition
    evidence = {
        "construction": "union over m >= 1 of run sets with kappa_n = ceil(2**n/m), "
        "for runs of zeros and (by bit-flip symmetry) runs of ones",
        "component_condition": condition,
        "branch": "critical" if e.is_critical else "subcritical",
        "sampled_m": [1, 2, 3],
    }
    return Verdict(outcome, condition, evidence)


# ----------------------------------------------------------------------
# Capacity bounds and comparability
# ----------------------------------------------------------------------

_TAIL_BUDGET = 20_000
_REL_CUT_LOG2 = 80.0


def _tail_sum(spec: SequenceSpec, e: Exponents, start: int) -> LogValue | None:
    """sum_{n >= start} cap(D(n, kappa_n)) in the log domain.

    Terms are accumulated until one falls 80 binary orders below the
    partial sum, then a geometric extrapolation of the observed term ratio
    bounds the remainder.  Returns None when no convergence emerges within
    the budget.
    """
    total = LogValue.zero()
    prev: LogValue | None = None
    for n in range(start, start + _TAIL_BUDGET):
        term = cap_component(n, kappa_value(spec, n), e).value
        total = total + term
        if term.log2 < total.log2 - _REL_CUT_LOG2:
            if prev is not None and term.log2 < prev.log2:
                ratio_log2 = term.log2 - prev.log2
                # remainder <= term * rho / (1 - rho) for observed rho < 1
                rem_log2 = (
                    term.log2 + ratio_log2 - math.log2(-math.expm1(ratio_log2 * _LN2))
                )
                total = total + LogValue.from_log2(rem_log2)
            return total
        prev = term
    return None


def capacity_bounds(
    spec: SequenceSpec, e: Exponents, n_max: int
) -> tuple[CapacityReport, CapacityReport | None]:
    """Certified lower bound and (when the tail converges) upper bound.

    Lower: the best single component capacity over n <= n_max, a lower
    bound for the limsup estimate.  Upper: the tail sum starting at n_max
    (the smallest of the admissible tail sums); ``None`` when no tail
    converges within range.
    """
    if n_max < 1:
        raise DomainError(f"n_max must be >= 1, got {n_max}")
    best = LogValue.zero()
    for n in range(1, n_max + 1):
        value = cap_component(n, kappa_value(spec, n), e).value
        if value > best:
            best = value
    lower = CapacityReport(best, Method.CLOSED_FORM, BoundKind.LOWER)
    tail = _tail_sum(spec, e, n_max)
    upper = None if tail is None else CapacityReport(tail, Method.CLOSED_FORM, BoundKind.UPPER)
    return lower, upper


def comparability_report(
    e: Exponents, n_range: tuple[int, int], spec: SequenceSpec
) -> dict:
    """Ratio of component capacities to the branch comparison quantity.

    The raw comparison quantity (2**n * kappa**-(p-1) on the critical
    branch, 2**(ap*n - (1-ap)*kappa) on the subcritical one) is clamped at
    1 before dividing: capacities never exceed 1, and the clamped quantity
    is the two-sided comparable proxy, so the ratio stays in a fixed band.
    """
    lo, hi = n_range
    if not (1 <= lo <= hi <= 10_000):
        raise DomainError(f"n range must satisfy 1 <= lo <= hi <= 10000, got {n_range}")
    rows = []
    ratio_min, ratio_max = math.inf, -math.inf
    for n in range(lo, hi + 1):
        kappa = kappa_value(spec, n)
        cap = cap_component(n, kappa, e).value
        log2_kappa = math.log2(kappa)
        if e.is_critical:
            proxy_log2 = n - float(e.p - 1) * log2_kappa
        else:
            try:
                proxy_log2 = float(e.ap * n - (1 - e.ap) * kappa)
            except OverflowError as exc:
                raise DomainError(
                    f"comparison exponent exceeds double range at n={n}"
                ) from exc
        ratio_log2 = cap.log2 - min(0.0, proxy_log2)
        ratio = 2.0 ** ratio_log2
        ratio_min = min(ratio_min, ratio)
        ratio_max = max(ratio_max, ratio)
        rows.append(
            {
                "n": n,
                "kappa": kappa if kappa < 2 ** 53 else None,
                "kappa_log2": log2_kappa,
                "cap_linear": 2.0 ** cap.log2 if abs(cap.log2) < 1020 else None,
                "cap_log2": cap.log2,
                "proxy_log2": proxy_log2,
                "ratio": ratio,
            }
        )
    return {"rows": rows, "ratio_min": ratio_min, "ratio_max": ratio_max}


# ----------------------------------------------------------------------
# Dimension bracket
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class DimensionBracket:
    lower: Fraction
    upper: Fraction
    points: tuple[dict, ...]

    def to_json(self) -> dict:
        return {
            "lower": str(self.lower),
            "upper": str(self.upper),
            "points": list(self.points),
        }


def dimension_profile(
    spec: SequenceSpec, grid: Iterable[tuple[RationalLike, RationalLike]]
) -> DimensionBracket:
    """Bracket the Hausdorff dimension from verdicts over an exponent grid.

    Lower endpoint: the largest 1 - a*p whose point classifies Positive.
    Upper endpoint: the largest 1 - a*p whose point does not classify Zero.
    The endpoints agree whenever no grid point is Indeterminate.  Both
    default to 0 for an all-Zero grid (dimension is nonnegative).
    """
    lower = Fraction(0)
    upper = Fraction(0)
    points = []
    for a_like, p_like in grid:
        e = Exponents(a_like, p_like)
        verdict = classify(spec, e)
        co_dim = 1 - e.ap
        if verdict.outcome is Outcome.POSITIVE:
            lower = max(lower, co_dim)
        if verdict.outcome is not Outcome.ZERO:
            upper = max(upper, co_dim)
        points.append(
            {
                "a": str(e.a),
                "p": str(e.p),
                "one_minus_ap": str(co_dim),
                "outcome": verdict.outcome.value,
                "condition": verdict.condition,
            }
        )
    return DimensionBracket(lower, upper, tuple(points))


# ----------------------------------------------------------------------
# JSON wire format
# ----------------------------------------------------------------------

def spec_to_json(spec: SequenceSpec) -> dict:
    if isinstance(spec, Geometric):
        return {"family": "geometric", "m": spec.m}
    if isinstance(spec, Power):
        return {"family": "power", "C": str(spec.C), "beta": str(spec.beta)}
    if isinstance(spec, Linear):
        return {"family": "linear", "C": str(spec.C)}
    if isinstance(spec, Growth):
        return {
            "family": "growth",
            "C": str(spec.C),
            "beta": str(spec.beta),
            "gamma": str(spec.gamma),
        }
    if isinstance(spec, Custom):
        return {
            "family": "custom",
            "table": [list(entry) for entry in spec.table],
            "tail_rule": spec_to_json(spec.tail_rule),
        }
    raise DomainError(f"unknown sequence family: {spec!r}")


def spec_from_json(data: Mapping | Sequence | str) -> SequenceSpec:
    import json as _json

    if isinstance(data, str):
        data = _json.loads(data)
    if not isinstance(data, Mapping):
        raise DomainError("sequence spec JSON must be an object")
    family = str(data.get("family", "")).lower()
    if family == "geometric":
        return Geometric(int(data["m"]))
    if family == "power":
        return Power(as_fraction(data["C"]), as_fraction(data["beta"]))
    if family == "linear":
        return Linear(as_fraction(data["C"]))
    if family == "growth":
        return Growth(as_fraction(data["C"]), as_fraction(data["beta"]), as_fraction(data["gamma"]))
    if family == "custom":
        table = tuple((int(n), int(k)) for n, k in data["table"])
        return Custom(table, spec_from_json(data["tail_rule"]))
    raise DomainError(f"unknown sequence family: {family!r}")
