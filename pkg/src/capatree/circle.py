"""Circle-side companion: binary run lengths, the tangent product, and
Riesz potentials by singularity-aware quadrature.

Binary expansions of rationals are computed by exact long division, so
run-length statistics and the doubling orbit 2**n x mod 1 never suffer
floating-point drift.  Potentials integrate against the chord-distance
kernel (2*sin(pi*s))**(a-1); its endpoint singularities are integrable for
0 < a < 1 and are handled by splitting at the singular point and using a
power-law endpoint rule on the touching pieces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from scipy.integrate import quad

from .errors import DomainError, DyadicTangentPole
from .exponents import Exponents, RationalLike, as_fraction


def _is_dyadic(x: Fraction) -> bool:
    den = x.denominator
    return den & (den - 1) == 0


@dataclass(frozen=True)
class DigitStream:
    """Binary digits of a point of [0, 1).

    Exact streams come from rationals (eventually periodic, computed by
    long division); finite streams carry only the digits given and are
    censored beyond them.  Digits are indexed from 1.
    """

    preamble: tuple[int, ...]
    cycle: tuple[int, ...]  # empty for finite (censored) streams
    dyadic: bool
    value: Fraction | None = None

    @classmethod
    def from_rational(cls, x: RationalLike) -> "DigitStream":
        x = as_fraction(x)
        if not (0 <= x <= 1):
            raise DomainError(f"need x in [0, 1], got {x}")
        x = x % 1  # 1 wraps to 0 on the circle
        dyadic = _is_dyadic(x)
        digits: list[int] = []
        seen: dict[int, int] = {}
        rem = x.numerator
        den = x.denominator
        while rem and rem not in seen:
            seen[rem] = len(digits)
            rem *= 2
            digits.append(rem // den)
            rem %= den
        if rem == 0:
            return cls(tuple(digits), (0,), True, x)
        start = seen[rem]
        return cls(tuple(digits[:start]), tuple(digits[start:]), dyadic, x)

    @classmethod
    def from_digits(cls, digits: Sequence[int]) -> "DigitStream":
        digits = tuple(int(d) for d in digits)
        if any(d not in (0, 1) for d in digits):
            raise DomainError("digits must be 0 or 1")
        return cls(digits, (), False, None)

    @property
    def finite(self) -> bool:
        return not self.cycle

    @property
    def horizon(self) -> int | None:
        return len(self.preamble) if self.finite else None

    def digit(self, n: int) -> int:
        """The n-th binary digit (1-indexed)."""
        if n < 1:
            raise DomainError(f"digits are indexed from 1, got {n}")
        idx = n - 1
        if idx < len(self.preamble):
            return self.preamble[idx]
        if self.finite:
            raise DomainError(f"digit {n} lies beyond the finite stream")
        return self.cycle[(idx - len(self.preamble)) % len(self.cycle)]


@dataclass(frozen=True)
class RunLength:
    """s_n for one position: the maximal run starting at n, minus one.

    ``infinite`` marks runs that never terminate (constant tails of dyadic
    rationals); ``censored`` marks runs still alive at the horizon of a
    finite stream, in which case ``value`` is the observed lower bound.
    """

    n: int
    value: int
    infinite: bool = False
    censored: bool = False

    def to_json(self) -> dict:
        out: dict = {"n": self.n, "s": "inf" if self.infinite else self.value}
        if self.censored:
            out["censored"] = True
        return out


def run_lengths(stream: DigitStream, count: int) -> list[RunLength]:
    """s_n for n = 1..count.

    Exact streams are scanned until the run breaks or provably never does
    (one full cycle beyond the preamble with no change of digit).  Finite
    streams are scanned to their horizon, censoring still-alive runs.
    """
    if count < 1:
        raise DomainError(f"need count >= 1, got {count}")
    out: list[RunLength] = []
    if stream.finite:
        horizon = len(stream.preamble)
        if count > horizon:
            raise DomainError(f"stream has {horizon} digits, cannot report n up to {count}")
        for n in range(1, count + 1):
            d = stream.digit(n)
            j = n + 1
            while j <= horizon and stream.digit(j) == d:
                j += 1
            if j > horizon:
                out.append(RunLength(n, horizon - n, censored=True))
            else:
                out.append(RunLength(n, j - 1 - n))
        return out
    # exact stream: a run is infinite iff it survives one whole cycle past
    # the preamble (after that the digits repeat verbatim)
    for n in range(1, count + 1):
        d = stream.digit(n)
        limit = max(n, len(stream.preamble)) + len(stream.cycle) + 1
        j = n + 1
        while j <= limit and stream.digit(j) == d:
            j += 1
        if j > limit:
            out.append(RunLength(n, 0, infinite=True))
        else:
            out.append(RunLength(n, j - 1 - n))
    return out


def membership_score(stream: DigitStream, count: int) -> float:
    """Finite-horizon proxy max_{n <= count} s_n / 2**n over uncensored entries.

    Membership in the limsup set is a tail property, so no finite horizon
    decides it; this score only witnesses lower bounds.  Dyadic rationals
    score infinity outright (their constant tail is an infinite run).
    """
    if stream.dyadic:
        return math.inf
    best = 0.0
    for rl in run_lengths(stream, count):
        if rl.infinite:
            return math.inf
        if rl.censored:
            continue
        best = max(best, rl.value / 2.0 ** rl.n)
    return best


def product_identity(x: RationalLike, n_terms: int) -> tuple[float, float]:
    """Partial tangent product vs the squared-sine closed form.

    Accumulates sum_{n < N} 2**-n * log|tan(pi * (2**n x mod 1))| with the
    orbit advanced in exact rational arithmetic, and returns
    (exp(partial sum), (2 sin(pi x))**2).  Dyadic x hits a tangent pole.
    """
    x = as_fraction(x)
    if not (0 < x < 1):
        raise DomainError(f"need x in (0, 1), got {x}")
    if _is_dyadic(x):
        raise DyadicTangentPole(f"{x} is a dyadic rational; the product hits a pole")
    if not (1 <= n_terms <= 64):
        raise DomainError(f"need 1 <= N <= 64, got {n_terms}")
    den = x.denominator
    rem = x.numerator
    log_sum = 0.0
    for n in range(n_terms):
        t = abs(math.tan(math.pi * rem / den))
        log_sum += math.log(t) * 2.0 ** (-n)
        rem = (rem * 2) % den
    rhs = (2.0 * math.sin(math.pi * float(x))) ** 2
    return math.exp(log_sum), rhs


# ----------------------------------------------------------------------
# Riesz potentials on the circle
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class DyadicDensity:
    """Piecewise-constant density on the 2**depth dyadic arcs of [0, 1)."""

    depth: int
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.depth < 0:
            raise DomainError(f"depth must be >= 0, got {self.depth}")
        values = tuple(float(v) for v in self.values)
        if len(values) != 2 ** self.depth:
            raise DomainError(
                f"need {2 ** self.depth} arc values at depth {self.depth}, got {len(values)}"
            )
        if any(v < 0 or not math.isfinite(v) for v in values):
            raise DomainError("density values must be finite and nonnegative")
        object.__setattr__(self, "values", values)

    def integral(self) -> float:
        return math.fsum(self.values) / len(self.values)

    def value_at(self, t: float) -> float:
        idx = min(int((t % 1.0) * len(self.values)), len(self.values) - 1)
        return self.values[idx]

    @classmethod
    def constant(cls, value: float, depth: int = 0) -> "DyadicDensity":
        return cls(depth, (float(value),) * 2 ** depth)

    @classmethod
    def indicator(cls, lo_arc: int, hi_arc: int, depth: int) -> "DyadicDensity":
        values = [1.0 if lo_arc <= i < hi_arc else 0.0 for i in range(2 ** depth)]
        return cls(depth, tuple(values))

    def to_json(self) -> dict:
        return {"depth": self.depth, "values": list(self.values)}

    @classmethod
    def from_json(cls, data) -> "DyadicDensity":
        return cls(int(data["depth"]), tuple(float(v) for v in data["values"]))


def _kernel_piece(s0: float, s1: float, a: float, epsrel: float) -> tuple[float, float]:
    """Integral of (2 sin(pi s))**(a-1) over [s0, s1] within [0, 1].

    Endpoint singularities (s = 0 or 1) are peeled off with an algebraic
    weight; interior pieces use plain adaptive quadrature.
    """
    am1 = a - 1.0

    def smooth_left(s: float) -> float:
        # kernel * s**(1-a) == (2 sin(pi s) / s)**(a-1)
        return (2.0 * math.sin(math.pi * s) / s) ** am1 if s > 0 else (2.0 * math.pi) ** am1

    def smooth_right(s: float) -> float:
        u = 1.0 - s
        return (2.0 * math.sin(math.pi * u) / u) ** am1 if u > 0 else (2.0 * math.pi) ** am1

    def kernel(s: float) -> float:
        return (2.0 * math.sin(math.pi * s)) ** am1

    touches_left = s0 <= 1e-15
    touches_right = s1 >= 1.0 - 1e-15
    if touches_left and touches_right:

        def both(s: float) -> float:
            return smooth_left(s) * (1.0 - s) ** (1.0 - a) if s <= 0.5 else smooth_right(s) * s ** (1.0 - a)

        return quad(both, 0.0, 1.0, weight="alg", wvar=(am1, am1), epsabs=0.0, epsrel=epsrel)
    if touches_left:
        return quad(smooth_left, 0.0, s1, weight="alg", wvar=(am1, 0.0), epsabs=0.0, epsrel=epsrel)
    if touches_right:
        return quad(smooth_right, s0, 1.0, weight="alg", wvar=(0.0, am1), epsabs=0.0, epsrel=epsrel)
    return quad(kernel, s0, s1, epsabs=0.0, epsrel=epsrel, limit=200)


def _check_a(a: Fraction) -> float:
    if not (0 < a < 1):
        raise DomainError(f"Riesz exponent must satisfy 0 < a < 1, got {a}")
    return float(a)


def riesz_potential(
    f: DyadicDensity, y: RationalLike | float, a: RationalLike, rel_tol: float = 1e-8
) -> float:
    """Potential of a dyadic-arc density at the point y.

    Integrates f(t) * (2|sin(pi (y - t))|)**(a-1) dt over the circle using
    the substitution s = t - y, which places the (integrable) kernel
    singularities exactly at the endpoints s = 0 and s = 1.
    """
    a_f = _check_a(as_fraction(a))
    y_f = float(as_fraction(y)) % 1.0 if not isinstance(y, float) else y % 1.0
    n_arcs = len(f.values)
    breaks = sorted({(k / n_arcs - y_f) % 1.0 for k in range(n_arcs)} | {0.0, 1.0})
    total = 0.0
    piece_tol = rel_tol * 0.1
    for s0, s1 in zip(breaks, breaks[1:]):
        if s1 - s0 < 1e-14:
            continue
        density = f.value_at(y_f + 0.5 * (s0 + s1))
        if density == 0.0:
            continue
        val, _err = _kernel_piece(s0, s1, a_f, piece_tol)
        total += density * val
    return total


def kernel_integral(a: RationalLike, rel_tol: float = 1e-10) -> tuple[float, float]:
    """integral over [0,1] of (2 sin(pi t))**(a-1) dt, with error estimate.

    This is the potential of the unit density at any point (rotation
    invariance makes it y-free).
    """
    a_f = _check_a(as_fraction(a))
    left = _kernel_piece(0.0, 0.5, a_f, rel_tol)
    right = _kernel_piece(0.5, 1.0, a_f, rel_tol)
    return left[0] + right[0], left[1] + right[1]


def circle_full_capacity(e: Exponents, rel_tol: float = 1e-10) -> float:
    """Riesz (a,p)-capacity of the whole circle.

    The equilibrium density of a rotation-invariant problem is constant, so
    the capacity is (integral of the kernel)**(-p).
    """
    integral, _ = kernel_integral(e.a, rel_tol)
    return integral ** (-e.p_f)
