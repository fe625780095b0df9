"""Exact exponent pairs (a, p) and overflow-free log-domain magnitudes.

Capacities and the sigma sums grow like 2**(n*(p'-1)), which leaves linear
double precision around n ~ 1000.  All magnitudes therefore live as base-2
logarithms with an explicit zero flag (`LogValue`), while the parameters
themselves stay exact rationals so the critical branch test a*p == 1 is
never a floating-point comparison.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from .errors import DomainError

_LN2 = math.log(2.0)

RationalLike = Union[Fraction, int, str]


def as_fraction(value: RationalLike) -> Fraction:
    """Parse a rational given as Fraction, int, or a "num/den" string."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"malformed rational literal: {value!r}") from exc
    raise DomainError(f"cannot interpret {value!r} as a rational")


def conjugate(p: RationalLike) -> Fraction:
    """Hoelder conjugate p/(p-1); requires p > 1."""
    p = as_fraction(p)
    if p <= 1:
        raise DomainError(f"conjugate exponent needs p > 1, got {p}")
    return p / (p - 1)


class ApBranch(enum.Enum):
    CRITICAL = "critical"      # a*p == 1
    SUBCRITICAL = "subcritical"  # a*p < 1


@dataclass(frozen=True)
class Exponents:
    """The parameter pair (a, p) with derived conjugate and branch flag.

    Both parameters are exact rationals; construction rejects a*p > 1
    (singletons would carry positive capacity there) and p <= 1.
    """

    a: Fraction
    p: Fraction
    p_prime: Fraction = field(init=False)
    branch: ApBranch = field(init=False)

    def __init__(self, a: RationalLike, p: RationalLike):
        a = as_fraction(a)
        p = as_fraction(p)
        if a <= 0:
            raise DomainError(f"need a > 0, got a={a}")
        if p <= 1:
            raise DomainError(f"need p > 1, got p={p}")
        if a * p > 1:
            raise DomainError(f"need a*p <= 1, got a*p={a * p}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "p_prime", conjugate(p))
        object.__setattr__(
            self,
            "branch",
            ApBranch.CRITICAL if a * p == 1 else ApBranch.SUBCRITICAL,
        )

    @property
    def ap(self) -> Fraction:
        return self.a * self.p

    @property
    def is_critical(self) -> bool:
        return self.branch is ApBranch.CRITICAL

    # Float views used by the log-domain kernels.
    @property
    def p_f(self) -> float:
        return float(self.p)

    @property
    def q_f(self) -> float:
        """float(p' - 1) = 1/(p - 1)."""
        return float(self.p_prime - 1)

    @property
    def pm1_f(self) -> float:
        return float(self.p - 1)

    @property
    def ap_f(self) -> float:
        return float(self.ap)

    def __repr__(self) -> str:
        return f"Exponents(a={self.a}, p={self.p})"


@dataclass(frozen=True, slots=True)
class LogValue:
    """A nonnegative real stored as its base-2 logarithm.

    ``is_zero`` marks an exact zero (log2 is then ignored).  Ordering and
    arithmetic follow ordinary nonnegative-real semantics.
    """

    log2: float = 0.0
    is_zero: bool = False

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls) -> "LogValue":
        return cls(0.0, True)

    @classmethod
    def one(cls) -> "LogValue":
        return cls(0.0, False)

    @classmethod
    def from_log2(cls, log2: float) -> "LogValue":
        return cls(float(log2), False)

    @classmethod
    def from_float(cls, value: float) -> "LogValue":
        if value < 0:
            raise DomainError(f"LogValue requires a nonnegative value, got {value}")
        if value == 0:
            return cls.zero()
        return cls(math.log2(value), False)

    @classmethod
    def from_fraction(cls, value: Fraction) -> "LogValue":
        if value < 0:
            raise DomainError(f"LogValue requires a nonnegative value, got {value}")
        if value == 0:
            return cls.zero()
        # log2(num) - log2(den); exact for arbitrarily large integers.
        return cls(math.log2(value.numerator) - math.log2(value.denominator), False)

    # -- conversions ---------------------------------------------------
    def to_float(self) -> float:
        if self.is_zero:
            return 0.0
        if self.log2 > 1023:
            return math.inf
        if self.log2 < -1074:
            return 0.0
        return 2.0 ** self.log2

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other: "LogValue") -> "LogValue":
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        hi, lo = (self.log2, other.log2) if self.log2 >= other.log2 else (other.log2, self.log2)
        d = lo - hi  # <= 0
        # 2**d underflows harmlessly to 0 for d << 0 (log1p(0) == 0).
        return LogValue(hi + math.log1p(2.0 ** d) / _LN2, False)

    def __mul__(self, other: "LogValue") -> "LogValue":
        if self.is_zero or other.is_zero:
            return LogValue.zero()
        return LogValue(self.log2 + other.log2, False)

    def __truediv__(self, other: "LogValue") -> "LogValue":
        if other.is_zero:
            raise ZeroDivisionError("division by LogValue zero")
        if self.is_zero:
            return LogValue.zero()
        return LogValue(self.log2 - other.log2, False)

    def pow_scale(self, exponent: float) -> "LogValue":
        """Raise to a real power; 0**e = 0 for e > 0, 0**0 = 1."""
        if not math.isfinite(exponent):
            raise DomainError("pow_scale exponent must be finite")
        if self.is_zero:
            return LogValue.one() if exponent == 0 else LogValue.zero()
        return LogValue(self.log2 * exponent, False)

    # -- comparisons (monotone in the represented value) ---------------
    def _key(self) -> tuple:
        return (0, 0.0) if self.is_zero else (1, self.log2)

    def __lt__(self, other: "LogValue") -> bool:
        return self._key() < other._key()

    def __le__(self, other: "LogValue") -> bool:
        return self._key() <= other._key()

    def __gt__(self, other: "LogValue") -> bool:
        return self._key() > other._key()

    def __ge__(self, other: "LogValue") -> bool:
        return self._key() >= other._key()

    def __repr__(self) -> str:
        return "LogValue(zero)" if self.is_zero else f"LogValue(2^{self.log2:.12g})"


class LogOp(enum.Enum):
    ADD = "add"
    MUL = "mul"
    POW_SCALE = "pow_scale"


def log_combine(op: LogOp | str, u: LogValue, v: LogValue | float) -> LogValue:
    """Dispatch Add / Mul / PowScale on LogValues.

    PowScale takes a plain float exponent in place of the second value.
    """
    op = LogOp(op) if not isinstance(op, LogOp) else op
    if op is LogOp.POW_SCALE:
        if isinstance(v, LogValue):
            raise DomainError("pow_scale expects a float exponent")
        return u.pow_scale(float(v))
    if not isinstance(v, LogValue):
        raise DomainError(f"{op.value} expects a LogValue second operand")
    return u + v if op is LogOp.ADD else u * v


def rel_error(u: LogValue, v: LogValue) -> float:
    """|u/v - 1| with zero-aware semantics (inf when exactly one is zero)."""
    if u.is_zero and v.is_zero:
        return 0.0
    if u.is_zero or v.is_zero:
        return math.inf
    d = u.log2 - v.log2
    if abs(d) > 60:
        return math.inf
    return abs(math.expm1(d * _LN2))
