import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from capatree import (
    ApBranch,
    DomainError,
    Exponents,
    LogOp,
    LogValue,
    as_fraction,
    conjugate,
    log_combine,
    rel_error,
)


class TestConjugate:
    @pytest.mark.parametrize(
        "p,expected",
        [(Fraction(2), Fraction(2)), (Fraction(3), Fraction(3, 2)), (Fraction(4, 3), Fraction(4))],
    )
    def test_values(self, p, expected):
        assert conjugate(p) == expected

    def test_involution(self):
        for p in (Fraction(5, 4), Fraction(7, 2), Fraction(101, 100)):
            assert conjugate(conjugate(p)) == p

    @pytest.mark.parametrize("p", [Fraction(1), Fraction(1, 2), Fraction(0), Fraction(-3)])
    def test_rejects_p_at_most_one(self, p):
        with pytest.raises(DomainError):
            conjugate(p)


class TestExponents:
    def test_conjugate_identity_exact(self):
        e = Exponents("1/3", "7/4")
        assert (e.p - 1) * (e.p_prime - 1) == 1

    def test_critical_branch_is_exact(self):
        assert Exponents("1/2", 2).branch is ApBranch.CRITICAL
        assert Exponents("1/3", 3).branch is ApBranch.CRITICAL
        assert Exponents("100/201", "201/100").is_critical

    def test_subcritical(self):
        assert Exponents("1/4", 2).branch is ApBranch.SUBCRITICAL

    def test_rejects_ap_above_one(self):
        with pytest.raises(DomainError):
            Exponents("3/4", 2)

    @given(
        num=st.integers(min_value=1, max_value=10**6),
        den=st.integers(min_value=1, max_value=10**6),
        sign=st.sampled_from([-1, 1]),
    )
    def test_perturbing_a_never_stays_critical(self, num, den, sign):
        # a = 1/p +- eps either flips the branch or is rejected outright
        p = Fraction(2)
        eps = sign * Fraction(num, den * 10**7)
        a = 1 / p + eps
        if a <= 0 or a * p > 1:
            with pytest.raises(DomainError):
                Exponents(a, p)
        else:
            assert not Exponents(a, p).is_critical

    def test_rational_literals(self):
        assert as_fraction("1/2") == Fraction(1, 2)
        assert as_fraction("3") == Fraction(3)
        with pytest.raises(DomainError):
            as_fraction("one half")
        with pytest.raises(DomainError):
            as_fraction("1/0")


class TestLogValue:
    def test_doubling(self):
        v = LogValue.from_log2(10.0)
        assert (v + v).log2 == pytest.approx(11.0, abs=1e-14)

    def test_huge_product_exponent_addition(self):
        v = LogValue.from_log2(1000.0)
        out = v * v
        assert out.log2 == 2000.0  # overflows naive linear doubles

    def test_additive_identity(self):
        one = LogValue.one()
        assert (one + LogValue.zero()).log2 == 0.0
        assert (LogValue.zero() + one).log2 == 0.0

    def test_zero_absorbs_in_products(self):
        assert (LogValue.zero() * LogValue.from_log2(5.0)).is_zero
        assert LogValue.zero().pow_scale(2.0).is_zero
        assert not LogValue.zero().pow_scale(0.0).is_zero

    def test_log_combine_dispatch(self):
        u, v = LogValue.from_float(3.0), LogValue.from_float(5.0)
        assert log_combine(LogOp.ADD, u, v).to_float() == pytest.approx(8.0, rel=1e-14)
        assert log_combine("mul", u, v).to_float() == pytest.approx(15.0, rel=1e-14)
        assert log_combine("pow_scale", u, 2.0).to_float() == pytest.approx(9.0, rel=1e-14)
        with pytest.raises(DomainError):
            log_combine(LogOp.POW_SCALE, u, v)

    def test_ordering_matches_linear_scale(self):
        values = [LogValue.zero(), LogValue.from_float(0.25), LogValue.one(), LogValue.from_float(7)]
        floats = [v.to_float() for v in values]
        assert sorted(floats) == floats
        assert values == sorted(values)

    @given(
        a=st.floats(min_value=-50, max_value=50),
        b=st.floats(min_value=-50, max_value=50),
    )
    def test_add_mul_match_linear_arithmetic(self, a, b):
        u, v = LogValue.from_log2(a), LogValue.from_log2(b)
        lin_add = 2.0**a + 2.0**b
        lin_mul = 2.0**a * 2.0**b
        assert rel_error(u + v, LogValue.from_float(lin_add)) <= 1e-12
        assert rel_error(u * v, LogValue.from_float(lin_mul)) <= 1e-12

    @given(
        a=st.floats(min_value=-50, max_value=50),
        b=st.floats(min_value=-50, max_value=50),
        c=st.floats(min_value=-50, max_value=50),
    )
    def test_add_commutative_associative(self, a, b, c):
        u, v, w = (LogValue.from_log2(x) for x in (a, b, c))
        assert abs((u + v).log2 - (v + u).log2) <= 1e-12 * max(1.0, abs((u + v).log2))
        left = (u + v) + w
        right = u + (v + w)
        assert abs(left.log2 - right.log2) <= 1e-12 * max(1.0, abs(left.log2))

    def test_from_float_round_trip(self):
        # round-trip error grows like |log2| * eps, so loosen at the extremes
        for x in (0.1, 1.0, 3.5):
            assert LogValue.from_float(x).to_float() == pytest.approx(x, rel=1e-14)
        for x in (1e-300, 1e300):
            assert LogValue.from_float(x).to_float() == pytest.approx(x, rel=1e-12)
        assert LogValue.from_float(0.0).is_zero
        with pytest.raises(DomainError):
            LogValue.from_float(-1.0)

    def test_from_fraction_handles_big_integers(self):
        v = LogValue.from_fraction(Fraction(2**4000, 3))
        assert v.log2 == pytest.approx(4000 - math.log2(3), rel=1e-15)
