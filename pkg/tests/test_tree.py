import itertools
import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from capatree import CylinderSet, DomainError, Exponents, LogValue, d_cylinder_set
from capatree.tree import canonicalize, lambda_interval, meet, metric, weight

words_st = st.text(alphabet="01", max_size=10)


class TestMeetAndMetric:
    def test_common_prefix(self):
        assert meet("0110", "0100") == "01"
        assert metric("0110", "0100").log2 == -2.0

    def test_root_meet(self):
        assert meet("", "1011") == ""
        assert metric("", "1011").to_float() == 1.0

    def test_identical_words(self):
        assert meet("01101", "01101") == "01101"
        assert metric("01101", "01101").log2 == -5.0

    @given(x=words_st, y=words_st)
    def test_symmetry(self, x, y):
        assert meet(x, y) == meet(y, x)

    def test_ultrametric_exhaustive_short_words(self):
        words = [
            "".join(bits)
            for n in range(5)
            for bits in itertools.product("01", repeat=n)
        ]
        for x, y, z in itertools.product(words, repeat=3):
            dxz = metric(x, z)
            assert dxz <= max(metric(x, y), metric(y, z))

    @given(x=words_st, y=words_st, z=words_st)
    def test_ultrametric_random(self, x, y, z):
        assert metric(x, z) <= max(metric(x, y), metric(y, z))


class TestLambdaInterval:
    def test_examples(self):
        assert lambda_interval("") == (Fraction(0), Fraction(1))
        assert lambda_interval("1") == (Fraction(1, 2), Fraction(1))
        assert lambda_interval("011") == (Fraction(3, 8), Fraction(4, 8))

    def test_children_partition_parent_exhaustive(self):
        for n in range(10):
            for bits in itertools.product("01", repeat=n):
                x = "".join(bits)
                lo, hi = lambda_interval(x)
                l0, m0 = lambda_interval(x + "0")
                m1, h1 = lambda_interval(x + "1")
                assert (l0, m0, m1, h1) == (lo, (lo + hi) / 2, (lo + hi) / 2, hi)


class TestWeight:
    def test_critical_weight_is_one(self):
        e = Exponents("1/2", 2)
        for x in ("", "011", "000111"):
            assert weight(x, e).to_float() == 1.0

    def test_subcritical_example(self):
        e = Exponents("1/4", 2)  # 1 - ap = 1/2
        assert weight("0110", e).log2 == -2.0

    def test_root_weight(self):
        for e in (Exponents("1/2", 2), Exponents("1/5", 3)):
            assert weight("", e).to_float() == 1.0

    @given(x=words_st, y=words_st)
    def test_shift_law(self, x, y):
        e = Exponents("1/4", 2)
        shifted = weight(x, e) * LogValue.from_log2(-len(y) * 0.5)
        assert abs(weight(x + y, e).log2 - shifted.log2) < 1e-12


class TestCylinderSet:
    def test_prefix_absorbs_extension(self):
        assert canonicalize({"0", "01"}).generators == ("0",)

    def test_antichain_unchanged(self):
        assert canonicalize({"00", "01", "1"}).generators == ("00", "01", "1")

    def test_root_absorbs_everything(self):
        assert canonicalize({"", "0110"}).generators == ("",)

    def test_rejects_non_antichain_direct_construction(self):
        with pytest.raises(DomainError):
            CylinderSet(("0", "01"))

    def test_rejects_bad_alphabet(self):
        with pytest.raises(DomainError):
            canonicalize({"0a1"})

    @given(st.sets(words_st, max_size=12))
    def test_canonical_form_is_antichain_with_same_cover(self, words):
        cyl = canonicalize(words)
        gens = cyl.generators
        for g, h in itertools.permutations(gens, 2):
            assert not h.startswith(g)
        # same boundary set: every input word is covered, every generator was input-covered
        for w in words:
            assert cyl.covers(w)
        for g in gens:
            assert g in words

    @given(st.sets(words_st, max_size=12))
    def test_canonicalize_idempotent(self, words):
        once = canonicalize(words)
        assert canonicalize(once.generators).generators == once.generators

    def test_json_round_trip(self):
        cyl = canonicalize({"01", "1", "000"})
        text = json.dumps(cyl.to_json())
        assert CylinderSet.from_json(text) == cyl

    def test_bit_flip(self):
        assert canonicalize({"01", "1"}).bit_flip().generators == ("0", "10")

    def test_spanning_nodes(self):
        assert canonicalize({"01"}).spanning_nodes() == {"", "0", "01"}


class TestRunSetGenerators:
    def test_single_cylinder(self):
        assert d_cylinder_set(0, 2).generators == ("00",)

    def test_branching_level(self):
        assert d_cylinder_set(1, 1).generators == ("00", "10")

    def test_counts(self):
        cyl = d_cylinder_set(3, 2)
        assert len(cyl.generators) == 8
        assert all(len(g) == 5 and g.endswith("00") for g in cyl.generators)

    def test_size_guard(self):
        with pytest.raises(DomainError):
            d_cylinder_set(12, 10)

    def test_validates_arguments(self):
        with pytest.raises(DomainError):
            d_cylinder_set(-1, 1)
        with pytest.raises(DomainError):
            d_cylinder_set(2, 0)
