import itertools
import math
import random

import numpy as np
import pytest

from capatree import (
    CylinderSet,
    Exponents,
    LogValue,
    cap_component,
    capacity_recursive,
    d_cylinder_set,
    finite_tree_capacity,
    full_tree_capacity,
    phi_apply,
    phi_composition_exponents,
    sigma,
    sigma_closed_form,
    sigma_direct,
    truncated_tree_capacity,
)
from capatree.capacity import BoundKind, Method
from conftest import rel_diff

E_HALF_2 = Exponents("1/2", 2)
E_THIRD_3 = Exponents("1/3", 3)
E_QUARTER_2 = Exponents("1/4", 2)


def lv(x: float) -> LogValue:
    return LogValue.from_float(x)


class TestPhiApply:
    def test_point_values(self):
        assert phi_apply(lv(1), lv(1), E_HALF_2).to_float() == pytest.approx(0.5, rel=1e-14)
        assert phi_apply(lv(2), lv(0.5), E_HALF_2).to_float() == pytest.approx(0.25, rel=1e-14)
        assert phi_apply(lv(1), lv(1), E_THIRD_3).to_float() == pytest.approx(0.25, rel=1e-14)

    def test_identity_and_annihilation(self):
        x = lv(0.7)
        assert phi_apply(LogValue.zero(), x, E_HALF_2) == x
        assert phi_apply(lv(3), LogValue.zero(), E_HALF_2).is_zero

    def test_never_exceeds_argument(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            r = LogValue.from_log2(rng.uniform(-20, 40))
            x = LogValue.from_log2(rng.uniform(-20, 10))
            assert phi_apply(r, x, E_THIRD_3) <= x

    def test_semigroup_law_spot(self):
        r, s, x = lv(1.5), lv(0.25), lv(3.0)
        for e in (E_HALF_2, E_THIRD_3, Exponents("1/5", 5)):
            lhs = phi_apply(r, phi_apply(s, x, e), e)
            rhs = phi_apply(r + s, x, e)
            assert rel_diff(lhs, rhs) <= 1e-12

    def test_scaling_identity_spot(self):
        r, x = lv(2.5), lv(0.8)
        for e in (E_HALF_2, E_THIRD_3):
            lhs = phi_apply(r, LogValue.from_float(2.0) * x, e)
            rhs = LogValue.from_float(2.0) * phi_apply(r * LogValue.from_log2(e.q_f), x, e)
            assert rel_diff(lhs, rhs) <= 1e-12

    def test_monotone_in_x_and_r(self):
        rng = np.random.default_rng(11)
        for e in (E_HALF_2, E_THIRD_3):
            for _ in range(100):
                r = LogValue.from_log2(rng.uniform(-10, 10))
                x = LogValue.from_log2(rng.uniform(-10, 10))
                x_up = LogValue.from_log2(x.log2 + 0.1)
                r_up = LogValue.from_log2(r.log2 + 0.1)
                assert phi_apply(r, x_up, e) > phi_apply(r, x, e)
                assert phi_apply(r_up, x, e) < phi_apply(r, x, e)

    def test_extreme_indices_stay_finite(self):
        out = phi_apply(LogValue.from_log2(4000.0), lv(1.0), E_HALF_2)
        assert out.log2 == pytest.approx(-4000.0, rel=1e-12)
        out = phi_apply(LogValue.from_log2(-4000.0), lv(1.0), E_HALF_2)
        assert out.log2 == pytest.approx(0.0, abs=1e-12)


class TestFullTreeCapacity:
    def test_linear_critical(self):
        report = full_tree_capacity(E_HALF_2)
        assert report.method is Method.FIXED_POINT
        assert report.bound_kind is BoundKind.EXACT
        assert report.value.to_float() == pytest.approx(0.5, rel=1e-13)

    def test_nonlinear_critical(self):
        expected = 0.5 * (math.sqrt(2) - 1) ** 2
        assert full_tree_capacity(E_THIRD_3).value.to_float() == pytest.approx(expected, rel=1e-13)

    def test_subcritical(self):
        expected = 1 - 2 ** (-0.5)
        assert full_tree_capacity(E_QUARTER_2).value.to_float() == pytest.approx(expected, rel=1e-13)

    def test_is_fixed_point_of_combination(self):
        for e in (E_HALF_2, E_THIRD_3, E_QUARTER_2, Exponents("2/9", "3/2")):
            c = full_tree_capacity(e).value
            image = phi_apply(LogValue.one(), LogValue.from_log2(c.log2 + e.ap_f), e)
            assert rel_diff(image, c) <= 1e-12


class TestTruncatedTreeCapacity:
    def test_depth_examples(self):
        assert truncated_tree_capacity(E_HALF_2, 0).to_float() == 1.0
        assert truncated_tree_capacity(E_HALF_2, 1).to_float() == pytest.approx(2 / 3, rel=1e-14)
        assert truncated_tree_capacity(E_HALF_2, 3).to_float() == pytest.approx(8 / 15, rel=1e-14)

    def test_matches_explicit_leaf_problem(self):
        for depth in range(5):
            leaves = ["".join(b) for b in itertools.product("01", repeat=depth)]
            via_leaves = finite_tree_capacity(depth, leaves, E_HALF_2)
            assert rel_diff(via_leaves, truncated_tree_capacity(E_HALF_2, depth)) <= 1e-12

    def test_nonincreasing_and_converges(self):
        for e in (E_HALF_2, E_THIRD_3, E_QUARTER_2):
            values = [truncated_tree_capacity(e, n) for n in range(0, 80, 4)]
            assert all(a >= b for a, b in zip(values, values[1:]))
        c = full_tree_capacity(Exponents("1/2", 2)).value
        assert rel_diff(truncated_tree_capacity(Exponents("1/2", 2), 80), c) < 1e-12


class TestCapacityRecursive:
    def test_single_cylinder(self):
        report = capacity_recursive(CylinderSet.from_words(["0"]), E_HALF_2)
        assert report.method is Method.RECURSION
        assert report.value.to_float() == pytest.approx(1 / 3, rel=1e-13)

    def test_whole_boundary(self):
        for e in (E_HALF_2, E_THIRD_3, E_QUARTER_2, Exponents("1/5", "7/2")):
            report = capacity_recursive(CylinderSet.from_words(["0", "1"]), e)
            assert rel_diff(report.value, full_tree_capacity(e).value) <= 1e-12

    def test_depth_two_cylinder(self):
        # two recursion steps from the full-tree base value 1/2:
        # Phi_1(1/2) = 1/3, then Phi_1(1/3) = 1/4
        report = capacity_recursive(CylinderSet.from_words(["00"]), E_HALF_2)
        assert report.value.to_float() == pytest.approx(0.25, rel=1e-13)

    def test_mixed_depth_antichain(self):
        # hand minimization: t**2 + (5/6)(1-t)**2 over the shared root mass,
        # optimal at t = 5/11 with value 5/11
        report = capacity_recursive(CylinderSet.from_words(["0", "10"]), E_HALF_2)
        assert report.value.to_float() == pytest.approx(5 / 11, rel=1e-13)

    def test_empty_set(self):
        assert capacity_recursive(CylinderSet.empty(), E_HALF_2).value.is_zero

    def test_root_generator(self):
        report = capacity_recursive(CylinderSet.from_words([""]), E_THIRD_3)
        assert rel_diff(report.value, full_tree_capacity(E_THIRD_3).value) == 0

    def test_bit_flip_symmetry(self):
        rng = random.Random(5)
        for _ in range(25):
            words = {"".join(rng.choice("01") for _ in range(rng.randint(1, 6))) for _ in range(rng.randint(1, 8))}
            cyl = CylinderSet.from_words(words)
            for e in (E_HALF_2, E_QUARTER_2):
                direct = capacity_recursive(cyl, e).value
                flipped = capacity_recursive(cyl.bit_flip(), e).value
                assert direct.log2 == flipped.log2

    def test_monotone_under_inclusion_exhaustive_depth3(self):
        def antichains(prefix: str, depth: int):
            yield frozenset()
            yield frozenset({prefix})
            if depth > 0:
                for left in antichains(prefix + "0", depth - 1):
                    for right in antichains(prefix + "1", depth - 1):
                        if left or right:
                            if left == frozenset({prefix + "0"}) and right == frozenset({prefix + "1"}):
                                continue  # equals {prefix}, already yielded
                            yield left | right

        all_sets = [CylinderSet.from_words(ws) for ws in antichains("", 3)]
        caps = [capacity_recursive(cyl, E_HALF_2).value for cyl in all_sets]
        for (cyl_a, cap_a), (cyl_b, cap_b) in itertools.product(zip(all_sets, caps), repeat=2):
            if cyl_b.contains_set(cyl_a):
                assert cap_a <= cap_b or rel_diff(cap_a, cap_b) <= 1e-12

    def test_subadditive_on_random_antichains(self):
        rng = random.Random(17)
        for _ in range(50):
            def rand_cyl():
                words = {
                    "".join(rng.choice("01") for _ in range(rng.randint(1, 6)))
                    for _ in range(rng.randint(1, 10))
                }
                return CylinderSet.from_words(words)

            e_set, f_set = rand_cyl(), rand_cyl()
            union = e_set.union(f_set)
            for e in (E_HALF_2, E_THIRD_3):
                cap_union = capacity_recursive(union, e).value
                cap_sum = capacity_recursive(e_set, e).value + capacity_recursive(f_set, e).value
                assert cap_union <= cap_sum or rel_diff(cap_union, cap_sum) <= 1e-12


class TestOracleCrossChecks:
    """Infinite cylinder capacities re-derived by the convex program.

    Leaves covered by the set get weight pi(leaf) * c, which makes the
    finite program equal to the infinite one exactly.
    """

    @pytest.mark.parametrize(
        "words,expected",
        [(["0"], 1 / 3), (["00"], 1 / 4), (["00", "01", "1"], 1 / 2), (["00", "1"], None)],
    )
    def test_emulated_problem_agrees(self, words, expected):
        from capatree import emulated_infinite_problem, solve_capacity

        cyl = CylinderSet.from_words(words)
        recursion = capacity_recursive(cyl, E_HALF_2).value.to_float()
        if expected is not None:
            assert recursion == pytest.approx(expected, rel=1e-12)
        solved = solve_capacity(emulated_infinite_problem(cyl, E_HALF_2), tol=1e-6)
        assert abs(solved.value - recursion) / recursion <= 5e-6

    def test_emulated_problem_subcritical(self):
        from capatree import emulated_infinite_problem, solve_capacity

        cyl = CylinderSet.from_words(["01", "001", "11"])
        for e in (E_QUARTER_2, Exponents("1/6", 3)):
            recursion = capacity_recursive(cyl, e).value.to_float()
            solved = solve_capacity(emulated_infinite_problem(cyl, e), tol=1e-6)
            assert abs(solved.value - recursion) / recursion <= 5e-6


class TestSigma:
    def test_critical_values(self):
        assert sigma(1, 1, E_HALF_2, verify=True).to_float() == pytest.approx(3.0, rel=1e-12)
        assert sigma(4, 8, E_HALF_2, verify=True).to_float() == pytest.approx(38.0, rel=1e-12)

    def test_subcritical_value(self):
        expected = 4 + 2 ** 1.5 + 2 + 2 ** 1.5  # direct summation of the four indices
        assert sigma(2, 2, E_QUARTER_2, verify=True).to_float() == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("e", [E_HALF_2, E_THIRD_3, E_QUARTER_2, Exponents("1/3", "3/2")])
    def test_closed_form_matches_direct_sum(self, e):
        for n in range(0, 7):
            for kappa in (1, 2, 5, 17):
                closed = sigma_closed_form(n, kappa, e)
                direct = sigma_direct(n, kappa, e)
                assert rel_diff(closed, direct) <= 1e-10

    def test_huge_arguments_stay_in_log_range(self):
        value = sigma_closed_form(10_000, 2**50, E_THIRD_3)
        assert math.isfinite(value.log2)

    def test_composition_order_independence(self):
        rng = random.Random(23)
        for e in (E_HALF_2, E_THIRD_3, E_QUARTER_2):
            c = full_tree_capacity(e).value
            factors = phi_composition_exponents(3, 4, e)
            reference = None
            for _ in range(6):
                order = factors[:]
                rng.shuffle(order)
                out = c
                for exponent in order:
                    out = phi_apply(LogValue.from_log2(exponent), out, e)
                direct = phi_apply(sigma_closed_form(3, 4, e), c, e)
                assert rel_diff(out, direct) <= 1e-11
                if reference is not None:
                    assert rel_diff(out, reference) <= 1e-12
                reference = out


class TestCapComponent:
    def test_critical_examples(self):
        assert cap_component(1, 1, E_HALF_2).value.to_float() == pytest.approx(2 / 5, rel=1e-12)
        assert cap_component(0, 1, E_HALF_2).value.to_float() == pytest.approx(1 / 3, rel=1e-12)
        assert cap_component(10, 1024, E_HALF_2).value.to_float() == pytest.approx(1 / 3, rel=1e-12)

    def test_component_zero_matches_plain_cylinder(self):
        direct = capacity_recursive(CylinderSet.from_words(["0"]), E_HALF_2).value
        assert rel_diff(cap_component(0, 1, E_HALF_2).value, direct) <= 1e-12

    def test_closed_form_matches_recursion_on_explicit_sets(self):
        for e in (E_HALF_2, E_THIRD_3, E_QUARTER_2):
            for n in range(0, 5):
                for kappa in (1, 2, 3):
                    closed = cap_component(n, kappa, e).value
                    explicit = capacity_recursive(d_cylinder_set(n, kappa), e).value
                    assert rel_diff(closed, explicit) <= 1e-10

    def test_log_domain_far_beyond_linear_range(self):
        # subcritical run sets decay like 2**(ap*n - (1-ap)*kappa), far
        # below what linear doubles can represent
        out = cap_component(100, 2**20, E_QUARTER_2)
        assert math.isfinite(out.value.log2)
        assert out.value.log2 < -500_000

    def test_critical_branch_saturates_for_slow_runs(self):
        # with kappa far below 2**n the branching term dominates sigma and
        # cancels the 2**n prefactor exactly, so the value stays order one
        out = cap_component(5000, 2**20, E_THIRD_3)
        assert -10 < out.value.log2 < 0

    def test_report_round_trip(self):
        from capatree.capacity import CapacityReport

        report = cap_component(3, 2, E_HALF_2)
        assert CapacityReport.from_json(report.to_json()) == report
