import pytest

from capatree import (
    DomainError,
    Exponents,
    FiniteProblem,
    agreement_battery,
    energy_eval,
    finite_tree_capacity,
    potential_eval,
    solve_capacity,
    solve_from_json,
)

E = Exponents("1/2", 2)  # weights identically 1


class TestProblemValidation:
    def test_leaf_lengths_must_match_depth(self):
        with pytest.raises(DomainError):
            FiniteProblem(2, ("0",), E)

    def test_nonempty_targets(self):
        with pytest.raises(DomainError):
            FiniteProblem(2, (), E)

    def test_depth_cap(self):
        with pytest.raises(DomainError):
            FiniteProblem(13, ("0" * 13,), E)

    def test_json_round_trip(self):
        prob = FiniteProblem(2, ("00", "11"), Exponents("1/4", 2), weights={"00": 0.25})
        assert FiniteProblem.from_json(prob.to_json()) == prob


class TestEvaluators:
    def test_potential_of_zero_function(self):
        assert potential_eval({}, "0110") == 0.0

    def test_root_mass_reaches_everywhere(self):
        phi = {"": 1.0}
        for x in ("", "0", "1101"):
            assert potential_eval(phi, x) == 1.0

    def test_unit_mass_path_count(self):
        phi = {w: 1.0 for w in ("", "0", "1", "00", "01", "011")}
        assert potential_eval(phi, "011") == 4.0

    def test_energy_zero(self):
        assert energy_eval({}, FiniteProblem(1, ("0",), E)) == 0.0

    def test_energy_depth_one(self):
        prob = FiniteProblem(1, ("0", "1"), E)
        phi = {"": 2 / 3, "0": 1 / 3, "1": 1 / 3}
        assert energy_eval(phi, prob) == pytest.approx(2 / 3, rel=1e-14)

    def test_energy_single_node_cubic(self):
        prob = FiniteProblem(0, ("",), Exponents("1/3", 3))
        assert energy_eval({"": 1.0}, prob) == pytest.approx(1.0)

    def test_energy_rejects_negative(self):
        with pytest.raises(DomainError):
            energy_eval({"0": -0.5}, FiniteProblem(1, ("0",), E))


class TestSolveCapacity:
    def test_depth_one_both_leaves(self):
        res = solve_capacity(FiniteProblem(1, ("0", "1"), E))
        assert res.value == pytest.approx(2 / 3, rel=1e-6)

    def test_depth_one_single_leaf(self):
        res = solve_capacity(FiniteProblem(1, ("0",), E))
        assert res.value == pytest.approx(1 / 2, rel=1e-6)

    def test_depth_two_all_leaves(self):
        res = solve_capacity(FiniteProblem(2, ("00", "01", "10", "11"), E))
        assert res.value == pytest.approx(4 / 7, rel=1e-6)

    def test_witness_is_admissible_and_energy_matches(self):
        prob = FiniteProblem(3, ("000", "011", "110"), Exponents("1/4", 2))
        res = solve_capacity(prob)
        phi = res.witness_dict(include_zero=True)
        for leaf in prob.target_leaves:
            assert potential_eval(phi, leaf) >= 1.0 - 1e-12
        assert energy_eval(phi, prob) >= res.value * (1 - 1e-12)

    def test_weight_doubling_doubles_value(self):
        base = FiniteProblem(4, tuple(format(i, "04b") for i in range(0, 16, 3)), E)
        words = [format(i - (2 ** d - 1), f"0{d}b") if d else "" for d in range(5) for i in range(2 ** d - 1, 2 ** (d + 1) - 1)]
        doubled = FiniteProblem(
            base.depth, base.target_leaves, base.exponents, weights={w: 2.0 for w in words}
        )
        v1 = solve_capacity(base).value
        v2 = solve_capacity(doubled).value
        assert abs(v2 - 2 * v1) <= 1e-8 * abs(v2)

    def test_tolerance_domain(self):
        with pytest.raises(DomainError):
            solve_capacity(FiniteProblem(1, ("0",), E), tol=1e-2)

    def test_json_entry_point(self):
        out = solve_from_json({"depth": 1, "target_leaves": ["0", "1"], "a": "1/2", "p": "2"})
        assert set(out) == {"value", "witness", "violation", "iterations"}
        assert out["value"] == pytest.approx(2 / 3, rel=1e-6)
        assert out["violation"] < 1e-5


class TestAgreementBattery:
    def test_small_battery_agrees(self):
        rows = agreement_battery(count=12, seed=7, max_depth=6)
        assert all(row["ok"] for row in rows)
        assert max(row["rel_diff"] for row in rows) <= 5e-5

    def test_deterministic_for_fixed_seed(self):
        a = agreement_battery(count=4, seed=42, max_depth=5)
        b = agreement_battery(count=4, seed=42, max_depth=5)
        assert a == b

    def test_matches_recursion_on_full_leaf_sets(self):
        for depth in (2, 3, 4):
            leaves = tuple(format(i, f"0{depth}b") for i in range(2 ** depth))
            for e in (E, Exponents("1/4", 2), Exponents("1/2", "3/2")):
                recursion = finite_tree_capacity(depth, leaves, e).to_float()
                solved = solve_capacity(FiniteProblem(depth, leaves, e)).value
                assert abs(solved - recursion) / recursion <= 5e-5
