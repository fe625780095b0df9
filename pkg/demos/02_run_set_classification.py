"""Classifying limsup run sets as positive / zero / indeterminate capacity.

A sequence kappa_n defines the limsup set of boundary points that open a
run of kappa_n zeros right after position n.  Exact rational comparison of
growth exponents decides which sufficient condition fires; the gap between
the conditions is reported honestly as Indeterminate.

Run:  python demos/02_run_set_classification.py
"""

from fractions import Fraction

from capatree import (
    Custom,
    Exponents,
    Geometric,
    Growth,
    Linear,
    Power,
    classify,
    dimension_profile,
    dobinski_full,
    kappa_value,
)

# ----------------------------------------------------------------------
# Families and their first few run lengths
# ----------------------------------------------------------------------
families = {
    "geometric m=3 (kappa ~ 2^n/3)": Geometric(3),
    "linear kappa = n": Linear(Fraction(1)),
    "power kappa = ceil(sqrt(n))": Power(Fraction(1), Fraction(1, 2)),
    "mixed kappa = n * 2^n": Growth(Fraction(1), Fraction(1), Fraction(1)),
}
for label, spec in families.items():
    values = [kappa_value(spec, n) for n in range(1, 9)]
    print(f"{label:>32}: {values}")

# ----------------------------------------------------------------------
# Verdicts across exponent pairs
# ----------------------------------------------------------------------
print("\nverdicts:")
grid = [Exponents("1/2", 2), Exponents("1/3", 3), Exponents("1/4", 2)]
for label, spec in families.items():
    row = []
    for e in grid:
        v = classify(spec, e)
        row.append(f"({e.a},{e.p}): {v.outcome.value}{' ' + v.condition if v.condition else ''}")
    print(f"{label:>32}: " + " | ".join(row))

# kappa = n*2^n at (1/2, 2) sits in the gap between the sufficient
# conditions: the limsup statistic decays like 1/n, whose series diverges.
gap = classify(Custom(((1, 2),), Growth(Fraction(1), Fraction(1), Fraction(1))), Exponents("1/2", 2))
print(f"\ninside the gap: {gap.outcome.value} (no condition fires)")

# ----------------------------------------------------------------------
# The union over m of both run halves (zeros and ones) jumps from positive
# to zero capacity exactly at p = 2 along a = 1/p.
# ----------------------------------------------------------------------
print("\ncapacity of the full run union along a = 1/p:")
for p in (Fraction(5, 4), Fraction(3, 2), Fraction(2), Fraction(5, 2), Fraction(3), Fraction(4)):
    verdict = dobinski_full(Exponents(1 / p, p))
    print(f"  p = {str(p):>4}: {verdict.outcome.value}")

# ----------------------------------------------------------------------
# Dimension bracket: sup of 1 - ap over positive (resp. non-zero) verdicts.
# Geometric families collapse to [0, 0]; kappa_n = n turns positive at
# ap = 1/2, so its bracket pins dimension 1/2.
# ----------------------------------------------------------------------
grid = [(Fraction(ap, 8) / 2, Fraction(2)) for ap in range(1, 9)]
print("\ndimension brackets over ap in {1/8..1}, p = 2:")
for label, spec in (("geometric m=2", Geometric(2)), ("kappa = n", Linear(Fraction(1)))):
    bracket = dimension_profile(spec, grid)
    print(f"  {label:>14}: [{bracket.lower}, {bracket.upper}]")
