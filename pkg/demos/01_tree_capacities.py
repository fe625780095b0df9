"""Boundary capacities on the binary tree, from the ground up.

Walks through the basic objects: exact exponent pairs, log-domain
magnitudes, the full-tree capacity constant, finite-depth truncations, and
the exact recursion on unions of cylinders, cross-checked against the
independent convex-program oracle.

Run:  python demos/01_tree_capacities.py
"""

from capatree import (
    CylinderSet,
    Exponents,
    LogValue,
    capacity_recursive,
    emulated_infinite_problem,
    full_tree_capacity,
    solve_capacity,
    truncated_tree_capacity,
)

# ----------------------------------------------------------------------
# Exponent pairs are exact rationals; the branch test a*p == 1 is never a
# floating-point comparison.
# ----------------------------------------------------------------------
e = Exponents("1/2", 2)
print(f"exponents: a={e.a}, p={e.p}, conjugate p'={e.p_prime}, branch={e.branch.value}")

# Magnitudes live as base-2 logarithms, so quantities like 2**2000 are fine.
big = LogValue.from_log2(1000.0)
print(f"2^1000 * 2^1000 = 2^{(big * big).log2:.0f}  (no overflow)")

# ----------------------------------------------------------------------
# The whole boundary has capacity c = 2**(-ap) * (2**(ap(p'-1)) - 1)**(p-1),
# the unique positive fixed point of c -> Phi_1(2**ap c).
# ----------------------------------------------------------------------
for a, p in (("1/2", "2"), ("1/3", "3"), ("1/4", "2")):
    c = full_tree_capacity(Exponents(a, p)).value.to_float()
    print(f"full-tree capacity at (a={a}, p={p}): {c:.12f}")

# Truncating the tree at depth N and requiring every leaf gives a sequence
# that decreases to the same constant; at (1/2, 2) it is 2^N/(2^(N+1)-1).
e = Exponents("1/2", 2)
print("\ndepth-N truncations at (1/2, 2):")
for n in (0, 1, 3, 6, 12, 24):
    value = truncated_tree_capacity(e, n).to_float()
    closed = 2**n / (2 ** (n + 1) - 1)
    print(f"  N={n:>2}: {value:.12f}   2^N/(2^(N+1)-1) = {closed:.12f}")

# ----------------------------------------------------------------------
# Capacity of a finite union of cylinders: generators form an antichain,
# each rooting a full shifted subtree, and the two-child recursion
# combines them bottom-up exactly.
# ----------------------------------------------------------------------
print("\ncylinder-set capacities at (1/2, 2):")
for words in (["0"], ["00"], ["00", "01", "1"], ["00", "11"], ["010", "011", "10"]):
    cyl = CylinderSet.from_words(words)
    value = capacity_recursive(cyl, e).value.to_float()
    print(f"  cap {str(words):>24} = {value:.12f}")

# The convex oracle solves the defining minimization directly.  Giving each
# covered leaf the weight pi(leaf) * c emulates the infinite subtree below
# it, so the finite program reproduces the infinite capacity exactly.
print("\nrecursion vs convex oracle:")
for words in (["0"], ["00"], ["00", "11"]):
    cyl = CylinderSet.from_words(words)
    recursion = capacity_recursive(cyl, e).value.to_float()
    oracle = solve_capacity(emulated_infinite_problem(cyl, e), tol=1e-6).value
    print(f"  {str(words):>14}: recursion {recursion:.10f}   oracle {oracle:.10f}")
