"""Ordered dualization on small hand-made CNFs.

Run with ``python demos/dualize_walkthrough.py``.
"""
from monodual import MonotoneCnf, VariableOrdering, delta_profile, dualize, r_dualize
from monodual.enumeration import DualizeStats, RhoStrategy, measure_delay
from monodual.oracle import brute_transversals

# x2 (x1 v x3)(x1 v x4)
phi = MonotoneCnf(4, [[2], [1, 3], [1, 4]])
print("phi:", [sorted(c) for c in phi.clauses])
for t in dualize(phi):
    print("  prime implicant", sorted(t))

# The stream comes out in key order; a different ordering changes that order
# but never the set of terms.
phi = MonotoneCnf(4, [[1, 2], [1, 3], [2, 3, 4], [1, 4]])
ident = list(dualize(phi))
rev = list(dualize(phi, VariableOrdering((4, 3, 2, 1))))
print("identity order:", [sorted(t) for t in ident])
print("reversed order:", [sorted(t) for t in rev])
assert set(ident) == set(rev) == brute_transversals(phi)

# |Δ| per position bounds how much work each extension step does.
print("delta profile (identity):", delta_profile(phi, VariableOrdering.identity(4)))

# Berge expansion for every ρ versus the recursive enumerator.
for mode in ("expand", "recursive"):
    stats = DualizeStats()
    n_terms = sum(1 for _ in dualize(phi, strategy=RhoStrategy(mode), stats=stats))
    print(f"{mode:9s}: {n_terms} terms, max recursion depth {stats.max_depth}")

res = r_dualize(MonotoneCnf(6, [[1, 2, 3], [3, 4, 5], [5, 6, 1]]))
print("r_dualize on a 3-CNF:", len(res.terms), "terms, depth", res.depth)

# Timing a stream: the first gap is the latency before the first output.
rep = measure_delay(dualize(MonotoneCnf(8, [[i, i % 8 + 1] for i in range(1, 9)])))
print(f"8-cycle: {rep.count} terms, max delay {rep.max_delay * 1e6:.0f} us")
