"""Structural measures that pick a good variable ordering.

Run with ``python demos/structure_tour.py``.
"""
from monodual import (MonotoneCnf, analyze, gyo_reduce, heuristic_td, is_alpha_acyclic,
                      ordering_from_td2, smallest_last_ordering)
from monodual.cnf import delta_profile
from monodual.generators import acyclic_family, read_k_family

acyc = MonotoneCnf(6, [[1, 2, 3], [1, 3, 5], [1, 5, 6], [3, 4, 5]])
trace = gyo_reduce(acyc)
print("GYO succeeds:", trace.success, "in", len(trace.steps), "steps")
for step in trace.steps[:5]:
    print("  ", step)

tri = MonotoneCnf(3, [[1, 2], [2, 3], [1, 3]])
print("triangle alpha-acyclic:", is_alpha_acyclic(tri))

# Smallest-last fills positions from the back, taking the variable that
# closes the fewest clauses.
deg = smallest_last_ordering(tri)
print("triangle degeneracy:", deg.k, "ordering", deg.ord.order, "profile", deg.profile)

# Min-fill tree decomposition of the incidence graph, then the ordering
# it induces.
phi = read_k_family(12, 2, seed=3)
td = heuristic_td(phi)
ord_td = ordering_from_td2(td, phi)
print("read-2 family: td width", td.width, "profile max", max(delta_profile(phi, ord_td)))

for name, cnf in [("acyclic", acyclic_family(8, seed=1)), ("read-2", phi), ("triangle", tri)]:
    a = analyze(cnf, heuristic_td(cnf))
    print(f"{name}: n={a.n} m={a.m} read={a.read} degeneracy={a.degeneracy.k} "
          f"acyclic={a.alpha_acyclic} ordering from {a.ordering_source}")
    for g in a.guarantees:
        print("    ", g)
