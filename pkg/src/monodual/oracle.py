"""Brute-force ground truth for small instances.

Everything here is deliberately naive: subset sweeps and full assignment
enumeration. The guards keep the sweeps from running away.
"""
from __future__ import annotations

from itertools import combinations, permutations

import numpy as np

from .cnf import MonotoneCnf, evaluate_mask, mask_of

MAX_N = 20
MAX_N_FACTORIAL = 8


class GuardError(ValueError):
    """Input too large for an exhaustive oracle."""


def _guard(n, limit):
    if n > limit:
        raise GuardError(f"n={n} exceeds oracle guard {limit}")


def brute_transversals(cnf: MonotoneCnf) -> set[frozenset]:
    """All inclusion-minimal variable sets hitting every clause."""
    _guard(cnf.n, MAX_N)
    clauses = [set(c) for c in cnf.clauses]
    found: list[frozenset] = []
    for k in range(cnf.n + 1):
        for combo in combinations(range(1, cnf.n + 1), k):
            s = frozenset(combo)
            if any(f <= s for f in found):
                continue
            if all(c & s for c in clauses):
                found.append(s)
    return set(found)


def brute_dual_check(phi: MonotoneCnf, psi: MonotoneCnf):
    """Return ``True`` if φ and ψ are dual, else the first witness.

    A witness is an assignment ``w`` (tuple of 0/1) with φ(w) == ψ(w̄).
    Assignments are swept as integers with x_1 as the lowest bit.
    """
    if phi.n != psi.n:
        raise ValueError("pair over different universes")
    n = phi.n
    _guard(n, MAX_N)
    full = (1 << n) - 1
    for w in range(1 << n):
        if evaluate_mask(phi.masks, w) == evaluate_mask(psi.masks, w ^ full):
            return tuple((w >> j) & 1 for j in range(n))
    return True


def brute_degeneracy(cnf: MonotoneCnf) -> int:
    """min over all orderings of max_i |Δ^i|.

    Every permutation is scored; numpy only batches the bookkeeping.
    """
    _guard(cnf.n, MAX_N_FACTORIAL)
    if not cnf.masks:
        return 0
    n = cnf.n
    # pos[r, v-1]: position of variable v in permutation r
    perms = np.array(list(permutations(range(n))), dtype=np.int8)
    pos = np.argsort(perms, axis=1) + 1
    last = np.stack([pos[:, [v - 1 for v in c]].max(axis=1) for c in cnf.clauses], axis=1)
    sizes = np.stack([(last == i).sum(axis=1) for i in range(1, n + 1)], axis=1)
    return int(sizes.max(axis=1).min())


def transversal_cnf(cnf: MonotoneCnf) -> MonotoneCnf:
    """Minimal transversals as a CNF over the same universe (brute force)."""
    ts = brute_transversals(cnf)
    if frozenset() in ts:
        # constant-1 input: its dual is the constant 0, not a clause set
        raise ValueError("dual of the constant 1 is not a MonotoneCnf")
    return MonotoneCnf.from_masks(cnf.n, sorted(mask_of(t) for t in ts))


__all__ = [
    "GuardError", "MAX_N", "MAX_N_FACTORIAL", "brute_transversals",
    "brute_dual_check", "brute_degeneracy", "transversal_cnf",
]
