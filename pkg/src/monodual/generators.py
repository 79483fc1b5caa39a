"""Seeded instance families for tests and benchmarks.

Every generator returns a prime CNF in which every variable of ``1..n``
occurs, so its output can go straight into :func:`dualize`.
"""
from __future__ import annotations

import random

from .cnf import MonotoneCnf, compact, minimal_masks, mask_of


def _finish(n: int, masks, rng: random.Random) -> MonotoneCnf:
    """Minimize, relabel the used variables randomly onto ``1..n'``."""
    cnf = MonotoneCnf.from_masks(n, minimal_masks(masks))
    cnf, _ = compact(cnf)
    perm = list(range(1, cnf.n + 1))
    rng.shuffle(perm)
    return MonotoneCnf(cnf.n, [[perm[v - 1] for v in sorted(c)] for c in cnf.clauses])


def read_k_family(n: int, k: int, seed: int = 0) -> MonotoneCnf:
    """k + 2 variable blocks arranged in a cycle; clause i is the union of
    the k consecutive blocks starting at block i. Every variable occurs in
    exactly k clauses."""
    if k < 1:
        raise ValueError("k must be >= 1")
    blocks = k + 2
    if n < blocks:
        raise ValueError(f"read-{k} family needs n >= {blocks}")
    rng = random.Random(seed)
    vars_ = list(range(1, n + 1))
    rng.shuffle(vars_)
    parts = [vars_[b::blocks] for b in range(blocks)]
    clauses = []
    for i in range(blocks):
        c = []
        for d in range(k):
            c += parts[(i + d) % blocks]
        clauses.append(sorted(c))
    return MonotoneCnf(n, clauses)


def degenerate_family(n: int, k: int, seed: int = 0, max_size: int = 4) -> MonotoneCnf:
    """At most k clauses end at each position of a hidden ordering."""
    rng = random.Random(seed)
    masks = []
    for i in range(1, n + 1):
        for _ in range(rng.randint(1 if i > 1 else 0, k)):
            size = rng.randint(0, min(max_size - 1, i - 1))
            others = rng.sample(range(1, i), size)
            masks.append(mask_of(others + [i]))
    if not masks:
        masks = [mask_of([1])]
    return _finish(n, masks, rng)


def acyclic_family(m: int, seed: int = 0, max_fresh: int = 3) -> MonotoneCnf:
    """Join-tree construction: each clause keeps a proper subset of an
    earlier clause and adds fresh variables, so the result is prime and
    α-acyclic."""
    rng = random.Random(seed)
    nxt = 1
    clauses: list[list[int]] = []
    for _ in range(m):
        fresh = list(range(nxt, nxt + rng.randint(1, max_fresh)))
        nxt += len(fresh)
        if clauses:
            parent = rng.choice(clauses)
            keep = rng.sample(parent, rng.randint(0, len(parent) - 1))
        else:
            keep = []
        clauses.append(sorted(keep + fresh))
    return _finish(nxt - 1, [mask_of(c) for c in clauses], rng)


def random_prime(n: int, m: int, seed: int = 0, max_size: int | None = None,
                 min_size: int = 1) -> MonotoneCnf:
    """m random clauses, minimized and compacted (so n and m may shrink)."""
    rng = random.Random(seed)
    hi = min(n, max_size or n)
    masks = [mask_of(rng.sample(range(1, n + 1), rng.randint(min(min_size, hi), hi))) for _ in range(m)]
    return _finish(n, masks, rng)


def k_cnf(n: int, k: int, m: int, seed: int = 0) -> MonotoneCnf:
    """Clauses of size at most k (most of them exactly k)."""
    rng = random.Random(seed)
    masks = []
    for _ in range(m):
        size = k if rng.random() < 0.8 else rng.randint(1, k)
        masks.append(mask_of(rng.sample(range(1, n + 1), min(size, n))))
    return _finish(n, masks, rng)


def star(n: int) -> MonotoneCnf:
    """(x1 ∨ x_i) for i = 2..n; x1 is read n-1 times."""
    return MonotoneCnf(n, [[1, i] for i in range(2, n + 1)])


def random_pair(n: int, seed: int = 0, dual_bias: float = 0.5):
    """A (φ, ψ) pair: either φ with its exact dual, or a perturbed dual, or
    two independent CNFs. Small n only (uses the brute-force oracle)."""
    from .oracle import transversal_cnf

    rng = random.Random(seed)
    phi = MonotoneCnf.from_masks(n, minimal_masks(
        mask_of(rng.sample(range(1, n + 1), rng.randint(1, max(1, n // 2 + 1))))
        for _ in range(rng.randint(1, 2 * n))))
    if rng.random() >= dual_bias:
        psi = MonotoneCnf.from_masks(n, minimal_masks(
            mask_of(rng.sample(range(1, n + 1), rng.randint(1, n))) for _ in range(rng.randint(0, 2 * n))))
        return phi, psi
    psi = transversal_cnf(phi)
    masks = list(psi.masks)
    roll = rng.random()
    if roll < 0.4 or not masks:
        return phi, psi
    i = rng.randrange(len(masks))
    if roll < 0.6:
        masks.pop(i)
    elif roll < 0.8:
        masks[i] |= 1 << rng.randrange(n)
    else:
        low = masks[i] & -masks[i]
        if masks[i] != low:
            masks[i] ^= low
    return phi, MonotoneCnf.from_masks(n, minimal_masks(masks))

__all__ = [
    "read_k_family", "degenerate_family", "acyclic_family", "random_prime",
    "k_cnf", "star", "random_pair",
]
