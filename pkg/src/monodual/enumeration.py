"""Ordered enumeration of the prime implicants of a monotone CNF.

The enumerator walks the prime implicants in strictly increasing
lexicographic order of their characteristic vectors under a fixed variable
ordering. Internally every variable set is re-encoded in "position space":
the variable at position ``p`` becomes bit ``n - p``, so a term's ordering
key is simply its mask and the heap can compare plain ints.
"""
from __future__ import annotations

import heapq
import time
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np

from .cnf import (
    MonotoneCnf,
    VariableOrdering,
    _ordering,
    is_pi_mask,
    iter_bits,
    mask_of,
    minimal_masks,
    term_of,
)

EXPAND_LIMIT = 16
DEFAULT_BUDGET = 8


class BudgetExceeded(RuntimeError):
    """Recursive ρ computation went deeper than allowed."""


@dataclass(frozen=True)
class RhoStrategy:
    """How to obtain the prime DNF of each Δ^i[t].

    ``expand`` multiplies the clauses out with minimality pruning,
    ``recursive`` runs the enumerator on the sub-CNF (R-Dualize) and
    ``auto`` expands small sub-CNFs and recurses on the rest.
    """

    mode: str = "auto"
    recursion_budget: int | None = None

    def __post_init__(self):
        if self.mode not in ("expand", "recursive", "auto"):
            raise ValueError(f"unknown rho mode {self.mode!r}")
        if self.mode == "recursive" and self.recursion_budget is not None and self.recursion_budget < 1:
            raise ValueError("recursion_budget must be >= 1")

    @property
    def budget(self) -> int | None:
        if self.recursion_budget is not None:
            return self.recursion_budget
        return DEFAULT_BUDGET if self.mode == "auto" else None


@dataclass
class DualizeStats:
    emitted: int = 0
    rho_calls: int = 0
    max_rho: int = 0  # largest |ρ_(t,i)| seen
    max_depth: int = 1  # deepest recursive enumerator (top level = 1)
    candidates: int = 0  # t* values generated, duplicates included


def berge_expand(masks: Iterable[int]) -> list[int]:
    """Minimal transversals by clause-at-a-time multiplication."""
    parts = [0]
    for c in masks:
        nxt = []
        for s in parts:
            if s & c:
                nxt.append(s)
            else:
                nxt.extend(s | b for b in iter_bits(c))
        parts = minimal_masks(nxt)
    return parts


def _smallest_implicant(clauses: list[int]) -> int:
    """Key-minimal implicant of a monotone CNF in position space.

    Start from every variable and try to drop them highest bit (earliest
    position, heaviest weight) first.
    """
    t = 0
    for c in clauses:
        t |= c
    for b in sorted(iter_bits(t), reverse=True):
        cand = t ^ b
        if all(c & cand for c in clauses):
            t = cand
    return t


class _Engine:
    def __init__(self, n: int, clauses: list[int], strategy: RhoStrategy,
                 stats: DualizeStats, depth: int = 1):
        self.n = n
        self.clauses = clauses
        self.strategy = strategy
        self.stats = stats
        self.depth = depth
        self.delta: list[list[int]] = [[] for _ in range(n + 1)]
        for c in clauses:
            low = (c & -c).bit_length() - 1  # lowest bit = last position
            self.delta[n - low].append(c)
        self.phi_upto: list[list[int]] = [[]]
        for i in range(1, n + 1):
            self.phi_upto.append(self.phi_upto[-1] + self.delta[i])

    def prefix(self, i: int) -> int:
        """Mask of positions 1..i."""
        return ((1 << self.n) - 1) ^ ((1 << (self.n - i)) - 1)

    def extend(self, p: int, i: int) -> int:
        """Smallest prime implicant whose first-i-positions part equals ``p``."""
        pre = self.prefix(i)
        residual = []
        for c in self.clauses:
            if c & p:
                continue
            r = c & ~pre
            if r == 0:
                raise ValueError("fixing the prefix makes the function constant 0")
            residual.append(r)
        return p | _smallest_implicant(residual)

    def rho(self, sub: list[int]) -> list[int]:
        self.stats.rho_calls += 1
        mode = self.strategy.mode
        if mode == "auto":
            mode = "expand" if len(sub) <= EXPAND_LIMIT else "recursive"
        if mode == "expand":
            out = berge_expand(sub)
        else:
            out = self._recurse(sub)
        if len(out) > self.stats.max_rho:
            self.stats.max_rho = len(out)
        return out

    def _recurse(self, sub: list[int]) -> list[int]:
        depth = self.depth + 1
        budget = self.strategy.budget
        if budget is not None and depth > budget:
            raise BudgetExceeded(f"recursion depth {depth} exceeds budget {budget}")
        self.stats.max_depth = max(self.stats.max_depth, depth)
        used = 0
        for c in sub:
            used |= c
        bits = sorted(iter_bits(used), reverse=True)
        k = len(bits)
        down = {b: 1 << (k - 1 - idx) for idx, b in enumerate(bits)}
        up = {v: b for b, v in down.items()}

        def remap(m, table):
            out = 0
            for b in iter_bits(m):
                out |= table[b]
            return out

        engine = _Engine(k, [remap(c, down) for c in sub], self.strategy, self.stats, depth)
        return [remap(t, up) for t in engine.run()]

    def run(self) -> Iterator[int]:
        if not self.clauses:
            yield 0
            return
        tmin = self.extend(0, 0)
        heap = [tmin]
        seen = {tmin}
        n = self.n
        while heap:
            t = heapq.heappop(heap)
            yield t
            for i in range(1, n + 1):
                xi = 1 << (n - i)
                if not t & xi or not self.delta[i]:
                    continue
                t_prev = t & self.prefix(i - 1)
                sub = []
                zero = False
                for d in self.delta[i]:
                    c = d ^ xi
                    if c & t_prev:
                        continue
                    if c == 0:
                        zero = True
                        break
                    sub.append(c)
                if zero or not sub:
                    # constant 0 has no prime implicants; constant 1 is skipped
                    continue
                for tp in self.rho(minimal_masks(sub)):
                    p = t_prev | tp
                    if not is_pi_mask(self.phi_upto[i], p):
                        continue
                    ts = self.extend(p, i)
                    self.stats.candidates += 1
                    if ts not in seen:
                        seen.add(ts)
                        heapq.heappush(heap, ts)


def _position_tables(ord: VariableOrdering) -> tuple[dict[int, int], dict[int, int]]:
    n = ord.n
    to_pos = {1 << (v - 1): 1 << (n - p) for p, v in enumerate(ord.order, start=1)}
    return to_pos, {b: v for v, b in to_pos.items()}


def _remap(mask: int, table: dict[int, int]) -> int:
    out = 0
    for b in iter_bits(mask):
        out |= table[b]
    return out


def _check_input(cnf: MonotoneCnf):
    if len(minimal_masks(cnf.masks)) != len(cnf.masks):
        raise ValueError("input CNF is not prime; minimize it first")
    if len(cnf.variables) != cnf.n:
        missing = sorted(set(range(1, cnf.n + 1)) - cnf.variables)
        raise ValueError(f"variables {missing} do not occur; compact the universe first")


def dualize(cnf: MonotoneCnf, ord: VariableOrdering | None = None,
            strategy: RhoStrategy | None = None,
            stats: DualizeStats | None = None) -> Iterator[frozenset]:
    """Stream every prime implicant of ``cnf`` in increasing key order.

    ``cnf`` must be prime and use every variable of ``1..n``. Each call
    returns a fresh generator, so the enumeration can be restarted.
    """
    _check_input(cnf)
    ord = _ordering(cnf, ord)
    strategy = strategy or RhoStrategy()
    stats = stats if stats is not None else DualizeStats()
    to_pos, from_pos = _position_tables(ord)
    engine = _Engine(cnf.n, [_remap(m, to_pos) for m in cnf.masks], strategy, stats)

    def gen():
        for t in engine.run():
            stats.emitted += 1
            yield term_of(_remap(t, from_pos))

    return gen()


@dataclass(frozen=True)
class RDualizeResult:
    terms: frozenset
    depth: int


def r_dualize(cnf: MonotoneCnf, depth_limit: int = DEFAULT_BUDGET,
              ord: VariableOrdering | None = None) -> RDualizeResult:
    """Enumerate with every ρ obtained by a recursive enumerator call.

    Raises :class:`BudgetExceeded` if the recursion goes past ``depth_limit``.
    """
    stats = DualizeStats()
    strategy = RhoStrategy("recursive", depth_limit)
    terms = frozenset(dualize(cnf, ord, strategy, stats))
    return RDualizeResult(terms, stats.max_depth)


def smallest_prime_implicant(cnf: MonotoneCnf) -> frozenset:
    """The prime implicant with the smallest key under the identity ordering."""
    ord = VariableOrdering.identity(cnf.n)
    to_pos, from_pos = _position_tables(ord)
    t = _smallest_implicant([_remap(m, to_pos) for m in cnf.masks])
    return term_of(_remap(t, from_pos))


def extend_to_smallest(cnf: MonotoneCnf, ord: VariableOrdering | None,
                       prefix: Iterable[int], i: int) -> frozenset:
    """Key-minimal t* in PI(f) agreeing with ``prefix`` on the first i positions.

    ``prefix`` has to be a prime implicant of f_i.
    """
    ord = _ordering(cnf, ord)
    to_pos, from_pos = _position_tables(ord)
    engine = _Engine(cnf.n, [_remap(m, to_pos) for m in cnf.masks], RhoStrategy(), DualizeStats())
    p = _remap(mask_of(prefix), to_pos)
    if p & ~engine.prefix(i):
        raise ValueError(f"prefix reaches past position {i}")
    if not is_pi_mask(engine.phi_upto[i], p):
        raise ValueError(f"prefix is not a prime implicant of f_{i}")
    return term_of(_remap(engine.extend(p, i), from_pos))


def rho_of_delta(d: MonotoneCnf, strategy: RhoStrategy | None = None) -> set[frozenset]:
    """Prime implicants of a (small) monotone CNF such as Δ^i[t]."""
    strategy = strategy or RhoStrategy("expand")
    masks = minimal_masks(d.masks)
    if strategy.mode == "expand" or (strategy.mode == "auto" and len(masks) <= EXPAND_LIMIT):
        return {term_of(m) for m in berge_expand(masks)}
    if not masks:
        return {frozenset()}
    stats = DualizeStats()
    # the sub-CNF is itself a top-level call here, one level below its caller
    engine = _Engine(d.n, [], strategy, stats, depth=0)
    to_pos, from_pos = _position_tables(VariableOrdering.identity(d.n))
    out = engine._recurse([_remap(m, to_pos) for m in masks])
    return {term_of(_remap(t, from_pos)) for t in out}


@dataclass
class DelayReport:
    count: int
    latency: float  # start to first output
    max_delay: float
    mean_delay: float
    p50: float
    p95: float
    tail: float  # last output to exhaustion
    total: float
    delays: list[float] = field(default_factory=list, repr=False)


def measure_delay(stream: Iterable, clock=time.perf_counter) -> DelayReport:
    """Run ``stream`` to exhaustion, timing the gap before each output.

    The first gap is the pre-first-output latency and counts as a delay.
    """
    stamps = []
    start = clock()
    for _ in stream:
        stamps.append(clock())
    end = clock()
    if not stamps:
        return DelayReport(0, 0.0, 0.0, 0.0, 0.0, 0.0, end - start, end - start)
    d = np.diff(np.array([start] + stamps))
    return DelayReport(
        count=len(stamps),
        latency=float(d[0]),
        max_delay=float(d.max()),
        mean_delay=float(d.mean()),
        p50=float(np.percentile(d, 50)),
        p95=float(np.percentile(d, 95)),
        tail=end - stamps[-1],
        total=end - start,
        delays=d.tolist(),
    )
