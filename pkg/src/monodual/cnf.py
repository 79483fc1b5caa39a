"""Monotone CNFs, terms, assignments and variable orderings.

Variable sets are stored as Python ints used as bitsets: variable ``j``
(1-based) is bit ``j - 1``. The public API speaks in frozensets of variable
indices; the masks are exposed for the hot paths in the other modules.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

Term = frozenset  # frozenset[int] of 1-based variable indices
Assignment = tuple  # tuple[int, ...] of 0/1 values, length n


class ConstantZero:
    """The constant-0 function (a CNF that would contain the empty clause)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "ZERO"

    def __bool__(self):
        return False


ZERO = ConstantZero()


def mask_of(vars: Iterable[int]) -> int:
    m = 0
    for v in vars:
        m |= 1 << (v - 1)
    return m


def vars_of(mask: int) -> list[int]:
    out = []
    j = 1
    while mask:
        if mask & 1:
            out.append(j)
        mask >>= 1
        j += 1
    return out


def term_of(mask: int) -> Term:
    return frozenset(vars_of(mask))


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the single-bit masks of ``mask``, lowest first."""
    while mask:
        low = mask & -mask
        yield low
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def minimal_masks(masks: Iterable[int]) -> list[int]:
    """Drop every mask that is a proper superset of another (and duplicates).

    Order of first occurrence is preserved.
    """
    seen: list[int] = []
    uniq = []
    for m in masks:
        if m not in seen:
            seen.append(m)
            uniq.append(m)
    by_size = sorted(uniq, key=popcount)
    kept: list[int] = []
    for m in by_size:
        if not any(k & m == k for k in kept):
            kept.append(m)
    keep = set(kept)
    return [m for m in uniq if m in keep]


class MonotoneCnf:
    """A conjunction of positive clauses over variables ``1..n``.

    Clauses keep their input order (duplicates are dropped). The empty
    clause set is the constant-1 function; the constant 0 is :data:`ZERO`
    and is never stored here.
    """

    __slots__ = ("n", "masks")

    def __init__(self, n: int, clauses: Iterable[Iterable[int]] = ()):
        masks = []
        for c in clauses:
            c = list(c)
            if not c:
                raise ValueError("empty clause; use ZERO for the constant 0")
            for v in c:
                if not 1 <= v <= n:
                    raise ValueError(f"variable {v} out of range 1..{n}")
            masks.append(mask_of(c))
        self._set(n, masks)

    def _set(self, n, masks):
        if n < 0:
            raise ValueError("n must be non-negative")
        out = []
        seen = set()
        for m in masks:
            if m not in seen:
                seen.add(m)
                out.append(m)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "masks", tuple(out))

    @classmethod
    def from_masks(cls, n: int, masks: Iterable[int]) -> "MonotoneCnf":
        self = cls.__new__(cls)
        masks = list(masks)
        limit = 1 << n
        for m in masks:
            if m <= 0 or m >= limit:
                raise ValueError(f"clause mask {m:#x} invalid for n={n}")
        self._set(n, masks)
        return self

    def __setattr__(self, name, value):
        raise AttributeError("MonotoneCnf is immutable")

    @property
    def clauses(self) -> tuple[frozenset, ...]:
        return tuple(term_of(m) for m in self.masks)

    def __len__(self):
        return len(self.masks)

    def __iter__(self):
        return iter(self.clauses)

    @property
    def size(self) -> int:
        """Number of literal occurrences."""
        return sum(popcount(m) for m in self.masks)

    @property
    def variables(self) -> frozenset:
        u = 0
        for m in self.masks:
            u |= m
        return term_of(u)

    @property
    def is_constant_one(self) -> bool:
        return not self.masks

    def __eq__(self, other):
        if not isinstance(other, MonotoneCnf):
            return NotImplemented
        return self.n == other.n and set(self.masks) == set(other.masks)

    def __hash__(self):
        return hash((self.n, frozenset(self.masks)))

    def __repr__(self):
        if not self.masks:
            return f"MonotoneCnf(n={self.n}, 1)"
        body = "".join("(" + "∨".join(f"x{v}" for v in sorted(c)) + ")" for c in self.clauses)
        return f"MonotoneCnf(n={self.n}, {body})"


@dataclass(frozen=True)
class VariableOrdering:
    """``order[i-1]`` is the variable that plays the role of x_i."""

    order: tuple[int, ...]

    def __post_init__(self):
        order = tuple(self.order)
        object.__setattr__(self, "order", order)
        if sorted(order) != list(range(1, len(order) + 1)):
            raise ValueError(f"not a permutation of 1..{len(order)}: {order}")

    @classmethod
    def identity(cls, n: int) -> "VariableOrdering":
        return cls(tuple(range(1, n + 1)))

    @property
    def n(self) -> int:
        return len(self.order)

    def position(self, var: int) -> int:
        """1-based position of ``var``."""
        return self._positions[var]

    @property
    def _positions(self) -> dict[int, int]:
        pos = self.__dict__.get("_pos")
        if pos is None:
            pos = {v: i + 1 for i, v in enumerate(self.order)}
            object.__setattr__(self, "_pos", pos)
        return pos

    def __getitem__(self, i: int) -> int:
        return self.order[i - 1]


def _ordering(cnf_or_n, ord: VariableOrdering | None) -> VariableOrdering:
    n = cnf_or_n.n if isinstance(cnf_or_n, MonotoneCnf) else cnf_or_n
    if ord is None:
        return VariableOrdering.identity(n)
    if ord.n != n:
        raise ValueError(f"ordering over {ord.n} variables, expected {n}")
    return ord


def prefix_mask(ord: VariableOrdering, i: int) -> int:
    """Mask of the variables in the first ``i`` positions of ``ord``."""
    return mask_of(ord.order[:i])


def minimize(cnf: MonotoneCnf) -> MonotoneCnf:
    """Return the prime CNF of the same function (drop non-minimal clauses)."""
    return MonotoneCnf.from_masks(cnf.n, minimal_masks(cnf.masks))


def is_prime(cnf: MonotoneCnf) -> bool:
    return len(minimal_masks(cnf.masks)) == len(cnf.masks)


def assignment_mask(w: Sequence[int]) -> int:
    m = 0
    for j, b in enumerate(w):
        if b:
            m |= 1 << j
    return m


def mask_assignment(mask: int, n: int) -> Assignment:
    return tuple((mask >> j) & 1 for j in range(n))


def evaluate_mask(masks: Iterable[int], w: int) -> bool:
    return all(m & w for m in masks)


def evaluate(cnf: MonotoneCnf, w: Sequence[int]) -> bool:
    if len(w) != cnf.n:
        raise ValueError(f"assignment of length {len(w)} for n={cnf.n}")
    return evaluate_mask(cnf.masks, assignment_mask(w))


def restrict(cnf: MonotoneCnf, ord: VariableOrdering | None, i: int) -> MonotoneCnf:
    """φ_i: fix every variable at position > i to 1.

    Clauses touching a later variable become true and vanish; the rest are
    exactly the clauses living inside the first ``i`` positions.
    """
    ord = _ordering(cnf, ord)
    if not 0 <= i <= cnf.n:
        raise ValueError(f"i={i} outside 0..{cnf.n}")
    pre = prefix_mask(ord, i)
    return MonotoneCnf.from_masks(cnf.n, [m for m in cnf.masks if m & ~pre == 0])


def max_position(mask: int, ord: VariableOrdering) -> int:
    pos = ord._positions
    return max(pos[v] for v in vars_of(mask))


def delta(cnf: MonotoneCnf, ord: VariableOrdering | None, i: int) -> MonotoneCnf:
    """Δ^i: the clauses whose last variable (under ``ord``) sits at position i."""
    ord = _ordering(cnf, ord)
    if not 1 <= i <= cnf.n:
        raise ValueError(f"i={i} outside 1..{cnf.n}")
    return MonotoneCnf.from_masks(cnf.n, [m for m in cnf.masks if max_position(m, ord) == i])


def delta_profile(cnf: MonotoneCnf, ord: VariableOrdering | None = None) -> list[int]:
    """``[|Δ^1|, ..., |Δ^n|]`` under ``ord``."""
    ord = _ordering(cnf, ord)
    prof = [0] * cnf.n
    for m in cnf.masks:
        prof[max_position(m, ord) - 1] += 1
    return prof


def delta_conditioned(delta_i: MonotoneCnf, t: Iterable[int], i: int,
                      ord: VariableOrdering | None = None) -> MonotoneCnf | ConstantZero:
    """Δ^i[t]: strip x_i from each clause of Δ^i, keep those missing t_{i-1}.

    Returns :data:`ZERO` when a stripped clause is empty.
    """
    ord = _ordering(delta_i, ord)
    xi = 1 << (ord[i] - 1)
    t_prev = mask_of(t) & prefix_mask(ord, i - 1)
    out = []
    for d in delta_i.masks:
        if not d & xi:
            raise ValueError(f"clause {term_of(d)} of Δ^{i} lacks x_{i}")
        c = d ^ xi
        if c & t_prev:
            continue
        if c == 0:
            return ZERO
        out.append(c)
    return MonotoneCnf.from_masks(delta_i.n, out)


def term_key(t: Iterable[int], n: int, ord: VariableOrdering | None = None) -> int:
    """Σ 2^(n-j) over the positions j of t's variables (exact, unbounded)."""
    ord = _ordering(n, ord)
    return sum(1 << (n - ord.position(v)) for v in t)


def is_implicant(cnf: MonotoneCnf, t: Iterable[int]) -> bool:
    return evaluate_mask(cnf.masks, mask_of(t))


def is_prime_implicant(cnf: MonotoneCnf, t: Iterable[int]) -> bool:
    """Implicant where dropping any single variable breaks every-clause hitting.

    For monotone functions single-variable removal is enough.
    """
    return is_pi_mask(cnf.masks, mask_of(t))


def is_pi_mask(masks: Sequence[int], t: int) -> bool:
    needed = t
    for c in masks:
        hit = c & t
        if not hit:
            return False
        if hit & (hit - 1) == 0:
            needed &= ~hit
    return needed == 0


def compact(cnf: MonotoneCnf) -> tuple[MonotoneCnf, tuple[int, ...]]:
    """Relabel the used variables to ``1..n'`` preserving their relative order.

    Returns the compacted CNF and ``old``, where ``old[k-1]`` is the original
    index of new variable ``k``.
    """
    used = sorted(cnf.variables)
    new = {v: k + 1 for k, v in enumerate(used)}
    clauses = [[new[v] for v in c] for c in cnf.clauses]
    return MonotoneCnf(len(used), clauses), tuple(used)


def complement_mask(w: int, n: int) -> int:
    return w ^ ((1 << n) - 1)
