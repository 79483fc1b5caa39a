"""Duality testing for pairs of monotone CNFs (Fredman-Khachiyan A and B).

φ and ψ represent monotone f and g; the pair is dual when f = g^d. A
witness of non-duality is an assignment w with f(w) = g(w̄). Every witness
returned here has been checked by evaluation.

Inside the recursion a pair is a tuple of clause masks per side (sorted, so
clause indices are canonical). A side may be the constant 0, stored as the
single empty clause ``(0,)``; the empty tuple is the constant 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

from scipy.optimize import brentq

from .cnf import MonotoneCnf, evaluate_mask, iter_bits, minimal_masks, popcount, term_of
from .enumeration import berge_expand
from .oracle import MAX_N


class InternalError(RuntimeError):
    """A witness construction failed verification."""


class CertificateError(ValueError):
    """Malformed certificate text."""


# -- data types -----------------------------------------------------------------

@dataclass(frozen=True)
class DualPair:
    """Two CNFs over one universe; both sides are minimized on construction."""

    phi: MonotoneCnf
    psi: MonotoneCnf

    def __post_init__(self):
        if self.phi.n != self.psi.n:
            raise ValueError(f"universe mismatch: {self.phi.n} vs {self.psi.n}")
        object.__setattr__(self, "phi", MonotoneCnf.from_masks(self.phi.n, minimal_masks(self.phi.masks)))
        object.__setattr__(self, "psi", MonotoneCnf.from_masks(self.psi.n, minimal_masks(self.psi.masks)))

    @property
    def n(self) -> int:
        return self.phi.n

    @property
    def volume(self) -> int:
        return len(self.phi) * len(self.psi)


@dataclass(frozen=True)
class Witness:
    w: tuple[int, ...]

    @classmethod
    def from_mask(cls, mask: int, n: int) -> "Witness":
        return cls(tuple((mask >> j) & 1 for j in range(n)))

    @property
    def mask(self) -> int:
        return sum(1 << j for j, b in enumerate(self.w) if b)

    @property
    def bits(self) -> str:
        return "".join(str(b) for b in self.w)

    def verifies(self, pair: DualPair) -> bool:
        full = (1 << pair.n) - 1
        m = self.mask
        return evaluate_mask(pair.phi.masks, m) == evaluate_mask(pair.psi.masks, m ^ full)


@dataclass(frozen=True)
class ChiValue:
    v: float
    chi: float


@dataclass(frozen=True)
class RecursionNode:
    phi: tuple[frozenset, ...]
    psi: tuple[frozenset, ...]
    volume: int
    path: tuple  # move labels from the root


@dataclass
class MoveStats:
    """Per-path move counters, maximised over every node explored."""

    nodes: int = 0
    max_a: int = 0
    max_b: int = 0
    max_c: int = 0
    max_left: int = 0  # algorithm A: high-frequency moves
    max_right: int = 0
    volume_violations: list = field(default_factory=list)
    min_split_margin: float = math.inf  # split frequency * log2(|φ|+|ψ|), algorithm A


@dataclass
class DualityResult:
    dual: bool
    witness: Witness | None = None
    certificate: "Certificate | None" = None
    stats: MoveStats | None = None
    path: list[RecursionNode] = field(default_factory=list)

    def __bool__(self):
        return self.dual


# -- internal pair helpers --------------------------------------------------------

class _Inst(NamedTuple):
    phi: tuple[int, ...]
    psi: tuple[int, ...]

    @property
    def volume(self):
        return len(self.phi) * len(self.psi)

    def swapped(self):
        return _Inst(self.psi, self.phi)


def _norm(masks) -> tuple[int, ...]:
    masks = list(masks)
    if 0 in masks:
        return (0,)
    return tuple(sorted(minimal_masks(masks)))


def _inst(phi, psi) -> _Inst:
    return _Inst(_norm(phi), _norm(psi))


def _is_witness(inst: _Inst, w: int, full: int) -> bool:
    return evaluate_mask(inst.phi, w) == evaluate_mask(inst.psi, w ^ full)


def _union(masks) -> int:
    u = 0
    for m in masks:
        u |= m
    return u


def _node(inst: _Inst, path) -> RecursionNode:
    return RecursionNode(tuple(term_of(m) for m in inst.phi), tuple(term_of(m) for m in inst.psi),
                         inst.volume, tuple(path))


class _Ctx:
    def __init__(self, n: int):
        self.n = n
        self.full = (1 << n) - 1

    def comp(self, w):
        return w ^ self.full

    def check(self, inst, w):
        return w is not None and _is_witness(inst, w, self.full)

    def first_valid(self, inst, candidates, what):
        for w in candidates:
            if self.check(inst, w):
                return w
        return self.fallback(inst, what)

    def fallback(self, inst, what):
        if self.n <= MAX_N:
            w = self._brute(inst)
            if w is not None:
                return w
        raise InternalError(f"{what}: no verified witness")

    def _brute(self, inst):
        for w in range(1 << self.n):
            if _is_witness(inst, w, self.full):
                return w
        return None


# -- witness constructions ----------------------------------------------------

def _intersection_witness(ctx: _Ctx, inst: _Inst):
    for d in inst.psi:
        for c in inst.phi:
            if not c & d:
                return ctx.first_valid(inst, [ctx.comp(c)], "intersection")
    return None


def _varset_witness(ctx: _Ctx, inst: _Inst):
    vp, vq = _union(inst.phi), _union(inst.psi)
    if vp == vq:
        return None
    extra = vp & ~vq
    if extra:
        x = extra & -extra
        c = next(m for m in inst.phi if m & x)
        base = ctx.comp(c)
        return ctx.first_valid(inst, [base | x, base], "variable set")
    w = _varset_witness(ctx, inst.swapped())
    return ctx.first_valid(inst, [ctx.comp(w)], "variable set")


def _size_witness(ctx: _Ctx, inst: _Inst, swapped=False):
    for c in inst.phi:
        if popcount(c) > len(inst.psi):
            for x in iter_bits(c):
                if not any(c & d == x for d in inst.psi):
                    return ctx.first_valid(inst, [ctx.comp(c ^ x)], "clause size")
            return ctx.fallback(inst, "clause size")
    if not swapped:
        w = _size_witness(ctx, inst.swapped(), True)
        if w is not None:
            return ctx.first_valid(inst, [ctx.comp(w)], "clause size")
    return None


def _weight(inst: _Inst) -> Fraction:
    return sum((Fraction(1, 2 ** popcount(c)) for c in inst.phi + inst.psi), Fraction(0))


def _weight_witness(ctx: _Ctx, inst: _Inst):
    """Conditional expectations: fix variables keeping the expected number
    of falsified clauses (φ under w, ψ under w̄) below one."""
    if _weight(inst) >= 1:
        return None
    ones = zeros = 0

    def potential():
        tot = Fraction(0)
        for c in inst.phi:
            if not c & ones:
                tot += Fraction(1, 2 ** popcount(c & ~zeros))
        for d in inst.psi:
            if not d & zeros:
                tot += Fraction(1, 2 ** popcount(d & ~ones))
        return tot

    for x in iter_bits(_union(inst.phi + inst.psi)):
        zeros |= x
        p0 = potential()
        zeros ^= x
        ones |= x
        p1 = potential()
        ones ^= x
        if p0 <= p1:
            zeros |= x
        else:
            ones |= x
    return ctx.first_valid(inst, [ones], "weight")


def _small_test(ctx: _Ctx, inst: _Inst):
    """Exact decision when one side has at most two clauses.

    Expands the dual of the small side and compares it with the other side;
    on mismatch the smallest differing clause gives the witness.
    """
    if len(inst.phi) <= len(inst.psi):
        dual, other, small_is_phi = _norm(berge_expand(inst.phi)), inst.psi, True
    else:
        dual, other, small_is_phi = _norm(berge_expand(inst.psi)), inst.phi, False
    if set(dual) == set(other):
        return None
    e = min(set(dual) ^ set(other), key=lambda m: (popcount(m), m))
    w = e if small_is_phi else ctx.comp(e)
    return ctx.first_valid(inst, [w], "leaf test")


def _conditions_A(ctx, inst):
    for check in (_varset_witness, _size_witness, _weight_witness):
        w = check(ctx, inst)
        if w is not None:
            return w
    return None


def _split(inst: _Inst, x: int):
    phi0 = [c ^ x for c in inst.phi if c & x]
    phi1 = [c for c in inst.phi if not c & x]
    psi0 = [d ^ x for d in inst.psi if d & x]
    psi1 = [d for d in inst.psi if not d & x]
    return phi0, phi1, psi0, psi1


def _frequencies(inst: _Inst):
    """(x, ε^φ_x, ε^ψ_x) maximising max(ε^φ, ε^ψ); smallest variable on ties."""
    best = None
    for x in iter_bits(_union(inst.phi) | _union(inst.psi)):
        ep = sum(1 for c in inst.phi if c & x) / len(inst.phi) if inst.phi else 0.0
        eq = sum(1 for d in inst.psi if d & x) / len(inst.psi) if inst.psi else 0.0
        key = max(ep, eq)
        if best is None or key > best[0]:
            best = (key, x, ep, eq)
    return best[1], best[2], best[3]


# -- public checks ----------------------------------------------------------------

def _root(pair: DualPair) -> tuple[_Ctx, _Inst]:
    return _Ctx(pair.n), _inst(pair.phi.masks, pair.psi.masks)


def _witness(pair: DualPair, w: int) -> Witness:
    wit = Witness.from_mask(w, pair.n)
    if not wit.verifies(pair):
        raise InternalError(f"witness {wit.bits} does not verify")
    return wit


def precheck_intersections(pair: DualPair) -> Witness | None:
    """Witness if some clause of φ misses some clause of ψ, else None."""
    ctx, inst = _root(pair)
    w = _intersection_witness(ctx, inst)
    return None if w is None else _witness(pair, w)


def check_conditions_A(pair: DualPair) -> Witness | None:
    """Variable sets, clause sizes and the weight inequality; None when all hold."""
    ctx, inst = _root(pair)
    w = _conditions_A(ctx, inst)
    return None if w is None else _witness(pair, w)


def check_dual_A(pair: DualPair, stats: MoveStats | None = None) -> DualityResult:
    """Algorithm A: split on a frequent variable, recurse on two pairs."""
    ctx, inst = _root(pair)
    stats = stats if stats is not None else MoveStats()
    w = _intersection_witness(ctx, inst)
    if w is None:
        w = _run_A(ctx, inst, stats, 0, 0)
    if w is None:
        return DualityResult(True, stats=stats)
    return DualityResult(False, _witness(pair, w), stats=stats)


def _run_A(ctx: _Ctx, inst: _Inst, stats: MoveStats, left: int, right: int):
    stats.nodes += 1
    stats.max_left = max(stats.max_left, left)
    stats.max_right = max(stats.max_right, right)
    w = _conditions_A(ctx, inst)
    if w is not None:
        return w
    if inst.volume <= 1:
        return _small_test(ctx, inst)
    x, ep, eq = _frequencies(inst)
    stats.min_split_margin = min(stats.min_split_margin,
                                 max(ep, eq) * math.log2(len(inst.phi) + len(inst.psi)))
    if eq > ep:
        w = _run_A_split(ctx, inst.swapped(), x, stats, left, right)
        return None if w is None else ctx.first_valid(inst, [ctx.comp(w)], "swap")
    return _run_A_split(ctx, inst, x, stats, left, right)


def _run_A_split(ctx, inst, x, stats, left, right):
    phi0, phi1, psi0, psi1 = _split(inst, x)
    high = _inst(phi1, psi0 + psi1)
    w = _run_A(ctx, high, stats, left + 1, right)
    if w is not None:
        return ctx.first_valid(inst, [w | x, w & ~x], "lift A.1")
    low = _inst(psi1, phi0 + phi1)
    w = _run_A(ctx, low, stats, left, right + 1)
    if w is not None:
        cw = ctx.comp(w)
        return ctx.first_valid(inst, [cw & ~x, cw | x], "lift A.2")
    return None


@lru_cache(maxsize=None)
def _chi(v: float) -> float:
    if v < 1:
        raise ValueError("chi is defined for v >= 1")
    if v == 1:
        return 1.0
    target = math.log(v)
    hi = max(math.e, target + 1.0)
    return brentq(lambda x: x * math.log(x) - target, 1.0, hi, xtol=1e-15, rtol=1e-15, maxiter=500)


def chi(v: float) -> ChiValue:
    """Solve χ^χ = v for χ ≥ 1."""
    return ChiValue(v, _chi(float(v)))


def lcheck_B(pair) -> bool:
    """True (leaf) when V(φ) ≠ V(ψ), a clause is too long, or a side has ≤ 2 clauses."""
    inst = _inst(pair.phi.masks, pair.psi.masks) if isinstance(pair, DualPair) else pair
    return _lcheck(inst)


def _lcheck(inst: _Inst) -> bool:
    if _union(inst.phi) != _union(inst.psi):
        return True
    if any(popcount(c) > len(inst.psi) for c in inst.phi):
        return True
    if any(popcount(d) > len(inst.phi) for d in inst.psi):
        return True
    return min(len(inst.phi), len(inst.psi)) <= 2


def _leaf_test(ctx: _Ctx, inst: _Inst):
    for check in (_varset_witness, _size_witness):
        w = check(ctx, inst)
        if w is not None:
            return w
    if min(len(inst.phi), len(inst.psi)) <= 2:
        return _small_test(ctx, inst)
    # not an lcheck leaf (only reachable through the intersection test)
    return ctx.fallback(inst, "leaf test")


def leaf_test_B(pair: DualPair) -> Witness | None:
    """Exact test at an lcheck leaf; None when the pair is dual."""
    ctx, inst = _root(pair)
    if not _lcheck(inst) and _intersection_witness(ctx, inst) is None:
        raise ValueError("pair is not a leaf of algorithm B")
    w = _intersection_witness(ctx, inst)
    if w is None:
        w = _leaf_test(ctx, inst)
    return None if w is None else _witness(pair, w)


# -- algorithm B tree -------------------------------------------------------------

class _Child(NamedTuple):
    label: tuple  # ("a",) / ("b", j) / ("c", bit)
    inst: _Inst
    lift: object  # callable(sub-witness) -> candidate list


def _is_leaf(ctx: _Ctx, inst: _Inst, root: bool) -> bool:
    if _lcheck(inst):
        return True
    return root and _intersection_witness(ctx, inst) is not None


def _expand(ctx: _Ctx, inst: _Inst):
    """Rule name and children of a non-leaf node, in canonical order."""
    x, ep, eq = _frequencies(inst)
    eps = 1.0 / _chi(float(inst.volume))
    phi0, phi1, psi0, psi1 = _split(inst, x)
    comp = ctx.comp

    def lift_high(w):
        return [w | x, w & ~x]

    def lift_low(w):
        cw = comp(w)
        return [cw & ~x, cw | x]

    a_high = _inst(phi1, psi0 + psi1)
    a_low = _inst(psi1, phi0 + phi1)
    if ep <= eps:
        kids = [_Child(("a",), a_high, lift_high)]
        for j, s in enumerate(_norm(psi0), start=1):
            sub = _inst([c for c in phi0 if not c & s], [d & ~s for d in psi1])
            kids.append(_Child(("b", j), sub, lambda w, s=s: [(w | s) & ~x, w | s | x]))
        return "i", kids
    if eq <= eps:
        kids = [_Child(("a",), a_low, lift_low)]
        for j, s in enumerate(_norm(phi0), start=1):
            sub = _inst([d for d in psi0 if not d & s], [c & ~s for c in phi1])
            kids.append(_Child(("b", j), sub, lambda w, s=s: [comp(w | s) | x, comp(w | s) & ~x]))
        return "ii", kids
    return "iii", [_Child(("c", 0), a_high, lift_high), _Child(("c", 1), a_low, lift_low)]


def _record(stats: MoveStats, counts, parent: _Inst, child: _Inst, label, vstar):
    a, b, c = counts
    stats.max_a = max(stats.max_a, a)
    stats.max_b = max(stats.max_b, b)
    stats.max_c = max(stats.max_c, c)
    vp, vc = parent.volume, child.volume
    kind = label[0]
    ok = True
    if kind == "a":
        ok = vc < vp
    elif kind == "b":
        ok = 2 * vc < vp
    elif kind == "c":
        ok = vc <= (1 - 1 / _chi(float(vstar))) * vp + 1e-9
    if not ok:
        stats.volume_violations.append((label, vp, vc))


def check_dual_B(pair: DualPair, stats: MoveStats | None = None) -> DualityResult:
    """Algorithm B, depth first, first child first.

    On the first failing leaf returns the verified witness together with the
    compressed path certificate leading to it.
    """
    ctx, root = _root(pair)
    stats = stats if stats is not None else MoveStats()
    vstar = root.volume
    found = _search_B(ctx, root, stats, vstar, [], [root], (0, 0, 0), True)
    if found is None:
        return DualityResult(True, stats=stats)
    w, labels, insts = found
    cert = Certificate.from_labels(labels, vstar)
    path = [_node(inst, labels[:i]) for i, inst in enumerate(insts)]
    return DualityResult(False, _witness(pair, w), cert, stats, path)


def _search_B(ctx, inst, stats, vstar, labels, insts, counts, root):
    stats.nodes += 1
    if _is_leaf(ctx, inst, root):
        w = _intersection_witness(ctx, inst) if root else None
        if w is None:
            w = _leaf_test(ctx, inst)
        return None if w is None else (w, list(labels), list(insts))
    _, kids = _expand(ctx, inst)
    for kid in kids:
        a, b, c = counts
        kind = kid.label[0]
        nxt = (a + (kind == "a"), b + (kind == "b"), c + (kind == "c"))
        _record(stats, nxt, inst, kid.inst, kid.label, vstar)
        labels.append(kid.label)
        insts.append(kid.inst)
        found = _search_B(ctx, kid.inst, stats, vstar, labels, insts, nxt, False)
        labels.pop()
        insts.pop()
        if found is not None:
            w, lab, path = found
            return ctx.first_valid(inst, kid.lift(w), f"lift {kid.label}"), lab, path
    return None


# -- certificates -----------------------------------------------------------------

@dataclass(frozen=True)
class ACBlock:
    alpha: int  # number of a-moves
    gamma: tuple[int, ...]  # c-labels in order


@dataclass(frozen=True)
class BJBlock:
    j: int  # 1-based index of the chosen b-child


@dataclass(frozen=True)
class Certificate:
    """Compressed root-to-leaf path of algorithm B's recursion tree."""

    blocks: tuple
    volume: int  # v* of the root pair

    def __post_init__(self):
        bl = self.blocks
        if not bl or len(bl) % 2 == 0:
            raise CertificateError("blocks must alternate AC (BJ AC)*")
        for i, b in enumerate(bl):
            want = ACBlock if i % 2 == 0 else BJBlock
            if not isinstance(b, want):
                raise CertificateError(f"block {i} should be {want.__name__}")

    @classmethod
    def from_labels(cls, labels, volume: int) -> "Certificate":
        blocks = []
        alpha, gamma = 0, []
        for lab in labels:
            if lab[0] == "a":
                alpha += 1
            elif lab[0] == "c":
                gamma.append(lab[1])
            else:
                blocks.append(ACBlock(alpha, tuple(gamma)))
                blocks.append(BJBlock(lab[1]))
                alpha, gamma = 0, []
        blocks.append(ACBlock(alpha, tuple(gamma)))
        return cls(tuple(blocks), volume)

    @property
    def b_count(self) -> int:
        return len(self.blocks) // 2

    @property
    def c_count(self) -> int:
        return sum(len(b.gamma) for b in self.blocks[::2])

    @property
    def a_count(self) -> int:
        return sum(b.alpha for b in self.blocks[::2])

    @property
    def bit_length(self) -> int:
        return certificate_bit_length(self)

    def to_text(self) -> str:
        lines = [f"seq* {self.volume}"]
        for b in self.blocks:
            if isinstance(b, ACBlock):
                lines.append(f"A:{b.alpha}")
                lines.append("G:" + "".join(str(g) for g in b.gamma))
            else:
                lines.append(f"B:{b.j}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Certificate":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        if not lines or not lines[0].startswith("seq* "):
            raise CertificateError("missing 'seq* <volume>' header")
        try:
            volume = int(lines[0].split()[1])
        except (IndexError, ValueError):
            raise CertificateError("bad header") from None
        blocks = []
        i = 1
        while i < len(lines):
            tag, _, val = lines[i].partition(":")
            if tag == "A":
                if i + 1 >= len(lines) or not lines[i + 1].startswith("G:"):
                    raise CertificateError(f"line {i + 1}: A-block without G-block")
                g = lines[i + 1][2:]
                if any(ch not in "01" for ch in g) or not val.isdigit():
                    raise CertificateError(f"line {i + 1}: bad ac-block")
                blocks.append(ACBlock(int(val), tuple(int(ch) for ch in g)))
                i += 2
            elif tag == "B":
                if not val.isdigit() or int(val) < 1:
                    raise CertificateError(f"line {i + 1}: bad j-label {val!r}")
                blocks.append(BJBlock(int(val)))
                i += 1
            else:
                raise CertificateError(f"line {i + 1}: unknown block {lines[i]!r}")
        return cls(tuple(blocks), volume)


def certificate_bit_length(cert: Certificate) -> int:
    """Accounted size: α in binary (≥1 bit), 1 bit per γ-label, ⌈log2 v*⌉ per j-label."""
    jbits = math.ceil(math.log2(cert.volume)) if cert.volume > 1 else 0
    total = 0
    for b in cert.blocks:
        if isinstance(b, ACBlock):
            total += max(1, b.alpha.bit_length()) + len(b.gamma)
        else:
            total += jbits
    return total


@dataclass
class ReplayResult:
    status: str  # "confirmed", "invalid" or "refuted"
    witness: Witness | None = None
    path: list[RecursionNode] = field(default_factory=list)
    reason: str = ""

    @property
    def confirmed(self) -> bool:
        return self.status == "confirmed"


def replay_certificate(pair: DualPair, cert: Certificate) -> ReplayResult:
    """Re-walk the path a certificate describes and test the leaf it ends on.

    ``invalid`` means the blocks disagree with the deterministic rule choice
    (or run past a leaf); ``refuted`` means the path is fine but its leaf is
    a dual pair.
    """
    ctx, inst = _root(pair)
    vstar = inst.volume
    if cert.volume != vstar:
        return ReplayResult("invalid", reason=f"certificate volume {cert.volume} != {vstar}")
    insts = [inst]
    labels: list = []
    lifts = []

    def step(kid):
        labels.append(kid.label)
        lifts.append(kid.lift)
        insts.append(kid.inst)
        return kid.inst

    root = True
    for block in cert.blocks:
        if isinstance(block, ACBlock):
            p = q = 0
            while p < block.alpha or q < len(block.gamma):
                if _is_leaf(ctx, inst, root):
                    return ReplayResult("invalid", reason="ac-block continues past a leaf")
                rule, kids = _expand(ctx, inst)
                if rule in ("i", "ii") and p < block.alpha:
                    inst = step(kids[0])
                    p += 1
                elif rule == "iii" and q < len(block.gamma):
                    inst = step(kids[block.gamma[q]])
                    q += 1
                else:
                    return ReplayResult("invalid", reason=f"rule ({rule}) does not match the ac-block")
                root = False
        else:
            if _is_leaf(ctx, inst, root):
                return ReplayResult("invalid", reason="bj-block at a leaf")
            rule, kids = _expand(ctx, inst)
            if rule == "iii" or block.j >= len(kids):
                return ReplayResult("invalid", reason=f"no b-child {block.j} under rule ({rule})")
            inst = step(kids[block.j])
            root = False
    path = [_node(x, labels[:i]) for i, x in enumerate(insts)]
    if not _is_leaf(ctx, inst, root):
        return ReplayResult("invalid", path=path, reason="path ends at an inner node")
    w = _intersection_witness(ctx, inst) if root else None
    if w is None:
        w = _leaf_test(ctx, inst)
    if w is None:
        return ReplayResult("refuted", path=path, reason="leaf pair is dual")
    for parent, lift in zip(reversed(insts[:-1]), reversed(lifts)):
        w = ctx.first_valid(parent, lift(w), "replay lift")
    return ReplayResult("confirmed", _witness(pair, w), path)
