"""Structural classes that make ordered enumeration polynomial-delay.

Degeneracy and smallest-last orderings, read numbers, GYO reduction
(alpha-acyclicity), variable/clause incidence graphs and tree decompositions,
plus the orderings each of these certifies.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import networkx as nx

from .cnf import MonotoneCnf, VariableOrdering, delta_profile, mask_of, popcount, vars_of


# -- degeneracy and read number ---------------------------------------------

@dataclass(frozen=True)
class DegeneracyReport:
    ord: VariableOrdering
    k: int
    profile: tuple[int, ...]


def smallest_last_ordering(cnf: MonotoneCnf) -> DegeneracyReport:
    """Fill positions n, n-1, ..., 1, each time with the variable whose |Δ| is smallest.

    Ties go to the smallest variable index.
    """
    n = cnf.n
    live = set(range(len(cnf.masks)))
    occ = {v: set() for v in range(1, n + 1)}
    for idx, m in enumerate(cnf.masks):
        for v in vars_of(m):
            occ[v].add(idx)
    unplaced = set(range(1, n + 1))
    order = [0] * n
    profile = [0] * n
    for pos in range(n, 0, -1):
        v = min(unplaced, key=lambda u: (len(occ[u] & live), u))
        hit = occ[v] & live
        profile[pos - 1] = len(hit)
        order[pos - 1] = v
        live -= hit
        unplaced.remove(v)
    return DegeneracyReport(VariableOrdering(tuple(order)), max(profile, default=0), tuple(profile))


def read_number(cnf: MonotoneCnf) -> int:
    """Largest number of clauses any single variable occurs in."""
    counts = [0] * (cnf.n + 1)
    for m in cnf.masks:
        for v in vars_of(m):
            counts[v] += 1
    return max(counts, default=0)


# -- GYO reduction ------------------------------------------------------------

@dataclass(frozen=True)
class GyoStep:
    """One reduction step.

    ``kind == "var"``: remove ``var`` from clause ``clause``.
    ``kind == "clause"``: remove clause ``clause`` (contained in ``by``).
    Clause numbers are 1-based indices into the input CNF. When replaying a
    hand-written trace, ``clause``/``by`` may be left as ``None``.
    """

    kind: str
    var: int | None = None
    clause: int | None = None
    by: int | None = None

    @classmethod
    def remove_var(cls, var, clause=None):
        return cls("var", var=var, clause=clause)

    @classmethod
    def remove_clause(cls, clause, by=None):
        return cls("clause", clause=clause, by=by)


@dataclass(frozen=True)
class GyoTrace:
    steps: tuple[GyoStep, ...]
    success: bool


class _GyoState:
    def __init__(self, cnf: MonotoneCnf):
        self.sets = {i + 1: set(vars_of(m)) for i, m in enumerate(cnf.masks)}
        self.occ: dict[int, set[int]] = {}
        for ci, s in self.sets.items():
            for v in s:
                self.occ.setdefault(v, set()).add(ci)

    def remove_var(self, v, ci):
        self.sets[ci].discard(v)
        self.occ[v].discard(ci)
        if not self.occ[v]:
            del self.occ[v]

    def remove_clause(self, ci):
        for v in self.sets.pop(ci):
            self.occ[v].discard(ci)
            if not self.occ[v]:
                del self.occ[v]

    def subsumer(self, ci):
        """First live clause (input order) other than ``ci`` containing it."""
        s = self.sets[ci]
        if not s:
            others = [cj for cj in self.sets if cj != ci]
            return min(others) if others else None
        cands = None
        for v in sorted(s, key=lambda u: len(self.occ[u])):
            cands = set(self.occ[v]) if cands is None else cands & self.occ[v]
        cands.discard(ci)
        return min(cands) if cands else None

    @property
    def reduced(self):
        return not self.sets or (len(self.sets) == 1 and not next(iter(self.sets.values())))


def gyo_reduce(cnf: MonotoneCnf) -> GyoTrace:
    """Run the GYO reduction with a fixed schedule.

    Rule 1 (drop a variable occurring in one clause) always goes first, on
    the lowest such variable; otherwise rule 2 drops the first contained
    clause in input order. Succeeds iff the CNF reduces to a single empty
    clause (or had no clauses to begin with).
    """
    st = _GyoState(cnf)
    steps = []
    while True:
        lonely = [v for v, cs in st.occ.items() if len(cs) == 1]
        if lonely:
            v = min(lonely)
            ci = next(iter(st.occ[v]))
            st.remove_var(v, ci)
            steps.append(GyoStep.remove_var(v, ci))
            continue
        for ci in sorted(st.sets):
            by = st.subsumer(ci)
            if by is not None:
                st.remove_clause(ci)
                steps.append(GyoStep.remove_clause(ci, by))
                break
        else:
            break
    return GyoTrace(tuple(steps), st.reduced)


def replay_gyo(cnf: MonotoneCnf, steps: Iterable[GyoStep]) -> bool:
    """Check that ``steps`` is a legal GYO reduction of ``cnf`` to 0."""
    st = _GyoState(cnf)
    for s in steps:
        if s.kind == "var":
            cs = st.occ.get(s.var, set())
            if len(cs) != 1:
                return False
            ci = next(iter(cs))
            if s.clause is not None and s.clause != ci:
                return False
            st.remove_var(s.var, ci)
        elif s.kind == "clause":
            if s.clause not in st.sets:
                return False
            if s.by is None:
                if st.subsumer(s.clause) is None:
                    return False
            elif s.by == s.clause or s.by not in st.sets or not st.sets[s.clause] <= st.sets[s.by]:
                return False
            st.remove_clause(s.clause)
        else:
            return False
    return st.reduced


def is_alpha_acyclic(cnf: MonotoneCnf) -> bool:
    return gyo_reduce(cnf).success


def ordering_from_gyo(trace: GyoTrace, n: int) -> VariableOrdering:
    """Variables in reverse order of their removal; unused variables go first."""
    if not trace.success:
        raise ValueError("GYO reduction failed; the CNF is not alpha-acyclic")
    removed = [s.var for s in trace.steps if s.kind == "var"]
    rest = [v for v in range(1, n + 1) if v not in set(removed)]
    return VariableOrdering(tuple(rest + removed[::-1]))


# -- incidence graphs and tree decompositions --------------------------------

def clause_vertex(idx: int) -> str:
    """Name of the vertex for clause number ``idx`` (1-based)."""
    return f"c{idx}"


def _vertex_key(v):
    return (1, int(v[1:])) if isinstance(v, str) else (0, v)


@dataclass
class IncidenceGraph:
    """Bipartite graph with variable vertices 1..n and one vertex per clause."""

    graph: nx.Graph
    n: int
    m: int

    @property
    def variable_vertices(self):
        return list(range(1, self.n + 1))

    @property
    def clause_vertices(self):
        return [clause_vertex(i) for i in range(1, self.m + 1)]


def incidence_graph(cnf: MonotoneCnf) -> IncidenceGraph:
    g = nx.Graph()
    g.add_nodes_from(range(1, cnf.n + 1), kind="var")
    for idx, m in enumerate(cnf.masks, start=1):
        y = clause_vertex(idx)
        g.add_node(y, kind="clause")
        g.add_edges_from((v, y) for v in vars_of(m))
    return IncidenceGraph(g, cnf.n, len(cnf.masks))


@dataclass
class TreeDecomposition:
    tree: nx.Graph
    bags: dict[int, frozenset]
    kind: str = "II"  # "I": variables only; "II": variables and clause vertices

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags.values()), default=0) - 1


def validate_td(td: TreeDecomposition, target) -> bool:
    """Check the three decomposition conditions against a CNF or incidence graph.

    A type-I decomposition of a CNF must cover V(φ) and hold every clause in
    some bag; otherwise the target is the incidence graph.
    """
    tree = td.tree
    if set(tree.nodes) != set(td.bags) or not tree.nodes or not nx.is_tree(tree):
        return False
    if isinstance(target, MonotoneCnf) and td.kind == "I":
        vertices = set(target.variables)
        edges = [set(vars_of(m)) for m in target.masks]
    else:
        if isinstance(target, MonotoneCnf):
            target = incidence_graph(target)
        g = target.graph if isinstance(target, IncidenceGraph) else target
        vertices = set(g.nodes)
        edges = [set(e) for e in g.edges]
    union = set().union(*td.bags.values())
    if union != vertices:
        return False
    for e in edges:
        if not any(e <= b for b in td.bags.values()):
            return False
    for v in vertices:
        holding = [w for w, b in td.bags.items() if v in b]
        if not nx.is_connected(tree.subgraph(holding)):
            return False
    return True


def td1_to_td2(td: TreeDecomposition, cnf: MonotoneCnf) -> TreeDecomposition:
    """Turn a type-I decomposition into a type-II one.

    Every clause vertex joins each bag that holds all of the clause's
    variables.
    """
    if td.kind != "I" or not validate_td(td, cnf):
        raise ValueError("not a valid type-I tree decomposition of the CNF")
    bags = {}
    for w, b in td.bags.items():
        extra = {clause_vertex(i) for i, m in enumerate(cnf.masks, start=1) if set(vars_of(m)) <= b}
        bags[w] = frozenset(b | extra)
    out = TreeDecomposition(td.tree.copy(), bags, "II")
    assert validate_td(out, cnf)
    return out


def _min_fill_order(adj: dict) -> list:
    adj = {v: set(ns) for v, ns in adj.items()}
    order = []
    while adj:
        def fill(v):
            ns = list(adj[v])
            return sum(1 for i in range(len(ns)) for j in range(i + 1, len(ns)) if ns[j] not in adj[ns[i]])
        v = min(adj, key=lambda u: (fill(u), _vertex_key(u)))
        ns = adj.pop(v)
        for a in ns:
            adj[a].discard(v)
            adj[a] |= ns - {a}
        order.append(v)
    return order


def heuristic_td(graph) -> TreeDecomposition:
    """Type-II decomposition from a min-fill elimination order.

    Accepts an :class:`IncidenceGraph`, a :class:`MonotoneCnf` or a plain
    networkx graph.
    """
    if isinstance(graph, MonotoneCnf):
        graph = incidence_graph(graph)
    g = graph.graph if isinstance(graph, IncidenceGraph) else graph
    adj = {v: set(g.neighbors(v)) for v in g.nodes}
    if not adj:
        t = nx.Graph()
        t.add_node(0)
        return TreeDecomposition(t, {0: frozenset()}, "II")
    order = _min_fill_order(adj)
    rank = {v: i for i, v in enumerate(order)}
    work = {v: set(ns) for v, ns in adj.items()}
    bags = {}
    parent = {}
    for i, v in enumerate(order):
        ns = work.pop(v)
        bags[i] = frozenset(ns | {v})
        if ns:
            parent[i] = min(rank[a] for a in ns)
        for a in ns:
            work[a].discard(v)
            work[a] |= ns - {a}
    tree = nx.Graph()
    tree.add_nodes_from(bags)
    tree.add_edges_from(parent.items())
    roots = [i for i in bags if i not in parent]
    for a, b in zip(roots, roots[1:]):
        tree.add_edge(a, b)
    _contract_subset_bags(tree, bags)
    td = TreeDecomposition(tree, bags, "II")
    assert validate_td(td, g)
    return td


def _contract_subset_bags(tree: nx.Graph, bags: dict):
    changed = True
    while changed and tree.number_of_nodes() > 1:
        changed = False
        for w in sorted(tree.nodes):
            for u in sorted(tree.neighbors(w)):
                if bags[w] <= bags[u]:
                    for x in list(tree.neighbors(w)):
                        if x != u:
                            tree.add_edge(u, x)
                    tree.remove_node(w)
                    del bags[w]
                    changed = True
                    break
            if changed:
                break


def ordering_from_td2(td: TreeDecomposition, cnf: MonotoneCnf) -> VariableOrdering:
    """Peel leaves of a type-II decomposition to get a 2^width-degenerate ordering.

    Variables private to a leaf bag take the last free positions; clause
    vertices of clauses touching them are then dropped from every bag.
    Each placement is checked against the 2^width bound as it happens.
    """
    if td.kind != "II" or not validate_td(td, cnf):
        raise ValueError("not a valid type-II tree decomposition of the CNF")
    k = td.width
    bound = 2 ** max(k, 0)
    tree = td.tree.copy()
    bags = {w: set(b) for w, b in td.bags.items()}
    clauses = {clause_vertex(i): set(vars_of(m)) for i, m in enumerate(cnf.masks, start=1)}
    used = set(cnf.variables)
    tail: list[int] = []  # filled from the last position backwards
    placed: set[int] = set()

    def place(batch, bag):
        for a in sorted(batch):
            later = placed | {b for b in batch if b > a}
            # clauses whose last variable is a: contain a, nothing placed after it
            d = [y for y, c in clauses.items() if a in c and not (c & later)]
            for y in d:
                if not (y in bag or clauses[y] <= bag):
                    raise AssertionError(f"clause {y} of Δ at {a} escapes bag {sorted(bag, key=_vertex_key)}")
            if len(d) > bound:
                raise AssertionError(f"|Δ| = {len(d)} exceeds 2^{k} at variable {a}")
        tail.extend(sorted(batch, reverse=True))
        placed.update(batch)
        gone = {y for y, c in clauses.items() if c & batch}
        for b in bags.values():
            b -= gone

    while tree.number_of_nodes() > 1:
        leaf = min(w for w in tree.nodes if tree.degree(w) == 1)
        p = next(iter(tree.neighbors(leaf)))
        private = {x for x in bags[leaf] - bags[p] if isinstance(x, int)}
        if private:
            place(private, set(bags[leaf]))
            bags[leaf] -= private
        tree.remove_node(leaf)
        del bags[leaf]
    last = next(iter(tree.nodes))
    rest = {x for x in bags[last] if isinstance(x, int)} - placed
    if rest:
        place(rest, set(bags[last]))
    missing = used - placed
    if missing:
        raise AssertionError(f"variables {sorted(missing)} never placed")
    unused = [v for v in range(1, cnf.n + 1) if v not in used]
    return VariableOrdering(tuple(unused + tail[::-1]))


# -- td file format -------------------------------------------------------------

def format_td(td: TreeDecomposition) -> str:
    """``td <nodes> <width+1> <vertices>``, then ``b`` lines and edge lines."""
    ids = {w: i for i, w in enumerate(sorted(td.bags), start=1)}
    vertices = set().union(*td.bags.values()) if td.bags else set()
    lines = [f"td {len(ids)} {td.width + 1} {len(vertices)}"]
    for w, i in ids.items():
        vs = " ".join(str(v) for v in sorted(td.bags[w], key=_vertex_key))
        lines.append(f"b {i} {vs}".rstrip())
    for a, b in sorted((min(ids[a], ids[b]), max(ids[a], ids[b])) for a, b in td.tree.edges):
        lines.append(f"{a} {b}")
    return "\n".join(lines) + "\n"


def parse_td(text: str, kind: str | None = None) -> TreeDecomposition:
    """Parse the line format written by :func:`format_td`.

    ``kind`` defaults to "II" when any clause vertex appears, else "I".
    """
    tree = nx.Graph()
    bags: dict[int, frozenset] = {}
    header = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "td":
                header = tuple(int(p) for p in parts[1:4])
            elif parts[0] == "b":
                node = int(parts[1])
                bag = frozenset(p if p.startswith("c") else int(p) for p in parts[2:])
                for p in bag:
                    if isinstance(p, str):
                        int(p[1:])
                bags[node] = bag
                tree.add_node(node)
            else:
                a, b = int(parts[0]), int(parts[1])
                if len(parts) != 2:
                    raise ValueError
                tree.add_edge(a, b)
        except (ValueError, IndexError):
            raise ValueError(f"line {lineno}: cannot parse {raw!r}") from None
    if header is None:
        raise ValueError("missing 'td' header line")
    if header[0] != len(bags):
        raise ValueError(f"header announces {header[0]} bags, found {len(bags)}")
    if kind is None:
        kind = "II" if any(isinstance(v, str) for b in bags.values() for v in b) else "I"
    td = TreeDecomposition(tree, bags, kind)
    if td.width + 1 != header[1]:
        raise ValueError(f"header announces bag size {header[1]}, found {td.width + 1}")
    return td


# -- class dispatch -------------------------------------------------------------

@dataclass
class Analysis:
    n: int
    m: int
    size: int
    read: int
    degeneracy: DegeneracyReport
    alpha_acyclic: bool
    gyo_ordering: VariableOrdering | None
    max_clause: int
    td_width: int | None = None
    td_ordering: VariableOrdering | None = None
    ordering: VariableOrdering | None = None
    ordering_source: str = ""
    guarantees: list[str] = field(default_factory=list)


def analyze(cnf: MonotoneCnf, td: TreeDecomposition | None = None) -> Analysis:
    """Classify ``cnf`` and pick the ordering with the best known delay bound."""
    deg = smallest_last_ordering(cnf)
    trace = gyo_reduce(cnf)
    acyclic = trace.success
    gyo_ord = ordering_from_gyo(trace, cnf.n) if acyclic else None
    size = cnf.size
    a = Analysis(
        n=cnf.n, m=len(cnf.masks), size=size, read=read_number(cnf), degeneracy=deg,
        alpha_acyclic=acyclic, gyo_ordering=gyo_ord,
        max_clause=max((popcount(m) for m in cnf.masks), default=0),
    )
    candidates = [(deg.k, "smallest-last", deg.ord)]
    if gyo_ord is not None:
        candidates.append((max(delta_profile(cnf, gyo_ord), default=0), "gyo", gyo_ord))
    if td is not None:
        if td.kind == "I":
            td = td1_to_td2(td, cnf)
        td_ord = ordering_from_td2(td, cnf)
        a.td_width = td.width
        a.td_ordering = td_ord
        candidates.append((max(delta_profile(cnf, td_ord), default=0), "td", td_ord))
    # GYO first when acyclic, then smallest-last, then td; strictly better k wins
    candidates.sort(key=lambda c: {"gyo": 0, "smallest-last": 1, "td": 2}[c[1]])
    best = min(candidates, key=lambda c: c[0])
    a.ordering_source = best[1]
    a.ordering = best[2]

    g = a.guarantees
    k = deg.k
    if acyclic:
        g.append("alpha-acyclic: 1-degenerate, polynomial delay O(||phi|| n^2)")
    g.append(f"{k}-degenerate: polynomial delay O(||phi|| n^{k + 1})")
    g.append(f"read-{a.read}: polynomial delay O(||phi|| n^{a.read + 1})")
    if size > 1 and k > 2 and k <= math.log2(size):
        g.append("O(log ||phi||)-degenerate: output-polynomial class "
                 "(log-clause subroutine not included; generic enumeration used)")
    if a.td_width is not None:
        g.append(f"type-II treewidth <= {a.td_width}: {2 ** a.td_width}-degenerate ordering, "
                 f"polynomial delay O(||phi|| n^{2 ** a.td_width + 1})")
    g.append(f"{a.max_clause}-CNF: recursive enumeration depth <= {a.max_clause}, "
             f"total time O(n^{max(a.max_clause - 1, 0)} |psi|^{max(a.max_clause - 1, 0)} ||phi||)")
    return a
