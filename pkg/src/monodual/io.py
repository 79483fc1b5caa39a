"""Hypergraph files: one clause per line, optional ``p mhg <n> <m>`` header.

    # comment
    p mhg 4 3
    1 2
    1 3
    2 3 4

Without a header the universe is ``1..max index``. Blank lines and ``#``
comments are ignored.
"""
from __future__ import annotations

from pathlib import Path

from .cnf import MonotoneCnf, VariableOrdering


class ParseError(ValueError):
    def __init__(self, msg: str, line: int | None = None, source: str = "<input>"):
        self.line = line
        self.source = source
        where = f"{source}:{line}: " if line is not None else f"{source}: "
        super().__init__(where + msg)


def parse_hypergraph(text: str, source: str = "<input>") -> MonotoneCnf:
    header = None
    clauses: list[tuple[int, list[int]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("p"):
            parts = line.split()
            if header is not None:
                raise ParseError("second header line", lineno, source)
            if clauses:
                raise ParseError("header after clauses", lineno, source)
            if len(parts) != 4 or parts[1] != "mhg":
                raise ParseError(f"bad header {line!r}, expected 'p mhg <n> <m>'", lineno, source)
            try:
                header = (int(parts[2]), int(parts[3]), lineno)
            except ValueError:
                raise ParseError(f"bad header {line!r}", lineno, source) from None
            if header[0] < 0 or header[1] < 0:
                raise ParseError("negative header value", lineno, source)
            continue
        try:
            vs = [int(tok) for tok in line.split()]
        except ValueError:
            raise ParseError(f"non-integer token in {line!r}", lineno, source) from None
        if any(v < 1 for v in vs):
            raise ParseError("variable indices start at 1", lineno, source)
        if len(set(vs)) != len(vs):
            raise ParseError("repeated variable in clause", lineno, source)
        clauses.append((lineno, vs))
    if header is not None:
        n, m, hline = header
        for lineno, vs in clauses:
            if max(vs) > n:
                raise ParseError(f"variable {max(vs)} exceeds n={n}", lineno, source)
        if m != len(clauses):
            raise ParseError(f"header announces {m} clauses, found {len(clauses)}", hline, source)
    else:
        n = max((max(vs) for _, vs in clauses), default=0)
    return MonotoneCnf(n, [vs for _, vs in clauses])


def read_hypergraph(path) -> MonotoneCnf:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ParseError(f"cannot read: {e.strerror}", source=str(path)) from None
    return parse_hypergraph(text, str(path))


def format_hypergraph(cnf: MonotoneCnf, header: bool = True) -> str:
    """Canonical text: header plus clauses in stored order, indices ascending."""
    lines = [f"p mhg {cnf.n} {len(cnf)}"] if header else []
    lines += [" ".join(map(str, sorted(c))) for c in cnf.clauses]
    return "\n".join(lines) + "\n"


def format_term(t) -> str:
    return " ".join(map(str, sorted(t)))


def parse_permutation(text: str, n: int) -> VariableOrdering:
    """``"3,1,2"`` or ``"3 1 2"`` -> ordering (x_1 := x3, ...)."""
    try:
        order = tuple(int(tok) for tok in text.replace(",", " ").split())
    except ValueError:
        raise ParseError(f"bad permutation {text!r}") from None
    if len(order) != n:
        raise ParseError(f"permutation has {len(order)} entries, expected {n}")
    try:
        return VariableOrdering(order)
    except ValueError as e:
        raise ParseError(str(e)) from None
