"""Command line driver: ``monodual {dualize,check,verify,analyze,bench}``.

Exit codes: 0 success (``check``: dual; ``verify``: confirmed), 1 negative
answer (not dual, certificate rejected), 2 parse or usage errors, 3 guard
or recursion budget exceeded.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import generators
from .cnf import MonotoneCnf, VariableOrdering, compact, minimize
from .enumeration import BudgetExceeded, DualizeStats, RhoStrategy, dualize, measure_delay
from .fk import Certificate, CertificateError, DualPair, check_dual_A, check_dual_B, replay_certificate
from .io import ParseError, format_term, parse_permutation, read_hypergraph
from .oracle import GuardError
from .structure import (
    analyze,
    gyo_reduce,
    ordering_from_gyo,
    ordering_from_td2,
    parse_td,
    smallest_last_ordering,
    td1_to_td2,
)

EXIT_OK, EXIT_NO, EXIT_PARSE, EXIT_GUARD = 0, 1, 2, 3

BENCH_COLUMNS = [
    "family", "param", "k", "seed", "n", "m", "size", "outputs",
    "max_delay", "mean_delay", "p95_delay", "latency", "total_time",
]


class UsageError(Exception):
    pass


@dataclass
class RunReport:
    command: str
    n: int = 0
    m: int = 0
    size: int = 0
    read: int | None = None
    degeneracy: int | None = None
    alpha_acyclic: bool | None = None
    td_width: int | None = None
    ordering_source: str | None = None
    strategy: str | None = None
    algorithm: str | None = None
    outputs: int = 0
    delay: dict = field(default_factory=dict)
    total_time: float = 0.0
    extra: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps({k: v for k, v in asdict(self).items() if v not in (None, {}, [])})


def _emit_report(report: RunReport, dest: str | None):
    if dest == "none":
        return
    text = report.to_json() + "\n"
    if dest in (None, "-"):
        sys.stderr.write(text)
    else:
        Path(dest).write_text(text)


# -- dualize ---------------------------------------------------------------------

def _ordering(spec: str, raw: MonotoneCnf, cnf: MonotoneCnf) -> VariableOrdering:
    """Ordering over the full universe of ``cnf`` (the minimized input)."""
    if spec == "smallest-last":
        return smallest_last_ordering(cnf).ord
    if spec == "identity":
        return VariableOrdering.identity(cnf.n)
    if spec == "gyo":
        trace = gyo_reduce(cnf)
        if not trace.success:
            raise UsageError("--ordering gyo: the input is not alpha-acyclic")
        return ordering_from_gyo(trace, cnf.n)
    if spec.startswith("td:"):
        path = spec[3:]
        try:
            td = parse_td(Path(path).read_text())
        except OSError as e:
            raise ParseError(f"cannot read: {e.strerror}", source=path) from None
        except ValueError as e:
            raise ParseError(str(e), source=path) from None
        # the decomposition names clauses by their position in the input file
        try:
            if td.kind == "I":
                td = td1_to_td2(td, raw)
            return ordering_from_td2(td, raw)
        except ValueError as e:
            raise UsageError(f"--ordering {spec}: {e}") from None
    if spec.startswith("given:"):
        return parse_permutation(spec[6:], cnf.n)
    raise UsageError(f"unknown ordering source {spec!r}")


def cmd_dualize(args) -> int:
    raw = read_hypergraph(args.input)
    cnf = minimize(raw)
    ord_full = _ordering(args.ordering, raw, cnf)
    small, old = compact(cnf)
    pos = {v: k for k, v in enumerate(old, start=1)}
    ord_small = VariableOrdering(tuple(pos[v] for v in ord_full.order if v in pos))
    strategy = RhoStrategy(args.strategy, args.budget)
    stats = DualizeStats()
    out = sys.stdout
    buffered = []
    t0 = time.perf_counter()

    def stream():
        for t in dualize(small, ord_small, strategy, stats):
            line = format_term(old[v - 1] for v in t) + "\n"
            if args.buffer:
                buffered.append(line)
            else:
                out.write(line)
                out.flush()
            yield t

    rep = measure_delay(stream())
    if args.buffer:
        out.write("".join(buffered))
        out.flush()
    info = analyze(cnf) if args.report != "none" else None
    report = RunReport(
        "dualize", n=raw.n, m=len(raw), size=raw.size,
        read=info.read if info else None,
        degeneracy=info.degeneracy.k if info else None,
        alpha_acyclic=info.alpha_acyclic if info else None,
        ordering_source=args.ordering, strategy=args.strategy, algorithm="dualize",
        outputs=rep.count,
        delay={"latency": rep.latency, "max": rep.max_delay, "mean": rep.mean_delay,
               "p50": rep.p50, "p95": rep.p95, "tail": rep.tail},
        total_time=time.perf_counter() - t0,
        extra={"rho_calls": stats.rho_calls, "max_rho": stats.max_rho, "depth": stats.max_depth},
    )
    _emit_report(report, args.report)
    return EXIT_OK


# -- check / verify ----------------------------------------------------------------

def _read_pair(f_phi, f_psi) -> DualPair:
    phi, psi = read_hypergraph(f_phi), read_hypergraph(f_psi)
    n = max(phi.n, psi.n)
    return DualPair(MonotoneCnf.from_masks(n, phi.masks), MonotoneCnf.from_masks(n, psi.masks))


def cmd_check(args) -> int:
    if args.emit_cert and args.algorithm != "B":
        raise UsageError("--emit-cert needs --algorithm B")
    pair = _read_pair(args.phi, args.psi)
    t0 = time.perf_counter()
    res = check_dual_A(pair) if args.algorithm == "A" else check_dual_B(pair)
    elapsed = time.perf_counter() - t0
    if res.dual:
        print("DUAL")
    else:
        print("NOT-DUAL")
        print(res.witness.bits)
        if args.emit_cert:
            Path(args.emit_cert).write_text(res.certificate.to_text())
    st = res.stats
    extra = {"nodes": st.nodes, "volume": pair.volume}
    if args.algorithm == "B":
        extra.update(max_a=st.max_a, max_b=st.max_b, max_c=st.max_c)
        if res.certificate is not None:
            extra["certificate_bits"] = res.certificate.bit_length
    report = RunReport("check", n=pair.n, m=len(pair.phi) + len(pair.psi),
                       size=pair.phi.size + pair.psi.size, algorithm=args.algorithm,
                       outputs=0 if res.dual else 1, total_time=elapsed, extra=extra)
    _emit_report(report, args.report)
    return EXIT_OK if res.dual else EXIT_NO


def cmd_verify(args) -> int:
    pair = _read_pair(args.phi, args.psi)
    try:
        cert = Certificate.from_text(Path(args.certificate).read_text())
    except OSError as e:
        raise ParseError(f"cannot read: {e.strerror}", source=args.certificate) from None
    except CertificateError as e:
        raise ParseError(str(e), source=args.certificate) from None
    res = replay_certificate(pair, cert)
    if res.confirmed:
        print("CONFIRMED")
        print(res.witness.bits)
        return EXIT_OK
    print(f"{res.status.upper()}: {res.reason}")
    return EXIT_NO


# -- analyze -----------------------------------------------------------------------

def _fmt_ord(o: VariableOrdering) -> str:
    return " ".join(map(str, o.order))


def cmd_analyze(args) -> int:
    raw = read_hypergraph(args.input)
    cnf = minimize(raw)
    td = None
    if args.td:
        try:
            td = parse_td(Path(args.td).read_text())
        except (OSError, ValueError) as e:
            raise ParseError(str(e), source=args.td) from None
    a = analyze(cnf, td)
    lines = [
        f"n: {a.n}",
        f"m: {a.m}",
        f"size: {a.size}",
        f"read: {a.read}",
        f"degeneracy: {a.degeneracy.k}",
        f"degeneracy-ordering: {_fmt_ord(a.degeneracy.ord)}",
        f"alpha-acyclic: {'yes' if a.alpha_acyclic else 'no'}",
    ]
    if a.gyo_ordering is not None:
        lines.append(f"gyo-ordering: {_fmt_ord(a.gyo_ordering)}")
    if a.td_width is not None:
        lines.append(f"td-width: {a.td_width}")
        lines.append(f"td-ordering: {_fmt_ord(a.td_ordering)}")
    lines.append(f"max-clause: {a.max_clause}")
    lines.append(f"ordering: {a.ordering_source}")
    lines += [f"guarantee: {g}" for g in a.guarantees]
    print("\n".join(lines))
    return EXIT_OK


# -- bench -------------------------------------------------------------------------

def _values(text: str) -> list[int]:
    """``8,16,32`` | ``8..12`` | ``8..64x2`` (geometric)."""
    out = []
    for part in text.split(","):
        if ".." in part:
            lo, hi = part.split("..")
            factor = None
            if "x" in hi:
                hi, factor = hi.split("x")
            lo, hi = int(lo), int(hi)
            if factor is None:
                out += list(range(lo, hi + 1))
            else:
                f = int(factor)
                if f < 2 or lo < 1:
                    raise ValueError("geometric range needs factor >= 2 and start >= 1")
                v = lo
                while v <= hi:
                    out.append(v)
                    v *= f
        else:
            out.append(int(part))
    return out


FAMILIES = {
    "read-k": ("n", {"k": 2}),
    "degenerate": ("n", {"k": 2}),
    "acyclic": ("m", {}),
    "random": ("n", {"m": 10, "maxsize": 4}),
    "single": (None, {}),
}


def parse_family(spec: str) -> tuple[str, dict]:
    """``name[:key=value;key=value...]``; the size key takes lists or ranges."""
    name, _, rest = spec.partition(":")
    if name not in FAMILIES:
        raise ValueError(f"unknown family {name!r}; choose from {', '.join(FAMILIES)}")
    sweep, defaults = FAMILIES[name]
    params = dict(defaults)
    params["reps"] = 1
    for item in filter(None, rest.split(";")):
        key, eq, val = item.partition("=")
        if not eq:
            raise ValueError(f"bad parameter {item!r}")
        key = key.strip()
        if key == "file":
            params[key] = val
        elif key == sweep:
            params[key] = _values(val)
        else:
            params[key] = int(val)
    if name == "single":
        if "file" not in params:
            raise ValueError("single family needs file=<path>")
    elif sweep not in params:
        raise ValueError(f"family {name!r} needs {sweep}=<values>")
    return name, params


def _instances(name: str, params: dict, seed: int):
    if name == "single":
        yield 1, read_hypergraph(params["file"]), seed
        return
    sweep = FAMILIES[name][0]
    for size in params[sweep]:
        for r in range(params["reps"]):
            s = seed + 1000 * r + size
            if name == "read-k":
                cnf = generators.read_k_family(size, params["k"], s)
            elif name == "degenerate":
                cnf = generators.degenerate_family(size, params["k"], s)
            elif name == "acyclic":
                cnf = generators.acyclic_family(size, s)
            else:
                cnf = generators.random_prime(size, params["m"], s, params["maxsize"])
            yield size, cnf, s


def bench_rows(spec: str, seed: int = 0, strategy: str = "auto"):
    """Yield one CSV row dict per instance of the family."""
    name, params = parse_family(spec)
    for size, cnf, s in _instances(name, params, seed):
        small, _ = compact(minimize(cnf))
        ord = smallest_last_ordering(small).ord
        t0 = time.perf_counter()
        rep = measure_delay(dualize(small, ord, RhoStrategy(strategy)))
        yield {
            "family": name, "param": size, "k": params.get("k", ""), "seed": s,
            "n": cnf.n, "m": len(cnf), "size": cnf.size, "outputs": rep.count,
            "max_delay": rep.max_delay, "mean_delay": rep.mean_delay, "p95_delay": rep.p95,
            "latency": rep.latency, "total_time": time.perf_counter() - t0,
        }


def loglog_slope(xs, ys) -> float:
    """Least-squares slope of log y against log x."""
    x = np.log(np.asarray(xs, dtype=float))
    y = np.log(np.maximum(np.asarray(ys, dtype=float), 1e-9))
    return float(np.polyfit(x, y, 1)[0])


def cmd_bench(args) -> int:
    try:
        parse_family(args.family)
    except ValueError as e:
        raise UsageError(f"bad family argument: {e}") from None
    rows = []
    with open(args.output, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=BENCH_COLUMNS)
        w.writeheader()
        for row in bench_rows(args.family, args.seed, args.strategy):
            w.writerow(row)
            fh.flush()
            rows.append(row)
    print(f"rows: {len(rows)}")
    sizes = sorted({r["param"] for r in rows})
    if len(sizes) >= 2:
        med = [float(np.median([r["max_delay"] for r in rows if r["param"] == s])) for s in sizes]
        print(f"max-delay log-log slope: {loglog_slope(sizes, med):.3f}")
    return EXIT_OK


# -- entry point -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="monodual", description="Monotone CNF dualization and duality testing.")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("dualize", help="stream the prime implicants of a monotone CNF")
    d.add_argument("input")
    d.add_argument("--ordering", default="smallest-last",
                   help="smallest-last | gyo | identity | td:<file> | given:<perm>")
    d.add_argument("--strategy", default="auto", choices=["auto", "expand", "recursive"])
    d.add_argument("--budget", type=int, default=None, help="recursion depth budget")
    d.add_argument("--buffer", action="store_true", help="write all terms at the end")
    d.add_argument("--report", default="-", help="report destination: - (stderr), a path, or none")
    d.set_defaults(func=cmd_dualize)

    c = sub.add_parser("check", help="decide whether two CNFs are dual")
    c.add_argument("phi")
    c.add_argument("psi")
    c.add_argument("--algorithm", default="B", choices=["A", "B"])
    c.add_argument("--emit-cert", metavar="PATH", default=None)
    c.add_argument("--report", default="none")
    c.set_defaults(func=cmd_check)

    v = sub.add_parser("verify", help="replay a non-duality certificate")
    v.add_argument("phi")
    v.add_argument("psi")
    v.add_argument("certificate")
    v.set_defaults(func=cmd_verify)

    a = sub.add_parser("analyze", help="structural classes and orderings")
    a.add_argument("input")
    a.add_argument("--td", default=None, help="tree decomposition file")
    a.set_defaults(func=cmd_analyze)

    b = sub.add_parser("bench", help="delay benchmark over a generated family")
    b.add_argument("family", help="e.g. 'read-k:k=2;n=8..64x2;reps=3'")
    b.add_argument("output", help="CSV destination")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--strategy", default="auto", choices=["auto", "expand", "recursive"])
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, UsageError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except (BudgetExceeded, GuardError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_GUARD
    except BrokenPipeError:
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
