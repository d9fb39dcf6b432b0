"""Command line interface: ``reeb-orbit {analyze,reeb,class,selftest}``.

Exit codes: 0 ok, 1 self-test failure, 2 flat edge (generic position
violated), 3 unreadable input file.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import yaml

from . import __version__
from .corpus import CLASSES, DEFAULT_SEED, random_corpus
from .orbit import OrbitReport, analyze
from .reeb import (FibrationCase, ReebGraph, decorated_cycle, first_betti, reeb_graph,
                   rotation_order, value_key)
from .torus_pl import (CircleFunction, DimensionTooSmall, FlatEdge, build_function,
                       build_grid_torus, cohomology_class, index_sum)

EXIT_OK, EXIT_SELFTEST, EXIT_FLAT, EXIT_PARSE = 0, 1, 2, 3


class ParseError(ValueError):
    pass


# -- input files ------------------------------------------------------------

@dataclass
class FunctionFile:
    grid: tuple[int, int]
    cls: tuple[int, int]
    perturbation: list[list[Fraction]]
    auto_perturb: bool = False


def _reject_constant(name):
    raise ParseError(f"non-finite number {name} not allowed")


def _integer(x, where: str) -> int:
    q = _number(x, where)
    if q.denominator != 1:
        raise ParseError(f"{where}: expected an integer, got {q}")
    return int(q)


def _number(x, where: str) -> Fraction:
    if isinstance(x, bool):
        raise ParseError(f"{where}: boolean is not a number")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"{where}: cannot read {x!r} as a rational") from None
    raise ParseError(f"{where}: expected a number, got {type(x).__name__}")


def parse_function_file(text: str) -> FunctionFile:
    """Read the JSON function format; decimals are kept exact."""
    try:
        doc = json.loads(text, parse_float=Fraction, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")
    try:
        N, M = (_integer(v, "grid") for v in doc["grid"])
        a, b = (_integer(v, "class") for v in doc.get("class", [0, 0]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad grid or class: {exc}") from None
    if N < 3 or M < 3:
        raise ParseError(f"grid {N}x{M} is too small (need at least 3x3)")
    rows = doc.get("perturbation", [[0] * N for _ in range(M)])
    if not isinstance(rows, list) or len(rows) != M:
        raise ParseError(f"perturbation must have {M} rows")
    out = []
    for j, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != N:
            raise ParseError(f"perturbation row {j} must have {N} entries")
        out.append([_number(x, f"perturbation[{j}][{i}]") for i, x in enumerate(row)])
    flags = doc.get("flags", {}) or {}
    return FunctionFile((N, M), (a, b), out, bool(flags.get("auto_perturb", False)))


def build_from_file(ff: FunctionFile, auto_perturb: bool = False) -> CircleFunction:
    """Build the function; with auto-perturbation, vertex ``v`` gets ``eps * (v + 1)``."""
    N, M = ff.grid
    cx = build_grid_torus(N, M)
    try:
        return build_function(cx, ff.cls, ff.perturbation)
    except FlatEdge:
        if not (auto_perturb or ff.auto_perturb):
            raise
    for power in range(9, 30):
        eps = Fraction(1, 10**power)
        rows = [[x + eps * (j * N + i + 1) for i, x in enumerate(r)]
                for j, r in enumerate(ff.perturbation)]
        try:
            return build_function(cx, ff.cls, rows)
        except FlatEdge:
            continue
    raise FlatEdge(-1)


# -- output -----------------------------------------------------------------

def resolve_seed(seed: Optional[int]) -> int:
    if seed is not None:
        return seed
    env = os.environ.get("REEB_ORBIT_SEED")
    return int(env) if env else DEFAULT_SEED


def report_text(report: OrbitReport, seed: int) -> str:
    header = f"# reeb-orbit {__version__} report; seed={seed}\n"
    return header + yaml.safe_dump(report.to_dict(), sort_keys=False, allow_unicode=False,
                                   width=10**6)


def reeb_dot(g: ReebGraph, cycle_edges=()) -> str:
    cyc = set(cycle_edges)
    lines = ["digraph reeb {"]
    for n in g.nodes:
        lines.append(f'  n{n.id} [label="v={value_key(n.value, g.exact)} {n.label}"];')
    for e in g.edges:
        style = ", style=bold" if e.id in cyc else ""
        lines.append(f'  n{e.lower} -> n{e.upper} [label="{value_key(e.increment, g.exact)}"{style}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def reeb_summary(g: ReebGraph) -> dict:
    return {
        "nodes": [{"value": value_key(n.value, g.exact), "kind": n.label} for n in g.nodes],
        "edges": [{"lower": e.lower, "upper": e.upper,
                   "increment": value_key(e.increment, g.exact)} for e in g.edges],
        "b1": first_betti(g),
    }


def _load(path: str, auto_perturb: bool):
    try:
        with open(path, encoding="utf-8") as fh:
            ff = parse_function_file(fh.read())
    except (OSError, ParseError) as exc:
        print(f"error: {path}: {exc}", file=sys.stderr)
        return None, EXIT_PARSE
    try:
        return build_from_file(ff, auto_perturb), EXIT_OK
    except FlatEdge as exc:
        print(f"error: {exc}; rerun with --auto-perturb", file=sys.stderr)
        return None, EXIT_FLAT
    except DimensionTooSmall as exc:
        print(f"error: {exc}", file=sys.stderr)
        return None, EXIT_PARSE


def _write(path: Optional[str], text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


# -- commands ---------------------------------------------------------------

def cmd_analyze(args) -> int:
    f, code = _load(args.path, args.auto_perturb)
    if f is None:
        return code
    report = analyze(f, workers=args.threads)
    _write(args.report, report_text(report, resolve_seed(args.seed)))
    if args.dot and report.graph is not None:
        _write(args.dot, reeb_dot(report.graph, report.cycle.edges if report.cycle else ()))
    return EXIT_OK


def cmd_reeb(args) -> int:
    f, code = _load(args.path, args.auto_perturb)
    if f is None:
        return code
    try:
        g = reeb_graph(f, workers=args.threads)
    except FibrationCase:
        print("fibration: no critical points, empty Reeb graph")
        return EXIT_OK
    cyc = decorated_cycle(g).edges if first_betti(g) == 1 else ()
    _write(None, yaml.safe_dump(reeb_summary(g), sort_keys=False))
    if args.dot:
        _write(args.dot, reeb_dot(g, cyc))
    return EXIT_OK


def cmd_class(args) -> int:
    f, code = _load(args.path, args.auto_perturb)
    if f is None:
        return code
    a, b = cohomology_class(f)
    print(f"{a} {b}")
    return EXIT_OK


# -- self-test ----------------------------------------------------------------

@dataclass
class SuiteResult:
    name: str
    passed: int
    total: int
    failure: Optional[str] = None


def _suite_corpus(seed: int, count: int):
    idx = SuiteResult("index_sum", 0, 0)
    b1 = SuiteResult("b1", 0, 0)
    for case, f in enumerate(random_corpus(seed, count)):
        idx.total += 1
        s = index_sum(f)
        if s == 0:
            idx.passed += 1
        elif idx.failure is None:
            idx.failure = f"case {case}: index sum {s}"
        b1.total += 1
        try:
            b = first_betti(reeb_graph(f))
        except FibrationCase:
            b = None
        ok = b is None or (b in (0, 1) and (b == 1 or cohomology_class(f) == (0, 0)))
        if ok:
            b1.passed += 1
        elif b1.failure is None:
            b1.failure = f"case {case}: class {cohomology_class(f)} with b1 = {b}"
    return [idx, b1]


def _minimize_pair(A, x, y, fails: Callable) -> tuple:
    """Shrink a failing pair: shifts toward 0, then components toward the identity."""
    e = A.base.identity
    changed = True
    while changed:
        changed = False
        for which in (0, 1):
            cur = (x, y)[which]
            cands = []
            if cur.k:
                cands.append(A.element(cur.comps, int(cur.k / 2)))
                cands.append(A.element(cur.comps, cur.k - (1 if cur.k > 0 else -1)))
            for i, c in enumerate(cur.comps):
                if c != e:
                    comps = list(cur.comps)
                    comps[i] = e
                    cands.append(A.element(comps, cur.k))
            for cand in cands:
                if cand == cur:
                    continue
                trial = (cand, y) if which == 0 else (x, cand)
                if fails(*trial):
                    x, y = trial
                    changed = True
                    break
    return x, y


def _suite_wreath(seed: int, pairs: int, mutate: bool):
    from .wreath_lab import (WreathAlgebra, Xi, cyclic, phi_projection, quotient_group,
                             symmetric, wreath_mul)
    rng = random.Random(seed)
    xi_res = SuiteResult("xi", 0, 0)
    phi_res = SuiteResult("phi", 0, 0)
    ax_res = SuiteResult("wreath_axioms", 0, 0)
    for base in (cyclic(2), cyclic(3), symmetric(3)):
        for n in (1, 2, 3):
            A = WreathAlgebra(base, n, shift_sign=-1 if mutate else 1)
            xi = Xi(A, lambda b, A=A: A.coordinate(0, b), A.g(), n)

            def fails(x, y, xi=xi):
                lhs = xi(*_parts(wreath_mul(x, y)))
                rhs = wreath_mul(xi(*_parts(x)), xi(*_parts(y)))
                return lhs != rhs or xi(*_parts(x)) != x

            for _ in range(pairs):
                x, y = A.random(rng, 50), A.random(rng, 50)
                xi_res.total += 1
                if not fails(x, y):
                    xi_res.passed += 1
                elif xi_res.failure is None:
                    x, y = _minimize_pair(A, x, y, fails)
                    xi_res.failure = (f"{base.name} n={n}: x=({x.comps};{x.k}) "
                                      f"y=({y.comps};{y.k})")
                phi_res.total += 1
                if phi_projection(wreath_mul(x, y)) == phi_projection(x) + phi_projection(y):
                    phi_res.passed += 1
                elif phi_res.failure is None:
                    phi_res.failure = f"{base.name} n={n}: phi not additive"
            for m in (1, 2, 3):
                ax_res.total += 1
                try:
                    Q = quotient_group(A, m)
                    kernel = int((Q.phi() == 0).sum())
                    if kernel == base.order ** n:
                        ax_res.passed += 1
                    elif ax_res.failure is None:
                        ax_res.failure = f"{base.name} n={n} m={m}: kernel order {kernel}"
                except ValueError as exc:
                    if ax_res.failure is None:
                        ax_res.failure = f"{base.name} n={n} m={m}: {exc}"
    return [ax_res, xi_res, phi_res]


def _parts(x):
    return x.comps, x.k


def _suite_splitting(max_order: int):
    from .wreath_lab import (check_direct_product, corpus, product_map_is_isomorphism,
                             subgroup_families)
    res = SuiteResult("D1-D3", 0, 0)
    for G in corpus(max_order):
        for fam in subgroup_families(G):
            res.total += 1
            if check_direct_product(G, fam) == product_map_is_isomorphism(G, fam):
                res.passed += 1
            elif res.failure is None:
                res.failure = f"{G.name}: family of orders {[len(h) for h in fam]}"
    return [res]


def _period(tokens) -> int:
    L = len(tokens)
    for p in range(1, L + 1):
        if L % p == 0 and all(tokens[i] == tokens[(i + p) % L] for i in range(L)):
            return p
    return L


def _suite_rotation(seed: int, count: int):
    from .samples import doubled_bump, two_peak
    res = SuiteResult("rotation", 0, 0)
    for case, f in enumerate(random_corpus(seed + 1, count)):
        try:
            g = reeb_graph(f)
        except FibrationCase:
            continue
        if first_betti(g) != 1:
            continue
        dc = decorated_cycle(g)
        res.total += 1
        if rotation_order(dc) == dc.length // _period(dc.tokens):
            res.passed += 1
        elif res.failure is None:
            res.failure = f"case {case}: rotation order disagrees with period"
    for name, f, want in (("two_peak", two_peak(), 1), ("doubled_bump(2,0)", doubled_bump((2, 0)), 2)):
        res.total += 1
        got = rotation_order(decorated_cycle(reeb_graph(f)))
        if got == want:
            res.passed += 1
        elif res.failure is None:
            res.failure = f"{name}: n = {got}, expected {want}"
    return [res]


def run_selftest(seed: int, quick: bool = False, mutate: bool = False) -> list[SuiteResult]:
    scale = 10 if quick else 1
    out = []
    out += _suite_corpus(seed, 200 // scale)
    out += _suite_wreath(seed, 1000 // scale, mutate)
    out += _suite_splitting(8 if quick else 16)
    out += _suite_rotation(seed, 100 // scale)
    return out


def cmd_selftest(args) -> int:
    seed = resolve_seed(args.seed)
    print(f"# seed={seed}{' quick' if args.quick else ''}")
    t0 = time.perf_counter()
    results = run_selftest(seed, args.quick, args.mutate_wreath_sign)
    failed = None
    for r in results:
        status = "ok" if r.passed == r.total else "FAIL"
        print(f"{r.name:14s} {r.passed}/{r.total} {status}")
        if r.passed != r.total and failed is None:
            failed = r
    print(f"# {time.perf_counter() - t0:.1f}s")
    if failed is not None:
        print(f"first failure in {failed.name}: {failed.failure}")
        return EXIT_SELFTEST
    return EXIT_OK


# -- entry point ------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="reeb-orbit",
                                description="Reeb graphs and orbit groups of PL circle-valued torus functions.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("path", help="function file (JSON)")
        sp.add_argument("--auto-perturb", action="store_true",
                        help="break flat edges with a tiny vertex-rank perturbation")
        sp.add_argument("--threads", type=int, default=1, help="worker threads for level sets")

    a = sub.add_parser("analyze", help="full orbit report")
    common(a)
    a.add_argument("--report", help="write the report here instead of stdout")
    a.add_argument("--dot", help="write the Reeb graph in DOT format")
    a.add_argument("--seed", type=int, help="seed recorded in the report header")
    a.set_defaults(func=cmd_analyze)

    r = sub.add_parser("reeb", help="Reeb graph only")
    common(r)
    r.add_argument("--dot", help="write the Reeb graph in DOT format")
    r.set_defaults(func=cmd_reeb)

    c = sub.add_parser("class", help="cohomology class only")
    common(c)
    c.set_defaults(func=cmd_class)

    s = sub.add_parser("selftest", help="run the oracle suites")
    s.add_argument("--quick", action="store_true", help="10x smaller random corpora")
    s.add_argument("--seed", type=int)
    s.add_argument("--mutate-wreath-sign", action="store_true", help=argparse.SUPPRESS)
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
