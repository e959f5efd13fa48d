"""Command line: ``setpairs {verify,construct,search,lemmas}``.

Exit codes: 0 success, 1 a selected check failed, 2 usage or parse error,
3 a verified bound was contradicted (a counterexample dump is written).
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path
from typing import Any

from . import __version__
from .analysis import (
    check_averaging,
    check_bollobas,
    check_diamond,
    check_main_theorem,
    exception_classify,
    scan_lemma_one_fifth,
    scan_lemma_one_third,
)
from .constructions import (
    bollobas_family,
    figure1_fixture,
    five_cycle,
    power_construction,
    singleton_swap,
    triangle,
)
from .core import (
    ContradictionError,
    InvalidArgumentError,
    ResourceLimitError,
    SetPairSystem,
    canonical_form,
    is_cross_intersecting,
    is_one_cross_intersecting,
    sigma,
)
from .jsonio import SystemFormatError, dumps_system, load_system, rational_str, rational_to_json, save_system
from .search import SearchConfig, default_workers, search_max

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CONTRADICTION = 0, 1, 2, 3

CHECKS = ("cross", "one-cross", "bollobas", "averaging", "main-theorem", "diamond", "exceptions")
KINDS = ("five-cycle", "singleton-swap", "bollobas", "power", "figure1", "triangle")
EXPECTED_EQUALITY = {"one-third": [(2, 2)], "one-fifth": [(3, 2), (4, 2)]}


class UsageError(Exception):
    pass


def _rational(q) -> dict[str, Any]:
    d = rational_to_json(q)
    d["exact"] = rational_str(q)
    return d


def _run_check(name: str, S: SetPairSystem) -> dict[str, Any]:
    out: dict[str, Any] = {"check": name}
    try:
        if name == "cross":
            out["passed"] = is_cross_intersecting(S)
        elif name == "one-cross":
            out["passed"] = is_one_cross_intersecting(S)
        elif name == "bollobas":
            total, equal = check_bollobas(S)
            out.update(passed=True, sigma=_rational(total), equality=equal)
        elif name == "averaging":
            a_ok, b_ok = check_averaging(S, "A"), check_averaging(S, "B")
            out.update(passed=a_ok and b_ok, A_side=a_ok, B_side=b_ok)
        elif name == "main-theorem":
            total, report, consistent = check_main_theorem(S)
            out.update(passed=consistent, sigma=_rational(total), exceptions=report.to_json())
        elif name == "diamond":
            hit, ok = check_diamond(S)
            out.update(passed=ok, diamond=list(hit) if hit else None)
        elif name == "exceptions":
            out.update(passed=True, exceptions=exception_classify(S).to_json())
    except InvalidArgumentError as exc:
        out.update(passed=False, reason=str(exc))
    return out


def _digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def cmd_verify(args) -> tuple[int, dict[str, Any]]:
    path = Path(args.path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        S = load_system(path)
    except SystemFormatError as exc:
        raise UsageError(f"{path}: {exc}") from None
    checks = CHECKS if args.checks in (None, "all") else tuple(c.strip() for c in args.checks.split(","))
    unknown = [c for c in checks if c not in CHECKS]
    if unknown:
        raise UsageError(f"unknown checks: {', '.join(unknown)}")
    results = [_run_check(c, S) for c in checks]
    summary: dict[str, Any] = {"m": S.m, "n": S.n, "canonical_form": canonical_form(S).hex()}
    try:
        summary["sigma"] = _rational(sigma(S))
    except InvalidArgumentError:
        summary["sigma"] = None
    code = EXIT_OK if all(r["passed"] for r in results) else EXIT_FAIL
    return code, {"input_digest": _digest(raw), "results": {"system": summary, "checks": results}}


def _build(args) -> SetPairSystem:
    kind = args.kind
    if kind == "five-cycle":
        return five_cycle()
    if kind == "singleton-swap":
        return singleton_swap()
    if kind == "figure1":
        return figure1_fixture()
    if kind == "triangle":
        return triangle()
    if kind == "bollobas":
        if args.a is None or args.b is None:
            raise UsageError("bollobas needs --a and --b")
        return bollobas_family(args.a, args.b)
    if args.n is None:
        raise UsageError("power needs --n")
    return power_construction(args.n)


def cmd_construct(args) -> tuple[int, dict[str, Any]]:
    try:
        S = _build(args)
    except (InvalidArgumentError, ResourceLimitError) as exc:
        raise UsageError(str(exc)) from None
    text = dumps_system(S)
    if args.output:
        save_system(S, args.output)
    else:
        sys.stdout.write(text)
    sizes = sorted({p.sizes for p in S.pairs})
    results = {"kind": args.kind, "m": S.m, "sizes": [list(s) for s in sizes], "sigma": _rational(sigma(S)),
               "output": args.output}
    return EXIT_OK, {"input_digest": _digest(text.encode()), "results": results}


def cmd_search(args) -> tuple[int, dict[str, Any]]:
    try:
        cfg = SearchConfig(
            a=args.a,
            b=args.b,
            allow_exceptions=args.allow_exceptions,
            max_pairs=args.max_pairs,
            time_budget=args.time_budget,
            worker_count=args.workers if args.workers is not None else default_workers(),
            theorem_pruning=args.theorem_pruning,
        )
    except InvalidArgumentError as exc:
        raise UsageError(str(exc)) from None
    outcome = search_max(cfg)
    emitted = []
    if args.emit_extremal:
        out_dir = Path(args.emit_extremal)
        out_dir.mkdir(parents=True, exist_ok=True)
        for k, (_, rep) in enumerate(outcome.extremal_classes):
            path = out_dir / f"m{cfg.a}{cfg.b}_class{k}.json"
            save_system(rep, path)
            emitted.append(str(path))
    results = {
        "a": cfg.a,
        "b": cfg.b,
        "allow_exceptions": cfg.allow_exceptions,
        "max_m": outcome.max_m,
        "classes": outcome.class_count,
        "class_forms": [cf.hex() for cf, _ in outcome.extremal_classes],
        "nodes_explored": outcome.nodes_explored,
        "proof_of_maximality": outcome.proof_of_maximality,
        "emitted": emitted,
    }
    config = json.dumps({k: v for k, v in vars(args).items() if k != "func"}, sort_keys=True)
    return EXIT_OK, {"input_digest": _digest(config.encode()), "results": results}


def cmd_lemmas(args) -> tuple[int, dict[str, Any]]:
    if args.max < 2:
        raise UsageError("--max must be at least 2")
    results = {}
    ok = True
    for scan in (scan_lemma_one_third(args.max), scan_lemma_one_fifth(args.max)):
        match = scan.equality_points == EXPECTED_EQUALITY[scan.name]
        ok &= scan.ok and match
        results[scan.name] = {
            "pairs_scanned": len(scan.rows),
            "violations": [[a, b, rational_str(r)] for a, b, r in scan.violations],
            "equality_points": [list(p) for p in scan.equality_points],
            "equality_as_expected": match,
        }
    config = json.dumps({"max": args.max})
    return (EXIT_OK if ok else EXIT_CONTRADICTION), {"input_digest": _digest(config.encode()), "results": results}


def _human(command: str, code: int, report: dict[str, Any]) -> str:
    res = report["results"]
    lines = []
    if command == "verify":
        sysinfo = res["system"]
        sig = sysinfo["sigma"]["exact"] if sysinfo["sigma"] else "undefined"
        lines.append(f"m = {sysinfo['m']}, |V| = {sysinfo['n']}, sigma = {sig}")
        for r in res["checks"]:
            extra = {k: v for k, v in r.items() if k not in ("check", "passed")}
            if "sigma" in extra:
                extra["sigma"] = extra["sigma"]["exact"]
            lines.append(f"  {r['check']:<13} {'PASS' if r['passed'] else 'FAIL'}  {json.dumps(extra) if extra else ''}".rstrip())
    elif command == "construct":
        sizes = ", ".join(f"({a},{b})" for a, b in res["sizes"])
        lines.append(f"{res['kind']}: m = {res['m']}, sizes {sizes}, sigma = {res['sigma']['exact']}")
    elif command == "search":
        lines.append(f"m({res['a']},{res['b']},1) search, exceptions {'allowed' if res['allow_exceptions'] else 'excluded'}")
        lines.append(f"  max_m = {res['max_m']}, classes = {res['classes']}, nodes = {res['nodes_explored']}")
        if res["proof_of_maximality"]:
            lines.append("  exhaustive: max_m is exact")
        else:
            lines.append("  INDETERMINATE: budget exhausted, max_m is only a lower bound")
    elif command == "lemmas":
        for name, r in res.items():
            lines.append(f"{name}: {r['pairs_scanned']} pairs, {len(r['violations'])} violations, "
                         f"equality at {r['equality_points']}")
    lines.append("status: " + {EXIT_OK: "ok", EXIT_FAIL: "check failed", EXIT_CONTRADICTION: "CONTRADICTION"}[code])
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="setpairs", description=__doc__.splitlines()[0])
    parser.add_argument("--json", action="store_true", help="print the JSON report instead of text")
    parser.add_argument("--report", metavar="PATH", help="also write the JSON report here")
    parser.add_argument("--no-timing", action="store_true", help="omit wall-clock duration from reports")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run checks on a JSON system file")
    p.add_argument("path")
    p.add_argument("--checks", help=f"comma list from {', '.join(CHECKS)}, or 'all' (default)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("construct", help="emit a named system as JSON")
    p.add_argument("kind", choices=KINDS)
    p.add_argument("--n", type=int)
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("search", help="exhaustive search for m(a,b,1)")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--allow-exceptions", action="store_true")
    p.add_argument("--max-pairs", type=int)
    p.add_argument("--time-budget", type=float, default=300.0)
    p.add_argument("--workers", type=int, help="default from $SETPAIRS_WORKERS, else 1")
    p.add_argument("--theorem-pruning", action="store_true", help="also prune with the 5/6 ceiling")
    p.add_argument("--emit-extremal", metavar="DIR")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("lemmas", help="exact scans of the binomial ratio bounds")
    p.add_argument("--max", type=int, default=100)
    p.set_defaults(func=cmd_lemmas)
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        code, report = args.func(args)
    except UsageError as exc:
        print(f"setpairs {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ContradictionError as exc:
        print(f"setpairs {args.command}: CONTRADICTION: {exc}", file=sys.stderr)
        if exc.dump_path:
            print(f"counterexample written to {exc.dump_path}", file=sys.stderr)
        return EXIT_CONTRADICTION
    full = {"command": ["setpairs", *argv], **report, "version": __version__}
    if not args.no_timing:
        full["duration_s"] = round(time.perf_counter() - start, 6)
    text = json.dumps(full, indent=1, sort_keys=True) + "\n"
    if args.report:
        Path(args.report).write_text(text)
    stream = sys.stderr if args.command == "construct" and not args.output else sys.stdout
    stream.write(text if args.json else _human(args.command, code, full) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
