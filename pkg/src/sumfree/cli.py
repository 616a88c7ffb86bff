"""Command-line front end: sf, construct, verify, spectrum, oracle.

All output is deterministic JSON (CSV for spectra).  Exit codes: 0 success,
2 counterexample, 3 unproved or indeterminate, 64 usage error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import os
import sys
from pathlib import Path

from filelock import FileLock

from . import build
from .errors import SumFreeError
from .fourier import spectrum
from .sets import GroupSet, is_sum_free
from .solve import SOLVER_VERSION, Budget, SearchOutcome, is_cuboid_covered, sf_hierarchy
from .space import LinearAuto, make_space
from .verify.laws import EXIT_CODES, LAWS, check_law, replay
from .verify.oracle import oracle_max_sum_free

EX_USAGE = 64
CACHE_ENV = "SUMFREE_CACHE_DIR"

log = logging.getLogger("sumfree")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


# -- cache ---------------------------------------------------------------------


def cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or Path.home() / ".cache"
    return Path(base) / "sumfree"


def _cache_key(p: int, n: int, k: int, dedup: str) -> str:
    ident = json.dumps({"p": p, "n": n, "k": k, "dedup": dedup, "solver": SOLVER_VERSION}, sort_keys=True)
    return hashlib.sha256(ident.encode()).hexdigest()


def _validated(entry: dict, p: int, n: int, k: int) -> list[SearchOutcome] | None:
    """Rebuild cached levels, re-checking every witness; None if anything is off."""
    try:
        if entry.get("solver_version") != SOLVER_VERSION or len(entry["levels"]) != k + 1:
            return None
        levels = []
        for j, cert in enumerate(entry["levels"]):
            if cert["k"] != j or cert["status"] != "proved":
                return None
            ws = [GroupSet.from_hex(p, n, h) for h in cert["witnesses"]]
            if any(len(w) != cert["value"] or not is_sum_free(w) for w in ws):
                return None
            if cert["value"] and not ws:
                return None
            levels.append(SearchOutcome(cert["value"], ws, "proved", cert["nodes"], cert["dedup"]))
        return levels
    except (KeyError, TypeError, ValueError, SumFreeError):
        return None


def cached_hierarchy(p: int, n: int, k: int, dedup: str, budget: Budget, use_cache: bool) -> tuple[list[SearchOutcome], bool]:
    s = make_space(p, n)
    if not use_cache:
        return sf_hierarchy(s, k, budget, dedup=dedup), False
    root = cache_dir()
    root.mkdir(parents=True, exist_ok=True)
    path = root / f"{_cache_key(p, n, k, dedup)}.json"
    with FileLock(str(path) + ".lock"):
        if path.exists():
            try:
                levels = _validated(json.loads(path.read_text()), p, n, k)
            except (OSError, json.JSONDecodeError):
                levels = None
            if levels is not None:
                return levels, True
            log.warning("discarding unusable cache entry %s", path.name)
        levels = sf_hierarchy(s, k, budget, dedup=dedup)
        if all(lv.proved for lv in levels):
            entry = {"solver_version": SOLVER_VERSION, "levels": [lv.certificate(j) for j, lv in enumerate(levels)]}
            tmp = path.with_suffix(".tmp")
            tmp.write_text(json.dumps(entry, sort_keys=True))
            tmp.replace(path)
    return levels, False


# -- subcommands ---------------------------------------------------------------


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def cmd_sf(args) -> tuple[str, int]:
    budget = Budget(max_nodes=args.max_nodes)
    levels, _ = cached_hierarchy(args.p, args.n, args.k, args.dedup, budget, not args.no_cache)
    certs = []
    for j, lv in enumerate(levels):
        cert = lv.certificate(j)
        cert.update(p=args.p, n=args.n)
        certs.append(cert)
    out = {
        "p": args.p,
        "n": args.n,
        "k": args.k,
        "solver_version": SOLVER_VERSION,
        "table": [lv.value for lv in levels],
        "witness_counts": [len(lv.witnesses) for lv in levels],
        "status": [lv.status for lv in levels],
        "levels": certs,
    }
    code = 0 if all(lv.proved for lv in levels) else EXIT_CODES["unproved"]
    return _dump(out), code


FAMILIES = (
    "cuboid",
    "very_structured",
    "structured",
    "witness_sf2",
    "rs_low",
    "rs_high",
    "rs_split",
    "witness_sf1",
)


def _construct(args) -> GroupSet:
    s = make_space(args.p, args.n)
    fam = args.family
    if fam == "cuboid":
        return build.cuboid(s)
    if fam == "very_structured":
        P = GroupSet.from_hex(args.p, args.n - 1, args.P) if args.P and args.n > 1 else None
        return build.very_structured(s, P)
    if fam == "structured":
        ell = args.ell or args.n
        P = GroupSet.from_hex(args.p, ell - 1, args.P) if args.P and ell > 1 else None
        auto = LinearAuto.identity(args.n)
        return build.structured(s, build.StructuredWitness(ell, auto, P))
    if fam == "witness_sf2":
        return build.witness_sf2_2mod3(s, args.x)
    if fam == "witness_sf1":
        return build.witness_sf1_1mod3(s, args.x)
    variant = fam.split("_", 1)[1]
    K = GroupSet.from_hex(args.p, args.n - 1, args.K) if args.K and args.n > 1 else None
    return build.rs_family(s, variant, K)


def cmd_construct(args) -> tuple[str, int]:
    a = _construct(args)
    covered = None if a.space.p % 3 == 1 else is_cuboid_covered(a)
    out = {
        "family": args.family,
        "p": args.p,
        "n": args.n,
        "set": a.to_hex(),
        "elements": [list(c) for c in a.coords()],
        "size": len(a),
        "sum_free": is_sum_free(a),
        "cuboid_covered": covered,
    }
    return _dump(out), 0


def cmd_verify(args) -> tuple[str, int]:
    if args.replay:
        cert = json.loads(Path(args.replay).read_text())
        cert = cert.get("certificate", cert)
        fails = replay(cert)
        return _dump({"law": cert["law"], "still_fails": fails}), (EXIT_CODES["counterexample"] if fails else 0)
    if not args.law or args.p is None or args.n is None:
        raise UsageError("verify needs --law, --p and --n (or --replay)")
    report = check_law(args.law, make_space(args.p, args.n), args.mode, args.trials, args.seed)
    return _dump(report.to_json()), report.exit_code


def cmd_spectrum(args) -> tuple[str, int]:
    a = GroupSet.from_hex(args.p, args.n, args.set)
    vals = spectrum(a).values
    if args.format == "json":
        rows = [[i, float(v.real), float(v.imag)] for i, v in enumerate(vals)]
        return _dump({"p": args.p, "n": args.n, "set": a.to_hex(), "values": rows}), 0
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["index", "real", "imag"])
    for i, v in enumerate(vals):
        w.writerow([i, repr(float(v.real)), repr(float(v.imag))])
    return buf.getvalue(), 0


def cmd_oracle(args) -> tuple[str, int]:
    out = oracle_max_sum_free(make_space(args.p, args.n))
    cert = out.certificate(0)
    cert.update(p=args.p, n=args.n)
    return _dump(cert), 0


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sumfree", description="Sum-free sets in F_p^n: search, constructions, law checks.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, output=True):
        sp.add_argument("--p", type=int, required=True)
        sp.add_argument("--n", type=int, required=True)
        if output:
            sp.add_argument("-o", "--output", help="write to a file instead of stdout")

    sp = sub.add_parser("sf", help="compute sf_0..sf_k with witness certificates")
    common(sp)
    sp.add_argument("--k", type=int, default=0)
    sp.add_argument("--max-nodes", type=int, default=Budget().max_nodes)
    sp.add_argument("--dedup", choices=("none", "anchored", "dilation", "gl"), default="none")
    sp.add_argument("--no-cache", action="store_true")
    sp.set_defaults(func=cmd_sf)

    sp = sub.add_parser("construct", help="build an extremal-family set and check its properties")
    common(sp)
    sp.add_argument("--family", choices=FAMILIES, required=True)
    sp.add_argument("--P", help="hex set in F_p^(ell-1)")
    sp.add_argument("--K", help="hex subspace of F_p^(n-1)")
    sp.add_argument("--x", type=int, help="direction index in F_p^(n-1)")
    sp.add_argument("--ell", type=int)
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("verify", help="check a law and print a LawReport")
    sp.add_argument("--law", choices=LAWS)
    sp.add_argument("--p", type=int)
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--mode", choices=("exhaustive", "random"), default="exhaustive")
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--replay", help="re-check a counterexample certificate file")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("spectrum", help="Fourier coefficients of a set as CSV")
    common(sp)
    sp.add_argument("--set", required=True, help="hex set")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("oracle", help="exhaustive maximum sum-free sets (|G| <= 25)")
    common(sp)
    sp.set_defaults(func=cmd_oracle)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        text, code = args.func(args)
    except (UsageError, SumFreeError, ValueError, OSError) as exc:
        print(f"sumfree {args.command}: {exc}", file=sys.stderr)
        return EX_USAGE
    if getattr(args, "output", None):
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
