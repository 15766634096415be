"""Command-line interface: ``lensball <command> ...``.

Single queries print pretty JSON, sweeps print JSON lines, enumerations CSV.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from math import gcd, isqrt

from . import cfrac, families, rset, search
from .cfrac import Fraction, FractionError, StringError
from .lattice import LatticeSubset

EMBED_SWEEP_BOUND = 300
ARITH_SWEEP_BOUND = 5000

EXIT_OK, EXIT_NO, EXIT_INPUT, EXIT_LIMIT = 0, 1, 2, 3


class InputError(Exception):
    pass


def _fraction(text: str) -> Fraction:
    try:
        return cfrac.parse_fraction(text)
    except FractionError as exc:
        raise InputError(str(exc)) from None


def _dump(obj) -> None:
    print(json.dumps(obj, indent=2))


def cmd_decide(args) -> int:
    res = rset.is_in_R(_fraction(args.fraction))
    out = {"fraction": args.fraction.strip(), **res.to_dict()}
    _dump(out)
    return EXIT_OK if res.in_R else EXIT_NO


def cmd_embed(args) -> int:
    fr = _fraction(args.fraction)
    targets = [fr]
    if args.dual:
        targets.append(Fraction(fr.p, fr.p - fr.q))
    results = []
    for g in targets:
        r = search.embed_string(cfrac.neg_expand(g), max_nodes=args.max_nodes)
        results.append((g, r))
    if args.csv:
        for g, r in results:
            print(f"# {g} {cfrac.format_string(r.string)} found={r.found}")
            if r.found:
                sys.stdout.write(LatticeSubset.from_rows(r.matrix).matrix_csv())
    else:
        _dump({
            "fraction": str(fr),
            "results": [{"fraction": str(g), **r.to_dict()} for g, r in results],
        })
    if any(r.status != "ok" for _, r in results):
        return EXIT_LIMIT
    return EXIT_OK if all(r.found for _, r in results) else EXIT_NO


def cmd_family(args) -> int:
    if args.invariant not in (-1, -2, -3):
        raise InputError(f"--invariant must be -1, -2 or -3, got {args.invariant}")
    if not 0 <= args.max_param <= families.MAX_PARAM:
        raise InputError(f"--max-param must be in 0..{families.MAX_PARAM}")
    if args.max_k < 1:
        raise InputError("--max-k must be at least 1")
    specs = families.enumerate_family(args.invariant, args.max_param, max_k=args.max_k)
    if not args.keep_duplicates:
        seen, kept = set(), []
        for sp in specs:
            s = families.gen_string(sp)
            if s not in seen:
                seen.add(s)
                kept.append(sp)
        specs = kept
    sys.stdout.write(families.family_csv(specs))
    return EXIT_OK


def cmd_cg(args) -> int:
    if args.m < 2 or args.m > search.MAX_CG_M:
        raise InputError(f"m must be in 2..{search.MAX_CG_M}")
    if gcd(args.q, args.m) != 1:
        raise InputError(f"q={args.q} is not coprime to m^2")
    rep = search.casson_gordon_check(args.m, args.q, args.tolerance)
    _dump(rep.to_dict())
    return EXIT_OK if rep.all_pm_one else EXIT_NO


def cmd_expand(args) -> int:
    text = args.value.strip()
    try:
        if args.plus:
            s = cfrac.parse_string(text)
            val = cfrac.plus_eval(s)
            out = {"plus": list(s), "value": f"{val.numerator}/{val.denominator}"}
            if len(s) % 2 == 0 and all(a >= 1 for a in s):
                out["minus"] = list(cfrac.plus_to_minus(s))
            _dump(out)
            return EXIT_OK
        if "/" in text and not text.startswith("["):
            fr = _fraction(text)
            s = cfrac.neg_expand(fr)
        else:
            s = cfrac.check_neg_string(cfrac.parse_string(text))
            fr = cfrac.neg_eval(s)
    except (StringError, ArithmeticError, ZeroDivisionError) as exc:
        raise InputError(str(exc)) from None
    rev, rev_fr = cfrac.reverse_string(s)
    _dump({
        "fraction": str(fr),
        "string": list(s),
        "dual": list(cfrac.riemenschneider_dual(s)),
        "dual_fraction": str(Fraction(fr.p, fr.p - fr.q)),
        "reverse": list(rev),
        "reverse_fraction": str(rev_fr),
        "negsum": cfrac.negsum(s),
    })
    return EXIT_OK


def _embed_rows(p: int, with_cg: bool, max_nodes) -> list[dict]:
    found = {}
    for q in range(1, p):
        if gcd(p, q) == 1:
            r = search.embed_string(cfrac.neg_expand(Fraction(p, q)), max_nodes=max_nodes)
            found[q] = r.found if r.status == "ok" else None
    m = isqrt(p)
    cg_here = with_cg and p % 2 == 1 and m * m == p and 2 <= m <= search.MAX_CG_M
    rows = []
    for q, e in found.items():
        in_r = rset.is_in_R(Fraction(p, q)).in_R
        d = found[p - q]
        rec = {"p": p, "q": q, "in_R": in_r, "embeds_pq": e, "embeds_dual": d}
        if with_cg:
            rec["cg_ok"] = search.casson_gordon_check(m, q).all_pm_one if cg_here else None
        both = None if e is None or d is None else (e and d)
        rec["agree"] = None if both is None else (in_r == both)
        rows.append(rec)
    return rows


def _arith_rows(p: int) -> list[dict]:
    qs = [q for q in range(1, p) if gcd(p, q) == 1]
    sums = cfrac.negsum_batch([p] * len(qs), qs) + cfrac.negsum_batch(
        [p] * len(qs), [p - q for q in qs])
    rows = []
    for q, total in zip(qs, sums.tolist()):
        fr = Fraction(p, q)
        orb = rset.orbit(fr)
        in_r = rset.is_in_R(fr).in_R
        orbit_ok = (
            len(orb) <= 4
            and all(rset.f_map(x) in orb and rset.g_map(x) in orb for x in orb)
            and rset.f_map(rset.f_map(fr)) == fr
            and rset.g_map(rset.g_map(fr)) == fr
            and all(rset.is_in_R(x).in_R == in_r for x in orb)
        )
        rows.append({"p": p, "q": q, "in_R": in_r, "negsum_ok": total == -2,
                     "orbit_ok": orbit_ok})
    return rows


def _sweep_worker(task):
    p, arith, with_cg, max_nodes = task
    return _arith_rows(p) if arith else _embed_rows(p, with_cg, max_nodes)


def cmd_crosscheck(args) -> int:
    bound = args.bound or (ARITH_SWEEP_BOUND if args.arith else EMBED_SWEEP_BOUND)
    if args.max_p < 2:
        raise InputError("--max-p must be at least 2")
    if args.max_p > bound:
        raise InputError(f"--max-p {args.max_p} exceeds the safety bound {bound}")
    if args.jobs < 1:
        raise InputError("--jobs must be positive")
    tasks = [(p, args.arith, args.with_cg, args.max_nodes) for p in range(2, args.max_p + 1)]
    if args.jobs == 1:
        chunks = map(_sweep_worker, tasks)
    else:
        pool = ProcessPoolExecutor(max_workers=args.jobs)
        chunks = pool.map(_sweep_worker, tasks, chunksize=4)
    summary = {"mode": "arith" if args.arith else "embed", "max_p": args.max_p, "pairs": 0}
    if args.arith:
        summary.update(negsum_failures=0, orbit_failures=0)
    else:
        summary.update(disagreements=0, resource_exceeded=0)
        if args.with_cg:
            summary["cg_disagreements"] = 0
    try:
        # executor.map yields in task order, so output is independent of --jobs
        for rows in chunks:
            for rec in rows:
                summary["pairs"] += 1
                if args.arith:
                    summary["negsum_failures"] += not rec["negsum_ok"]
                    summary["orbit_failures"] += not rec["orbit_ok"]
                else:
                    if rec["agree"] is None:
                        summary["resource_exceeded"] += 1
                    elif not rec["agree"]:
                        summary["disagreements"] += 1
                    if args.with_cg and rec["cg_ok"] is not None:
                        summary["cg_disagreements"] += rec["cg_ok"] != rec["in_R"]
                print(json.dumps(rec))
    finally:
        if args.jobs != 1:
            pool.shutdown()
    print(json.dumps({"summary": summary}))
    bad = sum(v for k, v in summary.items() if k.endswith(("failures", "disagreements")))
    if summary.get("resource_exceeded"):
        return EXIT_LIMIT
    return EXIT_OK if bad == 0 else EXIT_NO


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="lensball",
        description="Rational-ball fillings of lens spaces and ribbon 2-bridge links.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decide", help="decide membership of p/q in R")
    p.add_argument("fraction", help="reduced fraction p/q with p > q >= 1")
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("embed", help="search for a lattice embedding of the string of p/q")
    p.add_argument("fraction")
    p.add_argument("--dual", action="store_true", help="also search the string of p/(p-q)")
    p.add_argument("--max-nodes", type=int, default=None,
                   help="search node cap (default: $LENSBALL_MAX_NODES or 10^8)")
    p.add_argument("--csv", action="store_true", help="print matrices as CSV")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("family", help="enumerate a string family as CSV")
    p.add_argument("--invariant", type=int, required=True, help="-1, -2 or -3")
    p.add_argument("--max-param", type=int, default=3)
    p.add_argument("--max-k", type=int, default=3,
                   help="largest number of c-parameters for invariant -3 (only odd counts occur)")
    p.add_argument("--keep-duplicates", action="store_true",
                   help="keep rows whose string repeats an earlier row")
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("crosscheck", help="sweep all pairs p/q up to --max-p")
    p.add_argument("--max-p", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--with-cg", action="store_true",
                   help="add the Casson-Gordon check for odd squares")
    p.add_argument("--arith", action="store_true",
                   help="arithmetic checks only (string sums, orbits), no embeddings")
    p.add_argument("--bound", type=int, default=None, help="override the safety bound on --max-p")
    p.add_argument("--max-nodes", type=int, default=None)
    p.set_defaults(func=cmd_crosscheck)

    p = sub.add_parser("cg", help="Casson-Gordon sums for K(m^2, q)")
    p.add_argument("m", type=int)
    p.add_argument("q", type=int)
    p.add_argument("--tolerance", type=float, default=1e-6)
    p.set_defaults(func=cmd_cg)

    p = sub.add_parser("expand", help="continued-fraction utilities")
    p.add_argument("value", help="p/q or a string such as [3,2^[2],4]")
    p.add_argument("--plus", action="store_true",
                   help="read the string as a positive continued fraction")
    p.set_defaults(func=cmd_expand)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, FractionError, StringError, families.FamilyError) as exc:
        print(f"lensball: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
