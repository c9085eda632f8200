"""Command-line front end.

Commands and what they reproduce:

  alpha         alpha_{i,d} table (reciprocal of the normalized Bessel series)
  tree-coeffs   a_{n,k} table from decomposing D_n over the S_k basis
  gamma         gamma_k polynomial solved from its linear system
  verify-euclid sphere-mean identity, radial commuting identity, annihilation identity
  verify-tree   cone identity on random/chi/constant/Busemann functions plus
                agreement of the three a_{n,k} routes
  converge      horocyclic partial sums for a chosen tree function
  holom         two-stage horocyclic evaluation of harmonic functions

Rationals are written as decimal numerator/denominator strings.  Exit
status is 0 when every check passes, 1 when any fails and 2 on bad usage.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from genmvp import euclidean_mvp as em
from genmvp import laurent_coeffs as lc
from genmvp import series_kernel as sk
from genmvp import tree_laplace as tl
from genmvp.polynomials import parse_poly, random_multipoly
from genmvp.reports import Report

OUTPUT_DIR_ENV = "GENMVP_OUTPUT_DIR"


def _records_csv(records: list[dict], fields: list[str]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n", extrasaction="ignore")
    w.writeheader()
    w.writerows(records)
    return buf.getvalue()


def _jsonl(records) -> str:
    return "".join(json.dumps(r, sort_keys=True) + "\n" for r in records)


def _emit(text: str, output: str | None) -> None:
    if output is None or output == "-":
        sys.stdout.write(text)
        return
    path = Path(output)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not path.is_absolute():
        path = Path(base) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _report_output(reports: list[Report], args) -> int:
    if args.format == "csv":
        rows = [{**r.to_dict(), "params": json.dumps(r.params, sort_keys=True)} for r in reports]
        text = _records_csv(rows, ["check", "params", "status", "residual"])
    else:
        text = _jsonl(r.to_dict(args.details) for r in reports)
    _emit(text, args.output)
    failed = [r for r in reports if not r.ok]
    summary = {"checks": len(reports), "failed": len(failed)}
    print(json.dumps(summary, sort_keys=True), file=sys.stderr)
    if failed:
        print(json.dumps({"failures": [r.to_dict(True) for r in failed]}, sort_keys=True, default=str),
              file=sys.stderr)
        return 1
    return 0


def _map(fn, items, jobs: int):
    if jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def cmd_alpha(args) -> int:
    series = sk.alpha_coeffs(args.d, args.order)
    recs = series.records()
    if args.format == "csv":
        _emit(_records_csv(recs, ["d", "i", "num", "den"]), args.output)
    else:
        _emit(_jsonl(recs), args.output)
    return 0


def cmd_tree_coeffs(args) -> int:
    table = lc.coeff_table(args.q, args.n)
    if args.format == "csv":
        _emit(table.to_csv(), args.output)
    else:
        _emit(_jsonl(table.records()), args.output)
    return 0


def cmd_gamma(args) -> int:
    g = lc.solve_gamma(args.k, args.q)
    if args.format == "csv":
        rows = [{"k": g.k, "q": g.q, "j": g.k - i, "coeff": str(c)} for i, c in enumerate(g.coeffs)]
        _emit(_records_csv(rows, ["k", "q", "j", "coeff"]), args.output)
    else:
        _emit(g.to_json() + "\n", args.output)
    return 0


def _euclid_item(item) -> list[Report]:
    text, d = item
    f = parse_poly(text, d)
    return [em.mvp_check(f), em.commuting_check(f)]


def cmd_verify_euclid(args) -> int:
    rng = random.Random(args.seed)
    dims = [args.d] if args.d else list(range(1, 6))
    polys = [(str(p), p.dim) for p in (parse_poly(t, args.d) for t in args.poly)]
    for _ in range(args.count):
        d = rng.choice(dims)
        polys.append((str(random_multipoly(d, args.degree, rng)), d))
    reports: list[Report] = []
    for pair in _map(_euclid_item, polys, args.jobs):
        reports.extend(pair)
    for d in dims:
        for k in range(args.kmax + 1):
            reports.append(em.annihilation_check(k, d, max(args.kmax, 1)))
    for d in dims:
        for t in args.eigen_t:
            reports.append(sk.eigen_product_check(d, t, args.order, args.tolerance))
    return _report_output(reports, args)


def _tree_item(item) -> list[Report]:
    q, n, kind, seed = item
    R = 2 * n
    if kind == "random":
        f = tl.make_random(q, R, seed)
    elif kind == "chi":
        f = tl.make_chi(q, R)
    elif kind == "constant":
        f = tl.make_constant(1, q, R)
    else:
        f = tl.make_busemann(q, R)
    return [tl.cone_identity_check(f, m) for m in range(n + 1)]


def cmd_verify_tree(args) -> int:
    items = [(args.q, args.n, "random", args.seed + i) for i in range(args.count)]
    items += [(args.q, args.n, kind, None) for kind in ("chi", "constant", "busemann")]
    reports: list[Report] = []
    for batch in _map(_tree_item, items, args.jobs):
        reports.extend(batch)
    reports.append(lc.triple_agreement(args.q, args.table_n))
    reports.append(lc.structural_check(args.q, args.table_n))
    return _report_output(reports, args)


def _make_function(args, R: int) -> tl.TreeFn:
    q = args.q
    if args.function == "chi":
        return tl.make_chi(q, R)
    if args.function == "const":
        return tl.make_constant(Fraction(args.value), q, R)
    if args.function == "busemann":
        return tl.make_busemann(q, R, tl.parse_address(args.end))
    if args.function == "radial":
        return tl.make_radial(q, R, [Fraction(1, q ** (2 * m)) for m in range(R + 1)])
    if args.function == "random":
        return tl.make_random(q, R, args.seed)
    if not args.file:
        raise SystemExit("converge --function file needs --file")
    f = tl.from_json(Path(args.file).read_text())
    if f.q != q:
        raise SystemExit(f"file has q={f.q}, expected {q}")
    return f


def cmd_converge(args) -> int:
    f = _make_function(args, 2 * args.N)
    N = args.N if args.function != "file" else min(args.N, f.radius // 2)
    if args.kind == "cone":
        seq = tl.horocyclic_partial_sums(f, N)
    elif args.kind == "horosummability":
        seq = tl.horosummability_seq(f, N)
    else:
        seq = tl.full_boundary_partial_sums(f, N)
    if args.format == "csv":
        rows = [{"kind": seq.kind, "n": n, "num": str(v.numerator), "den": str(v.denominator)}
                for n, v in seq.entries]
        _emit(_records_csv(rows, ["kind", "n", "num", "den"]), args.output)
    else:
        _emit(seq.to_jsonl(), args.output)
    return 0


def cmd_holom(args) -> int:
    q, R = args.q, 2 * args.N
    b_in = tl.make_busemann(q, R, (0,))
    b_out = tl.make_busemann(q, R, (q,))
    funcs = [tl.make_constant(Fraction(args.value), q, R), b_in, b_out, b_in + b_out.scale(3)]
    reports = [tl.holom_check(h, args.N, args.tolerance) for h in funcs]
    return _report_output(reports, args)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="genmvp", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, reports=False):
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--output", "-o", default=None,
                        help=f"output file (relative paths go under ${OUTPUT_DIR_ENV} if set)")
        if reports:
            sp.add_argument("--details", action="store_true", help="include diagnostics in JSON")
            sp.add_argument("--tolerance", type=float, default=1e-10,
                            help="tolerance for numeric checks; exact checks ignore it")
            sp.add_argument("--jobs", type=int, default=1)

    def positive(text):
        v = int(text)
        if v < 1:
            raise argparse.ArgumentTypeError("must be >= 1")
        return v

    def nonneg(text):
        v = int(text)
        if v < 0:
            raise argparse.ArgumentTypeError("must be >= 0")
        return v

    def tree_q(text):
        v = int(text)
        if v < 2:
            raise argparse.ArgumentTypeError("q must be >= 2")
        return v

    sp = sub.add_parser("alpha", help="alpha_{i,d} coefficients")
    sp.add_argument("--d", type=positive, required=True)
    sp.add_argument("--order", type=nonneg, default=sk.DEFAULT_ORDER)
    common(sp)
    sp.set_defaults(func=cmd_alpha)

    sp = sub.add_parser("tree-coeffs", help="a_{n,k} table for -N <= n <= N")
    sp.add_argument("--q", type=tree_q, required=True)
    sp.add_argument("--n", type=nonneg, required=True)
    common(sp)
    sp.set_defaults(func=cmd_tree_coeffs)

    sp = sub.add_parser("gamma", help="gamma_k polynomial")
    sp.add_argument("--q", type=tree_q, required=True)
    sp.add_argument("--k", type=nonneg, required=True)
    common(sp)
    sp.set_defaults(func=cmd_gamma)

    sp = sub.add_parser("verify-euclid", help="exact Euclidean identities on random polynomials")
    sp.add_argument("--d", type=positive, default=None, help="dimension (default: 1..5 mixed)")
    sp.add_argument("--degree", type=nonneg, default=8)
    sp.add_argument("--count", type=nonneg, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--poly", action="append", default=[], help="extra polynomial, e.g. '1/2 * x1^2 x2'")
    sp.add_argument("--kmax", type=nonneg, default=10, help="annihilation identity for k <= kmax")
    sp.add_argument("--eigen-t", type=float, action="append", default=[],
                    help="also run the numeric eigenfunction check at this t")
    sp.add_argument("--order", type=nonneg, default=40, help="alpha terms for --eigen-t")
    common(sp, reports=True)
    sp.set_defaults(func=cmd_verify_euclid)

    sp = sub.add_parser("verify-tree", help="cone identity batches and coefficient agreement")
    sp.add_argument("--q", type=tree_q, required=True)
    sp.add_argument("--n", type=nonneg, required=True, help="check n' <= n on balls of radius 2n")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--count", type=nonneg, default=50, help="number of random functions")
    sp.add_argument("--table-n", type=nonneg, default=10)
    common(sp, reports=True)
    sp.set_defaults(func=cmd_verify_tree)

    sp = sub.add_parser("converge", help="horocyclic partial-sum sequence")
    sp.add_argument("--q", type=tree_q, required=True)
    sp.add_argument("--function", choices=("chi", "const", "busemann", "radial", "random", "file"),
                    required=True)
    sp.add_argument("--N", type=positive, required=True)
    sp.add_argument("--kind", choices=("cone", "horosummability", "full-boundary"), default="cone")
    sp.add_argument("--file", default=None, help="TreeFn JSON for --function file")
    sp.add_argument("--value", type=str, default="1", help="constant value for --function const")
    sp.add_argument("--end", default="0", help="ray prefix for --function busemann, e.g. '0.1'")
    sp.add_argument("--seed", type=int, default=0)
    common(sp)
    sp.set_defaults(func=cmd_converge)

    sp = sub.add_parser("holom", help="two-stage evaluation of harmonic functions")
    sp.add_argument("--q", type=tree_q, required=True)
    sp.add_argument("--N", type=positive, required=True)
    sp.add_argument("--value", type=str, default="1")
    common(sp, reports=True)
    sp.set_defaults(func=cmd_holom)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, MemoryError) as exc:
        parser.exit(2, f"genmvp: error: {exc}\n")


if __name__ == "__main__":
    sys.exit(main())
