"""Command-line entry point: ``liftproj <subcommand> ...``.

Results go to standard output (or --out), diagnostics to standard error.
Exit codes: 0 success, 1 failed check, 2 invalid arguments, 3 size guard.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

import numpy as np

from . import analysis
from .combinatorics import SizeGuardError, elements_of
from .operators import (build_las_chipped, build_las_cropped, build_sa_plus_prop3, build_sa_plus_thm13,
                        check_las, check_sa_plus, dump_certificate, enumerate_obstructions, load_certificate,
                        sa_plus_rank_lower, sa_plus_rank_upper, tilde_ls_rank)
from .operators.certificates import LasCertificate
from .operators.ranks import sa_plus_rank_cropped
from .polytopes import chipped, cropped
from .symmat import format_real

EXIT_OK, EXIT_FAIL, EXIT_ARGS, EXIT_SIZE = 0, 1, 2, 3


class ArgError(ValueError):
    pass


def _rho(args) -> float:
    if getattr(args, "rho_millis", None) is not None:
        return float(Fraction(args.rho_millis, 1000))
    if args.rho is None:
        raise ArgError("one of --rho or --rho-millis is required")
    return args.rho


def _cell(v) -> str:
    if isinstance(v, (float, np.floating)):
        return format_real(v)
    if v is None:
        return ""
    return str(v)


def _jsonable(v):
    if isinstance(v, np.generic):
        return v.item()
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    return v


def render(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(_jsonable(rows if len(rows) != 1 else rows[0]), indent=2, sort_keys=False) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if rows:
        w.writerow(rows[0].keys())
        for r in rows:
            w.writerow(_cell(v) for v in r.values())
    return buf.getvalue()


# ---- subcommands, each returning (rows, exit code)

def cmd_rank(args):
    rho = _rho(args)
    if args.family == "chipped":
        chipped(args.n, rho)  # validates n and ρ
    elif not rho > 0 or args.n < 1:
        raise ArgError("the cropped cube needs n >= 1 and rho > 0")
    if args.family == "cropped":
        if args.operator == "las":
            r = analysis.las_rank_cropped(args.n, rho)
        elif args.operator == "sa-plus":
            if not 0 < rho <= 0.5:
                raise ArgError("the SA+ formula for the cropped cube needs rho in (0, 1/2]")
            r = analysis.RankResult("cropped", args.n, rho, "SA+", sa_plus_rank_cropped(args.n, rho), "formula")
        else:
            raise ArgError(f"operator {args.operator} is not available for the cropped cube")
        row = {"family": r.family, "n": r.n, "rho": r.rho, "operator": r.operator, "rank": r.rank,
               "lower": r.rank, "upper": r.rank, "method": r.method}
    else:
        if args.operator == "sa-plus":
            lo, hi = sa_plus_rank_lower(args.n, rho), sa_plus_rank_upper(args.n, rho)
            rank = lo if lo == hi else None
            row = {"family": "chipped", "n": args.n, "rho": rho, "operator": "SA+", "rank": rank,
                   "lower": lo, "upper": hi, "method": "formula"}
        elif args.operator == "tilde-ls":
            k = tilde_ls_rank(args.n, rho)
            row = {"family": "chipped", "n": args.n, "rho": rho, "operator": "tilde-LS", "rank": k,
                   "lower": k, "upper": k, "method": "formula"}
        elif args.operator == "las":
            hi = analysis.cheung_upper(args.n, rho)
            bound = analysis.chipped_rho_bound(args.n)
            lo = args.n if rho <= bound else None
            row = {"family": "chipped", "n": args.n, "rho": rho, "operator": "Las",
                   "rank": args.n if lo else None, "lower": lo, "upper": hi if hi is not None else args.n,
                   "method": "formula"}
        else:
            raise ArgError(f"unknown operator {args.operator}")
    return [row], EXIT_OK


def cmd_threshold(args):
    if args.which == "q":
        r = analysis.q_of_n(args.n, args.tol, mode=args.mode or "W")
        row = {"which": "q", "n": r.n, "value": r.value, "lo": r.bracket[0], "hi": r.bracket[1], "tol": r.tol,
               "theta": None, "lower_bound": r.data["bounds"][0], "upper_bound": r.data["bounds"][1]}
    else:
        r = analysis.p_of_n(args.n, args.tol, mode=args.mode or "scalar")
        row = {"which": "p", "n": r.n, "value": r.value, "lo": r.bracket[0], "hi": r.bracket[1], "tol": r.tol,
               "theta": r.argument, "lower_bound": r.data["lower_bound"], "upper_bound": None}
    return [row], EXIT_OK


def cmd_gap(args):
    rho = _rho(args)
    r = analysis.gap_chipped(args.n, args.k, rho, oracle=args.oracle)
    return [{"n": r.n, "k": r.k, "rho": r.rho, "gap": r.gap, "numerator": r.numerator,
             "denominator": r.denominator}], EXIT_OK


def _description(family: str, n: int, rho: float):
    return chipped(n, rho) if family == "chipped" else cropped(n, rho)


def cmd_cert(args):
    if args.action == "build":
        rho = _rho(args)
        if args.op == "sa-plus-prop3":
            cert = build_sa_plus_prop3(args.n, rho)
        elif args.op == "sa-plus-thm13":
            cert = build_sa_plus_thm13(args.n, rho, _need(args.k, "--k"))
        elif args.op == "las-chipped":
            cert = build_las_chipped(args.n, _need(args.theta, "--theta"), rho)
        else:
            cert = build_las_cropped(args.n, _need(args.k, "--k"), rho)
        buf = io.StringIO()
        dump_certificate(cert, buf)
        return buf.getvalue(), EXIT_OK
    if args.input is None:
        raise ArgError("cert check needs --in")
    with open(args.input) as fh:
        lines = fh.readlines()
    if not lines:
        raise ArgError("empty certificate file")
    op, _, n = lines[0].split()
    if op == "las":
        if args.family is None:
            raise ArgError("checking a Las certificate needs --family and --rho")
        cert = load_certificate(lines, _description(args.family, int(n), _rho(args)))
        rep = check_las(cert, args.tol)
    else:
        cert = load_certificate(lines)
        rho = _rho(args) if (args.rho is not None or args.rho_millis is not None) else None
        if rho is None:
            raise ArgError("checking an SA+ certificate needs --rho (chipped description)")
        rep = check_sa_plus(cert, chipped(int(n), rho), args.tol)
    rows = [{"condition": c.name, "passed": c.passed, "worst": float(c.worst),
             "where": " ".join(str(w) for w in c.where)} for c in rep.conditions]
    return rows, EXIT_OK if rep.passed else EXIT_FAIL


def _need(v, flag):
    if v is None:
        raise ArgError(f"{flag} is required for this operation")
    return v


def cmd_obstructions(args):
    rho = _rho(args)
    desc = _description(args.family, args.n, rho)
    obs = enumerate_obstructions(desc, args.k)
    rows = [{"O": " ".join(str(e) for e in elements_of(o.mask)), "size": len(o.elements),
             "inequality": o.inequality, "branch": o.branch} for o in obs]
    if not rows:
        rows = [{"O": "", "size": 0, "inequality": None, "branch": "none"}]
    return rows, EXIT_OK


def cmd_figure(args):
    ns = [int(v) for v in args.ns.split(",")] if args.ns else None
    header, rows, meta = analysis.figure_data(args.which, ns, threads=args.threads)
    for m in meta:
        if args.which == "fig4" and not m["monotone"]:
            print(f"warning: non-monotone Las-rank sequence for n={m['n']}", file=sys.stderr)
        print(f"# {json.dumps(_jsonable(m))}", file=sys.stderr)
    return [dict(zip(header, r)) for r in rows], EXIT_OK


def cmd_identity(args):
    n = args.n
    if args.which == "lemma5":
        r = analysis.check_factorization(n, seed=args.seed)
    elif args.which == "lemma6":
        r = analysis.check_localizer_identity(n)
    elif args.which == "eq2":
        r = analysis.check_pd_rule(n)
    else:
        r = analysis.check_collapse(n, method=args.method)
    return [{"which": r.which, "n": n, "passed": r.passed, "worst": r.worst, "cases": r.cases}], \
        EXIT_OK if r.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="liftproj", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, rho=True):
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--out", help="write results here instead of standard output")
        sp.add_argument("--threads", type=int, default=1)
        if rho:
            g = sp.add_mutually_exclusive_group()
            g.add_argument("--rho", type=float)
            g.add_argument("--rho-millis", type=int, help="rho as an integer number of thousandths")

    sp = sub.add_parser("rank", help="rank of a chipped or cropped hypercube")
    common(sp)
    sp.add_argument("--family", choices=("chipped", "cropped"), required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--operator", choices=("las", "sa-plus", "tilde-ls"), default="las")
    sp.set_defaults(func=cmd_rank)

    sp = sub.add_parser("threshold", help="q(n) or p(n)")
    common(sp, rho=False)
    sp.add_argument("--which", choices=("q", "p"), required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--tol", type=float, default=None)
    sp.add_argument("--mode", choices=("W", "full", "scalar", "eigen"))
    sp.set_defaults(func=cmd_threshold)

    sp = sub.add_parser("gap", help="integrality gap of Γ^k(P(n, ρ)) along ē")
    common(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--oracle", choices=("formula", "lp"), default="formula")
    sp.set_defaults(func=cmd_gap)

    sp = sub.add_parser("cert", help="build or check a certificate")
    common(sp)
    sp.add_argument("action", choices=("build", "check"))
    sp.add_argument("--op", choices=("sa-plus-prop3", "sa-plus-thm13", "las-chipped", "las-cropped"))
    sp.add_argument("--n", type=int)
    sp.add_argument("--k", type=int)
    sp.add_argument("--theta", type=float)
    sp.add_argument("--in", dest="input")
    sp.add_argument("--family", choices=("chipped", "cropped"))
    sp.add_argument("--tol", type=float, default=1e-9)
    sp.set_defaults(func=cmd_cert)

    sp = sub.add_parser("obstructions", help="k-small obstructions")
    common(sp)
    sp.add_argument("--family", choices=("chipped", "cropped"), default="chipped")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.set_defaults(func=cmd_obstructions)

    sp = sub.add_parser("figure", help="CSV data for a figure")
    common(sp, rho=False)
    sp.add_argument("--which", choices=("fig2", "fig3", "fig4", "fig6"), required=True)
    sp.add_argument("--ns", help="comma-separated n values (default: the full figure)")
    sp.set_defaults(func=cmd_figure)

    sp = sub.add_parser("identity-check", help="numerical identity checks")
    common(sp, rho=False)
    sp.add_argument("--which", choices=("lemma5", "lemma6", "eq2", "collapse"), required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--method", choices=("grid", "interval"), default="grid",
                    help="collapse check: full grid, or the two grid points around the boundary")
    sp.set_defaults(func=cmd_identity)
    return p


def _validate(args) -> None:
    if getattr(args, "threads", 1) < 1:
        raise ArgError("--threads must be positive")
    if args.command == "threshold" and args.tol is None:
        args.tol = 1e-9 if args.which == "q" else 1e-12
    if args.command == "cert" and args.action == "build":
        if args.op is None or args.n is None:
            raise ArgError("cert build needs --op and --n")


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_ARGS if e.code else EXIT_OK
    try:
        _validate(args)
        out, code = args.func(args)
    except SizeGuardError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SIZE
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ARGS
    text = out if isinstance(out, str) else render(out, args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
