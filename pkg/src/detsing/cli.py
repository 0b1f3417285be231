"""Command line front end: ``detsing <command> ...``."""

from __future__ import annotations

import argparse
import sys
from importlib import resources
from pathlib import Path
from typing import List, Optional

from . import report
from .detvar import check_determinantal, minors, strata_report
from .formats import FormatError, parse_presentation_file, parse_script_file
from .ideals import GroebnerLimits, ResourceLimitError, dimension
from .modellab import PreconditionError
from .polycore import PolySyntaxError, VarSet, parse_poly
from .resolve import model_check, run_script, run_transform, smoothness_report
from .tjurina import (COLUMN, ROW, ChartIndex, all_charts, chart_vars, lci_criteria,
                      tjur_equals_tilde)


def data_path(name: str) -> Path:
    """A shipped example file (``e7.rsc``, ``ex41.dsp``, ...)."""
    return Path(str(resources.files("detsing") / "data" / name))


def _resolve_file(arg: str, suffix: str = ".dsp") -> Path:
    p = Path(arg)
    if p.exists():
        return p
    for cand in (arg, arg + suffix):
        d = data_path(cand)
        if d.exists():
            return d
    raise FileNotFoundError(arg)


def _limits(args) -> GroebnerLimits:
    return GroebnerLimits(max_pairs=args.max_pairs, max_degree=args.max_degree)


def _gens_from(args):
    if args.file:
        p = parse_presentation_file(_resolve_file(args.file))
        return p.ideal(), p.ambient
    if not args.vars or not args.gen:
        raise SystemExit("give a presentation file or --vars with at least one --gen")
    vs = VarSet(args.vars.replace(",", " ").split())
    return [parse_poly(g, vs) for g in args.gen], vs


def cmd_minors(args) -> int:
    p = parse_presentation_file(_resolve_file(args.file))
    t = args.t if args.t is not None else p.t
    for q in minors(p.F, t):
        if not q.is_zero():
            print(q)
    return 0


def cmd_check(args) -> int:
    p = parse_presentation_file(_resolve_file(args.file))
    lim = _limits(args)
    chk = check_determinantal(p, lim)
    st = strata_report(p, lim)
    print(f"type         ({p.m},{p.n},{p.t}) in {p.N} variables")
    print(f"dim X        {chk.dim}")
    print(f"codim X      {chk.codim} (expected {chk.expected_codim})")
    print(f"strata dims  " + " ".join(f"X^{s}:{st.dim(s)}" for s in range(1, p.t + 1)))
    print(f"tilde = Tjur {tjur_equals_tilde(p, st)}")
    print(f"tilde det    {st.tilde_is_determinantal}")
    if p.t >= 2:
        crit = lci_criteria(p.m, p.n, p.t, p.N, st.dim(1))
        print(f"lci Tjur     {crit.tjur_lci}  (dimension-count criteria, EIDS assumed)")
        print(f"lci Tjur^T   {crit.tjurT_lci}")
    print("determinantal" if chk.verdict else "NOT determinantal")
    return 0 if chk.verdict else 1


def cmd_chart(args) -> int:
    p = parse_presentation_file(_resolve_file(args.file))
    side = COLUMN if args.transpose else ROW
    if args.I is None:
        q = p.F.transpose() if args.transpose else p.F
        charts = all_charts(p.t, q.n, side)
    else:
        charts = [ChartIndex(tuple(int(i) for i in args.I.replace(",", " ").split()), side)]
    lim = _limits(args)
    first = True
    for I in charts:
        sat = None
        if args.saturate:
            vs = chart_vars(p, I)
            sat = [parse_poly(s, vs) for s in args.saturate]
        res = run_transform(p, I, eliminate=args.eliminate, saturate_by=sat, limits=lim)
        if not first:
            print()
        first = False
        print(report.transform_text(res))
    return 0


def cmd_dim(args) -> int:
    gens, vs = _gens_from(args)
    print(dimension(gens, vs, _limits(args)))
    return 0


def cmd_smooth(args) -> int:
    gens, vs = _gens_from(args)
    cands = []
    for c in args.candidate or []:
        cands.append([parse_poly(x, vs).constant_term() for x in c.strip("() ").split(",")])
    rep = smoothness_report(gens, vs, cands, _limits(args))
    print(report.smoothness_text(rep))
    if rep.verdict == "resource-limit":
        return 1
    if args.expect and args.expect != rep.verdict:
        return 1
    return 0


def cmd_resolve(args) -> int:
    script = parse_script_file(_resolve_file(args.script, ".rsc"))
    rep = run_script(script, _limits(args), fail_fast=not args.keep_going)
    sys.stdout.write(report.script_text(rep))
    if args.out:
        files = report.write_script_reports(rep, args.out, figure=not args.no_figure)
        for kind in sorted(files):
            print(f"wrote {kind}: {files[kind]}")
    return 0 if rep.passed else 1


def cmd_model_check(args) -> int:
    try:
        rep = model_check(args.m, args.n, args.t, args.seed, args.trials,
                          with_dimension=not args.no_dimension, limits=_limits(args))
    except PreconditionError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    sys.stdout.write(report.model_check_text(rep))
    return 0 if rep.passed else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="detsing", allow_abbrev=False,
                                 description="Determinantal singularities and their Tjurina transforms.")
    ap.add_argument("--max-pairs", type=int, default=50000, help="Groebner pair budget")
    ap.add_argument("--max-degree", type=int, default=40, help="Groebner degree cap")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("minors", help="print the t-minors of a presentation")
    p.add_argument("file")
    p.add_argument("--t", type=int)
    p.set_defaults(func=cmd_minors)

    p = sub.add_parser("check", help="codimension and strata checks")
    p.add_argument("file")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("chart", help="chart equations of the Tjurina transform")
    p.add_argument("file")
    p.add_argument("--I", help="chart index set, e.g. '2' or '1,3' (default: all charts)")
    p.add_argument("--transpose", action="store_true", help="use the column space")
    p.add_argument("--eliminate", action="store_true", help="substitute away linear variables")
    p.add_argument("--saturate", action="append", metavar="POLY", help="saturate by POLY")
    p.set_defaults(func=cmd_chart)

    for name, func, hlp in (("dim", cmd_dim, "dimension of X or of V(gens)"),
                            ("smooth", cmd_smooth, "Jacobian smoothness report")):
        p = sub.add_parser(name, help=hlp)
        p.add_argument("file", nargs="?")
        p.add_argument("--vars", help="variable names")
        p.add_argument("--gen", action="append", help="generator (repeatable)")
        if name == "smooth":
            p.add_argument("--candidate", action="append", help="point such as '(0,0,1)'")
            p.add_argument("--expect", choices=["smooth", "singular",
                                                "singular-locus-positive-dim", "empty"])
        p.set_defaults(func=func)

    p = sub.add_parser("resolve", help="run a resolution script")
    p.add_argument("script", help="script path or shipped name (e7, a4)")
    p.add_argument("--out", help="directory for text/json/tsv/png reports")
    p.add_argument("--no-figure", action="store_true")
    p.add_argument("--keep-going", action="store_true", help="do not stop at the first failing step")
    p.set_defaults(func=cmd_resolve)

    p = sub.add_parser("model-check", help="exact checks on the model singularity")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--no-dimension", action="store_true", help="skip the minors-ideal dimension")
    p.set_defaults(func=cmd_model_check)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (FormatError, PolySyntaxError, FileNotFoundError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ResourceLimitError as e:
        print(f"resource limit: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
