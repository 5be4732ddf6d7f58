"""Command-line front end.

Exit status: 0 on success (or a clean verification run), 1 when a
verification run finds a counterexample, 2 on configuration, parse or cap
errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import critical as cr
from . import formations as fm
from . import invariants as inv
from . import subnormality as sn
from . import verifier as vf
from .corpus import write_corpus
from .formations import FormationSpec
from .invariants import PrimePartition
from .lattice import (all_subgroups, frattini, lattice_of, maximal_subgroups, normal_subgroups,
                      subgroup_from_gens, whole)
from .perm import CapExceeded, GroupError, Perm, load_group


class UsageError(Exception):
    pass


def _load(path: str):
    try:
        G = load_group(path)
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    except GroupError as e:
        raise UsageError(f"{path}: {e}") from None
    all_subgroups(G.table)
    return G


def _formation(text: str) -> FormationSpec:
    try:
        return FormationSpec.parse(text)
    except ValueError as e:
        raise UsageError(str(e)) from None


def _sigma(text: str) -> PrimePartition:
    try:
        return PrimePartition.parse(text)
    except ValueError as e:
        raise UsageError(str(e)) from None


def _show(H) -> str:
    gens = " ".join(str(g) for g in H.generators()) or "()"
    return f"order {H.order} <{gens}>"


def cmd_analyze(args, out) -> int:
    G = _load(args.groupfile)
    W = whole(G)
    F = _formation(args.formation) if args.formation else None
    sigma = _sigma(args.sigma) if args.sigma else None
    emit = lambda k, v: print(f"{k}: {v}", file=out)
    emit("group", G.name)
    emit("degree", G.degree)
    emit("order", G.order)
    emit("subgroups", len(lattice_of(W)))
    normals = normal_subgroups(W)
    emit("normal subgroups", len(normals))
    for N in normals:
        print(f"  {_show(N)}", file=out)
    emit("maximal subgroups", len(maximal_subgroups(W)))
    emit("frattini", _show(frattini(W)))
    emit("fitting", _show(inv.fitting(W)))
    emit("derived", _show(inv.derived_subgroup(W)))
    emit("center", _show(inv.center(W)))
    for p in inv.pi(G):
        emit(f"sylow {p}", _show(inv.sylow(W, p)))
    emit("chief factors", " ".join(str(f.order) for f in inv.chief_series(W).factors) or "-")
    emit("abelian", inv.is_abelian(W))
    emit("nilpotent", inv.is_nilpotent(W))
    emit("soluble", inv.is_soluble(W))
    ok, st = cr.is_schmidt(W)
    emit("schmidt", ok if not ok else f"True (p={st.p}, q={st.q}, abelian sylows={st.abelian_sylows})")
    emit("miller-moreno", cr.is_miller_moreno(W))
    if F is not None:
        emit("formation", F)
        emit("member", fm.member(F, W))
        emit("residual", _show(fm.residual_of(W, F)))
        emit("radical", _show(fm.radical(W, F)))
        emit("K-F-subnormal subgroups", len(sn.k_f_subnormal_set(W, F)))
    if sigma is not None:
        emit("sigma", sigma)
        emit("sigma-nilpotent", inv.is_sigma_nilpotent(W, sigma))
        emit("sigma-soluble", inv.is_sigma_soluble(W, sigma))
        emit("sigma-fitting", _show(inv.sigma_fitting(W, sigma)))
    return 0


def cmd_subnormal(args, out) -> int:
    G = _load(args.groupfile)
    F = _formation(args.formation)
    try:
        gens = [Perm.parse(g, G.degree) for g in args.gens]
    except GroupError as e:
        raise UsageError(str(e)) from None
    for g in gens:
        if g not in G:
            raise UsageError(f"generator {g} is not in the group")
    A = subgroup_from_gens(G, gens)
    ok, chain = sn.is_k_f_subnormal(A, G, F)
    if not ok:
        print(f"NO: the subgroup of order {A.order} is not K-{F}-subnormal", file=out)
        return 0
    print(f"YES: the subgroup of order {A.order} is K-{F}-subnormal", file=out)
    t = G.table
    print(f"  A_0 {_show(chain.members[0])}", file=out)
    for i, (lo, hi, kind) in enumerate(zip(chain.members, chain.members[1:], chain.steps), 1):
        if kind is sn.Step.NORMAL_STEP:
            note = "NORMAL"
        else:
            k = t.core(lo.mask, hi.mask).bit_count()
            note = f"F-QUOTIENT core order {k}, quotient order {hi.order // k}"
        print(f"  A_{i} {_show(hi)}  [{note}]", file=out)
    return 0


def cmd_verify(args, out) -> int:
    config = vf.Config(
        corpus=args.corpus,
        checks=tuple(c for item in args.checks for c in item.split(",") if c),
        formations=tuple(args.formation or vf.DEFAULT_FORMATIONS),
        sigmas=tuple(args.sigma or vf.DEFAULT_SIGMAS),
        pis=tuple(args.pi or vf.DEFAULT_PIS),
        jobs=args.jobs,
        force=args.force,
    )
    try:
        report = vf.run_corpus(config)
    except (vf.ConfigError, fm.Unsupported) as e:
        raise UsageError(str(e)) from None
    if args.report:
        vf.write_report(report, args.report)
    else:
        out.write(report.text())
    total = len(report.outcomes)
    bad = len(report.counterexamples)
    print(f"{total} outcomes, {bad} counterexamples", file=sys.stderr)
    return report.exit_code


def cmd_corpus(args, out) -> int:
    manifest = write_corpus(args.directory)
    print(f"wrote {manifest}", file=out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="formalat",
                                 description="K-F-subnormality and Schmidt-group verifier")
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="structural profile of one group")
    a.add_argument("groupfile")
    a.add_argument("--formation")
    a.add_argument("--sigma")
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("subnormal", help="decide K-F-subnormality of one subgroup")
    s.add_argument("groupfile")
    s.add_argument("--gens", nargs="+", required=True, help="generators in cycle notation")
    s.add_argument("--formation", default="N")
    s.set_defaults(func=cmd_subnormal)

    v = sub.add_parser("verify", help="run the checks over a corpus")
    v.add_argument("--corpus", default="builtin", help="directory of .grp files or 'builtin'")
    v.add_argument("--checks", action="append", default=None,
                   help="check ids or groups (all, theorems, corollaries, lemmas, extras)")
    v.add_argument("--formation", action="append")
    v.add_argument("--sigma", action="append")
    v.add_argument("--pi", action="append", help="prime set for corollaries 1.6 and 1.7")
    v.add_argument("--report", help="report path (default: stdout)")
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--force", action="store_true")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("corpus", help="write the built-in corpus and manifest")
    c.add_argument("directory")
    c.set_defaults(func=cmd_corpus)
    return ap


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    if getattr(args, "checks", None) is None and args.command == "verify":
        args.checks = ["all"]
    try:
        return args.func(args, out)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except CapExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except GroupError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
