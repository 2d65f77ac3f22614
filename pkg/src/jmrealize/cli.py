"""Command-line interface: parse, synthesize, verify, and report.

Subcommands: validate, minimal-sets, clifford, realize, verify, feasibility.
Data goes to stdout (or ``-o``), diagnostics to stderr. Exit codes: 0 on
success, 1 when verification reports failures, 2 on input errors. JSON
output is deterministic (sorted keys); ``--format pretty`` is a human
convenience with no stability promise.
"""

from __future__ import annotations

import argparse
import json
import sys

from .clifford import build_clifford, check_clifford
from .feasibility import decide_joint_measurability
from .hypergraph import hypergraph_to_json, minimal_incompatible_sets, parse_hypergraph
from .matrix import DEFAULT_TOL, Tolerance, matrix_to_json
from .povm import povm_from_json
from .realization import (
    ETA_POLICIES,
    realization_from_json,
    realization_to_json,
    realize,
    verify_realization,
)

__all__ = ["main", "build_parser"]

# Joint POVMs are stored densely over all product outcomes; this guard keeps
# minimal-set enumeration (and the 2^N joints realized from it) bounded
# unless the user raises it explicitly.
DEFAULT_MAX_SET_SIZE = 16


def _read_json(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _emit(doc, args, pretty_lines=None) -> None:
    if getattr(args, "format", "json") == "pretty" and pretty_lines is not None:
        text = "\n".join(pretty_lines)
    else:
        text = json.dumps(doc, indent=2, sort_keys=True)
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _tolerance(args) -> Tolerance:
    feas = getattr(args, "tol", None)
    if feas is None:
        return DEFAULT_TOL
    return Tolerance(feas_tol=feas)


def _cmd_validate(args) -> int:
    h = parse_hypergraph(_read_json(args.file))
    doc = hypergraph_to_json(h)
    _emit(
        doc,
        args,
        pretty_lines=[
            f"valid joint measurability hypergraph: {len(h.vertices)} vertices, "
            f"{len(h.edges)} edges after normalization"
        ],
    )
    return 0


def _cmd_minimal_sets(args) -> int:
    h = parse_hypergraph(_read_json(args.file))
    sets = minimal_incompatible_sets(h, max_set_size=args.max_set_size)
    _emit(
        [list(s) for s in sets],
        args,
        pretty_lines=[f"{len(sets)} minimal incompatible set(s)"]
        + ["  {" + ",".join(s) + "}" for s in sets],
    )
    return 0


def _cmd_clifford(args) -> int:
    fam = build_clifford(args.n)
    gammas = [matrix_to_json(g) for g in fam.gammas]
    if args.check:
        report = check_clifford(fam)
        doc = {"n": fam.n, "dim": fam.dim, "gammas": gammas, "check": report.to_json()}
        pretty = [
            f"{fam.n} generators on dimension {fam.dim}: "
            f"{'all relations hold' if report.passed else 'RELATION VIOLATIONS'} "
            f"(max residual {report.max_residual:.3e})"
        ]
        _emit(doc, args, pretty_lines=pretty)
        return 0 if report.passed else 1
    _emit(gammas, args, pretty_lines=[f"{fam.n} generators on dimension {fam.dim}"])
    return 0


def _cmd_realize(args) -> int:
    h = parse_hypergraph(_read_json(args.file))
    r = realize(h, eta_policy=args.eta_policy, max_set_size=args.max_set_size)
    pretty = [
        f"realized {len(h.vertices)} measurement(s) on dimension {r.total_dim} "
        f"({len([b for b in r.blocks if b.members])} nontrivial block(s))"
    ]
    _emit(realization_to_json(r), args, pretty_lines=pretty)
    return 0


def _cmd_verify(args) -> int:
    r = realization_from_json(_read_json(args.file))
    tol = _tolerance(args)
    report = verify_realization(
        r,
        tol=tol,
        cross_check_oracle=args.cross_check_oracle,
        max_iter=args.max_iter,
    )
    if args.report_dir:
        from .report import write_verification_report

        for path in write_verification_report(report, r, args.report_dir):
            print(f"wrote {path}", file=sys.stderr)
    pretty = [
        f"{'PASS' if c.passed else 'FAIL'} {c.check} {c.target} "
        f"(residual {c.residual:.3e}){' [heuristic]' if c.heuristic else ''}"
        for c in report.checks
    ]
    pretty.append("all checks passed" if report.passed else "verification FAILED")
    _emit(report.to_json(), args, pretty_lines=pretty)
    return 0 if report.passed else 1


def _cmd_feasibility(args) -> int:
    doc = _read_json(args.file)
    if isinstance(doc, dict) and "povms" in doc:
        doc = doc["povms"]
    if not isinstance(doc, list):
        raise ValueError("feasibility input must be a JSON array of POVMs (or {'povms': [...]})")
    povms = [povm_from_json(p) for p in doc]
    tol = _tolerance(args)
    report = decide_joint_measurability(povms, tol=tol, max_iter=args.max_iter)
    if args.report_dir:
        from .report import write_feasibility_report

        for path in write_feasibility_report(report, args.report_dir, tol.feas_tol):
            print(f"wrote {path}", file=sys.stderr)
    pretty = [
        f"status: {report.status}{' (heuristic)' if report.heuristic else ''} "
        f"after {report.iterations} iteration(s), residual {report.residual:.3e}"
    ]
    _emit(report.to_json(), args, pretty_lines=pretty)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jmrealize",
        description="Synthesize and verify POVMs realizing a joint-measurability hypergraph.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, output=True):
        p.add_argument("--format", choices=("json", "pretty"), default="json",
                       help="output format; 'pretty' is human-oriented and unstable")
        if output:
            p.add_argument("-o", "--output", metavar="FILE", help="write data here instead of stdout")

    p = sub.add_parser("validate", help="parse and normalize a hypergraph document")
    p.add_argument("file")
    add_common(p)
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("minimal-sets", help="enumerate minimal incompatible sets")
    p.add_argument("file")
    p.add_argument("--max-set-size", type=int, default=DEFAULT_MAX_SET_SIZE,
                   help="abort if enumeration needs sets beyond this size")
    add_common(p)
    p.set_defaults(func=_cmd_minimal_sets)

    p = sub.add_parser("clifford", help="build a family of anticommuting generators")
    p.add_argument("--n", type=int, required=True, help="number of generators")
    p.add_argument("--check", action="store_true", help="append a relation-check report")
    add_common(p)
    p.set_defaults(func=_cmd_clifford)

    p = sub.add_parser("realize", help="synthesize POVMs realizing a hypergraph")
    p.add_argument("file")
    p.add_argument("--eta-policy", choices=ETA_POLICIES, default="specker",
                   help="purity inside the per-set window: the 1/sqrt(N-1) endpoint or the midpoint")
    p.add_argument("--max-set-size", type=int, default=DEFAULT_MAX_SET_SIZE,
                   help="abort if minimal sets beyond this size are needed")
    add_common(p)
    p.set_defaults(func=_cmd_realize)

    p = sub.add_parser("verify", help="verify a realization document")
    p.add_argument("file")
    p.add_argument("--tol", type=float, default=None, help="feasibility residual tolerance")
    p.add_argument("--max-iter", type=int, default=20000)
    p.add_argument("--cross-check-oracle", action="store_true",
                   help="also run the (heuristic) numerical oracle on small cases")
    p.add_argument("--report-dir", metavar="DIR",
                   help="render checks.csv and figures into this directory")
    add_common(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("feasibility", help="numerical joint-measurability oracle")
    p.add_argument("file", help="JSON array of POVM documents on a common dimension")
    p.add_argument("--tol", type=float, default=None, help="feasibility residual tolerance")
    p.add_argument("--max-iter", type=int, default=20000)
    p.add_argument("--report-dir", metavar="DIR",
                   help="render residuals.csv and a residual plot into this directory")
    add_common(p)
    p.set_defaults(func=_cmd_feasibility)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
