"""Command-line front end.

Subcommands:
    check FILE                      structure equations and d^2 = 0
    decompose FILE --weight i       W-bases and dimensions
    rep FILE --weight i             superconnection components + flatness cascade
    cohomology FILE --weight i [--cap d]   Betti numbers
    example NAME [-o FILE]          emit a spec file

Every subcommand accepts --format json for machine-readable output.
Exit codes: 0 success, 1 verification failure, 2 parse or usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Dict, List, Optional

from . import constructions
from .algebroid import AlgebroidSpec, SpecError, check_structure_equations
from .cohomology import betti, build_complex
from .derivations import is_homological
from .dsl import DslError, document_from_spec, parse, print_document, to_algebroid_spec
from .superconnection import extract_components, flatness_cascade
from .weight_modules import CapClosureError, dim_w, w_basis


class CliError(Exception):
    pass


def _load(path: str) -> AlgebroidSpec:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}")
    try:
        return to_algebroid_spec(parse(text))
    except DslError as exc:
        raise CliError(f"{path}: {exc}")


def _emit(args, payload: Dict, lines: List[str]) -> None:
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        for line in lines:
            print(line)


def _cmd_check(args) -> int:
    spec = _load(args.file)
    structure = check_structure_equations(spec)
    homological = is_homological(spec.d)
    residuals = {label: str(r)
                 for family in structure.residuals.values()
                 for label, r in family.items()}
    for label, r in homological.residuals.items():
        residuals.setdefault(f"d^2 {label}", str(r))
    ok = structure.passed and homological.ok
    payload = {"status": "ok" if ok else "fail", "residuals": residuals}
    lines = [f"check {args.file}: {'PASS' if ok else 'FAIL'}"]
    for label, r in sorted(residuals.items()):
        lines.append(f"  residual {label}: {r}")
    _emit(args, payload, lines)
    return 0 if ok else 1


def _cmd_decompose(args) -> int:
    spec = _load(args.file)
    i = args.weight
    if not 1 <= i <= spec.degree:
        raise CliError(f"--weight must be in 1..{spec.degree} for this spec")
    dims = {}
    lines = [f"decompose {args.file} weight {i}:"]
    for j in range(i + 1):
        basis = w_basis(spec, i, j)
        n = dim_w(spec, i, j)
        assert n == len(basis)
        dims[f"({i},{j})"] = n
        labels = ", ".join(basis.labels()) or "-"
        lines.append(f"  W^({i},{j}) dim {n}: {labels}")
    payload = {"status": "ok", "dims": dims}
    _emit(args, payload, lines)
    return 0


def _cmd_rep(args) -> int:
    spec = _load(args.file)
    i = args.weight
    if not 1 <= i <= spec.degree:
        raise CliError(f"--weight must be in 1..{spec.degree} for this spec")
    comp = extract_components(spec, i)
    report = flatness_cascade(comp)
    from .algebra import monomial_str
    components = {}
    for p in comp.degrees():
        blk = {monomial_str(spec.table, k): str(v)
               for k, v in sorted(comp.blocks.get(p, {}).items())
               if not v.is_zero()}
        components[str(p)] = blk
    residuals = {f"level {p} on {label}": str(r)
                 for p, level in report.residuals.items()
                 for label, r in level.items()}
    payload = {"status": "ok" if report.passed else "fail",
               "residuals": residuals, "components": components}
    lines = [f"rep {args.file} weight {i}: cascade "
             f"{'PASS' if report.passed else 'FAIL'}"]
    for p in comp.degrees():
        lines.append(f"  D_{p}:")
        for label, value in sorted(components[str(p)].items()):
            lines.append(f"    {label} -> {value}")
    for label, r in sorted(residuals.items()):
        lines.append(f"  residual {label}: {r}")
    _emit(args, payload, lines)
    return 0 if report.passed else 1


def _cmd_cohomology(args) -> int:
    spec = _load(args.file)
    i = args.weight
    if not 0 <= i <= spec.degree:
        raise CliError(f"--weight must be in 0..{spec.degree} for this spec")
    try:
        complex_ = build_complex(spec, i, cap=args.cap)
        numbers = betti(complex_)
    except CapClosureError as exc:
        raise CliError(str(exc))
    truncated = complex_.cap is not None
    payload = {"status": "ok", "betti": numbers, "truncated": truncated}
    tag = f" (truncated at base degree {complex_.cap})" if truncated else " (exact)"
    lines = [f"cohomology {args.file} weight {i}{tag}:",
             f"  betti {numbers}"]
    _emit(args, payload, lines)
    return 0


_EXAMPLES = {
    "adjoint": constructions.adjoint_instance,
    "e7": constructions.e7_instance,
    "aff1": constructions.aff1,
    "sl2": constructions.sl2,
    "abelian2": lambda: constructions.abelian_lie_algebra(2),
    "tangent2": lambda: constructions.tangent_algebroid(2),
    "tangent-graded": lambda: constructions.tangent_graded_bundle(
        [("x", 0, 2), ("z", 1, 3), ("u", 2, 1)]),
    "prolongation": lambda: constructions.algebroid_prolongation(
        constructions.action_aff1_line(), [("z", 1, 1)]),
    "weighted-lie-algebra": constructions.aff1,
}


def _cmd_example(args) -> int:
    maker = _EXAMPLES.get(args.name)
    if maker is None:
        known = ", ".join(sorted(_EXAMPLES))
        raise CliError(f"unknown example {args.name!r} (known: {known})")
    spec = maker()
    text = print_document(document_from_spec(args.name.replace("-", "_"), spec))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        payload = {"status": "ok", "path": args.output}
        lines = [f"wrote {args.output}"]
    else:
        payload = {"status": "ok", "path": None}
        lines = [text.rstrip("\n")]
    _emit(args, payload, lines)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gradedlie",
        description="Exact symbolic checks for weighted Lie algebroid specs.")
    sub = parser.add_subparsers(dest="command")

    def common(p):
        p.add_argument("--format", choices=["text", "json"], default="text")

    p = sub.add_parser("check", help="structure equations and d^2 = 0")
    p.add_argument("file")
    common(p)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("decompose", help="weight-module bases and dimensions")
    p.add_argument("file")
    p.add_argument("--weight", type=int, required=True)
    common(p)
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("rep", help="superconnection components and flatness")
    p.add_argument("file")
    p.add_argument("--weight", type=int, required=True)
    common(p)
    p.set_defaults(func=_cmd_rep)

    p = sub.add_parser("cohomology", help="Betti numbers of a weight sector")
    p.add_argument("file")
    p.add_argument("--weight", type=int, required=True)
    p.add_argument("--cap", type=int, default=4)
    common(p)
    p.set_defaults(func=_cmd_cohomology)

    p = sub.add_parser("example", help="emit a shipped example spec file")
    p.add_argument("name")
    p.add_argument("-o", "--output", default=None)
    common(p)
    p.set_defaults(func=_cmd_example)

    return parser


def run(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    if not getattr(args, "command", None):
        parser.print_usage(sys.stderr)
        return 2
    try:
        return args.func(args)
    except (CliError, SpecError, DslError, CapClosureError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
