"""Command line front end: `cobarkit verify|expand|chart|may`.

Exit codes are 0 for success, 1 for a failed verification and 2 for usage
errors.  Output carries no timestamps, so repeated runs are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import algah
from .cobar import (
    KEY_COCYCLE_CONFIG,
    divide_by_four_mod2,
    key_product,
    make_correction,
    make_T,
    residual,
    verify_key_cocycle,
    verify_stabilization,
    verify_witness,
    word,
)
from .hopf_algebroid import StructureConfig
from .may import e1_class, leading_part, max_weight

EXPRESSIONS = ("T", "c", "TT", "residual", "witness")


class UsageError(Exception):
    pass


def _config(args: argparse.Namespace) -> StructureConfig:
    e = KEY_COCYCLE_CONFIG.modulus_e
    if args.mod is not None:
        m = args.mod
        if m < 2 or m & (m - 1):
            raise UsageError(f"--mod must be a power of two, got {m}")
        e = m.bit_length() - 1
    if args.modulus_e is not None:
        e = args.modulus_e
    try:
        return StructureConfig(e, args.v1_order)
    except ValueError as err:
        raise UsageError(str(err)) from err


def _write(text: str, path: str | None) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def build_expression(name: str, j: int, config: StructureConfig, correction: bool = True):
    if name == "T":
        return make_T(j, config)
    if name == "c":
        return make_correction(j, config)
    if name == "TT":
        return key_product(j, config)
    if name == "residual":
        return residual(j, config, correction=correction)
    if name == "witness":
        return word((1 << j, 0), config=config).concatenate(make_T(j + 1, config)).differential()
    raise UsageError(f"unknown expression {name!r}")


def cmd_verify(args: argparse.Namespace) -> int:
    if args.j < 5:
        raise UsageError("verify needs --j >= 5")
    config = _config(args)
    reports = [verify_key_cocycle(args.j, config, correction=not args.no_correction),
               verify_witness(args.j, config)]
    if args.stabilize_against is not None:
        if args.stabilize_against >= args.j:
            raise UsageError("--stabilize-against must be below --j")
        reports.append(verify_stabilization(args.j, args.stabilize_against, config))
    passed = all(r.passed for r in reports)
    if args.format == "json":
        text = json.dumps({"passed": passed, "reports": [r.to_json_obj() for r in reports]},
                          indent=2, sort_keys=True)
    else:
        text = "\n".join(r.summary() for r in reports)
        text += "\n" + ("PASS" if passed else "FAIL")
    _write(text, args.output)
    return 0 if passed else 1


def cmd_expand(args: argparse.Namespace) -> int:
    config = _config(args)
    try:
        x = build_expression(args.expr, args.j, config, correction=not args.no_correction)
    except ValueError as err:
        raise UsageError(str(err)) from err
    if args.format == "json":
        text = json.dumps(x.to_json_obj(), indent=None, separators=(",", ":"))
    else:
        text = x.pretty()
    _write(text, args.output)
    return 0


def cmd_chart(args: argparse.Namespace) -> int:
    if args.n < algah.MIN_N:
        raise UsageError(f"--n must be at least {algah.MIN_N}")
    deg = algah.figure(args.figure, args.n)
    chart = algah.apply_differentials(deg)
    _write(algah.emit_chart(chart, args.format, args.figure), args.output)
    return 0


def cmd_may(args: argparse.Namespace) -> int:
    if args.j < 5:
        raise UsageError("may needs --j >= 5")
    r = divide_by_four_mod2(residual(args.j, KEY_COCYCLE_CONFIG))
    lead = leading_part(r, args.threshold)
    cls = e1_class(lead)
    if args.format == "json":
        text = json.dumps({"j": args.j, "threshold": args.threshold, "max_weight": max_weight(r),
                           "terms": len(lead), "leading_part": lead.to_json_obj(),
                           "e1_class": str(cls)}, indent=2, sort_keys=True)
    else:
        lines = [f"# R_{args.j}/4 mod 2: {len(r)} terms, max May weight {max_weight(r)}",
                 f"# terms above weight {args.threshold}: {len(lead)}"]
        if lead:
            lines.append(lead.pretty())
        lines.append(f"class: {cls}")
        text = "\n".join(lines)
    _write(text, args.output)
    return 0


def _add_structure(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mod", type=int, default=None, help="coefficient modulus 2^e (default 8)")
    p.add_argument("--modulus-e", type=int, default=None, help="the exponent e directly")
    p.add_argument("--v1-order", type=int, default=KEY_COCYCLE_CONFIG.v1_order,
                   help="truncate at v1^m (default 4)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cobarkit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="key cocycle, witness and stabilization checks")
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--stabilize-against", type=int, default=None)
    p.add_argument("--no-correction", action="store_true")
    p.add_argument("--format", choices=("pretty", "json"), default="pretty")
    p.add_argument("--output", default=None)
    _add_structure(p)
    p.set_defaults(func=cmd_verify, parser=p)

    p = sub.add_parser("expand", help="print one of the named cochains")
    p.add_argument("expr", choices=EXPRESSIONS)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--no-correction", action="store_true", help="residual without d(c_j)")
    p.add_argument("--format", choices=("pretty", "json"), default="pretty")
    p.add_argument("--output", default=None)
    _add_structure(p)
    p.set_defaults(func=cmd_expand, parser=p)

    p = sub.add_parser("chart", help="algebraic Atiyah-Hirzebruch chart for a figure degree")
    p.add_argument("--figure", choices=sorted(algah.FIGURES), required=True)
    p.add_argument("--n", type=int, default=algah.MIN_N)
    p.add_argument("--format", choices=("tsv", "json", "pretty"), default="tsv")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_chart, parser=p)

    p = sub.add_parser("may", help="leading May-filtration part of R_j/4")
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--threshold", type=int, default=11)
    p.add_argument("--format", choices=("pretty", "json"), default="pretty")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_may, parser=p)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as err:
        args.parser.error(str(err))  # exits with status 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
