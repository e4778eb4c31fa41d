"""Command line front end.

    nilmult multiplier --group "Z *[2] Z/5" --classrow 2 [--json]
    nilmult witt --weight 6 --letters 2        (or: nilmult witt 6 2)
    nilmult hall --letters 2 --min-weight 1 --max-weight 3 [--contains 2]
    nilmult mobius 12
    nilmult verify [--level quick|full]

Exit status: 0 ok, 1 hypothesis or verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys

from .arith import mobius
from .hall import EnumerationBudgetExceeded, filter_containing, generate
from .multiplier import (
    INFINITE,
    ClassRow,
    GroupSpec,
    format_structure,
    polynilpotent_multiplier,
    validate,
)
from .witt import chi

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


class GroupExprError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


_WS = re.compile(r"\s*")
_UINT = re.compile(r"[0-9]+")


def parse_group_expr(text: str) -> GroupSpec:
    """Parse ``factor ( "*[" n "]" factor )*`` with ``factor := Z | Z/m``.

    >>> parse_group_expr("Z *[2] Z/5")
    GroupSpec(orders=(0, 5), classes=(2,))
    """
    pos = 0
    orders: list[int] = []
    classes: list[int] = []

    def skip(p):
        return _WS.match(text, p).end()

    def uint(p, what):
        m = _UINT.match(text, p)
        if not m:
            raise GroupExprError(f"expected {what}", _offset(text, p))
        return int(m.group()), m.end()

    def factor(p):
        p = skip(p)
        if not text.startswith("Z", p):
            raise GroupExprError("expected 'Z' or 'Z/<order>'", _offset(text, p))
        p += 1
        if text.startswith("/", p):
            order, end = uint(p + 1, "factor order")
            if order < 2:
                raise GroupExprError(f"finite factor order must be >= 2, got {order}", _offset(text, p + 1))
            return order, end
        return INFINITE, p

    order, pos = factor(pos)
    orders.append(order)
    while True:
        pos = skip(pos)
        if pos == len(text):
            break
        if not text.startswith("*[", pos):
            raise GroupExprError("expected '*[' or end of input", _offset(text, pos))
        cls, end = uint(pos + 2, "nilpotent class")
        if cls < 1:
            raise GroupExprError("nilpotent class must be >= 1", _offset(text, pos + 2))
        if not text.startswith("]", end):
            raise GroupExprError("expected ']'", _offset(text, end))
        classes.append(cls)
        order, pos = factor(end + 1)
        orders.append(order)
    return GroupSpec(tuple(orders), tuple(classes))


def _offset(text: str, pos: int) -> int:
    """Character position -> byte offset in UTF-8."""
    return len(text[:pos].encode("utf-8"))


def parse_class_row(text: str) -> ClassRow:
    try:
        return ClassRow(int(part) for part in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad class row {text!r}: {exc}") from None


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _non_negative(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nilmult",
        description="Nilpotent and polynilpotent multipliers of nilpotent products of cyclic groups.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("multiplier", help="compute N_{c1,...,cs} M(G)")
    p.add_argument("--group", required=True, help='e.g. "Z *[2] Z *[1] Z/5"')
    p.add_argument("--classrow", required=True, type=parse_class_row, help="c1[,c2,...]")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("witt", help="number of basic commutators of a weight")
    p.add_argument("pos_weight", nargs="?", type=_positive, metavar="WEIGHT")
    p.add_argument("pos_letters", nargs="?", type=_non_negative, metavar="LETTERS")
    p.add_argument("--weight", type=_positive)
    p.add_argument("--letters", type=_non_negative)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("hall", help="list basic commutators")
    p.add_argument("--letters", required=True, type=_positive)
    p.add_argument("--min-weight", type=_positive, default=1)
    p.add_argument("--max-weight", required=True, type=_positive)
    p.add_argument("--contains", type=_positive)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("mobius", help="Moebius function")
    p.add_argument("n", type=_positive)

    p = sub.add_parser("verify", help="run the self-check suites")
    p.add_argument("--level", choices=("quick", "full"), default="quick")
    p.add_argument("--suite", action="append", help="run only the named suite (repeatable)")
    return parser


def _cmd_multiplier(args, out, err) -> int:
    try:
        spec = parse_group_expr(args.group)
    except GroupExprError as exc:
        print(f"nilmult: {exc}", file=err)
        return EXIT_USAGE
    report = validate(spec, args.classrow)
    hyp = {
        "ok": report.ok,
        "violations": [str(v) for v in report.violations],
        "notes": list(report.notes),
    }
    if not report.ok:
        if args.json:
            print(json.dumps({"schema": 1, "group": str(spec), "classrow": list(args.classrow), "hypotheses": hyp}), file=out)
        print(f"nilmult: {report}", file=err)
        return EXIT_FAILURE
    result = polynilpotent_multiplier(spec, args.classrow)
    if args.json:
        payload = result.to_dict()
        payload["group"] = str(spec)
        payload["classrow"] = list(args.classrow)
        payload["hypotheses"] = hyp
        print(json.dumps(payload), file=out)
    else:
        print(format_structure(result), file=out)
        print(str(report) + "".join(f"; {note}" for note in report.notes), file=err)
    return EXIT_OK


def _cmd_witt(args, out, err) -> int:
    weight = args.weight if args.weight is not None else args.pos_weight
    letters = args.letters if args.letters is not None else args.pos_letters
    if weight is None or letters is None:
        print("nilmult witt: need a weight and a letter count", file=err)
        return EXIT_USAGE
    value = chi(weight, letters)
    if args.json:
        print(json.dumps({"schema": 1, "weight": weight, "letters": letters, "chi": value}), file=out)
    else:
        print(value, file=out)
    return EXIT_OK


def _cmd_hall(args, out, err) -> int:
    if args.min_weight > args.max_weight:
        print("nilmult hall: --min-weight exceeds --max-weight", file=err)
        return EXIT_USAGE
    try:
        items = list(generate(args.letters, args.min_weight, args.max_weight))
    except EnumerationBudgetExceeded as exc:
        print(f"nilmult hall: {exc}", file=err)
        return EXIT_FAILURE
    if args.contains is not None:
        items = filter_containing(items, args.contains)
    if args.json:
        rows = [{"index": b.index, "weight": b.weight, "commutator": str(b)} for b in items]
        print(json.dumps({"schema": 1, "letters": args.letters, "commutators": rows}), file=out)
    else:
        for b in items:
            print(b, file=out)
    return EXIT_OK


def _cmd_mobius(args, out, err) -> int:
    print(mobius(args.n), file=out)
    return EXIT_OK


def _cmd_verify(args, out, err) -> int:
    from .verify import SUITES, run_suites

    if args.suite:
        unknown = [s for s in args.suite if s not in SUITES]
        if unknown:
            print(f"nilmult verify: unknown suite(s) {', '.join(unknown)}; known: {', '.join(SUITES)}", file=err)
            return EXIT_USAGE
    results = run_suites(args.level, args.suite)
    for r in results:
        print(r.line(), file=out)
    failed = [r.name for r in results if not r.ok]
    if failed:
        print(f"nilmult verify: failing properties: {', '.join(failed)}", file=err)
        return EXIT_FAILURE
    return EXIT_OK


_COMMANDS = {
    "multiplier": _cmd_multiplier,
    "witt": _cmd_witt,
    "hall": _cmd_hall,
    "mobius": _cmd_mobius,
    "verify": _cmd_verify,
}


def main(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    return _COMMANDS[args.command](args, out, err)


if __name__ == "__main__":
    sys.exit(main())
