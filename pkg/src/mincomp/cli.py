"""Command-line front end: parse set expressions, dispatch, report.

One command per invocation.  Set arguments use the text grammar

    fin:1,3,7
    ep:m=5;A=0,1;B=-3;F=2
    gen:pow2    gen:mersenne    gen:lacunary(lambda=2,start=1)
    interval-union:2^2k..2^2k+1

Whitespace is ignored; integers are signed decimal; the lacunary ratio
may be a fraction p/q.  Output is a short human summary, or with --json
an envelope {command, status, exit, result} whose keys keep insertion
order; text and JSON always carry the same verdict.  Exit codes: 0 for
definitive answers (a proved RuledOut or a window-certified verdict
counts), 2 for Unknown or evidence-only results, 1 for errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .construct import build_cominimal, finite_rest_cover
from .cyclic import (
    ENV_MAX_MODULUS,
    CyclicSet,
    cayley_domination,
    enumerate_minimal_complements,
    solve_arises,
)
from .epclass import classify
from .intset import (
    EPSet,
    FiniteSet,
    IntegerSet,
    LazySet,
    Window,
    density,
    gen_interval_union,
    gen_lacunary,
    gen_mersenne,
    gen_pow2,
    naturals,
)
from .sumset import gap, minkowski_window
from .verify import refute_mac_bounded, verify_mac

_STATUS = {0: "definitive", 1: "error", 2: "evidence"}

_INTERVAL_UNION_TOKEN = "interval-union:2^2k..2^2k+1"


class MincompParseError(ValueError):
    """Set-expression syntax error, annotated with a position.

    Positions refer to the whitespace-stripped expression.
    """

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


def _parse_int(token: str, pos: int) -> int:
    try:
        return int(token, 10)
    except ValueError:
        raise MincompParseError(f"expected an integer, got {token!r}", pos) from None


def _parse_int_list(text: str, base: int) -> list[int]:
    if text == "":
        return []
    out = []
    pos = base
    for token in text.split(","):
        out.append(_parse_int(token, pos))
        pos += len(token) + 1
    return out


def _parse_fields(text: str, base: int, sep: str = ";") -> dict:
    """k=v pairs, values kept raw with their positions."""
    fields: dict = {}
    pos = base
    for part in text.split(sep):
        key, sep, value = part.partition("=")
        if not sep or not key:
            raise MincompParseError(f"expected key=value, got {part!r}", pos)
        if key in fields:
            raise MincompParseError(f"duplicate field {key!r}", pos)
        fields[key] = (value, pos + len(key) + 1)
        pos += len(part) + 1
    return fields


def _parse_ep(text: str, base: int) -> EPSet:
    fields = _parse_fields(text, base)
    unknown = set(fields) - {"m", "A", "B", "F"}
    if unknown:
        key = sorted(unknown)[0]
        raise MincompParseError(f"unknown field {key!r}", fields[key][1])
    if "m" not in fields:
        raise MincompParseError("ep set needs m=", base)
    if "A" not in fields:
        raise MincompParseError("ep set needs A=", base)
    m = _parse_int(*fields["m"])
    a = _parse_int_list(*fields["A"])
    b = _parse_int_list(*fields["B"]) if "B" in fields else []
    f = _parse_int_list(*fields["F"]) if "F" in fields else []
    return EPSet(m, a, b, f)


def _parse_ratio(token: str, pos: int) -> Fraction:
    num, sep, den = token.partition("/")
    if sep:
        return Fraction(_parse_int(num, pos), _parse_int(den, pos + len(num) + 1))
    return Fraction(_parse_int(token, pos))


def _parse_gen(text: str, base: int) -> LazySet:
    if text == "pow2":
        return gen_pow2()
    if text == "mersenne":
        return gen_mersenne()
    if text.startswith("lacunary(") and text.endswith(")"):
        inner = text[len("lacunary(") : -1]
        fields = _parse_fields(inner, base + len("lacunary("), sep=",")
        unknown = set(fields) - {"lambda", "start"}
        if unknown:
            key = sorted(unknown)[0]
            raise MincompParseError(f"unknown field {key!r}", fields[key][1])
        if "lambda" not in fields:
            raise MincompParseError("lacunary needs lambda=", base)
        ratio = _parse_ratio(*fields["lambda"])
        start = _parse_int(*fields["start"]) if "start" in fields else 1
        return gen_lacunary(ratio, start)
    raise MincompParseError(f"unknown generator {text!r}", base)


def parse_set_expression(text: str) -> IntegerSet:
    """Parse the set grammar into an IntegerSet.

    Whitespace-insensitive; error positions refer to the stripped text.
    """
    s = "".join(text.split())
    if not s:
        raise MincompParseError("empty set expression", 0)
    if s == _INTERVAL_UNION_TOKEN:
        return gen_interval_union()
    head, sep, rest = s.partition(":")
    if not sep:
        raise MincompParseError("expected kind:payload", 0)
    base = len(head) + 1
    if head == "fin":
        return FiniteSet(_parse_int_list(rest, base))
    if head == "ep":
        return _parse_ep(rest, base)
    if head == "gen":
        return _parse_gen(rest, base)
    if head == "interval-union":
        raise MincompParseError(
            f"the only interval-union form is {_INTERVAL_UNION_TOKEN}", base
        )
    raise MincompParseError(f"unknown set kind {head!r}", 0)


def print_set_expression(s: IntegerSet) -> str:
    """Canonical textual form; inverse of parse_set_expression."""
    if isinstance(s, FiniteSet):
        return "fin:" + ",".join(str(x) for x in s.elements)
    if isinstance(s, EPSet):
        parts = [f"m={s.m}", "A=" + ",".join(str(a) for a in s.A)]
        if s.B:
            parts.append("B=" + ",".join(str(b) for b in s.B))
        if s.F:
            parts.append("F=" + ",".join(str(f) for f in s.F))
        return "ep:" + ";".join(parts)
    if isinstance(s, LazySet) and s.expr:
        return s.expr
    raise ValueError("this set has no canonical textual form")


def _expr_or_input(s: IntegerSet, raw: str) -> str:
    try:
        return print_set_expression(s)
    except ValueError:
        return "".join(raw.split())


def _parse_window(text: str) -> Window:
    lo_s, sep, hi_s = text.partition(":")
    if not sep:
        raise MincompParseError("window must be lo:hi", 0)
    try:
        return Window(int(lo_s), int(hi_s))
    except ValueError as exc:
        raise MincompParseError(f"bad window {text!r}: {exc}", 0) from None


def _pair(w: Window) -> list[int]:
    return [w.lo, w.hi]


def _cyclic_arg(expr: str, modulus: int) -> CyclicSet:
    s = parse_set_expression(expr)
    if not isinstance(s, FiniteSet):
        raise ValueError("cyclic commands take a finite set of residues (fin:...)")
    return CyclicSet.of(modulus, s.elements)


# command handlers: each returns (exit code, result dict, text lines) ----------

def _cmd_sumset(args) -> tuple[int, dict, list[str]]:
    C = parse_set_expression(args.C)
    W = parse_set_expression(args.W)
    win = _parse_window(args.window)
    out = minkowski_window(C, W, win)
    code = 0 if out.complete else 2
    result = {
        "C": _expr_or_input(C, args.C),
        "W": _expr_or_input(W, args.W),
        "window": _pair(win),
        "elements": list(out.elements),
        "complete": out.complete,
        "examined": out.examined,
    }
    tag = "complete" if out.complete else f"partial: {out.examined}"
    lines = [
        f"(C + W) on [{win.lo}, {win.hi}] ({tag}):",
        " ".join(str(x) for x in out.elements) or "(empty)",
    ]
    return code, result, lines


def _cmd_gap(args) -> tuple[int, dict, list[str]]:
    S = parse_set_expression(args.S)
    win = _parse_window(args.window)
    g = gap(S, win)
    result = {"S": _expr_or_input(S, args.S), "window": _pair(win), "max_gap": g}
    return 0, result, [f"largest gap of S within [{win.lo}, {win.hi}]: {g}"]


def _cmd_verify_mac(args) -> tuple[int, dict, list[str]]:
    C = parse_set_expression(args.C)
    W = parse_set_expression(args.W)
    win = _parse_window(args.window)
    inspect = _parse_window(args.inspect) if args.inspect else win
    report = verify_mac(C, W, coverage=win, inspect=inspect)
    result = {
        "C": _expr_or_input(C, args.C),
        "W": _expr_or_input(W, args.W),
        "report": report.to_json(),
    }
    lines = [f"verdict: {report.verdict}"]
    if report.detail:
        lines.append(report.detail)
    lines.append(f"witnesses: {len(report.witnesses)}")
    lines.append(report.caveat)
    return 0, result, lines


def _cmd_build_cominimal(args) -> tuple[int, dict, list[str]]:
    C = parse_set_expression(args.C)
    win = _parse_window(args.window)
    pair = build_cominimal(C, win, budget=args.budget, min_depth=args.depth)
    result = {
        "C": _expr_or_input(C, args.C),
        "window": _pair(win),
        "W": list(pair.W.elements),
        "certified_window": _pair(pair.certified_window),
        "report_cw": pair.report_cw.to_json(),
        "report_wc": pair.report_wc.to_json(),
        "trace": [json.loads(line) for line in pair.trace.to_json_lines()],
    }
    lines = [
        f"co-minimal pair certified on [{win.lo}, {win.hi}]",
        "W = " + " ".join(str(x) for x in pair.W.elements),
        f"C side: {pair.report_cw.verdict}; W side: {pair.report_wc.verdict}",
        pair.report_cw.caveat,
    ]
    return 0, result, lines


def _cmd_refute(args) -> tuple[int, dict, list[str]]:
    C = parse_set_expression(args.C)
    ev = refute_mac_bounded(C, args.w_size_max, args.radius)
    result = {"C": _expr_or_input(C, args.C)}
    result.update(ev.to_json())
    lines = [
        f"swept |W| <= {ev.w_size_max} within [-{ev.radius}, {ev.radius}]: "
        f"{ev.candidates_covering} candidates covered the target window",
        f"refuted: {len(ev.refuted)}; survivors: {len(ev.survivors)}",
        "evidence only: a bounded sweep cannot prove the infinitary statement",
    ]
    return 2, result, lines


def _cmd_solve_cyclic(args) -> tuple[int, dict, list[str]]:
    C = _cyclic_arg(args.C, args.modulus)
    answer = solve_arises(C)
    result = {"modulus": args.modulus, "C": list(C.residues())}
    result.update(answer.to_json())
    if answer.arises:
        wit = " ".join(str(x) for x in answer.witness_W.residues())
        lines = [f"arises in Z/{args.modulus}Z: yes (witness {{{wit}}}, {answer.checked} candidates checked)"]
    else:
        lines = [f"arises in Z/{args.modulus}Z: no (exhausted {answer.checked} candidates)"]
    return 0, result, lines


def _cmd_enum_min_complements(args) -> tuple[int, dict, list[str]]:
    W = _cyclic_arg(args.W, args.modulus)
    found = enumerate_minimal_complements(W)
    result = {
        "modulus": args.modulus,
        "W": list(W.residues()),
        "count": len(found),
        "complements": [list(c.residues()) for c in found],
    }
    lines = [f"{len(found)} minimal complements in Z/{args.modulus}Z:"] + [
        "  {" + ",".join(str(x) for x in c.residues()) + "}" for c in found
    ]
    return 0, result, lines


def _cmd_cayley_dom(args) -> tuple[int, dict, list[str]]:
    rep = cayley_domination(args.n)
    result = {
        "n": rep.n,
        "gamma": rep.gamma,
        "gamma_witness": list(rep.gamma_witness.residues()),
        "upper_gamma": rep.upper_gamma,
        "upper_witness": list(rep.upper_witness.residues()),
    }
    lines = [
        f"X_{rep.n}: gamma = {rep.gamma}, upper gamma = {rep.upper_gamma}",
        "gamma witness: {" + ",".join(str(x) for x in rep.gamma_witness.residues()) + "}",
        "upper witness: {" + ",".join(str(x) for x in rep.upper_witness.residues()) + "}",
    ]
    return 0, result, lines


def _cmd_classify_ep(args) -> tuple[int, dict, list[str]]:
    S = parse_set_expression(args.S)
    if not isinstance(S, EPSet):
        raise ValueError("classify-ep takes an eventually periodic set (ep:...)")
    win = _parse_window(args.window)
    verdict = classify(S, certify=not args.no_certify, window=win)
    result = {"S": print_set_expression(S)}
    result.update(verdict.to_json())
    lines = [f"verdict: {verdict.verdict}" + (f" ({verdict.reason})" if verdict.reason else "")]
    for note in verdict.notes:
        lines.append(note)
    if verdict.report is not None:
        lines.append(verdict.report.caveat)
    code = 2 if verdict.verdict == "Unknown" else 0
    return code, result, lines


def _cmd_density(args) -> tuple[int, dict, list[str]]:
    S = parse_set_expression(args.S)
    if not isinstance(S, EPSet):
        raise ValueError("density takes an eventually periodic set (ep:...)")
    rep = density(S, two_sided=args.two_sided)
    result = {
        "S": print_set_expression(S),
        "two_sided": args.two_sided,
        "upper_banach": str(rep.upper_banach),
        "lower_banach": str(rep.lower_banach),
        "eventual_density": str(rep.eventual_density),
        "note": rep.note,
    }
    lines = [
        f"upper {rep.upper_banach}, lower {rep.lower_banach}, "
        f"eventual {rep.eventual_density}"
    ]
    if rep.note:
        lines.append(rep.note)
    return 0, result, lines


def _cmd_cover_construct(args) -> tuple[int, dict, list[str]]:
    F = parse_set_expression(args.F)
    if not isinstance(F, FiniteSet) or F.known_empty():
        raise ValueError("cover-construct takes a nonempty finite set (fin:...)")
    win = _parse_window(args.window)
    Wp = finite_rest_cover(F, naturals())
    lo = F.elements[0]
    result = {
        "F": list(F.elements),
        "window": _pair(win),
        "w_preview": Wp.window(win),
        "covers_from": lo,
        "every_f_necessary": True,
    }
    lines = [
        f"F + W' = [{lo}, inf) with every element of F necessary",
        "W' on the window: " + " ".join(str(x) for x in Wp.window(win)),
    ]
    return 0, result, lines


_HANDLERS = {
    "sumset": _cmd_sumset,
    "gap": _cmd_gap,
    "verify-mac": _cmd_verify_mac,
    "build-cominimal": _cmd_build_cominimal,
    "refute": _cmd_refute,
    "solve-cyclic": _cmd_solve_cyclic,
    "enum-min-complements": _cmd_enum_min_complements,
    "cayley-dom": _cmd_cayley_dom,
    "classify-ep": _cmd_classify_ep,
    "density": _cmd_density,
    "cover-construct": _cmd_cover_construct,
}


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit the JSON envelope")
    common.add_argument(
        "--max-modulus",
        type=int,
        default=None,
        help="override the cyclic exhaustive-search cap for this invocation",
    )

    parser = argparse.ArgumentParser(
        prog="mincomp",
        description="Minkowski sums, minimal additive complements, cyclic solvers",
    )
    sub = parser.add_subparsers(dest="command_name", required=True)

    p = sub.add_parser("sumset", parents=[common], help="enumerate (C + W) on a window")
    p.add_argument("C")
    p.add_argument("W")
    p.add_argument("--window", required=True)

    p = sub.add_parser("gap", parents=[common], help="largest gap of a set within a window")
    p.add_argument("S")
    p.add_argument("--window", required=True)

    p = sub.add_parser("verify-mac", parents=[common], help="window-verify a MAC certificate")
    p.add_argument("C")
    p.add_argument("W")
    p.add_argument("--window", required=True)
    p.add_argument("--inspect", default=None, help="witness search window (default: --window)")

    p = sub.add_parser("build-cominimal", parents=[common], help="build a certified co-minimal pair")
    p.add_argument("C")
    p.add_argument("--window", required=True)
    p.add_argument("--depth", type=int, default=0, help="minimum construction depth")
    p.add_argument("--budget", type=int, default=10**6)

    p = sub.add_parser("refute", parents=[common], help="bounded sweep for finite complements")
    p.add_argument("C")
    p.add_argument("--w-size-max", type=int, default=2)
    p.add_argument("--radius", type=int, default=20)

    p = sub.add_parser("solve-cyclic", parents=[common], help="does C arise as a MAC in Z/mZ")
    p.add_argument("C")
    p.add_argument("--modulus", type=int, required=True)

    p = sub.add_parser("enum-min-complements", parents=[common], help="all minimal complements to W in Z/mZ")
    p.add_argument("W")
    p.add_argument("--modulus", type=int, required=True)

    p = sub.add_parser("cayley-dom", parents=[common], help="domination numbers of the unitary Cayley graph")
    p.add_argument("n", type=int)

    p = sub.add_parser("classify-ep", parents=[common], help="classify an eventually periodic set")
    p.add_argument("S")
    p.add_argument("--window", default="-30:30")
    p.add_argument("--no-certify", action="store_true", help="stop after the necessary conditions")

    p = sub.add_parser("density", parents=[common], help="exact Banach densities")
    p.add_argument("S")
    p.add_argument("--two-sided", action="store_true")

    p = sub.add_parser("cover-construct", parents=[common], help="exact ray cover with every f necessary")
    p.add_argument("F")
    p.add_argument("--window", default="-20:40")

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    if args.max_modulus is not None:
        os.environ[ENV_MAX_MODULUS] = str(args.max_modulus)
    name = args.command_name
    try:
        code, result, lines = _HANDLERS[name](args)
    except (ValueError, TypeError, RuntimeError) as exc:
        code, result, lines = 1, {"error": str(exc)}, []
        if not args.json:
            print(f"error: {exc}", file=sys.stderr)
    envelope = {
        "command": name,
        "status": _STATUS[code],
        "exit": code,
        "result": result,
    }
    if args.json:
        print(json.dumps(envelope, indent=2))
    else:
        for line in lines:
            print(line)
    return code


if __name__ == "__main__":
    sys.exit(main())
