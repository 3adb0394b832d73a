"""Command-line interface.

Exit codes: 0 success, 1 a check failed, 2 bad usage or malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import nets as netmod
from .corpus import CorpusSpec, enumerate_terms
from .correctness import is_correct
from .equivalence import equiv_oracle, equiv_via_nets
from .netrewriting import normalize_net
from .readback import NotDecomposable, read_back, read_back_all
from .rewriting import FuelExhausted, Strategy, normalize
from .suites import RANDOM_COUNT, SUITES, run_criteria, run_suite
from .terms import ParseError, free_vars, is_well_named, parse, pretty, size, well_name
from .translation import WellNamingViolation, translate

OK, FAILED, USAGE = 0, 1, 2


class InputError(Exception):
    pass


def _text(arg):
    if arg == "-":
        return sys.stdin.read()
    return arg


def _term(arg):
    try:
        return parse(_text(arg).strip())
    except ParseError as exc:
        raise InputError(f"parse error: {exc}") from None


def _net(arg):
    if arg == "-":
        data = sys.stdin.read()
    else:
        try:
            with open(arg, encoding="utf-8") as fh:
                data = fh.read()
        except OSError as exc:
            raise InputError(str(exc)) from None
    try:
        return netmod.loads(data)
    except netmod.MalformedInput as exc:
        raise InputError(f"malformed net: {exc}") from None


def _names(s):
    return [x for x in (s or "").split(",") if x]


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _net_of_term(t, delta):
    if not is_well_named(t):
        t = well_name(t, avoid=delta)
    try:
        return translate(t, delta)
    except WellNamingViolation as exc:
        raise InputError(str(exc)) from None


# -- commands ---------------------------------------------------------------

def cmd_parse(a):
    t = _term(a.term)
    if a.json:
        print(json.dumps({"term": pretty(t), "size": size(t), "free": sorted(free_vars(t)),
                          "wellNamed": is_well_named(t)}))
    else:
        print(pretty(t))
    return OK


def cmd_translate(a):
    P = _net_of_term(_term(a.term), _names(a.weaken))
    text = netmod.to_dot(P) if a.format == "dot" else netmod.dumps(P, indent=2)
    _emit(text, a.output)
    return OK


def cmd_check(a):
    P = _net(a.net)
    problems = netmod.validate(P)
    if problems:
        for v in problems:
            print(f"not a net: {v}")
        return FAILED
    if not a.correctness:
        print("valid net")
        return OK
    verdict = is_correct(P)
    print(verdict)
    return OK if verdict else FAILED


def cmd_readback(a):
    P = _net(a.net)
    problems = netmod.validate(P)
    if problems or not is_correct(P):
        print(f"not a correct net: {problems[0] if problems else is_correct(P)}")
        return FAILED
    try:
        terms = read_back_all(P) if a.all else [read_back(P)]
    except NotDecomposable as exc:
        print(f"read back failed: {exc}")
        return FAILED
    for t in terms:
        print(pretty(t))
    return OK


def cmd_reduce(a):
    try:
        if a.side == "term":
            res = normalize(_term(a.input), a.strategy, a.fuel, trace=a.trace)
            for r, u in res.trace:
                print(f"{r.describe()}\t{pretty(u)}")
            print(pretty(res.term))
            print(f"steps: {dict(res.steps)}", file=sys.stderr)
        else:
            res = normalize_net(_net(a.input), a.strategy, a.fuel, trace=True)
            for kind, node, digest in res.trace:
                print(f"{kind}\t{node}\t{digest}")
            try:
                print(pretty(read_back(res.net)))
            except NotDecomposable:
                print(netmod.dumps(res.net))
            print(f"steps: {dict(res.steps)}", file=sys.stderr)
    except FuelExhausted as exc:
        print(f"{exc}", file=sys.stderr)
        return FAILED
    return OK


def cmd_equiv(a):
    t, s = _term(a.t), _term(a.s)
    if a.method == "nets":
        same = equiv_via_nets(t, s)
    else:
        same = equiv_oracle(well_name(t), well_name(s))
    print("equivalent" if same else "not equivalent")
    return OK if same else FAILED


def _report(rep, as_json):
    if as_json:
        print(rep.to_json())
    else:
        for line in rep.lines():
            print(line)
    return OK if rep.ok else FAILED


def _progress(quiet):
    if quiet:
        return None
    return lambda r: print(r.line(), file=sys.stderr, flush=True)


def cmd_bisim_check(a):
    rep = run_criteria((45, 6), a.max_size, _progress(a.quiet), "bisim-check", a.random)
    return _report(rep, a.json)


def cmd_export(a):
    P = _net(a.input) if a.net_input else _net_of_term(_term(a.input), [])
    text = netmod.to_dot(P) if a.format == "dot" else netmod.dumps(P, indent=2)
    _emit(text, a.output)
    return OK


def cmd_corpus(a):
    spec = CorpusSpec(max_constructors=a.max_size, free_names=tuple(_names(a.pool)),
                      min_constructors=a.min_size)
    n = 0
    for t in enumerate_terms(spec):
        n += 1
        if not a.count:
            print(pretty(t))
    if a.count:
        print(n)
    return OK


def cmd_suite(a):
    rep = run_suite(a.name, a.max_size, _progress(a.quiet), a.random)
    return _report(rep, a.json)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lscnets",
                                description="Linear substitution calculus and its proof nets.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("parse", help="parse and pretty-print an expression")
    c.add_argument("term", help="expression text, or - for stdin")
    c.add_argument("--json", action="store_true")
    c.set_defaults(fn=cmd_parse)

    c = sub.add_parser("translate", help="translate an expression to a net")
    c.add_argument("term")
    c.add_argument("--weaken", "--delta", dest="weaken", default="",
                   help="comma-separated extra weakened variables")
    c.add_argument("--format", choices=("json", "dot"), default="json")
    c.add_argument("-o", "--output")
    c.set_defaults(fn=cmd_translate)

    c = sub.add_parser("check", help="validate a net, optionally test correctness")
    c.add_argument("net", help="net JSON file, or - for stdin")
    c.add_argument("--correctness", action="store_true",
                   help="also run the correctness criterion")
    c.set_defaults(fn=cmd_check)

    c = sub.add_parser("readback", help="read expressions back from a correct net")
    c.add_argument("net")
    c.add_argument("--all", action="store_true", help="every read back, one per line")
    c.set_defaults(fn=cmd_readback)

    c = sub.add_parser("reduce", help="normalise a term or a net")
    c.add_argument("input", help="term text (--side term) or net JSON file (--side net)")
    c.add_argument("--side", choices=("term", "net"), default="term")
    c.add_argument("--strategy", choices=[s.value for s in Strategy],
                   default=Strategy.LEFTMOST_OUTERMOST.value)
    c.add_argument("--fuel", type=int, default=1000)
    c.add_argument("--trace", action="store_true")
    c.set_defaults(fn=cmd_reduce)

    c = sub.add_parser("equiv", help="decide structural equivalence")
    c.add_argument("t")
    c.add_argument("s")
    c.add_argument("--method", choices=("nets", "closure"), default="nets")
    c.set_defaults(fn=cmd_equiv)

    c = sub.add_parser("bisim-check", help="commuting squares and strong bisimulation")
    c.add_argument("--max-size", type=int, default=9)
    c.add_argument("--random", type=int, default=RANDOM_COUNT, metavar="N",
                   help="random larger terms added to the corpus (default %(default)s)")
    c.add_argument("--json", action="store_true")
    c.add_argument("--quiet", action="store_true")
    c.set_defaults(fn=cmd_bisim_check)

    c = sub.add_parser("export", help="render a term or net as JSON or Graphviz")
    c.add_argument("input")
    c.add_argument("--net-input", action="store_true", help="input is a net JSON file")
    c.add_argument("--format", choices=("json", "dot"), default="dot")
    c.add_argument("-o", "--output")
    c.set_defaults(fn=cmd_export)

    c = sub.add_parser("corpus", help="enumerate small well-named terms")
    c.add_argument("--max-size", type=int, default=4)
    c.add_argument("--min-size", type=int, default=1)
    c.add_argument("--pool", default="x,y,z")
    c.add_argument("--count", action="store_true")
    c.set_defaults(fn=cmd_corpus)

    c = sub.add_parser("suite", help="run a corpus suite")
    c.add_argument("name", choices=sorted(SUITES))
    c.add_argument("--max-size", type=int, default=9)
    c.add_argument("--random", type=int, default=RANDOM_COUNT, metavar="N",
                   help="random larger terms added to the corpus (default %(default)s)")
    c.add_argument("--json", action="store_true")
    c.add_argument("--quiet", action="store_true")
    c.set_defaults(fn=cmd_suite)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if (getattr(args, "max_size", 1) < 1 or getattr(args, "fuel", 1) < 0
            or getattr(args, "random", 0) < 0):
        parser.error("sizes must be positive, fuel and sample counts non-negative")
    try:
        return args.fn(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
