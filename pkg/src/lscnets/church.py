"""Church numerals and a corpus of closed terminating terms."""

from __future__ import annotations

from .terms import App, Expression, parse, well_name

__all__ = ["numeral", "PLUS", "MULT", "SUCC", "EXP", "arithmetic_corpus", "numeral_value"]

PLUS = parse(r"\m.\n.\f.\x. m f (n f x)")
MULT = parse(r"\m.\n.\f. m (n f)")
SUCC = parse(r"\n.\f.\x. f (n f x)")
EXP = parse(r"\m.\n. n m")

COMBINATORS = {
    "I": r"\x.x",
    "K": r"\x.\y.x",
    "S": r"\x.\y.\z. x z (y z)",
    "B": r"\f.\g.\x. f (g x)",
    "C": r"\f.\x.\y. f y x",
    "T": r"\x.\y.y",
}


def numeral(n: int) -> Expression:
    body = "x"
    for _ in range(n):
        body = f"f ({body})"
    return parse(rf"\f.\x. {body}")


def numeral_value(t: Expression):
    """``n`` if ``t`` is (alpha-equal to) the numeral ``n``, else None."""
    from .terms import Abs, Var

    if not (isinstance(t, Abs) and isinstance(t.body, Abs)):
        return None
    f, x, body = t.binder, t.body.binder, t.body.body
    n = 0
    while isinstance(body, App) and body.fun == Var(f):
        body, n = body.arg, n + 1
    return n if body == Var(x) and f != x else None


def _app(*ts):
    out = ts[0]
    for t in ts[1:]:
        out = App(out, t)
    return out


def arithmetic_corpus() -> list:
    """``(label, term)`` pairs: Church arithmetic, combinators and terms with
    explicit substitutions, all closed and strongly normalising."""
    out = []
    for i in range(4):
        for j in range(4):
            out.append((f"{i}+{j}", _app(PLUS, numeral(i), numeral(j))))
    for i in range(4):
        for j in range(4):
            out.append((f"{i}*{j}", _app(MULT, numeral(i), numeral(j))))
    for i in range(5):
        out.append((f"succ {i}", _app(SUCC, numeral(i))))
    for i, j in [(2, 2), (2, 3), (3, 2), (1, 3), (3, 0)]:
        out.append((f"{i}^{j}", _app(EXP, numeral(i), numeral(j))))
    c = {k: parse(v) for k, v in COMBINATORS.items()}
    out += [
        ("S K K", _app(c["S"], c["K"], c["K"])),
        ("S K S", _app(c["S"], c["K"], c["S"])),
        ("B I I", _app(c["B"], c["I"], c["I"])),
        ("C K I", _app(c["C"], c["K"], c["I"])),
        ("K I S", _app(c["K"], c["I"], c["S"])),
        ("T S K", _app(c["T"], c["S"], c["K"])),
        ("succ (2+1)", _app(SUCC, _app(PLUS, numeral(2), numeral(1)))),
        ("(1+1)*2", _app(MULT, _app(PLUS, numeral(1), numeral(1)), numeral(2))),
    ]
    for label, src in [
        ("es-dup", r"(a a)[a<-\b.b]"),
        ("es-garbage", r"(\a.a)[b<-\c.c]"),
        ("es-nested", r"(a (\c.c))[a<-\b. b b]"),
        ("es-under-lambda", r"\d. (a d)[a<-\b.b]"),
        ("es-chain", r"a[a<-b][b<-\c.c]"),
        ("es-plus", r"(p two two)[p<-\m.\n.\f.\x. m f (n f x)][two<-\g.\y. g (g y)]"),
    ]:
        out.append((label, parse(src)))
    return [(label, well_name(t)) for label, t in out]
