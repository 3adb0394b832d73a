"""Expressions of the linear substitution calculus.

An expression is a term (no holes), a context (one hole) or anything in
between.  Holes carry their interface: the set of names a plugged
expression may use freely.

Expressions are immutable; every operation here is a pure function.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union

__all__ = [
    "Var", "Hole", "Abs", "App", "ESub", "Expression",
    "InterfaceViolation", "ParseError",
    "free_vars", "bound_vars", "multiplicity", "captured_vars", "holes",
    "is_term", "is_context", "is_well_named", "size",
    "plug", "well_name", "alpha_eq", "alpha_key", "fresh_name",
    "subterm", "replace_at", "positions", "context_at",
    "parse", "pretty",
]


@dataclass(frozen=True, slots=True)
class Var:
    name: str

    def __str__(self):
        return pretty(self)


@dataclass(frozen=True, slots=True)
class Hole:
    interface: frozenset

    def __init__(self, interface=()):
        object.__setattr__(self, "interface", frozenset(interface))

    def __str__(self):
        return pretty(self)


@dataclass(frozen=True, slots=True)
class Abs:
    binder: str
    body: "Expression"

    def __str__(self):
        return pretty(self)


@dataclass(frozen=True, slots=True)
class App:
    fun: "Expression"
    arg: "Expression"

    def __str__(self):
        return pretty(self)


@dataclass(frozen=True, slots=True)
class ESub:
    """``body[binder <- definition]``."""

    body: "Expression"
    binder: str
    definition: "Expression"

    def __str__(self):
        return pretty(self)


Expression = Union[Var, Hole, Abs, App, ESub]
Path = tuple


class InterfaceViolation(ValueError):
    pass


class ParseError(SyntaxError):
    def __init__(self, msg, text="", pos=0):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos
        self.text = text


# -- static measures --------------------------------------------------------

def free_vars(e: Expression) -> frozenset:
    match e:
        case Var(x):
            return frozenset((x,))
        case Hole(delta):
            return delta
        case Abs(x, body):
            return free_vars(body) - {x}
        case App(f, a):
            return free_vars(f) | free_vars(a)
        case ESub(body, x, s):
            return (free_vars(body) - {x}) | free_vars(s)
    raise TypeError(f"not an expression: {e!r}")


def bound_vars(e: Expression) -> list:
    """Binder names in pre-order, with repetitions."""
    out = []

    def go(e):
        match e:
            case Abs(x, body):
                out.append(x)
                go(body)
            case App(f, a):
                go(f)
                go(a)
            case ESub(body, x, s):
                out.append(x)
                go(body)
                go(s)

    go(e)
    return out


def multiplicity(t: Expression, x: str) -> int:
    """Number of free occurrences of ``x`` in ``t``."""
    match t:
        case Var(y):
            return int(x == y)
        case Hole(_):
            return 0
        case Abs(y, body):
            return 0 if y == x else multiplicity(body, x)
        case App(f, a):
            return multiplicity(f, x) + multiplicity(a, x)
        case ESub(body, y, s):
            inner = 0 if y == x else multiplicity(body, x)
            return inner + multiplicity(s, x)
    raise TypeError(f"not an expression: {t!r}")


def holes(e: Expression) -> int:
    match e:
        case Var(_):
            return 0
        case Hole(_):
            return 1
        case Abs(_, body):
            return holes(body)
        case App(f, a):
            return holes(f) + holes(a)
        case ESub(body, _, s):
            return holes(body) + holes(s)
    raise TypeError(f"not an expression: {e!r}")


def is_term(e: Expression) -> bool:
    return holes(e) == 0


def is_context(e: Expression) -> bool:
    return holes(e) == 1


def size(e: Expression) -> int:
    """Number of constructors."""
    match e:
        case Var(_) | Hole(_):
            return 1
        case Abs(_, body):
            return 1 + size(body)
        case App(f, a):
            return 1 + size(f) + size(a)
        case ESub(body, _, s):
            return 1 + size(body) + size(s)
    raise TypeError(f"not an expression: {e!r}")


def is_well_named(e: Expression) -> bool:
    binders = bound_vars(e)
    return len(set(binders)) == len(binders) and not (set(binders) & all_free_names(e))


def all_free_names(e: Expression) -> frozenset:
    """Names occurring free anywhere, including hole interfaces."""
    return free_vars(e)


def captured_vars(c: Expression) -> frozenset:
    """Binders on the path from the root to the (single) hole."""
    match c:
        case Hole(_):
            return frozenset()
        case Abs(x, body):
            return captured_vars(body) | {x}
        case App(f, a):
            return captured_vars(f) if holes(f) else captured_vars(a)
        case ESub(body, x, s):
            if holes(body):
                return captured_vars(body) | {x}
            return captured_vars(s)
    raise ValueError(f"no hole in {pretty(c)}")


# -- plugging and positions -------------------------------------------------

def plug(c: Expression, e: Expression) -> Expression:
    """Replace the hole of ``c`` by ``e``; no renaming, so capture may happen."""
    match c:
        case Hole(delta):
            missing = free_vars(e) - delta
            if missing:
                raise InterfaceViolation(
                    f"free variables {sorted(missing)} not in interface {sorted(delta)}")
            return e
        case Abs(x, body):
            return Abs(x, plug(body, e))
        case App(f, a):
            return App(plug(f, e), a) if holes(f) else App(f, plug(a, e))
        case ESub(body, x, s):
            if holes(body):
                return ESub(plug(body, e), x, s)
            return ESub(body, x, plug(s, e))
        case Var(_):
            raise ValueError("cannot plug into an expression without a hole")
    raise TypeError(f"not an expression: {c!r}")


def children(e: Expression) -> tuple:
    match e:
        case Abs(_, body):
            return (body,)
        case App(f, a):
            return (f, a)
        case ESub(body, _, s):
            return (body, s)
    return ()


def with_children(e: Expression, kids) -> Expression:
    match e:
        case Abs(x, _):
            return Abs(x, kids[0])
        case App(_, _):
            return App(kids[0], kids[1])
        case ESub(_, x, _):
            return ESub(kids[0], x, kids[1])
    return e


def subterm(e: Expression, path: Path) -> Expression:
    for i in path:
        e = children(e)[i]
    return e


def replace_at(e: Expression, path: Path, new: Expression) -> Expression:
    if not path:
        return new
    kids = list(children(e))
    kids[path[0]] = replace_at(kids[path[0]], path[1:], new)
    return with_children(e, kids)


def positions(e: Expression, prefix: Path = ()) -> Iterator[tuple]:
    """Yield ``(path, subexpression)`` in pre-order (outermost, leftmost first)."""
    yield prefix, e
    for i, k in enumerate(children(e)):
        yield from positions(k, prefix + (i,))


def binders_on_path(e: Expression, path: Path) -> list:
    out = []
    for i in path:
        match e:
            case Abs(x, _):
                out.append(x)
            case ESub(_, x, _) if i == 0:
                out.append(x)
        e = children(e)[i]
    return out


def context_at(t: Expression, path: Path, interface=None) -> Expression:
    """The context ``C`` with ``plug(C, subterm(t, path)) == t``.

    The hole interface defaults to the free variables of the removed subterm
    together with the binders captured at ``path``.
    """
    s = subterm(t, path)
    if interface is None:
        delta = free_vars(s) | set(binders_on_path(t, path))
    else:
        delta = frozenset(interface)
    return replace_at(t, path, Hole(delta))


# -- naming -----------------------------------------------------------------

_SUFFIX = re.compile(r"[0-9']+$")


def fresh_name(base: str, avoid) -> str:
    """``base`` with a numeric suffix chosen so the result is not in ``avoid``."""
    root = _SUFFIX.sub("", base) or base
    i = 1
    while f"{root}{i}" in avoid:
        i += 1
    return f"{root}{i}"


def well_name(e: Expression, avoid=()) -> Expression:
    """Alpha-rename binders so that all variables have pairwise distinct names.

    Free names are kept; a binder keeps its name unless it clashes.
    """
    used = set(free_vars(e)) | set(avoid)

    def go(e, env):
        match e:
            case Var(x):
                return Var(env.get(x, x))
            case Hole(delta):
                return Hole(env.get(x, x) for x in delta)
            case Abs(x, body):
                y = x if x not in used else fresh_name(x, used)
                used.add(y)
                return Abs(y, go(body, {**env, x: y}))
            case App(f, a):
                return App(go(f, env), go(a, env))
            case ESub(body, x, s):
                y = x if x not in used else fresh_name(x, used)
                used.add(y)
                new_body = go(body, {**env, x: y})
                return ESub(new_body, y, go(s, env))
        raise TypeError(f"not an expression: {e!r}")

    return go(e, {})


def alpha_key(e: Expression, env=()):
    """Nameless, hashable form: bound occurrences become binder distances."""

    def ref(x, env):
        for i in range(len(env) - 1, -1, -1):
            if env[i] == x:
                return ("b", len(env) - 1 - i)
        return ("f", x)

    match e:
        case Var(x):
            return ref(x, env)
        case Hole(delta):
            return ("hole", frozenset(ref(x, env) for x in delta))
        case Abs(x, body):
            return ("lam", alpha_key(body, env + (x,)))
        case App(f, a):
            return ("app", alpha_key(f, env), alpha_key(a, env))
        case ESub(body, x, s):
            return ("es", alpha_key(body, env + (x,)), alpha_key(s, env))
    raise TypeError(f"not an expression: {e!r}")


def alpha_eq(e: Expression, f: Expression) -> bool:
    return alpha_key(e) == alpha_key(f)


# -- concrete syntax --------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<hole>\[\.\]|⟨·⟩)
  | (?P<arrow><-|←)
  | (?P<lam>\\|λ)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<punct>[().\[\]{},])
""", re.VERBOSE)


def _tokenize(text):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        if kind != "ws":
            out.append((kind, m.group(), pos))
        pos = m.end()
    out.append(("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind, value=None):
        tok = self.peek()
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value or kind
            raise ParseError(f"expected {want!r}, found {tok[1] or 'end of input'!r}",
                             self.text, tok[2])
        self.i += 1
        return tok

    def at(self, kind, value=None):
        tok = self.peek()
        return tok[0] == kind and (value is None or tok[1] == value)

    def expr(self):
        if self.at("lam"):
            return self.abstraction()
        head = self.postfix()
        while True:
            if self.at("lam"):
                return App(head, self.abstraction())
            if self.at("ident") or self.at("hole") or self.at("punct", "("):
                head = App(head, self.postfix())
            else:
                return head

    def abstraction(self):
        self.take("lam")
        x = self.take("ident")[1]
        self.take("punct", ".")
        return Abs(x, self.expr())

    def postfix(self):
        e = self.atom()
        while self.at("punct", "["):
            self.take("punct", "[")
            x = self.take("ident")[1]
            self.take("arrow")
            s = self.expr()
            self.take("punct", "]")
            e = ESub(e, x, s)
        return e

    def atom(self):
        tok = self.peek()
        if tok[0] == "ident":
            self.i += 1
            return Var(tok[1])
        if tok[0] == "hole":
            self.i += 1
            names = []
            if self.at("punct", "{"):
                self.take("punct", "{")
                while not self.at("punct", "}"):
                    names.append(self.take("ident")[1])
                    if not self.at("punct", "}"):
                        self.take("punct", ",")
                self.take("punct", "}")
            return Hole(names)
        if tok == ("punct", "(", tok[2]):
            self.i += 1
            e = self.expr()
            self.take("punct", ")")
            return e
        raise ParseError(f"unexpected {tok[1] or 'end of input'!r}", self.text, tok[2])


def parse(text: str) -> Expression:
    p = _Parser(text)
    e = p.expr()
    p.take("eof")
    return e


def pretty(e: Expression) -> str:
    """ASCII rendering that :func:`parse` reads back to the same expression."""

    def go(e, where):
        # where: "top" | "fun" | "arg" | "body" (body of an ES)
        match e:
            case Var(x):
                return x
            case Hole(delta):
                return "[.]{" + ",".join(sorted(delta)) + "}"
            case Abs(x, body):
                s = f"\\{x}. {go(body, 'top')}"
                return s if where == "top" else f"({s})"
            case App(f, a):
                s = f"{go(f, 'fun')} {go(a, 'arg')}"
                return s if where in ("top", "fun") else f"({s})"
            case ESub(body, x, d):
                return f"{go(body, 'body')}[{x}<-{go(d, 'top')}]"
        raise TypeError(f"not an expression: {e!r}")

    return go(e, "top")
