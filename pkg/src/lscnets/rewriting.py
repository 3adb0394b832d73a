"""Rewriting rules of the linear substitution calculus.

The three rules act at a distance:

    m   L<\\x.t> s      ->  L<t[x<-s]>
    e   C<x>[x<-s]      ->  C<s>[x<-s]
    gc  t[x<-s]         ->  t            if x is not free in t

Redexes are identified by kind and position path; e-redexes additionally by
the path of the replaced occurrence.  All functions expect well-named terms,
which makes the non-capture side conditions hold by construction; other
terms are alpha-renamed before a step that would capture.  Copies of
definitions made by e-steps are freshened immediately so reducts stay
well-named.

The module also carries the independent oracle: capture-avoiding
meta-substitution, unfolding of explicit substitutions and a naive
beta-normaliser.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field, replace
from enum import Enum

from .terms import (
    Abs, App, ESub, Expression, Hole, Var,
    alpha_key, binders_on_path, bound_vars, context_at, free_vars, fresh_name,
    is_well_named, positions, replace_at, subterm, well_name,
)

__all__ = [
    "TermRedex", "Strategy", "StaleRedex", "FuelExhausted", "NormalizeResult",
    "find_term_redexes", "step", "normalize", "reducts",
    "meta_subst", "unfold", "beta_oracle",
]

KINDS = ("m", "e", "gc")


class StaleRedex(ValueError):
    pass


class FuelExhausted(RuntimeError):
    def __init__(self, last, steps=0):
        super().__init__(f"fuel exhausted after {steps} steps")
        self.last = last
        self.steps = steps


@dataclass(frozen=True)
class TermRedex:
    """A redex of a term.

    ``position`` is the path of the application (m) or of the explicit
    substitution (e, gc).  For e-redexes ``occurrence`` is the absolute path of
    the replaced variable occurrence.  ``binder`` is the abstracted or
    substituted variable.
    """

    kind: str
    position: tuple
    binder: str
    occurrence: tuple = ()
    # for m: number of ES layers of the substitution context L
    depth: int = field(default=0, compare=False)

    @property
    def sort_key(self):
        return (self.position, self.occurrence)

    def outer(self, t: Expression) -> Expression:
        """The closure context of the step."""
        return context_at(t, self.position)

    def subst_context(self, t: Expression) -> Expression:
        """For m-redexes, the substitution context ``L`` around the abstraction."""
        f = subterm(t, self.position + (0,))
        path = (0,) * self.depth
        return context_at(f, path)

    def inner_context(self, t: Expression) -> Expression:
        """For e-redexes, the context ``C`` around the replaced occurrence."""
        body = self.position + (0,)
        rel = self.occurrence[len(body):]
        return context_at(subterm(t, body), rel)

    def describe(self) -> str:
        pos = ".".join(map(str, self.position)) or "ε"
        if self.kind == "e":
            occ = ".".join(map(str, self.occurrence)) or "ε"
            return f"e@{pos}/{occ}"
        return f"{self.kind}@{pos}"


class Strategy(str, Enum):
    LEFTMOST_OUTERMOST = "leftmost-outermost"
    GC_EAGER = "gc-eager"
    EXHAUSTIVE = "exhaustive-enumeration"


def _peel(f: Expression):
    """Strip ES layers off ``f``; return (depth, core)."""
    depth = 0
    while isinstance(f, ESub):
        f = f.body
        depth += 1
    return depth, f


def _occurrences(e: Expression, x: str, prefix=()):
    """Paths of the free occurrences of ``x`` in ``e``, left to right."""
    match e:
        case Var(y):
            if y == x:
                yield prefix
        case Abs(y, body):
            if y != x:
                yield from _occurrences(body, x, prefix + (0,))
        case App(f, a):
            yield from _occurrences(f, x, prefix + (0,))
            yield from _occurrences(a, x, prefix + (1,))
        case ESub(body, y, s):
            if y != x:
                yield from _occurrences(body, x, prefix + (0,))
            yield from _occurrences(s, x, prefix + (1,))


def find_term_redexes(t: Expression) -> list:
    out = []
    for pos, u in positions(t):
        match u:
            case App(f, _):
                depth, core = _peel(f)
                if isinstance(core, Abs):
                    out.append(TermRedex("m", pos, core.binder, depth=depth))
            case ESub(body, x, _):
                occs = list(_occurrences(body, x, pos + (0,)))
                if occs:
                    out.extend(TermRedex("e", pos, x, occ) for occ in occs)
                else:
                    out.append(TermRedex("gc", pos, x))
    out.sort(key=lambda r: r.sort_key)
    return out


def _freshen(s: Expression, avoid) -> Expression:
    """Rename every binder of ``s`` to a name outside ``avoid``."""
    used = set(avoid)

    def go(e, env):
        match e:
            case Var(x):
                return Var(env.get(x, x))
            case Hole(delta):
                return Hole(env.get(x, x) for x in delta)
            case Abs(x, body):
                y = fresh_name(x, used)
                used.add(y)
                return Abs(y, go(body, {**env, x: y}))
            case App(f, a):
                return App(go(f, env), go(a, env))
            case ESub(body, x, d):
                y = fresh_name(x, used)
                used.add(y)
                return ESub(go(body, {**env, x: y}), y, go(d, env))
        raise TypeError(f"not an expression: {e!r}")

    return go(s, {})


def all_names(t: Expression) -> set:
    return set(free_vars(t)) | set(bound_vars(t))


def step(t: Expression, r: TermRedex) -> Expression:
    try:
        u = subterm(t, r.position)
    except (IndexError, TypeError):
        raise StaleRedex(f"no subterm at {r.describe()}") from None
    if r.kind == "m":
        if not isinstance(u, App):
            raise StaleRedex(f"{r.describe()} is not an application")
        depth, core = _peel(u.fun)
        if not isinstance(core, Abs) or core.binder != r.binder:
            raise StaleRedex(f"{r.describe()} has no abstraction at a distance")
        if set(binders_on_path(u.fun, (0,) * depth)) & free_vars(u.arg):
            return _step_renamed(t, r)
        new_fun = replace_at(u.fun, (0,) * depth, ESub(core.body, core.binder, u.arg))
        return replace_at(t, r.position, new_fun)
    if not isinstance(u, ESub) or u.binder != r.binder:
        raise StaleRedex(f"{r.describe()} is not a substitution on {r.binder}")
    if r.kind == "gc":
        if r.binder in free_vars(u.body):
            raise StaleRedex(f"{r.binder} occurs in the body of {r.describe()}")
        return replace_at(t, r.position, u.body)
    if r.kind == "e":
        occ = r.occurrence
        if occ not in set(_occurrences(u.body, r.binder, r.position + (0,))):
            raise StaleRedex(f"{r.describe()} does not point at a free occurrence")
        crossed = binders_on_path(u.body, occ[len(r.position) + 1:]) + [r.binder]
        if set(crossed) & free_vars(u.definition):
            return _step_renamed(t, r)
        copy = _freshen(u.definition, all_names(t))
        return replace_at(t, occ, copy)
    raise StaleRedex(f"unknown redex kind {r.kind!r}")


def _step_renamed(t: Expression, r: TermRedex) -> Expression:
    """Step on an alpha-variant of ``t`` whose binders avoid every free name;
    positions are unchanged by the renaming."""
    t2 = well_name(t, avoid=all_names(t))
    u = subterm(t2, r.position)
    binder = _peel(u.fun)[1].binder if r.kind == "m" else u.binder
    return step(t2, replace(r, binder=binder))


def reducts(t: Expression):
    """All one-step reducts as ``(redex, reduct)`` pairs."""
    return [(r, step(t, r)) for r in find_term_redexes(t)]


@dataclass
class NormalizeResult:
    term: Expression
    normal: bool
    steps: Counter
    trace: list

    @property
    def total(self) -> int:
        return sum(self.steps.values())


def _choose(strategy, redexes):
    if strategy == Strategy.GC_EAGER:
        for r in redexes:
            if r.kind == "gc":
                return r
    return redexes[0]


def normalize(t: Expression, strategy=Strategy.LEFTMOST_OUTERMOST, fuel: int = 1000,
              trace: bool = False) -> NormalizeResult:
    """Rewrite until no redex is left or ``fuel`` steps have been taken.

    ``exhaustive-enumeration`` searches the whole reduction graph breadth
    first (fuel bounds the number of explored terms) and returns a shortest
    path to a normal form.
    """
    strategy = Strategy(strategy)
    if not is_well_named(t):
        t = well_name(t)
    if strategy == Strategy.EXHAUSTIVE:
        return _normalize_bfs(t, fuel)
    counts = Counter()
    log = []
    while True:
        rs = find_term_redexes(t)
        if not rs:
            return NormalizeResult(t, True, counts, log)
        if sum(counts.values()) >= fuel:
            raise FuelExhausted(t, fuel)
        r = _choose(strategy, rs)
        t = step(t, r)
        counts[r.kind] += 1
        if trace:
            log.append((r, t))


def _normalize_bfs(t, fuel):
    seen = {alpha_key(t): None}
    queue = deque([(t, ())])
    explored = 0
    while queue:
        u, path = queue.popleft()
        rs = find_term_redexes(u)
        if not rs:
            counts = Counter(r.kind for r, _ in path)
            return NormalizeResult(u, True, counts, list(path))
        explored += 1
        if explored > fuel:
            raise FuelExhausted(u, len(path))
        for r in rs:
            v = step(u, r)
            k = alpha_key(v)
            if k not in seen:
                seen[k] = None
                queue.append((v, path + ((r, v),)))
    raise AssertionError("unreachable: a finite graph without normal forms has cycles only")


# -- oracle: meta-level substitution and plain beta -------------------------

def meta_subst(t: Expression, x: str, s: Expression) -> Expression:
    """Capture-avoiding ``t{x:=s}``."""
    fv_s = free_vars(s)

    def go(t):
        match t:
            case Var(y):
                return s if y == x else t
            case Hole(_):
                return t
            case App(f, a):
                return App(go(f), go(a))
            case Abs(y, body):
                if y == x:
                    return t
                if y in fv_s:
                    z = fresh_name(y, fv_s | free_vars(body) | {x})
                    body = meta_subst(body, y, Var(z))
                    y = z
                return Abs(y, go(body))
            case ESub(body, y, d):
                d2 = go(d)
                if y == x:
                    return ESub(body, y, d2)
                if y in fv_s:
                    z = fresh_name(y, fv_s | free_vars(body) | {x})
                    body = meta_subst(body, y, Var(z))
                    y = z
                return ESub(go(body), y, d2)
        raise TypeError(f"not an expression: {t!r}")

    return go(t)


def unfold(t: Expression) -> Expression:
    """Execute every explicit substitution by meta-level substitution."""
    match t:
        case Var(_) | Hole(_):
            return t
        case Abs(x, body):
            return Abs(x, unfold(body))
        case App(f, a):
            return App(unfold(f), unfold(a))
        case ESub(body, x, s):
            return meta_subst(unfold(body), x, unfold(s))
    raise TypeError(f"not an expression: {t!r}")


def _beta_step(t):
    """One leftmost-outermost beta step, or None."""
    match t:
        case App(Abs(x, body), a):
            return meta_subst(body, x, a)
        case App(f, a):
            f2 = _beta_step(f)
            if f2 is not None:
                return App(f2, a)
            a2 = _beta_step(a)
            return None if a2 is None else App(f, a2)
        case Abs(x, body):
            b2 = _beta_step(body)
            return None if b2 is None else Abs(x, b2)
        case Var(_):
            return None
    raise ValueError(f"beta oracle needs a pure lambda-term, got {t!r}")


def beta_oracle(t: Expression, fuel: int = 10000) -> Expression:
    for _ in range(fuel):
        u = _beta_step(t)
        if u is None:
            return t
        t = u
    if _beta_step(t) is None:
        return t
    raise FuelExhausted(t, fuel)
