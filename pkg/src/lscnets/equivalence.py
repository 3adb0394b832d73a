"""Structural equivalence and strong bisimulation.

The equivalence is generated by three commutations of explicit
substitutions, each usable in both directions at any position:

    lam   (\\y.t)[x<-s]    ==  \\y.(t[x<-s])     if y not in fv(s)
    @l    (t u)[x<-s]     ==  t[x<-s] u         if x not in fv(u)
    com   t[x<-s][y<-u]   ==  t[y<-u][x<-s]     if y not in fv(s), x not in fv(u)

``@r`` ((t u)[x<-s] == t (u[x<-s]) if x not in fv(t)) is not part of it; it
is provided only to build a deliberately broken instance.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable

from .nets import net_iso
from .rewriting import find_term_redexes, step
from .terms import (
    Abs, App, ESub, Expression, alpha_key, free_vars, is_well_named, positions,
    replace_at, size, well_name,
)
from .translation import translate

__all__ = [
    "EquivAxiom", "STRUCTURAL", "equiv_neighbors", "equiv_class", "equiv_oracle",
    "BoundExceeded", "equiv_via_nets", "RewritingSystemModulo", "BisimReport",
    "check_strong_bisimulation", "lsc_system", "identity_system",
]


class EquivAxiom(str, Enum):
    LAM = "lam"
    APP_LEFT = "@l"
    COM = "com"
    APP_RIGHT = "@r"


STRUCTURAL = (EquivAxiom.LAM, EquivAxiom.APP_LEFT, EquivAxiom.COM)


class BoundExceeded(RuntimeError):
    pass


def _local(e: Expression, axioms):
    """Terms obtained by one axiom applied at the root of ``e``."""
    if isinstance(e, ESub):
        body, x, s = e.body, e.binder, e.definition
        fs = free_vars(s)
        if EquivAxiom.LAM in axioms and isinstance(body, Abs) and body.binder not in fs:
            yield EquivAxiom.LAM, Abs(body.binder, ESub(body.body, x, s))
        if isinstance(body, App):
            if EquivAxiom.APP_LEFT in axioms and x not in free_vars(body.arg):
                yield EquivAxiom.APP_LEFT, App(ESub(body.fun, x, s), body.arg)
            if EquivAxiom.APP_RIGHT in axioms and x not in free_vars(body.fun):
                yield EquivAxiom.APP_RIGHT, App(body.fun, ESub(body.arg, x, s))
        if EquivAxiom.COM in axioms and isinstance(body, ESub):
            inner, y, u = body.body, body.binder, body.definition
            # e = inner[y<-u][x<-s]
            if x not in free_vars(u) and y not in fs:
                yield EquivAxiom.COM, ESub(ESub(inner, x, s), y, u)
    if isinstance(e, Abs) and isinstance(e.body, ESub) and EquivAxiom.LAM in axioms:
        y, (t, x, s) = e.binder, (e.body.body, e.body.binder, e.body.definition)
        if y not in free_vars(s):
            yield EquivAxiom.LAM, ESub(Abs(y, t), x, s)
    if isinstance(e, App):
        f, a = e.fun, e.arg
        if EquivAxiom.APP_LEFT in axioms and isinstance(f, ESub) and f.binder not in free_vars(a):
            yield EquivAxiom.APP_LEFT, ESub(App(f.body, a), f.binder, f.definition)
        if EquivAxiom.APP_RIGHT in axioms and isinstance(a, ESub) and a.binder not in free_vars(f):
            yield EquivAxiom.APP_RIGHT, ESub(App(f, a.body), a.binder, a.definition)


def equiv_steps(t: Expression, axioms=STRUCTURAL):
    """``(axiom, path, result)`` for every single axiom application."""
    axioms = frozenset(axioms)
    out = []
    for path, sub in positions(t):
        for ax, new in _local(sub, axioms):
            out.append((ax, path, replace_at(t, path, new)))
    return out


def equiv_neighbors(t: Expression, axioms=STRUCTURAL) -> list:
    """Terms one axiom application away from ``t``, one per alpha-class."""
    seen = {}
    for _, _, s in equiv_steps(t, axioms):
        seen.setdefault(alpha_key(s), s)
    return list(seen.values())


def equiv_class(t: Expression, axioms=STRUCTURAL, bound=None) -> dict:
    """The equivalence class of ``t`` as a map alpha-key -> representative.

    Breadth first; raises BoundExceeded when terms are still undiscovered
    after ``bound`` rounds (default: the square of the size of ``t``).
    """
    bound = size(t) ** 2 if bound is None else bound
    seen = {alpha_key(t): t}
    frontier = [t]
    depth = 0
    while frontier:
        if depth >= bound:
            raise BoundExceeded(f"closure not exhausted after {bound} rounds")
        nxt = []
        for u in frontier:
            for v in equiv_neighbors(u, axioms):
                k = alpha_key(v)
                if k not in seen:
                    seen[k] = v
                    nxt.append(v)
        frontier = nxt
        depth += 1
    return seen


def equiv_oracle(t: Expression, s: Expression, bound=None, axioms=STRUCTURAL) -> bool:
    """Decide ``t == s`` by exhausting the closure of ``t``."""
    target = alpha_key(s)
    if target == alpha_key(t):
        return True
    return target in equiv_class(t, axioms, bound)


def equiv_via_nets(t: Expression, s: Expression) -> bool:
    """Decide ``t == s`` by comparing translations up to isomorphism."""
    if free_vars(t) != free_vars(s):
        return False
    t = t if is_well_named(t) else well_name(t)
    s = s if is_well_named(s) else well_name(s)
    return net_iso(translate(t), translate(s)) is not None


# -- strong bisimulation harness --------------------------------------------

@dataclass
class RewritingSystemModulo:
    """Objects with labelled steps and a one-step equivalence.

    ``steps(t)`` yields ``(kind, reduct)``; ``neighbors(t)`` yields the objects
    one equivalence step away; ``equivalent(u, r)`` decides the full
    equivalence.
    """

    name: str
    steps: Callable[[object], Iterable]
    neighbors: Callable[[object], Iterable]
    equivalent: Callable[[object, object], bool]
    show: Callable[[object], str] = str


@dataclass
class BisimReport:
    system: str
    samples: int = 0
    pairs: int = 0
    steps: int = 0
    counterexamples: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def merge(self, other: "BisimReport") -> "BisimReport":
        return BisimReport(self.system, self.samples + other.samples, self.pairs + other.pairs,
                           self.steps + other.steps, self.counterexamples + other.counterexamples)

    def lines(self):
        yield (f"{self.system}: {self.samples} samples, {self.pairs} equivalent pairs, "
               f"{self.steps} steps, {len(self.counterexamples)} counterexamples")
        for c in self.counterexamples:
            yield f"  t={c['t']}  s={c['s']}  {c['kind']}-step to {c['u']} unmatched"

    def summary(self) -> dict:
        return {"system": self.system, "ok": self.ok, "samples": self.samples,
                "pairs": self.pairs, "steps": self.steps,
                "counterexamples": self.counterexamples}

    def to_json(self) -> str:
        return json.dumps(self.summary(), ensure_ascii=False)


def check_strong_bisimulation(system: RewritingSystemModulo, samples,
                              max_counterexamples=None) -> BisimReport:
    """Check that every step of ``t`` is matched, with the same kind, from
    every ``s`` one equivalence step away."""
    report = BisimReport(system.name)
    for t in samples:
        report.samples += 1
        t_steps = list(system.steps(t))
        for s in system.neighbors(t):
            report.pairs += 1
            s_steps = list(system.steps(s))
            for kind, u in t_steps:
                report.steps += 1
                if not any(k == kind and system.equivalent(u, r) for k, r in s_steps):
                    report.counterexamples.append({
                        "t": system.show(t), "s": system.show(s),
                        "kind": kind, "u": system.show(u),
                    })
                    if max_counterexamples and len(report.counterexamples) >= max_counterexamples:
                        return report
    return report


def _term_steps(t):
    return [(r.kind, step(t, r)) for r in find_term_redexes(t)]


def lsc_system(axioms=STRUCTURAL, name=None) -> RewritingSystemModulo:
    """The calculus with the given equivalence; ``equivalent`` exhausts closures."""
    from .terms import pretty

    axioms = tuple(axioms)
    cache = {}

    def closure(u):
        k = alpha_key(u)
        if k not in cache:
            if len(cache) > 100_000:
                cache.clear()
            cache[k] = equiv_class(u, axioms)
        return cache[k]

    def equivalent(u, r):
        return alpha_key(r) in closure(u)

    label = name or "lsc[" + ",".join(a.value for a in axioms) + "]"
    return RewritingSystemModulo(label, _term_steps, lambda t: equiv_neighbors(t, axioms),
                                 equivalent, pretty)


def identity_system(steps, name="identity") -> RewritingSystemModulo:
    """Any rewriting relation with syntactic equality as its equivalence."""
    return RewritingSystemModulo(name, steps, lambda t: [], lambda u, r: u == r)
