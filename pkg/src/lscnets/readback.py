"""Sequentialisation: reading expressions back from correct nets.

A correct net with more than one link always has one of four removable
parts: a free weakening, a root Par, a free substitution box, or a root
Tensor whose argument box is free.  Peeling them off recursively yields an
expression.  ``read_back`` follows a fixed priority; ``read_back_all``
explores every choice and so computes the whole read-back relation.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .nets import LinkKind, Net, free_weakenings, net_iso, settle_weakenings, Link
from .terms import (
    Abs, App, ESub, Expression, Hole, Var, alpha_key, captured_vars, context_at,
)
from .translation import id_path, translate

__all__ = [
    "DecompositionCase", "decompose", "decompositions", "read_back",
    "read_back_traced", "read_back_all", "factor_at_var", "NotDecomposable",
]


class NotDecomposable(AssertionError):
    pass


@dataclass(frozen=True)
class DecompositionCase:
    """Which removable part a net has.

    ``kind`` is one of ``free-weakening``, ``free-substitution``,
    ``root-abstraction``, ``root-application``, ``one-link-der``,
    ``one-link-hole``.  ``links`` are the witness links (the weakening, the
    Par, the Bang, or the Tensor and its Bang); ``removed`` is the full set
    of links taken away, and ``rest`` the remaining subnet.
    """

    kind: str
    links: tuple
    removed: frozenset
    rest: frozenset = frozenset()
    rest_root: str = ""
    var: str = ""

    @property
    def box(self) -> str:
        return self.links[-1] if self.kind in ("free-substitution", "root-application") else ""


class _View:
    """The subnet of ``P`` spanned by ``links``, rooted at ``root``."""

    __slots__ = ("P", "links", "root", "_inc", "_out")

    def __init__(self, P, links, root):
        self.P = P
        self.links = links
        self.root = root
        inc, out = {}, {}
        for i in links:
            l = P.links[i]
            for n in l.targets:
                inc.setdefault(n, []).append(l)
            for n in l.sources:
                out.setdefault(n, []).append(l)
        self._inc, self._out = inc, out

    def incoming(self, n):
        return self._inc.get(n, [])

    def outgoing(self, n):
        o = self._out.get(n)
        return o[0] if o else None

    @property
    def free_vars(self):
        return {n for n in self._inc if self.P.nodes[n] == "e" and n not in self._out}

    def level0(self, b):
        return not (self.P.containers.get(b, set()) & self.links)

    def box_free(self, b, free):
        return self.level0(b) and self.P.box_free_vars(b) <= free


def _cases(v: _View, first_only: bool):
    P = v.P
    if len(v.links) == 1:
        (i,) = v.links
        l = P.links[i]
        if l.kind == LinkKind.DER:
            return [DecompositionCase("one-link-der", (i,), v.links, var=l.targets[1])]
        if l.kind == LinkKind.HOLE:
            return [DecompositionCase("one-link-hole", (i,), v.links)]
        raise NotDecomposable(f"single {l.kind.value} link")
    out = []
    free = v.free_vars
    weak = sorted((P.links[i].targets[0], i) for i in v.links
                  if P.links[i].kind == LinkKind.WEAK and P.links[i].targets[0] in free)
    for x, i in weak:
        out.append(DecompositionCase("free-weakening", (i,), frozenset((i,)),
                                     v.links - {i}, v.root, x))
        if first_only:
            return out
    subs = []
    for i in v.links:
        l = P.links[i]
        if l.kind != LinkKind.BANG:
            continue
        x = l.sources[1]
        if any(k.kind == LinkKind.TENSOR for k in v.incoming(x)):
            continue
        if v.box_free(i, free):
            subs.append((x, i))
    for x, i in sorted(subs):
        removed = P.iboxes[i] | {i}
        out.append(DecompositionCase("free-substitution", (i,), removed,
                                     v.links - removed, v.root, x))
        if first_only:
            return out
    (top,) = v.incoming(v.root) or (None,)
    if top is not None and top.kind == LinkKind.PAR:
        out.append(DecompositionCase("root-abstraction", (top.id,), frozenset((top.id,)),
                                     v.links - {top.id}, top.sources[1], top.sources[0]))
        if first_only:
            return out
    if top is not None and top.kind == LinkKind.TENSOR:
        arg = top.targets[1]
        h = v.outgoing(arg)
        if h is not None and h.kind == LinkKind.BANG and v.box_free(h.id, free):
            removed = P.iboxes[h.id] | {top.id, h.id}
            out.append(DecompositionCase("root-application", (top.id, h.id), removed,
                                         v.links - removed, top.sources[0]))
    return out


def decompositions(P: Net) -> list:
    """Every applicable decomposition case of the correct net ``P``."""
    return _cases(_View(P, frozenset(P.links), P.root), first_only=False)


def decompose(P: Net) -> DecompositionCase:
    """The case chosen by the deterministic read back.

    Priority: free weakening, free substitution, root abstraction, root
    application; ties go to the smallest e-node name.
    """
    cases = _cases(_View(P, frozenset(P.links), P.root), first_only=True)
    if not cases:
        raise NotDecomposable("correct nets with several links are decomposable")
    return cases[0]


def read_back_traced(P: Net):
    """Deterministic read back plus a map from link ids to term positions.

    Der -> its occurrence, Par -> its abstraction, Tensor and argument Bang
    -> their application, substitution Bang -> its explicit substitution.
    """
    trace = {}

    def go(links, root, path):
        v = _View(P, links, root)
        cases = _cases(v, first_only=True)
        if not cases:
            raise NotDecomposable(f"no decomposition for {len(links)} links at {root}")
        c = cases[0]
        for i in c.links:
            trace[i] = path
        match c.kind:
            case "one-link-der":
                return Var(c.var)
            case "one-link-hole":
                return Hole(P.links[c.links[0]].targets[1:])
            case "free-weakening":
                return go(c.rest, c.rest_root, path)
            case "root-abstraction":
                return Abs(c.var, go(c.rest, c.rest_root, path + (0,)))
            case "free-substitution":
                b = c.links[0]
                body = go(c.rest, c.rest_root, path + (0,))
                return ESub(body, c.var, go(P.iboxes[b], P.box_root(b), path + (1,)))
            case "root-application":
                b = c.links[1]
                f = go(c.rest, c.rest_root, path + (0,))
                return App(f, go(P.iboxes[b], P.box_root(b), path + (1,)))
        raise AssertionError(c.kind)

    e = go(frozenset(P.links), P.root, ())
    return e, trace


def read_back(P: Net) -> Expression:
    return read_back_traced(P)[0]


def read_back_all(P: Net) -> list:
    """All read backs of ``P``, one per alpha-class."""

    @lru_cache(maxsize=None)
    def go(links, root):
        v = _View(P, links, root)
        out = {}
        for c in _cases(v, first_only=False):
            match c.kind:
                case "one-link-der":
                    es = [Var(c.var)]
                case "one-link-hole":
                    es = [Hole(P.links[c.links[0]].targets[1:])]
                case "free-weakening":
                    es = go(c.rest, c.rest_root)
                case "root-abstraction":
                    es = [Abs(c.var, e) for e in go(c.rest, c.rest_root)]
                case "free-substitution":
                    b = c.links[0]
                    es = [ESub(e, c.var, f) for e in go(c.rest, c.rest_root)
                          for f in go(P.iboxes[b], P.box_root(b))]
                case "root-application":
                    b = c.links[1]
                    es = [App(e, f) for e in go(c.rest, c.rest_root)
                          for f in go(P.iboxes[b], P.box_root(b))]
            for e in es:
                out.setdefault(alpha_key(e), e)
        return tuple(out.values())

    return list(go(frozenset(P.links), P.root))


def factor_at_var(P: Net, t: Expression, d, delta=()):
    """Split ``P`` at the dereliction ``d`` on a free variable.

    Returns ``(Q, C)``: ``Q`` is ``P`` with ``d`` replaced by a hole link and
    ``C`` is ``t`` with the matching occurrence replaced by a hole, both of
    interface ``delta | {x}``.  Names in ``delta`` must be free in ``P`` or
    captured at the occurrence.
    """
    did = d.id if isinstance(d, Link) else d
    der = P.links[did]
    if der.kind != LinkKind.DER:
        raise ValueError(f"{did} is not a dereliction")
    x = der.targets[1]
    if x not in P.free_vars:
        raise ValueError(f"{x} is not a free variable of the net")
    witness = net_iso(translate(t, free_weakenings(P)), P)
    if witness is None:
        raise ValueError("t is not a read back of P")
    origin = next(k for k, v in witness.items() if v == did and k.startswith("d:"))
    path = id_path(origin)
    interface = frozenset(delta) | {x}
    C = context_at(t, path, interface)
    allowed = P.free_vars | captured_vars(C)
    if not interface <= allowed:
        raise ValueError(f"interface names {sorted(interface - allowed)} are out of scope")
    hid = f"hole:{did}"
    links = {i: l for i, l in P.links.items() if i != did}
    links[hid] = Link(hid, LinkKind.HOLE, (), (der.targets[0], x, *sorted(interface - {x})))
    boxes = {b: (s - {did}) | {hid} if did in s else s for b, s in P.iboxes.items()}
    Q = settle_weakenings(P.replace(links=links, iboxes=boxes))
    return Q, C
