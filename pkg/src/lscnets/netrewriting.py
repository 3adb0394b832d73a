"""Cut elimination on nets and the correspondence with term redexes.

Cuts are implicit: a node is a cut when its incoming and outgoing
connections are both principal.  That happens in three shapes:

    m   a Par target that is the source of a Tensor
    e   an e-node with a Bang on it, one redex per dereliction
    gc  an e-node with a Bang and a weakening on it
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .nets import (
    Link, LinkKind, Net, fingerprint, free_weakenings, net_iso, rename_apart,
    settle_weakenings, _fresh_ids,
)
from .readback import NotDecomposable, read_back, read_back_traced
from .rewriting import FuelExhausted, StaleRedex, Strategy, TermRedex, _peel, find_term_redexes, step
from .terms import Expression, subterm
from .translation import path_id, translate

__all__ = [
    "NetRedex", "NotAReadBack", "find_net_redexes", "step_m_net", "step_gc_net",
    "step_e_net", "net_step", "normalize_net", "NetNormalizeResult",
    "redex_bijection", "square_failures",
]


class NotAReadBack(ValueError):
    pass


@dataclass(frozen=True)
class NetRedex:
    """A cut.  ``participants`` are (Par, Tensor), (Der, Bang) or (Weak, Bang)."""

    kind: str
    cut_node: str
    participants: tuple

    def describe(self) -> str:
        return f"{self.kind}@{self.cut_node}[{','.join(self.participants)}]"


def _unordered_redexes(P: Net):
    out = []
    for par in P.links_of(LinkKind.PAR):
        n = par.targets[0]
        ten = P.outgoing_link(n)
        if ten is not None and ten.kind == LinkKind.TENSOR:
            out.append(NetRedex("m", n, (par.id, ten.id)))
    for bang in P.bangs:
        x = bang.sources[1]
        for l in P.incoming_links(x):
            if l.kind == LinkKind.DER:
                out.append(NetRedex("e", x, (l.id, bang.id)))
            elif l.kind == LinkKind.WEAK:
                out.append(NetRedex("gc", x, (l.id, bang.id)))
    return out


def _order_key(trace):
    def key(r: NetRedex):
        a, b = r.participants
        if r.kind == "m":
            return (trace.get(b), ()), r.participants
        if r.kind == "e":
            return (trace.get(b), trace.get(a)), r.participants
        return (trace.get(b), ()), r.participants
    return key


def find_net_redexes(P: Net) -> list:
    """All cuts of ``P``, in the order of the matching term redexes.

    The order comes from the positions the deterministic read back assigns
    to the participating links; nets that cannot be read back are ordered by
    link ids.
    """
    rs = _unordered_redexes(P)
    try:
        _, trace = read_back_traced(P)
    except NotDecomposable:
        return sorted(rs, key=lambda r: r.participants)
    return sorted(rs, key=_order_key(trace))


def _get(P, i, kind):
    l = P.links.get(i)
    if l is None or l.kind != kind:
        raise StaleRedex(f"{i} is not a {kind.value} link of the net")
    return l


def _new_weak(links, x, tag):
    base = f"w:{tag}:{x}"
    w = base if base not in links else _fresh_ids([base], set(links), "")[base]
    links[w] = Link(w, LinkKind.WEAK, (), (x,))


def _drop_from_boxes(iboxes, removed):
    return {b: s - removed for b, s in iboxes.items() if b not in removed}


def step_m_net(P: Net, r: NetRedex) -> Net:
    par = _get(P, r.participants[0], LinkKind.PAR)
    ten = _get(P, r.participants[1], LinkKind.TENSOR)
    if ten.sources[0] != par.targets[0]:
        raise StaleRedex(f"{r.describe()}: Par and Tensor do not meet")
    x, body_root = par.sources
    root, arg = ten.targets
    f = {body_root: root, arg: x}
    links = {i: l.renamed(lambda n: f.get(n, n))
             for i, l in P.links.items() if i not in (par.id, ten.id)}
    boxes = _drop_from_boxes(P.iboxes, {par.id, ten.id})
    return settle_weakenings(P.replace(links=links, iboxes=boxes))


def step_gc_net(P: Net, r: NetRedex) -> Net:
    weak = _get(P, r.participants[0], LinkKind.WEAK)
    bang = _get(P, r.participants[1], LinkKind.BANG)
    if weak.targets[0] != bang.sources[1]:
        raise StaleRedex(f"{r.describe()}: weakening and Bang do not meet")
    removed = P.iboxes[bang.id] | {weak.id, bang.id}
    free = P.box_free_vars(bang.id)
    links = {i: l for i, l in P.links.items() if i not in removed}
    incoming = {n for l in links.values() for n in l.targets}
    for y in sorted(free - incoming):
        _new_weak(links, y, "gc")
    boxes = _drop_from_boxes(P.iboxes, removed)
    return settle_weakenings(P.replace(links=links, iboxes=boxes))


def step_e_net(P: Net, r: NetRedex) -> Net:
    der = _get(P, r.participants[0], LinkKind.DER)
    bang = _get(P, r.participants[1], LinkKind.BANG)
    x = bang.sources[1]
    if der.targets[1] != x:
        raise StaleRedex(f"{r.describe()}: dereliction and Bang do not meet")
    copy, _, _ = rename_apart(P.box(bang.id), set(P.nodes) | set(P.links),
                              keep=P.box_free_vars(bang.id))
    anchor = der.targets[0]
    clinks = {i: l.renamed(lambda n: anchor if n == copy.root else n)
              for i, l in copy.links.items()}
    links = {i: l for i, l in P.links.items() if i != der.id}
    links.update(clinks)
    boxes = {b: (s - {der.id}) | clinks.keys() if der.id in s else s
             for b, s in P.iboxes.items()}
    boxes.update(copy.iboxes)
    if not any(x in l.targets for l in links.values()):
        _new_weak(links, x, "e")
    return settle_weakenings(P.replace(links=links, iboxes=boxes))


_STEPS = {"m": step_m_net, "e": step_e_net, "gc": step_gc_net}


def net_step(P: Net, r: NetRedex) -> Net:
    try:
        fn = _STEPS[r.kind]
    except KeyError:
        raise StaleRedex(f"unknown redex kind {r.kind!r}") from None
    return fn(P, r)


@dataclass
class NetNormalizeResult:
    net: Net
    normal: bool
    steps: Counter
    trace: list  # (kind, cut node, fingerprint of the result)

    @property
    def total(self):
        return sum(self.steps.values())


def normalize_net(P: Net, strategy=Strategy.LEFTMOST_OUTERMOST, fuel: int = 1000,
                  trace: bool = False) -> NetNormalizeResult:
    """Eliminate cuts in read-back order until none is left."""
    strategy = Strategy(strategy)
    if strategy == Strategy.EXHAUSTIVE:
        raise ValueError("exhaustive enumeration is only available on terms")
    counts = Counter()
    log = []
    while True:
        rs = find_net_redexes(P)
        if not rs:
            return NetNormalizeResult(P, True, counts, log)
        if sum(counts.values()) >= fuel:
            raise FuelExhausted(P, fuel)
        r = rs[0]
        if strategy == Strategy.GC_EAGER:
            r = next((q for q in rs if q.kind == "gc"), r)
        P = net_step(P, r)
        counts[r.kind] += 1
        if trace:
            log.append((r.kind, r.cut_node, fingerprint(P)))


# -- the bijection between term and net redexes -----------------------------

def _term_redex_links(t: Expression, R: TermRedex):
    """Ids, in ``translate(t)``, of the links a term redex corresponds to."""
    if R.kind == "m":
        depth, _ = _peel(subterm(t, R.position + (0,)))
        abs_path = R.position + (0,) + (0,) * depth
        return f"par:{path_id(abs_path)}", f"ten:{path_id(R.position)}"
    bang = f"bang:{path_id(R.position)}"
    if R.kind == "e":
        return f"d:{path_id(R.occurrence)}", bang
    return f"w:{path_id(R.position)}", bang


def redex_bijection(P: Net, t: Expression, witness=None):
    """``(phi, phi_inv)`` between the redexes of ``t`` and the cuts of ``P``.

    ``t`` must be a read back of ``P``; the correspondence is transported
    along an isomorphism between ``translate(t)`` and ``P``, which callers
    may pass as ``witness`` when they already have it.
    """
    if witness is None:
        witness = net_iso(translate(t, free_weakenings(P)), P)
    if witness is None:
        raise NotAReadBack("the net is not the translation of the term")
    cuts = {r.participants: r for r in _unordered_redexes(P)}
    phi = {}
    for R in find_term_redexes(t):
        a, b = (witness[i] for i in _term_redex_links(t, R))
        phi[R] = cuts[(a, b)]
    inverse = {v: k for k, v in phi.items()}
    if len(inverse) != len(phi) or len(phi) != len(cuts):
        raise AssertionError(f"{len(phi)} term redexes but {len(cuts)} cuts")
    return phi, inverse


def square_failures(t: Expression, delta=()) -> list:
    """Redexes of ``t`` whose term step and net step do not commute.

    For each term redex ``R`` the net step on ``phi(R)`` must yield a net
    whose read backs include ``step(t, R)``; the converse direction reads
    the net reduct back and compares it with the term reduct.
    """
    P = translate(t, delta)
    phi, _ = redex_bijection(P, t, witness={i: i for i in (*P.nodes, *P.links)})
    bad = []
    for R, rho in phi.items():
        Q = net_step(P, rho)
        u = step(t, R)
        weak = free_weakenings(Q)
        if net_iso(Q, translate(u, weak)) is None:
            bad.append((R, rho, "term step does not match net step"))
            continue
        try:
            back = read_back(Q)
        except NotDecomposable as exc:
            bad.append((R, rho, f"net reduct is not sequentialisable: {exc}"))
            continue
        if net_iso(translate(back, weak), Q) is None:
            bad.append((R, rho, "read back of the net reduct does not translate back"))
    return bad
