"""Hypergraph proof nets.

A net is a directed hypergraph.  Nodes are typed ``e`` (exponential) or ``m``
(multiplicative); links are hyperedges with ordered sources and targets.
Contraction is not a link: an ``e``-node targeted by several derelictions
*is* the contraction.  Cuts are not stored either: a cut is a node whose
incoming and outgoing connections are both principal.

Link signatures (node types of sources -> targets, ``*`` = principal port):

    Der     ()        -> (m, e*)
    Weak    ()        -> (e*)
    Par     (e, m)    -> (m*)
    Tensor  (m*)      -> (m, e)
    Bang    (m, e*)   -> ()
    Hole    ()        -> (m, e, e, ...)
    GenAx   (e)       -> (e, e, ...)

The ``m``-source of a Bang is the root of its box, the ``e``-source is the
variable (or argument node) the box is attached to.

Internal node and link ids contain a colon; ``e``-nodes standing for
variables are named by the variable itself.
"""

from __future__ import annotations

import hashlib
import json
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property

import networkx as nx
import pynauty
from networkx.algorithms.isomorphism import DiGraphMatcher

__all__ = [
    "LinkKind", "Link", "Net", "Violation", "MalformedInput", "InterfaceViolation",
    "validate", "link_level", "node_level", "classify_box", "BoxInfo",
    "net_iso", "plug_net", "settle_weakenings", "rename_apart",
    "to_json", "from_json", "dumps", "loads", "to_dot", "fingerprint", "canonical_key",
    "multiplicity", "free_weakenings", "hole_link",
]


class LinkKind(str, Enum):
    BANG = "bang"
    DER = "der"
    WEAK = "weak"
    PAR = "par"
    TENSOR = "tensor"
    HOLE = "hole"
    GENAX = "genax"


# (source types, target types) of the fixed-arity links
SIGNATURES = {
    LinkKind.DER: ((), ("m", "e")),
    LinkKind.WEAK: ((), ("e",)),
    LinkKind.PAR: (("e", "m"), ("m",)),
    LinkKind.TENSOR: (("m",), ("m", "e")),
    LinkKind.BANG: (("m", "e"), ()),
}

PRINCIPAL = {
    LinkKind.DER: ("t", 1),
    LinkKind.WEAK: ("t", 0),
    LinkKind.PAR: ("t", 0),
    LinkKind.TENSOR: ("s", 0),
    LinkKind.BANG: ("s", 1),
}

# links whose targets may be free variables of a net
FREE_TARGET_KINDS = {LinkKind.DER, LinkKind.WEAK, LinkKind.HOLE, LinkKind.GENAX}


class MalformedInput(ValueError):
    def __init__(self, msg, location=""):
        super().__init__(f"{location}: {msg}" if location else msg)
        self.location = location


class InterfaceViolation(ValueError):
    pass


@dataclass(frozen=True)
class Link:
    id: str
    kind: LinkKind
    sources: tuple = ()
    targets: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "kind", LinkKind(self.kind))
        object.__setattr__(self, "sources", tuple(self.sources))
        object.__setattr__(self, "targets", tuple(self.targets))

    @property
    def principal(self):
        """The principal node, or None for holes and generalised axioms."""
        side, i = PRINCIPAL.get(self.kind, (None, None))
        if side is None:
            return None
        ports = self.sources if side == "s" else self.targets
        return ports[i] if i < len(ports) else None

    @property
    def nodes(self):
        return self.sources + self.targets

    def renamed(self, f, new_id=None):
        return Link(new_id or self.id, self.kind,
                    tuple(f(n) for n in self.sources), tuple(f(n) for n in self.targets))


@dataclass(frozen=True, eq=False)
class Net:
    """An immutable net.  ``iboxes`` maps each Bang id to its interior."""

    nodes: dict
    links: dict
    root: str
    iboxes: dict = field(default_factory=dict)
    declared_free_vars: frozenset | None = None

    @classmethod
    def build(cls, links, root, iboxes=None, extra_nodes=None):
        """Make a net from links; node types are read off the signatures."""
        links = {l.id: l for l in links}
        nodes = dict(extra_nodes or {})
        for l in links.values():
            for n, t in zip(l.nodes, _port_types(l)):
                nodes.setdefault(n, t)
        boxes = {b: frozenset(s) for b, s in (iboxes or {}).items()}
        return cls(nodes, links, root, boxes)

    # -- incidence ----------------------------------------------------------

    @cached_property
    def incoming(self):
        inc = defaultdict(list)
        for l in self.links.values():
            for n in l.targets:
                inc[n].append(l.id)
        return inc

    @cached_property
    def outgoing(self):
        out = defaultdict(list)
        for l in self.links.values():
            for n in l.sources:
                out[n].append(l.id)
        return out

    def incoming_links(self, n):
        return [self.links[i] for i in self.incoming.get(n, ())]

    def outgoing_link(self, n):
        out = self.outgoing.get(n, ())
        return self.links[out[0]] if out else None

    @cached_property
    def free_vars(self) -> frozenset:
        """Terminal e-nodes."""
        return frozenset(n for n, t in self.nodes.items()
                         if t == "e" and not self.outgoing.get(n))

    def links_of(self, kind):
        return [l for l in self.links.values() if l.kind == kind]

    @cached_property
    def bangs(self):
        return [l for l in self.links.values() if l.kind == LinkKind.BANG]

    @cached_property
    def containers(self):
        """Map link id -> set of Bang ids whose box contains it."""
        c = defaultdict(set)
        for b, inside in self.iboxes.items():
            for l in inside:
                c[l].add(b)
        return c

    @property
    def kind(self):
        kinds = {l.kind for l in self.links.values()}
        holes = sum(1 for l in self.links.values() if l.kind == LinkKind.HOLE)
        if LinkKind.BANG not in kinds and LinkKind.GENAX in kinds:
            return "correction"
        if holes == 1 and LinkKind.GENAX not in kinds:
            return "context"
        if not kinds & {LinkKind.HOLE, LinkKind.GENAX}:
            return "term"
        return "other"

    def box_root(self, bang_id):
        return self.links[bang_id].sources[0]

    def box_var(self, bang_id):
        return self.links[bang_id].sources[1]

    def sub(self, link_ids, root=None) -> "Net":
        """The sub-hypergraph on ``link_ids`` with the inherited box map."""
        link_ids = frozenset(link_ids)
        links = {i: self.links[i] for i in link_ids}
        nodes = {}
        for l in links.values():
            for n in l.nodes:
                nodes[n] = self.nodes[n]
        boxes = {b: s & link_ids for b, s in self.iboxes.items() if b in link_ids}
        return Net(nodes, links, self.root if root is None else root, boxes)

    def box(self, bang_id) -> "Net":
        return self.sub(self.iboxes[bang_id], root=self.box_root(bang_id))

    def box_free_vars(self, bang_id) -> frozenset:
        inside = self.iboxes[bang_id]
        srcs = set()
        tgts = set()
        for i in inside:
            l = self.links[i]
            srcs.update(l.sources)
            tgts.update(n for n in l.targets if self.nodes.get(n) == "e")
        return frozenset(tgts - srcs)

    def replace(self, links=None, root=None, iboxes=None, nodes=None) -> "Net":
        """A new net; nodes are recomputed from links unless given."""
        links = self.links if links is None else links
        if nodes is None:
            nodes = {}
            for l in links.values():
                for n, t in zip(l.nodes, _port_types(l)):
                    nodes[n] = self.nodes.get(n, t)
        return Net(nodes, dict(links), self.root if root is None else root,
                   dict(self.iboxes if iboxes is None else iboxes))

    def __repr__(self):
        return f"<Net {len(self.nodes)} nodes, {len(self.links)} links, root {self.root}>"


def _port_types(l: Link):
    if l.kind in SIGNATURES:
        s, t = SIGNATURES[l.kind]
        return s + t
    if l.kind == LinkKind.HOLE:
        return ("m",) + ("e",) * (len(l.targets) - 1)
    return ("e",) * (len(l.sources) + len(l.targets))


def multiplicity(P: Net, x: str) -> int:
    """0 if ``x`` is weakened, otherwise the number of derelictions on it."""
    return sum(1 for l in P.incoming_links(x) if l.kind == LinkKind.DER)


def free_weakenings(P: Net) -> frozenset:
    return frozenset(l.targets[0] for l in P.links_of(LinkKind.WEAK)
                     if l.targets[0] in P.free_vars)


def hole_link(P: Net) -> Link:
    hs = P.links_of(LinkKind.HOLE)
    if len(hs) != 1:
        raise ValueError(f"expected exactly one hole link, found {len(hs)}")
    return hs[0]


# -- levels and boxes -------------------------------------------------------

def link_level(P: Net, l) -> int:
    lid = l.id if isinstance(l, Link) else l
    return len(P.containers.get(lid, ()))


def node_level(P: Net, n) -> int:
    ids = P.incoming.get(n, []) + P.outgoing.get(n, [])
    levels = [link_level(P, i) for i in ids if i not in _own_bangs(P, n)]
    return max(levels, default=0)


def _own_bangs(P, n):
    # a box root belongs to its box, not to the level of its Bang
    return {l.id for l in P.links_of(LinkKind.BANG) if l.sources[0] == n}


@dataclass(frozen=True)
class BoxInfo:
    role: str  # "argument" | "substitution"
    free: bool


def classify_box(P: Net, bang) -> BoxInfo:
    b = bang.id if isinstance(bang, Link) else bang
    var = P.box_var(b)
    arg = any(l.kind == LinkKind.TENSOR for l in P.incoming_links(var))
    free = link_level(P, b) == 0 and P.box_free_vars(b) <= P.free_vars
    return BoxInfo("argument" if arg else "substitution", free)


# -- validation -------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    condition: str
    subject: str
    detail: str

    def __str__(self):
        return f"{self.condition} [{self.subject}]: {self.detail}"


def _prenet_violations(P: Net, link_ids, root, where):
    """Pre-net conditions of the sub-hypergraph on ``link_ids``."""
    out = []
    inc = defaultdict(list)
    outc = defaultdict(list)
    nodes = set()
    for i in link_ids:
        l = P.links[i]
        for n in l.targets:
            inc[n].append(l)
        for n in l.sources:
            outc[n].append(l)
        nodes.update(l.nodes)
    if root not in nodes or P.nodes.get(root) != "m":
        out.append(Violation("root", where, f"root {root} is not an m-node of the net"))
    elif outc.get(root):
        out.append(Violation("root", where, f"root {root} is not terminal"))
    for n in sorted(nodes):
        ins = inc.get(n, [])
        if not ins:
            out.append(Violation("incoming", where, f"node {n} has no incoming link"))
        if len(outc.get(n, [])) > 1:
            out.append(Violation("outgoing", where, f"node {n} has more than one outgoing link"))
        if P.nodes[n] == "m" and len(ins) > 1:
            out.append(Violation("multiplicative", where,
                                 f"m-node {n} has {len(ins)} incoming links"))
        if P.nodes[n] == "e" and len(ins) > 1 and any(l.kind != LinkKind.DER for l in ins):
            kinds = sorted(l.kind.value for l in ins)
            detail = f"e-node {n} has incoming {kinds}"
            if LinkKind.WEAK in {l.kind for l in ins}:
                detail += "; weakenings cannot be contracted"
            out.append(Violation("exponential", where, detail))
        if P.nodes[n] == "e" and not outc.get(n):
            if any(l.kind not in FREE_TARGET_KINDS for l in ins):
                out.append(Violation("free-variables", where,
                                     f"free variable {n} is the target of a tensor"))
    return out, inc, outc, nodes


def validate(P: Net) -> list:
    """All violated net conditions; an empty list means ``P`` is a net."""
    out = []
    for n, t in P.nodes.items():
        if t not in ("e", "m"):
            out.append(Violation("node-type", n, f"unknown node type {t!r}"))
    for l in P.links.values():
        out.extend(_signature_violations(P, l))
    if out:
        return out
    touched = {n for l in P.links.values() for n in l.nodes}
    for n in sorted(set(P.nodes) - touched):
        out.append(Violation("incoming", n, f"isolated node {n}"))
    pre, _, _, _ = _prenet_violations(P, P.links.keys(), P.root, "net")
    out.extend(pre)
    if P.declared_free_vars is not None and P.declared_free_vars != P.free_vars:
        out.append(Violation("free-variables", "net",
                             f"declared {sorted(P.declared_free_vars)}, "
                             f"terminal e-nodes are {sorted(P.free_vars)}"))
    out.extend(_box_violations(P))
    return out


def _signature_violations(P, l):
    types = [P.nodes.get(n) for n in l.nodes]
    if None in types:
        return [Violation("signature", l.id, "link touches an undeclared node")]
    src = tuple(P.nodes[n] for n in l.sources)
    tgt = tuple(P.nodes[n] for n in l.targets)
    if l.kind in SIGNATURES:
        ok = (src, tgt) == SIGNATURES[l.kind]
    elif l.kind == LinkKind.HOLE:
        ok = not src and tgt[:1] == ("m",) and all(t == "e" for t in tgt[1:])
    else:
        ok = src == ("e",) and all(t == "e" for t in tgt)
    out = []
    if not ok:
        out.append(Violation("signature", l.id,
                             f"{l.kind.value} link with sources {src} and targets {tgt}"))
    if len(set(l.targets)) != len(l.targets) or len(set(l.sources)) != len(l.sources):
        out.append(Violation("signature", l.id, "repeated node among ports"))
    return out


def _box_violations(P: Net):
    out = []
    bang_ids = {l.id for l in P.bangs}
    for b in sorted(set(P.iboxes) - bang_ids):
        out.append(Violation("box-map", b, "box assigned to a link that is not a Bang"))
    for b in sorted(bang_ids - set(P.iboxes)):
        out.append(Violation("box-map", b, "Bang without a box"))
    if out:
        return out
    info = {}
    for b in sorted(bang_ids):
        inside = P.iboxes[b]
        if b in inside:
            out.append(Violation("box-map", b, "a Bang belongs to its own box"))
            continue
        unknown = inside - P.links.keys()
        if unknown:
            out.append(Violation("box-map", b, f"unknown links {sorted(unknown)}"))
            continue
        root = P.box_root(b)
        pre, inc, outc, nodes = _prenet_violations(P, inside, root, f"box {b}")
        out.extend(pre)
        free = {n for n in nodes if P.nodes[n] == "e" and not outc.get(n)}
        internal = {n for n in nodes if inc.get(n) and outc.get(n)}
        info[b] = (nodes, free)
        for n in sorted(free):
            if any(l.kind == LinkKind.WEAK for l in inc[n]):
                out.append(Violation("border", b,
                                     f"free variable {n} of the box is weakened inside it"))
        for n in sorted(internal):
            if P.nodes[n] != "e":
                continue
            missing = set(P.incoming.get(n, ())) - inside
            if missing:
                out.append(Violation("internal-closure", b,
                                     f"contraction {n} is internal but premises "
                                     f"{sorted(missing)} are outside the box"))
        for h in sorted(inside & bang_ids):
            if not P.iboxes[h] <= inside:
                out.append(Violation("internal-closure", b,
                                     f"inner box {h} is not contained in the box"))
    if out:
        return out
    ids = sorted(bang_ids)
    for i, b in enumerate(ids):
        for h in ids[i + 1:]:
            lb, lh = P.iboxes[b], P.iboxes[h]
            if lb <= lh or lh <= lb:
                continue
            shared_links = lb & lh
            shared_nodes = info[b][0] & info[h][0]
            if shared_links:
                out.append(Violation("nesting", f"{b},{h}",
                                     f"overlapping boxes share links {sorted(shared_links)}"))
            bad = shared_nodes - (info[b][1] & info[h][1])
            if bad:
                out.append(Violation("nesting", f"{b},{h}",
                                     f"shared nodes {sorted(bad)} are not free in both boxes"))
    # box containment is a strict partial order
    for b in ids:
        for h in ids:
            if b != h and b in P.iboxes[h] and h in P.iboxes[b]:
                out.append(Violation("nesting", f"{b},{h}", "cyclic box nesting"))
    return out


# -- rewiring helpers -------------------------------------------------------

def settle_weakenings(P: Net) -> Net:
    """Drop contracted weakenings and push every weakening out of boxes.

    A weakening on ``y`` ends up in exactly the boxes containing the outgoing
    link of ``y`` (none if ``y`` is a free variable).
    """
    links = dict(P.links)
    drop = set()
    for l in P.links_of(LinkKind.WEAK):
        y = l.targets[0]
        if len(P.incoming.get(y, ())) > 1:
            drop.add(l.id)
    for i in drop:
        del links[i]
    boxes = {b: set(s) - drop for b, s in P.iboxes.items()}
    for l in P.links_of(LinkKind.WEAK):
        if l.id in drop:
            continue
        y = l.targets[0]
        owner = P.outgoing.get(y, ())
        home = P.containers.get(owner[0], set()) if owner else set()
        for b, s in boxes.items():
            if b in home:
                s.add(l.id)
            else:
                s.discard(l.id)
    return P.replace(links=links, iboxes={b: frozenset(s) for b, s in boxes.items()})


def _fresh_ids(ids, taken, tag):
    """Map each structural id to ``base~{tag}k`` with the least k not taken."""
    used = set(taken)
    mapping = {}
    for i in ids:
        base = i.split("~")[0]
        k = 1
        while f"{base}~{tag}{k}" in used:
            k += 1
        mapping[i] = f"{base}~{tag}{k}"
        used.add(mapping[i])
    return mapping


def rename_apart(Q: Net, taken, keep=frozenset(), tag="") -> tuple:
    """Rename nodes and links of ``Q`` away from ``taken``.

    Nodes in ``keep`` keep their id.  Variable-named e-nodes get fresh
    variable names, structural ids get a ``~k`` suffix.  Returns
    ``(net, node_map, link_map)``.
    """
    from .terms import fresh_name

    taken = set(taken)
    node_map = {}
    structural = [n for n in Q.nodes if n not in keep and ":" in n]
    names = [n for n in Q.nodes if n not in keep and ":" not in n]
    node_map.update(_fresh_ids(structural, taken | set(Q.nodes), tag))
    used = taken | set(Q.nodes) | set(node_map.values())
    for n in sorted(names):
        m = fresh_name(n, used)
        used.add(m)
        node_map[n] = m
    for n in keep:
        node_map[n] = n
    link_map = _fresh_ids(Q.links, taken | set(Q.links), tag)
    f = node_map.__getitem__
    links = {link_map[i]: l.renamed(f, link_map[i]) for i, l in Q.links.items()}
    nodes = {node_map[n]: t for n, t in Q.nodes.items()}
    boxes = {link_map[b]: frozenset(link_map[i] for i in s) for b, s in Q.iboxes.items()}
    return Net(nodes, links, node_map[Q.root], boxes), node_map, link_map


def plug_net(P: Net, Q: Net) -> Net:
    """Plug ``Q`` into the hole of the context net ``P``."""
    hole = hole_link(P)
    anchor, interface = hole.targets[0], set(hole.targets[1:])
    gamma = Q.free_vars
    if not gamma <= interface:
        raise InterfaceViolation(
            f"free variables {sorted(gamma - interface)} not in interface {sorted(interface)}")
    taken = set(P.nodes) | set(P.links)
    Q2, _, _ = rename_apart(Q, taken, keep=gamma)
    f = {Q2.root: anchor}
    qlinks = {i: l.renamed(lambda n: f.get(n, n)) for i, l in Q2.links.items()}
    links = {i: l for i, l in P.links.items() if i != hole.id}
    links.update(qlinks)
    boxes = {}
    for b, s in P.iboxes.items():
        boxes[b] = (s - {hole.id}) | set(qlinks) if hole.id in s else s
    boxes.update(Q2.iboxes)
    incoming = {n for l in links.values() for n in l.targets}
    for x in sorted(interface - gamma):
        if x not in incoming:
            w = _fresh_ids([f"w:plug:{x}"], set(links), "")[f"w:plug:{x}"]
            links[w] = Link(w, LinkKind.WEAK, (), (x,))
    nodes = dict(P.nodes)
    nodes.pop(Q2.root, None)
    nodes.update({n: t for n, t in Q2.nodes.items() if n != Q2.root})
    touched = {n for l in links.values() for n in l.nodes}
    nodes = {n: t for n, t in nodes.items() if n in touched}
    R = Net(nodes, links, P.root, {b: frozenset(s) for b, s in boxes.items()})
    return settle_weakenings(R)


# -- isomorphism ------------------------------------------------------------

def _digraph(P: Net):
    G = nx.DiGraph()
    free = P.free_vars
    for n, t in P.nodes.items():
        G.add_node(("n", n), label=("node", t, n if n in free else None, n == P.root))
    for l in P.links.values():
        G.add_node(("l", l.id), label=("link", l.kind.value))
        unordered = l.kind in (LinkKind.HOLE, LinkKind.GENAX)
        for i, n in enumerate(l.sources):
            G.add_edge(("n", n), ("l", l.id), label=("s", i))
        for i, n in enumerate(l.targets):
            # hole interfaces and collapsed-box interfaces are sets
            role = ("t", "*") if unordered and (i > 0 or l.kind == LinkKind.GENAX) else ("t", i)
            G.add_edge(("l", l.id), ("n", n), label=role)
    for b, inside in P.iboxes.items():
        for i in inside:
            G.add_edge(("l", b), ("l", i), label=("box",))
    return G


def _invariant(P: Net):
    kinds = sorted(l.kind.value for l in P.links.values())
    return (len(P.nodes), tuple(kinds), P.free_vars,
            tuple(sorted(len(s) for s in P.iboxes.values())))


def _canonical(P: Net):
    """Canonical labelling of ``P`` (cached on the net).

    The net becomes an undirected vertex-coloured graph: one vertex per
    node, per link and per port connection (coloured by link kind, side and
    position), plus per Bang an owner vertex and a box vertex adjacent to
    the interior.  Returns ``(signature, certificate, labelling, names)``
    where ``names[v]`` is the node or link id of vertex ``v`` or None.
    """
    cached = P.__dict__.get("_canon")
    if cached is not None:
        return cached
    free = P.free_vars
    names = []
    colour = []
    index = {}
    edges = []

    def vertex(name, c):
        names.append(name)
        colour.append(c)
        return len(names) - 1

    for n, t in P.nodes.items():
        index[("n", n)] = vertex(n, ("node", t, n if n in free else "", n == P.root))
    for l in P.links.values():
        lv = index[("l", l.id)] = vertex(l.id, ("link", l.kind.value))
        unordered = l.kind in (LinkKind.HOLE, LinkKind.GENAX)
        for i, n in enumerate(l.sources):
            pv = vertex(None, ("port", l.kind.value, "s", i))
            edges += [(lv, pv), (pv, index[("n", n)])]
        for i, n in enumerate(l.targets):
            # hole interfaces and collapsed-box interfaces are sets
            pos = "*" if unordered and (i > 0 or l.kind == LinkKind.GENAX) else i
            pv = vertex(None, ("port", l.kind.value, "t", pos))
            edges += [(lv, pv), (pv, index[("n", n)])]
    for b, inside in P.iboxes.items():
        owner = vertex(None, ("owner",))
        box = vertex(None, ("box",))
        edges += [(index[("l", b)], owner), (owner, box)]
        edges += [(box, index[("l", i)]) for i in inside]
    adj = {}
    for u, v in edges:
        adj.setdefault(u, []).append(v)
    classes = {}
    for v, c in enumerate(colour):
        classes.setdefault(c, set()).add(v)
    keys = sorted(classes, key=repr)
    g = pynauty.Graph(len(names), adjacency_dict=adj,
                      vertex_coloring=[classes[k] for k in keys])
    signature = tuple((repr(k), len(classes[k])) for k in keys)
    result = (signature, pynauty.certificate(g), pynauty.canon_label(g), names)
    P.__dict__["_canon"] = result
    return result


def net_iso(P: Net, Q: Net, method: str = "nauty"):
    """A node/link bijection from ``P`` to ``Q``, or None.

    The bijection preserves types, kinds, port order, the root and the box
    map, and fixes free variables by name.  ``method`` is ``nauty``
    (canonical labelling) or ``vf2`` (backtracking search).
    """
    if _invariant(P) != _invariant(Q):
        return None
    if method == "vf2":
        GP, GQ = _digraph(P), _digraph(Q)
        m = DiGraphMatcher(GP, GQ,
                           node_match=lambda a, b: a["label"] == b["label"],
                           edge_match=lambda a, b: a["label"] == b["label"])
        for mapping in m.isomorphisms_iter():
            return {k[1]: v[1] for k, v in mapping.items()}
        return None
    sp, cp, lp, np_ = _canonical(P)
    sq, cq, lq, nq = _canonical(Q)
    if sp != sq or cp != cq:
        return None
    return {np_[a]: nq[b] for a, b in zip(lp, lq) if np_[a] is not None}


def canonical_key(P: Net) -> tuple:
    """A hashable complete invariant: equal keys iff isomorphic nets."""
    sig, cert, _, _ = _canonical(P)
    return sig, cert


def fingerprint(P: Net) -> str:
    """Short hex digest of :func:`canonical_key`."""
    sig, cert = canonical_key(P)
    return hashlib.sha256(repr(sig).encode() + cert).hexdigest()[:16]


# -- serialisation ----------------------------------------------------------

def to_json(P: Net) -> dict:
    return {
        "nodes": [{"id": n, "ntype": t} for n, t in sorted(P.nodes.items())],
        "links": [{"id": l.id, "kind": l.kind.value,
                   "sources": list(l.sources), "targets": list(l.targets)}
                  for l in sorted(P.links.values(), key=lambda l: l.id)],
        "root": P.root,
        "freeVars": sorted(P.free_vars),
        "iboxes": {b: sorted(s) for b, s in sorted(P.iboxes.items())},
    }


def from_json(data) -> Net:
    if isinstance(data, (str, bytes)):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise MalformedInput(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    if not isinstance(data, dict):
        raise MalformedInput("top level must be an object")
    for key in ("nodes", "links", "root"):
        if key not in data:
            raise MalformedInput(f"missing field {key!r}")
    nodes = {}
    for i, n in enumerate(data["nodes"]):
        try:
            nodes[str(n["id"])] = str(n["ntype"])
        except (KeyError, TypeError):
            raise MalformedInput("node needs 'id' and 'ntype'", f"nodes[{i}]") from None
    links = {}
    for i, l in enumerate(data["links"]):
        where = f"links[{i}]"
        try:
            kind = LinkKind(l["kind"])
        except (KeyError, TypeError, ValueError):
            raise MalformedInput(f"bad link kind {l.get('kind') if isinstance(l, dict) else l!r}",
                                 where) from None
        try:
            link = Link(str(l["id"]), kind, tuple(map(str, l.get("sources", []))),
                        tuple(map(str, l.get("targets", []))))
        except (KeyError, TypeError):
            raise MalformedInput("link needs 'id'", where) from None
        if link.id in links:
            raise MalformedInput(f"duplicate link id {link.id}", where)
        links[link.id] = link
    boxes = {}
    for b, s in (data.get("iboxes") or {}).items():
        if not isinstance(s, list):
            raise MalformedInput("box interior must be a list", f"iboxes[{b}]")
        boxes[str(b)] = frozenset(map(str, s))
    declared = data.get("freeVars")
    return Net(nodes, links, str(data["root"]), boxes,
               None if declared is None else frozenset(map(str, declared)))


def dumps(P: Net, **kw) -> str:
    return json.dumps(to_json(P), **kw)


def loads(text: str) -> Net:
    return from_json(text)


_SHAPES = {
    LinkKind.BANG: "!", LinkKind.DER: "d", LinkKind.WEAK: "w", LinkKind.PAR: "⅋",
    LinkKind.TENSOR: "⊗", LinkKind.HOLE: "⟨·⟩", LinkKind.GENAX: "genax",
}


def to_dot(P: Net, name="net") -> str:
    """Graphviz rendering: links are small boxes, boxes are nested clusters."""

    def q(s):
        return '"' + s.replace('"', r'\"') + '"'

    # innermost box of each link and of each node
    def innermost(cands):
        cands = [b for b in cands]
        best = None
        for b in cands:
            if best is None or len(P.iboxes[b]) < len(P.iboxes[best]):
                best = b
        return best

    link_home = {i: innermost(P.containers.get(i, ())) for i in P.links}
    node_home = {}
    for n in P.nodes:
        homes = set()
        for b, inside in P.iboxes.items():
            if n == P.box_root(b) or any(n in P.links[i].sources for i in inside):
                homes.add(b)
        node_home[n] = innermost(homes)
    parent = {b: innermost(P.containers.get(b, ())) for b in P.iboxes}

    lines = [f"digraph {q(name)} {{", "  rankdir=BT;"]

    def emit(box, indent):
        pad = "  " * indent
        for n, t in sorted(P.nodes.items()):
            if node_home[n] != box:
                continue
            style = "shape=circle,color=cyan3" if t == "e" else "shape=point,width=0.12,color=brown"
            extra = ",peripheries=2" if n == P.root else ""
            label = n if t == "e" else ""
            lines.append(f"{pad}{q('n:' + n)} [{style}{extra},xlabel={q(label)}];")
        for i, l in sorted(P.links.items()):
            if link_home[i] != box:
                continue
            lines.append(f"{pad}{q('l:' + i)} [shape=box,label={q(_SHAPES[l.kind])},tooltip={q(i)}];")
        for b in sorted(P.iboxes):
            if parent[b] == box:
                lines.append(f"{pad}subgraph {q('cluster_' + b)} {{")
                lines.append(f"{pad}  label={q('box ' + b)}; style=dashed;")
                emit(b, indent + 1)
                lines.append(f"{pad}}}")

    emit(None, 1)
    for i, l in sorted(P.links.items()):
        p = l.principal
        for n in l.sources:
            mark = ",arrowtail=odot,dir=both" if n == p else ""
            lines.append(f"  {q('n:' + n)} -> {q('l:' + i)} [color={_edge_color(P, n)}{mark}];")
        for n in l.targets:
            mark = ",arrowhead=odot" if n == p else ""
            lines.append(f"  {q('l:' + i)} -> {q('n:' + n)} [color={_edge_color(P, n)}{mark}];")
    lines.append("}")
    return "\n".join(lines)


def _edge_color(P, n):
    return "blue,style=dotted" if P.nodes[n] == "e" else "red"
