"""Correction nets and the correctness criterion.

The correction net collapses every level-0 box into a generalised axiom
from the Bang's e-node to the free variables of the box.  A net is correct
when its root is the only terminal m-node of the correction net, the
correction net is acyclic, and every level-0 box is correct in turn.
"""

from __future__ import annotations

from dataclasses import dataclass

from .nets import Link, LinkKind, Net, validate

__all__ = [
    "correction_net", "is_correct", "Correctness", "linear_skeleton", "NotLinear",
    "is_subnet",
]


class NotLinear(AssertionError):
    pass


def level0_bangs(P: Net):
    return sorted(l.id for l in P.bangs if not P.containers.get(l.id))


def correction_net(P: Net) -> Net:
    links = dict(P.links)
    for b in level0_bangs(P):
        free = sorted(P.box_free_vars(b))
        for i in P.iboxes[b]:
            links.pop(i, None)
        var = P.box_var(b)
        del links[b]
        g = f"genax:{b}"
        links[g] = Link(g, LinkKind.GENAX, (var,), tuple(free))
    return P.replace(links=links, iboxes={})


@dataclass(frozen=True)
class Correctness:
    ok: bool
    clause: str = ""
    witness: tuple = ()
    box: str = ""

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            return "correct"
        where = f" in box {self.box}" if self.box else ""
        return f"{self.clause} fails{where}: {' -> '.join(self.witness)}"


def _find_cycle(Z: Net):
    """A directed cycle of nodes, or None."""
    succ = {n: [] for n in Z.nodes}
    for l in Z.links.values():
        for s in l.sources:
            succ[s].extend(l.targets)
    colour = {n: 0 for n in Z.nodes}
    for start in sorted(Z.nodes):
        if colour[start]:
            continue
        stack = [(start, iter(succ[start]))]
        path = [start]
        colour[start] = 1
        while stack:
            n, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                colour[n] = 2
                stack.pop()
                path.pop()
            elif colour[nxt] == 1:
                return tuple(path[path.index(nxt):] + [nxt])
            elif colour[nxt] == 0:
                colour[nxt] = 1
                stack.append((nxt, iter(succ[nxt])))
                path.append(nxt)
    return None


def is_correct(P: Net) -> Correctness:
    Z = correction_net(P)
    terminal = sorted(n for n, t in Z.nodes.items() if t == "m" and not Z.outgoing.get(n))
    if terminal != [P.root]:
        return Correctness(False, "root", tuple(terminal))
    cycle = _find_cycle(Z)
    if cycle:
        return Correctness(False, "acyclicity", cycle)
    for b in level0_bangs(P):
        inner = is_correct(P.box(b))
        if not inner:
            return Correctness(False, inner.clause, inner.witness, inner.box or b)
    return Correctness(True)


def linear_skeleton(P: Net) -> list:
    """m-nodes of the correction net along linear paths, root last."""
    Z = correction_net(P)
    ms = {n for n, t in Z.nodes.items() if t == "m"}
    succ, pred = {}, {}
    for l in Z.links.values():
        if l.kind in (LinkKind.PAR, LinkKind.TENSOR):
            a = next(n for n in l.sources if Z.nodes[n] == "m")
            b = l.targets[0]
            if a in succ or b in pred:
                raise NotLinear(f"branching at {a if a in succ else b}")
            succ[a], pred[b] = b, a
    starts = [n for n in ms if n not in pred]
    if len(starts) != 1:
        raise NotLinear(f"{len(starts)} chains: {sorted(starts)}")
    order = [starts[0]]
    while order[-1] in succ:
        order.append(succ[order[-1]])
        if len(order) > len(ms):
            raise NotLinear("cycle among m-nodes")
    if len(order) != len(ms) or order[-1] != P.root:
        raise NotLinear(f"chain {order} does not cover all m-nodes ending at the root")
    return order


def is_subnet(P: Net, S) -> bool:
    """Whether the links ``S`` of the correct net ``P`` form a subnet."""
    S = frozenset(S)
    if not S or not S <= P.links.keys():
        return False
    Q = P.sub(S)
    terminal = [n for n, t in Q.nodes.items() if t == "m" and not Q.outgoing.get(n)]
    if len(terminal) != 1:
        return False
    Q = P.sub(S, root=terminal[0])
    if validate(Q) or not is_correct(Q):
        return False
    internal = {n for n in Q.nodes if Q.incoming.get(n) and Q.outgoing.get(n)}
    for n in internal:
        if Q.nodes[n] == "e" and not set(P.incoming.get(n, ())) <= S:
            return False
    for h in Q.bangs:
        if not P.iboxes[h.id] <= S:
            return False
    for l in P.bangs:
        if P.box_free_vars(l.id) & internal and not P.iboxes[l.id] <= S:
            return False
    return True
