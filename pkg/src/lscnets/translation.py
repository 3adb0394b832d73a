"""Translation of expressions to nets.

Ids are derived from the syntax-tree path of the constructor that creates
them (``r`` followed by child indices), so translating the same expression
twice yields identical nets, and the link of a term position can be looked
up directly:

    Var at p     Der     d:p      (m-node m:p)
    Hole at p    Hole    hole:p
    Abs at p     Par     par:p    (weakening w:p if the binder is unused)
    App at p     Tensor  ten:p, Bang bang:p on argument node a:p
    ESub at p    Bang    bang:p on the binder (weakening w:p if unused)
"""

from __future__ import annotations

from .nets import Link, LinkKind, Net
from .terms import Abs, App, ESub, Expression, Hole, Var, bound_vars, free_vars

__all__ = ["translate", "WellNamingViolation", "path_id", "id_path"]


class WellNamingViolation(ValueError):
    pass


def path_id(path) -> str:
    return "r" + "".join(map(str, path))


def id_path(ident: str) -> tuple:
    """Inverse of :func:`path_id` on the position part of a translation id."""
    tail = ident.split(":", 1)[-1].split("~")[0]
    return tuple(int(c) for c in tail[1:])


def _check(e, delta):
    binders = bound_vars(e)
    if len(set(binders)) != len(binders):
        dup = sorted({b for b in binders if binders.count(b) > 1})
        raise WellNamingViolation(f"binders {dup} are used more than once")
    clash = set(binders) & (set(free_vars(e)) | set(delta))
    if clash:
        raise WellNamingViolation(f"names {sorted(clash)} are both bound and free")
    for x in list(binders) + list(delta):
        if ":" in x:
            raise WellNamingViolation(f"variable name {x!r} may not contain ':'")


def translate(e: Expression, delta=()) -> Net:
    """The net of ``e``; every name in ``delta`` not free in ``e`` is weakened."""
    delta = frozenset(delta)
    _check(e, delta)
    links = []
    boxes = {}

    def go(e, path):
        p = path_id(path)
        root = f"m:{p}"
        match e:
            case Var(x):
                links.append(Link(f"d:{p}", LinkKind.DER, (), (root, x)))
                return root, {x}
            case Hole(interface):
                links.append(Link(f"hole:{p}", LinkKind.HOLE, (), (root, *sorted(interface))))
                return root, set(interface)
            case Abs(x, body):
                broot, used = go(body, path + (0,))
                if x not in used:
                    links.append(Link(f"w:{p}", LinkKind.WEAK, (), (x,)))
                links.append(Link(f"par:{p}", LinkKind.PAR, (x, broot), (root,)))
                return root, used - {x}
            case App(f, a):
                froot, fused = go(f, path + (0,))
                start = len(links)
                aroot, aused = go(a, path + (1,))
                inside = [l.id for l in links[start:]]
                arg = f"a:{p}"
                links.append(Link(f"ten:{p}", LinkKind.TENSOR, (froot,), (root, arg)))
                links.append(Link(f"bang:{p}", LinkKind.BANG, (aroot, arg), ()))
                boxes[f"bang:{p}"] = inside
                return root, fused | aused
            case ESub(body, x, s):
                broot, bused = go(body, path + (0,))
                start = len(links)
                sroot, sused = go(s, path + (1,))
                inside = [l.id for l in links[start:]]
                if x not in bused:
                    links.append(Link(f"w:{p}", LinkKind.WEAK, (), (x,)))
                links.append(Link(f"bang:{p}", LinkKind.BANG, (sroot, x), ()))
                boxes[f"bang:{p}"] = inside
                return broot, (bused - {x}) | sused
        raise TypeError(f"not an expression: {e!r}")

    root, used = go(e, ())
    for y in sorted(delta - used):
        links.append(Link(f"w:delta:{y}", LinkKind.WEAK, (), (y,)))
    return Net.build(links, root, boxes)
