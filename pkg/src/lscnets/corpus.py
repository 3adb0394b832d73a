"""Exhaustive enumeration of small well-named terms."""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache

from .terms import Abs, App, ESub, Var

__all__ = ["CorpusSpec", "enumerate_terms", "random_term", "BINDER_NAMES"]

BINDER_NAMES = tuple("abcdefghijklmnopqrstuvw")


@dataclass(frozen=True)
class CorpusSpec:
    """Bound on the number of constructors and the pool of free names.

    With ``canonical_free`` set, free names are used in pool order of first
    occurrence (``x`` before ``y`` before ``z``), which keeps one
    representative per renaming of free variables.
    """

    max_constructors: int = 9
    free_names: tuple = ("x", "y", "z")
    well_named: bool = True
    canonical_free: bool = True
    min_constructors: int = 1


def _binder(i, pool):
    names = [b for b in BINDER_NAMES if b not in pool]
    if i < len(names):
        return names[i]
    return f"v{i}"


def enumerate_terms(spec: CorpusSpec = CorpusSpec()):
    """Yield every term of the corpus, smallest first.

    Binders are named in pre-order from a supply disjoint from the pool, so
    each alpha-class appears exactly once.
    """
    pool = tuple(spec.free_names)

    @lru_cache(maxsize=None)
    def gen(n, scope, nbind, nfree):
        # terms with n constructors; scope: bound names in scope;
        # nbind: binders used so far; nfree: pool names used so far (canonical)
        # returns list of (term, nbind', nfree')
        out = []
        if n == 1:
            for x in scope:
                out.append((Var(x), nbind, nfree))
            if spec.canonical_free:
                for i in range(min(nfree + 1, len(pool))):
                    out.append((Var(pool[i]), nbind, max(nfree, i + 1)))
            else:
                for x in pool:
                    out.append((Var(x), nbind, nfree))
            return out
        b = _binder(nbind, pool)
        for body, nb, nf in gen(n - 1, scope + (b,), nbind + 1, nfree):
            out.append((Abs(b, body), nb, nf))
        for k in range(1, n - 1):
            for f, nb, nf in gen(k, scope, nbind, nfree):
                for a, nb2, nf2 in gen(n - 1 - k, scope, nb, nf):
                    out.append((App(f, a), nb2, nf2))
            for body, nb, nf in gen(k, scope + (b,), nbind + 1, nfree):
                for s, nb2, nf2 in gen(n - 1 - k, scope, nb, nf):
                    out.append((ESub(body, b, s), nb2, nf2))
        return out

    for n in range(max(1, spec.min_constructors), spec.max_constructors + 1):
        for t, _, _ in gen(n, (), 0, 0):
            yield t


def random_term(rng: random.Random, n: int, free_names=("x", "y", "z")):
    """A random well-named term with exactly ``n`` constructors."""
    counter = [0]

    def fresh():
        counter[0] += 1
        return f"v{counter[0]}"

    def go(n, scope):
        if n == 1:
            return Var(rng.choice(list(scope) + list(free_names)))
        kinds = ["abs"] if n == 2 else ["abs", "app", "es"]
        kind = rng.choice(kinds)
        if kind == "abs":
            b = fresh()
            return Abs(b, go(n - 1, scope + (b,)))
        k = rng.randint(1, n - 2)
        if kind == "app":
            return App(go(k, scope), go(n - 1 - k, scope))
        b = fresh()
        return ESub(go(k, scope + (b,)), b, go(n - 1 - k, scope))

    return go(n, ())
