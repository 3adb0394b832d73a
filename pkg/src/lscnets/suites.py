"""Corpus-wide checks of the correspondence between terms and nets.

Each ``criterion_*`` function sweeps a corpus and returns a
:class:`CriterionResult`; :func:`run_suite` groups them.
"""

from __future__ import annotations

import json
import random
import time
from collections import Counter
from dataclasses import dataclass, field

from .church import arithmetic_corpus, numeral_value
from .correctness import NotLinear, correction_net, is_correct, linear_skeleton
from .corpus import CorpusSpec, enumerate_terms, random_term
from .equivalence import (
    EquivAxiom, STRUCTURAL, check_strong_bisimulation, equiv_class, equiv_via_nets,
    lsc_system,
)
from .netrewriting import find_net_redexes, net_step, normalize_net, redex_bijection
from .nets import (
    Link, LinkKind, Net, canonical_key, free_weakenings, multiplicity as net_multiplicity,
    net_iso, validate,
)
from .readback import NotDecomposable, read_back, read_back_all
from .rewriting import FuelExhausted, beta_oracle, find_term_redexes, normalize, step, unfold
from .terms import alpha_eq, alpha_key, free_vars, multiplicity, parse, pretty, size
from .translation import translate

__all__ = [
    "CriterionResult", "SuiteReport", "SUITES", "run_suite", "corpus",
    "cyclic_fixture", "CRITERIA", "run_criteria", "random_sample",
]

EXTRA_WEAKENING = "w1"
RANDOM_COUNT, RANDOM_SIZES, RANDOM_SEED = 300, (10, 16), 2024
MAX_FAILURES_KEPT = 20


@dataclass
class CriterionResult:
    number: int
    title: str
    checked: int = 0
    failures: list = field(default_factory=list)
    failure_count: int = 0
    seconds: float = 0.0
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failure_count == 0 and self.checked > 0

    def fail(self, msg):
        self.failure_count += 1
        if len(self.failures) < MAX_FAILURES_KEPT:
            self.failures.append(msg)

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return (f"[{status}] criterion {self.number} ({self.title}): {self.checked} checks, "
                f"{self.failure_count} failures, {self.seconds:.1f}s")

    def summary(self) -> dict:
        return {"criterion": self.number, "title": self.title, "ok": self.ok,
                "checked": self.checked, "failures": self.failure_count,
                "examples": self.failures, "seconds": round(self.seconds, 2),
                "notes": self.notes}


@dataclass
class SuiteReport:
    name: str
    results: list

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def lines(self):
        for r in self.results:
            yield r.line()
            for f in r.failures:
                yield f"    {f}"
            for n in r.notes:
                yield f"    note: {n}"

    def to_json(self) -> str:
        return json.dumps({"suite": self.name, "ok": self.ok,
                           "criteria": [r.summary() for r in self.results]},
                          ensure_ascii=False, indent=2)


def corpus(max_size=9):
    return list(enumerate_terms(CorpusSpec(max_constructors=max_size)))


def random_sample(count=RANDOM_COUNT, sizes=RANDOM_SIZES, seed=RANDOM_SEED):
    """Reproducible random well-named terms larger than the corpus bound."""
    rng = random.Random(seed)
    return [random_term(rng, rng.randint(*sizes)) for _ in range(count)]


def _timed(fn):
    def run(*args, **kw):
        t0 = time.perf_counter()
        res = fn(*args, **kw)
        for r in res if isinstance(res, tuple) else (res,):
            r.seconds = time.perf_counter() - t0
        return res
    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


# -- static -----------------------------------------------------------------

@_timed
def criterion_1(terms) -> CriterionResult:
    """Translations are correct nets with the right free variables and
    multiplicities."""
    res = CriterionResult(1, "static soundness")
    for t in terms:
        fv = free_vars(t)
        for delta in (frozenset(), frozenset({EXTRA_WEAKENING})):
            res.checked += 1
            P = translate(t, delta)
            bad = validate(P)
            if bad:
                res.fail(f"{pretty(t)} Δ={sorted(delta)}: {bad[0]}")
                continue
            c = is_correct(P)
            if not c:
                res.fail(f"{pretty(t)} Δ={sorted(delta)}: {c}")
            elif P.free_vars != fv | delta:
                res.fail(f"{pretty(t)} Δ={sorted(delta)}: free variables {sorted(P.free_vars)}")
            else:
                for x in fv | delta:
                    if net_multiplicity(P, x) != multiplicity(t, x):
                        res.fail(f"{pretty(t)}: multiplicity of {x}")
                        break
    return res


@_timed
def criterion_2(terms) -> CriterionResult:
    """Read back then translate gives the net back; read back of a
    translation is equivalent to the term."""
    res = CriterionResult(2, "sequentialisation round trips")
    for t in terms:
        for delta in (frozenset(), frozenset({EXTRA_WEAKENING})):
            res.checked += 1
            P = translate(t, delta)
            try:
                r = read_back(P)
            except NotDecomposable as exc:
                res.fail(f"{pretty(t)}: not decomposable: {exc}")
                continue
            if net_iso(translate(r, free_weakenings(P)), P) is None:
                res.fail(f"{pretty(t)} Δ={sorted(delta)}: read back {pretty(r)} translates elsewhere")
            elif not delta and not equiv_via_nets(r, t):
                res.fail(f"{pretty(t)}: read back {pretty(r)} is not equivalent")
    return res


def cyclic_fixture() -> Net:
    """A net whose only box uses its own variable: the correction net has the
    loop x -> x, so the net is not correct."""
    links = [
        Link("d:top", LinkKind.DER, (), ("m:top", "x")),
        Link("d:box", LinkKind.DER, (), ("m:box", "x")),
        Link("bang:x", LinkKind.BANG, ("m:box", "x"), ()),
    ]
    return Net.build(links, "m:top", {"bang:x": {"d:box"}})


@_timed
def criterion_8(terms) -> CriterionResult:
    """Linear skeletons of correct nets are total orders ending at the root."""
    res = CriterionResult(8, "linear skeleton")
    for t in terms:
        res.checked += 1
        P = translate(t)
        try:
            order = linear_skeleton(P)
        except NotLinear as exc:
            res.fail(f"{pretty(t)}: {exc}")
            continue
        ms = {n for n, k in correction_net(P).nodes.items() if k == "m"}
        if order[-1] != P.root or set(order) != ms:
            res.fail(f"{pretty(t)}: skeleton {order}")
    F = cyclic_fixture()
    res.checked += 1
    verdict = is_correct(F)
    if validate(F):
        res.fail(f"fixture is not a net: {validate(F)[0]}")
    elif verdict or verdict.clause != "acyclicity" or not verdict.witness:
        res.fail(f"fixture: expected an acyclicity failure, got {verdict}")
    else:
        res.notes.append(f"fixture rejected: {verdict}")
    return res


# -- quotient ---------------------------------------------------------------

R_PAIR = ("(y x)[x<-z]", "y (x[x<-z])")


@_timed
def criterion_3(terms) -> CriterionResult:
    """Equivalence by closure and by net isomorphism agree on all pairs."""
    res = CriterionResult(3, "quotient")
    index = {alpha_key(t): i for i, t in enumerate(terms)}
    classes, groups, keys = [], {}, []
    for i, t in enumerate(terms):
        cls = equiv_class(t)
        classes.append(cls)
        P = translate(t)
        keys.append(canonical_key(P))
        groups.setdefault(keys[-1], set()).add(i)
        res.checked += 1
        back = {alpha_key(e) for e in read_back_all(P)}
        if back != set(cls):
            res.fail(f"{pretty(t)}: {len(back)} read backs but {len(cls)} equivalent terms")
    for i, t in enumerate(terms):
        by_closure = {index[k] for k in classes[i] if k in index}
        by_nets = groups[keys[i]]
        res.checked += len(terms)
        if by_closure != by_nets:
            diff = sorted(by_closure ^ by_nets)[:3]
            res.fail(f"{pretty(t)}: deciders disagree on {[pretty(terms[j]) for j in diff]}")
            continue
        for j in by_nets:
            if j != i and net_iso(translate(t), translate(terms[j])) is None:
                res.fail(f"{pretty(t)} / {pretty(terms[j])}: canonical keys agree, no isomorphism")
    t, s = (parse(x) for x in R_PAIR)
    res.checked += 1
    if net_iso(translate(t), translate(s)) is not None:
        res.fail(f"{R_PAIR[0]} and {R_PAIR[1]} have isomorphic nets")
    res.notes.append(f"{len(terms)} terms, {len(groups)} net classes")
    return res


# -- dynamics ---------------------------------------------------------------

@_timed
def criteria_4_5(terms):
    """Redex bijection, both commuting squares, and correctness of reducts."""
    sq = CriterionResult(4, "dynamic isomorphism")
    pc = CriterionResult(5, "preservation of correctness")
    for t in terms:
        P = translate(t)
        sq.checked += 1
        term_rs = find_term_redexes(t)
        net_rs = find_net_redexes(P)
        if Counter(r.kind for r in term_rs) != Counter(r.kind for r in net_rs):
            sq.fail(f"{pretty(t)}: redex counts differ")
            continue
        phi, inv = redex_bijection(P, t, witness={i: i for i in (*P.nodes, *P.links)})
        if set(inv) != set(net_rs) or any(phi[R].kind != R.kind for R in phi):
            sq.fail(f"{pretty(t)}: redex bijection is not kind-preserving")
            continue
        for R in term_rs:
            rho = phi[R]
            Q = net_step(P, rho)
            pc.checked += 1
            bad = validate(Q)
            verdict = is_correct(Q) if not bad else None
            if bad or not verdict:
                pc.fail(f"{pretty(t)} {rho.describe()}: {bad[0] if bad else verdict}")
                continue
            u = step(t, R)
            weak = free_weakenings(Q)
            sq.checked += 2
            if net_iso(Q, translate(u, weak)) is None:
                sq.fail(f"{pretty(t)} {R.describe()}: term reduct {pretty(u)} is not read back")
                continue
            try:
                back = read_back(Q)
            except NotDecomposable as exc:
                sq.fail(f"{pretty(t)} {rho.describe()}: {exc}")
                continue
            if net_iso(translate(back, weak), Q) is None:
                sq.fail(f"{pretty(t)} {rho.describe()}: read back {pretty(back)} of the reduct")
    return sq, pc


@_timed
def criterion_6(terms) -> CriterionResult:
    res = CriterionResult(6, "strong bisimulation")
    good = check_strong_bisimulation(lsc_system(), terms)
    res.checked = good.steps
    for c in good.counterexamples:
        res.fail(f"t={c['t']} s={c['s']}: {c['kind']}-step to {c['u']} unmatched")
    res.notes.append(next(good.lines()))
    broken = check_strong_bisimulation(lsc_system(STRUCTURAL + (EquivAxiom.APP_RIGHT,)),
                                       terms, max_counterexamples=1)
    res.checked += 1
    if broken.ok:
        res.fail("adding @r did not produce a counterexample")
    else:
        c = broken.counterexamples[0]
        res.notes.append(f"with @r: t={c['t']} s={c['s']} {c['kind']}-step to {c['u']} unmatched")
    return res


@_timed
def criterion_7(fuel=10_000) -> CriterionResult:
    res = CriterionResult(7, "normal-form agreement")
    for label, t in arithmetic_corpus():
        res.checked += 1
        try:
            nf = normalize(t, fuel=fuel).term
            expected = beta_oracle(unfold(t), fuel=fuel)
            net_nf = read_back(normalize_net(translate(t), fuel=fuel).net)
        except FuelExhausted as exc:
            res.fail(f"{label}: {exc}")
            continue
        if not alpha_eq(unfold(nf), expected):
            res.fail(f"{label}: {pretty(nf)} vs oracle {pretty(expected)}")
        elif not alpha_eq(unfold(net_nf), expected):
            res.fail(f"{label}: net normal form reads back as {pretty(net_nf)}")
        elif label == "2+2" and numeral_value(nf) != 4:
            res.fail(f"2+2 normalised to {pretty(nf)}")
    return res


# each entry maps (corpus, random larger sample) to results
CRITERIA = {
    1: lambda ts, rs: [criterion_1(ts + rs)],
    2: lambda ts, rs: [criterion_2(ts + rs)],
    3: lambda ts, rs: [criterion_3([t for t in ts if size(t) <= 7])],
    45: lambda ts, rs: list(criteria_4_5(ts + rs)),
    6: lambda ts, rs: [criterion_6(ts)],
    7: lambda ts, rs: [criterion_7()],
    8: lambda ts, rs: [criterion_8(ts + rs)],
}


SUITES = {
    "static": (1, 2, 8),
    "quotient": (3,),
    "dynamic": (45, 7),
    "bisim": (6,),
    "all": (1, 2, 3, 45, 6, 7, 8),
}


def run_criteria(keys, max_size: int = 9, on_result=None, name="custom",
                 random_count: int = RANDOM_COUNT) -> SuiteReport:
    """Run the criteria ``keys`` (keys of :data:`CRITERIA`) over the corpus
    and ``random_count`` random terms beyond its size bound."""
    terms = corpus(max_size)
    extra = random_sample(random_count)
    results = []
    for key in keys:
        for r in CRITERIA[key](terms, extra):
            results.append(r)
            if on_result:
                on_result(r)
    return SuiteReport(name, results)


def run_suite(name: str, max_size: int = 9, on_result=None,
              random_count: int = RANDOM_COUNT) -> SuiteReport:
    """Run a named group of criteria over the corpus up to ``max_size``."""
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return run_criteria(SUITES[name], max_size, on_result, name, random_count)
