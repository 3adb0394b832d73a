from pathlib import Path

import pytest
from hypothesis import given

from conftest import small_corpus, terms
from lscnets.correctness import (
    correction_net, is_correct, is_subnet, linear_skeleton,
)
from lscnets.equivalence import equiv_class, equiv_via_nets
from lscnets.nets import (
    Link, LinkKind, Net, free_weakenings, net_iso, plug_net, validate,
)
from lscnets.readback import (
    NotDecomposable, decompose, decompositions, factor_at_var, read_back, read_back_all,
    read_back_traced,
)
from lscnets.suites import cyclic_fixture
from lscnets.terms import Hole, Var, alpha_key, parse, plug
from lscnets.translation import translate
from lscnets.nets import loads

FIXTURES = Path(__file__).parent / "fixtures"


def T(src, delta=()):
    return translate(parse(src), delta)


def summary(P):
    return sorted((l.kind.value, l.sources, l.targets) for l in P.links.values())


# -- correction nets and correctness -----------------------------------------

def test_correction_net_without_boxes_is_unchanged():
    P = T("x")
    assert summary(correction_net(P)) == summary(P)


def test_correction_net_collapses_substitution_box():
    Z = correction_net(T("x[x<-y]"))
    assert sorted(l.kind.value for l in Z.links.values()) == ["der", "genax"]
    (g,) = Z.links_of(LinkKind.GENAX)
    assert g.sources == ("x",) and g.targets == ("y",)


def test_correction_net_collapses_only_outer_boxes():
    Z = correction_net(T("x[x<-a[a<-y]]"))
    kinds = sorted(l.kind.value for l in Z.links.values())
    assert kinds == ["der", "genax"]


def test_cyclic_fixture_is_incorrect():
    P = loads((FIXTURES / "cyclic_box.json").read_text())
    assert net_iso(P, cyclic_fixture()) is not None
    assert validate(P) == []
    verdict = is_correct(P)
    assert not verdict
    assert verdict.clause == "acyclicity"
    assert verdict.witness[0] == verdict.witness[-1]


def test_root_clause():
    # two terminal m-nodes: the root is not the only conclusion
    P = Net.build([Link("d1", "der", (), ("m:r", "x")), Link("d2", "der", (), ("m:s", "y"))],
                  "m:r")
    verdict = is_correct(P)
    assert not verdict and verdict.clause == "root"


def test_single_der_is_correct():
    assert is_correct(T("x"))


def test_linear_skeleton_examples():
    assert linear_skeleton(T("x")) == ["m:r"]
    P = T(r"\x.x")
    (par,) = P.links_of(LinkKind.PAR)
    assert linear_skeleton(P) == [par.sources[1], P.root]


@given(terms(max_size=10))
def test_linear_skeleton_is_total_order(t):
    P = translate(t)
    order = linear_skeleton(P)
    Z = correction_net(P)
    level0 = {n for n, kind in Z.nodes.items() if kind == "m"}
    assert set(order) == level0 and len(order) == len(set(order))
    assert order[-1] == P.root


# -- subnets and decomposition ----------------------------------------------

def test_is_subnet_examples():
    P = T(r"\a. x[x<-y b]", ["w1"])
    assert is_subnet(P, P.links)
    (w,) = [l.id for l in P.links_of(LinkKind.WEAK) if l.targets == ("w1",)]
    assert is_subnet(P, set(P.links) - {w})
    (b,) = [l.id for l in P.bangs if P.iboxes[l.id] and
            any(P.links[i].kind == LinkKind.BANG for i in P.iboxes[l.id])]
    some = next(i for i in sorted(P.iboxes[b]) if P.links[i].kind == LinkKind.DER)
    assert not is_subnet(P, set(P.iboxes[b]) - {some})


@pytest.mark.parametrize("src,kind", [
    (r"\x.y", "root-abstraction"),
    ("x[x<-y]", "free-substitution"),
    ("x y", "root-application"),
    ("x", "one-link-der"),
    ("[.]{x}", "one-link-hole"),
])
def test_decompose_examples(src, kind):
    assert decompose(translate(parse(src))).kind == kind


def test_free_weakening_has_priority():
    c = decompose(T(r"\a.a", ["w1"]))
    assert c.kind == "free-weakening" and c.var == "w1"


def test_free_substitutions_ordered_by_name():
    cases = decompositions(T("(a b)[a<-x][b<-y]"))
    assert [c.var for c in cases if c.kind == "free-substitution"] == ["a", "b"]
    assert decompose(T("(a b)[a<-x][b<-y]")).var == "a"


def test_decomposition_rests_are_subnets():
    for t in small_corpus(6):
        P = translate(t, ["w1"])
        for c in decompositions(P):
            assert c.removed and c.removed.isdisjoint(c.rest)
            if c.rest:
                assert c.removed | c.rest == set(P.links)
                assert is_subnet(P, c.rest)


def test_not_decomposable():
    with pytest.raises(NotDecomposable):
        read_back(cyclic_fixture())


# -- read back ----------------------------------------------------------------

def test_read_back_base_cases():
    assert read_back(T("x")) == Var("x")
    assert read_back(translate(parse("[.]{x,y}"))) == Hole(["x", "y"])


def test_read_back_all_examples():
    got = {alpha_key(u) for u in read_back_all(T(r"(\y.x)[x<-z]"))}
    assert got == {alpha_key(parse(r"(\y.x)[x<-z]")), alpha_key(parse(r"\y. x[x<-z]"))}
    assert read_back_all(T("x")) == [Var("x")]


@given(terms(max_size=10))
def test_round_trips(t):
    P = translate(t, ["w1"])
    u = read_back(P)
    assert net_iso(translate(u, free_weakenings(P)), P) is not None
    assert equiv_via_nets(u, t)


@given(terms(max_size=7))
def test_read_back_all_is_the_class(t):
    got = {alpha_key(u) for u in read_back_all(translate(t))}
    assert got == set(equiv_class(t))


def test_read_back_trace_covers_links():
    t = parse(r"(\a. a b)[b<-y] z")
    u, trace = read_back_traced(translate(t))
    assert set(trace) == set(translate(t).links)


# -- factorisation at a free variable ---------------------------------------

def test_factor_identity():
    P = T("x")
    Q, C = factor_at_var(P, parse("x"), "d:r")
    assert C == Hole(["x"])
    assert net_iso(Q, translate(Hole(["x"]))) is not None


def test_factor_application():
    t = parse("x y")
    P = translate(t)
    (d,) = [l for l in P.links_of(LinkKind.DER) if l.targets[1] == "x"]
    Q, C = factor_at_var(P, t, d)
    assert C == parse("[.]{x} y")


def test_factor_sweep():
    for t in small_corpus(6):
        P = translate(t)
        u = read_back(P)
        for d in P.links_of(LinkKind.DER):
            x = d.targets[1]
            if x not in P.free_vars:
                continue
            for delta in ((), tuple(sorted(P.free_vars))):
                Q, C = factor_at_var(P, u, d, delta)
                assert plug(C, Var(x)) == u
                assert net_iso(plug_net(Q, T(x)), P) is not None
                interface = set(delta) | {x}
                (h,) = Q.links_of(LinkKind.HOLE)
                assert set(h.targets[1:]) == interface
                assert net_iso(translate(C, sorted(free_weakenings(Q))), Q) is not None
