import pytest
from hypothesis import given

from conftest import small_corpus, terms
from lscnets.church import PLUS, numeral, numeral_value
from lscnets.correctness import is_correct
from lscnets.netrewriting import (
    NetRedex, NotAReadBack, find_net_redexes, net_step, normalize_net, redex_bijection,
    square_failures,
)
from lscnets.nets import LinkKind, free_weakenings, net_iso, validate
from lscnets.readback import read_back
from lscnets.rewriting import FuelExhausted, StaleRedex, find_term_redexes, normalize, step
from lscnets.terms import App, alpha_eq, parse, well_name
from lscnets.translation import translate


def T(src, delta=()):
    return translate(parse(src), delta)


def only(P, kind=None):
    rs = [r for r in find_net_redexes(P) if kind is None or r.kind == kind]
    assert len(rs) == 1, rs
    return rs[0]


def test_cut_detection():
    assert [r.kind for r in find_net_redexes(T(r"(\x.x) y"))] == ["m"]
    rs = find_net_redexes(T("(x x)[x<-y]"))
    assert [r.kind for r in rs] == ["e", "e"]
    assert len({r.participants[0] for r in rs}) == 2
    assert [r.kind for r in find_net_redexes(T("z[x<-y]"))] == ["gc"]
    assert find_net_redexes(T(r"\x. x y")) == []


@pytest.mark.parametrize("src,expected,delta", [
    (r"(\x.x) y", "x[x<-y]", ()),
    (r"(\x.z) y", "z[x<-y]", ()),
    ("z[x<-y]", "z", ["y"]),
    ("z[x<-z]", "z", ()),
    (r"z[x<-\w.w]", "z", ()),
    ("x[x<-y]", "y[x<-y]", ()),
])
def test_single_step_examples(src, expected, delta):
    P = T(src)
    Q = net_step(P, find_net_redexes(P)[0])
    assert net_iso(Q, T(expected, delta)) is not None


def test_m_step_keeps_weakening():
    P = T(r"(\x.z) y")
    Q = net_step(P, only(P, "m"))
    assert [l.targets for l in Q.links_of(LinkKind.WEAK)] == [("x",)]


def test_gc_step_creates_free_weakening_only_when_needed():
    Q = net_step(T("z[x<-y]"), only(T("z[x<-y]")))
    assert free_weakenings(Q) == {"y"}
    Q = net_step(T(r"z[x<-\w.w]"), only(T(r"z[x<-\w.w]")))
    assert Q.links_of(LinkKind.WEAK) == []


def test_e_step_left_occurrence():
    P = T("(x x)[x<-y]")
    left = next(r for r in find_net_redexes(P) if r.participants[0] == "d:r00")
    assert net_iso(net_step(P, left), T("(y x)[x<-y]")) is not None


def test_e_step_crossing_a_box():
    t = parse(r"((\z. x) w)[x<-y]")
    P = translate(t)
    (R,) = [r for r in find_term_redexes(t) if r.kind == "e"]
    phi, _ = redex_bijection(P, t)
    Q = net_step(P, phi[R])
    assert validate(Q) == [] and is_correct(Q)
    assert net_iso(Q, translate(step(t, R), free_weakenings(Q))) is not None


def test_stale_net_redex():
    P = T("x y")
    with pytest.raises(StaleRedex):
        net_step(P, NetRedex("m", "m:r0", ("par:r0", "ten:r")))


def test_bijection_examples():
    for src, n in [(r"(\x.x) y", 1), ("(x x)[x<-y]", 2)]:
        t = parse(src)
        phi, inv = redex_bijection(translate(t), t)
        assert len(phi) == len(inv) == n
        assert all(R.kind == rho.kind for R, rho in phi.items())


def test_bijection_requires_read_back():
    with pytest.raises(NotAReadBack):
        redex_bijection(T("x y"), parse("y x"))


def test_kind_counts_agree_on_corpus():
    for t in small_corpus(6):
        a = sorted(r.kind for r in find_term_redexes(t))
        b = sorted(r.kind for r in find_net_redexes(translate(t)))
        assert a == b, t


@given(terms(max_size=10))
def test_squares_commute(t):
    assert square_failures(t) == []
    assert square_failures(t, ["w1"]) == []


@given(terms(max_size=10))
def test_steps_preserve_correctness_and_border(t):
    P = translate(t)
    for r in find_net_redexes(P):
        Q = net_step(P, r)
        assert validate(Q) == [] and is_correct(Q)


def test_normalize_net_church_sum():
    t = well_name(App(App(PLUS, numeral(2)), numeral(1)))
    res = normalize_net(translate(t), trace=True)
    assert res.normal
    assert numeral_value(read_back(res.net)) == 3
    assert res.total == len(res.trace)
    term_side = normalize(t)
    assert alpha_eq(read_back(res.net), term_side.term)
    assert dict(res.steps) == dict(term_side.steps)


def test_normalize_net_fuel():
    with pytest.raises(FuelExhausted):
        normalize_net(T(r"(\x. x x) (\y. y y)"), fuel=30)
    with pytest.raises(ValueError):
        normalize_net(T("x"), "exhaustive-enumeration")
