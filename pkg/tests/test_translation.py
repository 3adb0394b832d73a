import pytest
from hypothesis import given, strategies as st

from conftest import small_corpus, terms
from lscnets.correctness import is_correct
from lscnets.nets import LinkKind, multiplicity, net_iso, plug_net, validate
from lscnets.terms import (
    binders_on_path, captured_vars, context_at, free_vars, multiplicity as term_multiplicity,
    parse, positions,
)
from lscnets.translation import WellNamingViolation, id_path, path_id, translate


def test_variable():
    P = translate(parse("x"))
    assert P.nodes == {"m:r": "m", "x": "e"}
    (d,) = P.links.values()
    assert d.kind == LinkKind.DER and d.targets == ("m:r", "x")
    assert P.free_vars == {"x"} and P.kind == "term"


def test_variable_with_weakening():
    P = translate(parse("x"), ["y"])
    assert P.free_vars == {"x", "y"}
    assert [l.targets for l in P.links_of(LinkKind.WEAK)] == [("y",)]


def test_structural_pair_translates_to_same_net():
    assert net_iso(translate(parse(r"(\y.x)[x<-z]")), translate(parse(r"\y. x[x<-z]")))


def test_context_translation():
    P = translate(parse(r"\a. [.]{a,x} y"))
    assert P.kind == "context"
    (h,) = P.links_of(LinkKind.HOLE)
    assert set(h.targets[1:]) == {"a", "x"}


@pytest.mark.parametrize("src,delta", [(r"\x.\x.x", ()), ("x[x<-y]", ["x"])])
def test_well_naming_violations(src, delta):
    with pytest.raises(WellNamingViolation):
        translate(parse(src), delta)


def test_translation_is_deterministic():
    t = parse(r"(\a. a (b c))[b<-\d.d]")
    assert translate(t).links == translate(t).links


def test_path_ids():
    assert path_id((0, 1)) == "r01"
    assert id_path("d:r010") == (0, 1, 0)
    assert id_path("m:r1~3") == (1,)


@given(terms(max_size=10), st.sets(st.sampled_from(["w1", "w2"])))
def test_images_are_correct_nets(t, delta):
    P = translate(t, delta)
    assert validate(P) == []
    assert is_correct(P)
    assert P.free_vars == free_vars(t) | delta
    for x in P.free_vars:
        assert multiplicity(P, x) == term_multiplicity(t, x)


def test_compositionality():
    for t in small_corpus(5):
        for path, e in positions(t):
            cv = set(binders_on_path(t, path))
            for extra in (set(), {"w1"}, cv - free_vars(e)):
                delta = free_vars(e) | extra
                C = context_at(t, path, delta)
                assert captured_vars(C) == cv
                for gamma in (set(), {"w2"}):
                    pi = gamma | (delta - cv)
                    lhs = translate(t, sorted(pi - free_vars(t)))
                    rhs = plug_net(translate(C, sorted(gamma)), translate(e))
                    assert net_iso(lhs, rhs) is not None, (t, path, extra, gamma)
