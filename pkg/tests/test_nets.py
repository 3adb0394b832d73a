import json

import pytest
from hypothesis import given

from conftest import small_corpus, terms
from lscnets.nets import (
    InterfaceViolation, Link, LinkKind, MalformedInput, Net, canonical_key, classify_box,
    fingerprint, from_json, link_level, loads, dumps, net_iso, plug_net, rename_apart,
    to_dot, to_json, validate,
)
from lscnets.terms import parse
from lscnets.translation import translate


def T(src, delta=()):
    return translate(parse(src), delta)


def conditions(P):
    return {v.condition for v in validate(P)}


def test_validate_accepts_translations():
    assert validate(T("x")) == []
    for t in small_corpus(4):
        assert validate(translate(t)) == []


def test_weakening_cannot_be_contracted():
    P = Net.build([Link("d", "der", (), ("m:r", "x")), Link("w", "weak", (), ("x",))], "m:r")
    (v,) = validate(P)
    assert v.condition == "exponential"
    assert "weakenings cannot be contracted" in v.detail


def test_internal_closure_violation():
    P = T(r"y (\a. a a)")
    inside = P.iboxes["bang:r"]
    der = next(i for i in sorted(inside) if i.startswith("d:"))
    Q = P.replace(iboxes={**P.iboxes, "bang:r": inside - {der}})
    assert "internal-closure" in conditions(Q)


def test_signature_and_root_violations():
    P = Net.build([Link("p", "par", ("x", "m:a"), ("m:r",))], "m:r")
    assert "incoming" in conditions(P)
    bad = Net({"m:r": "m", "x": "m"}, {"d": Link("d", "der", (), ("m:r", "x"))}, "m:r")
    assert "signature" in conditions(bad)
    P = T("x").replace(root="x")
    assert "root" in conditions(P)


def test_border_violation_survives_json():
    P = T("z[x<-y]")
    data = to_json(P)
    data["links"].append({"id": "w:q", "kind": "weak", "sources": [], "targets": ["q"]})
    data["nodes"].append({"id": "q", "ntype": "e"})
    data["iboxes"]["bang:r"].append("w:q")
    data["freeVars"].append("q")
    Q = from_json(json.dumps(data))
    assert conditions(Q) == {"border"}


def test_declared_free_vars_checked():
    data = to_json(T("x"))
    data["freeVars"] = ["x", "y"]
    assert conditions(from_json(data)) == {"free-variables"}


@pytest.mark.parametrize("text", [
    "not json", "[]", '{"nodes": []}',
    '{"nodes": [], "links": [{"id": "l", "kind": "nope"}], "root": "r"}',
    '{"nodes": [{"id": "a"}], "links": [], "root": "a"}',
])
def test_malformed_json(text):
    with pytest.raises(MalformedInput):
        loads(text)


def test_link_levels():
    P = T("x")
    assert all(link_level(P, i) == 0 for i in P.links)
    P = T(r"(\x.x) y")
    ders = {l.targets[1]: l.id for l in P.links_of(LinkKind.DER)}
    assert link_level(P, ders["y"]) == 1 and link_level(P, ders["x"]) == 0
    P = T(r"(\x.x) (y z)")
    ders = {l.targets[1]: l.id for l in P.links_of(LinkKind.DER)}
    assert link_level(P, ders["z"]) == 2


def test_classify_box():
    P = T("x[x<-y]")
    (b,) = P.bangs
    info = classify_box(P, b)
    assert info.role == "substitution" and info.free
    P = T("x y")
    (b,) = P.bangs
    assert classify_box(P, b).role == "argument"
    P = T(r"(\x.x) (y z)")
    inner = [b for b in P.bangs if link_level(P, b.id) == 1]
    assert inner and not classify_box(P, inner[0]).free


def test_iso_examples():
    P = T(r"(\a. a b)[b<-y]")
    Q, _, _ = rename_apart(P, set(P.nodes) | set(P.links), keep=P.free_vars)
    assert set(Q.links).isdisjoint(P.links)
    assert net_iso(P, Q) is not None
    assert net_iso(T(r"(\y.x)[x<-z]"), T(r"\y. x[x<-z]")) is not None
    assert net_iso(T("(y x)[x<-z]"), T("y (x[x<-z])")) is None
    # free variables are fixed by name
    assert net_iso(T("x"), T("y")) is None


def test_iso_witness_is_an_isomorphism():
    P, Q = T(r"(\y.x)[x<-z] w"), T(r"(\y. x[x<-z]) w")
    f = net_iso(P, Q)
    assert f is not None
    for i, l in P.links.items():
        m = Q.links[f[i]]
        assert m.kind == l.kind
        assert tuple(f[n] for n in l.sources) == m.sources
    assert {f[b]: {f[i] for i in s} for b, s in P.iboxes.items()} == dict(Q.iboxes)


@given(terms(max_size=9), terms(max_size=9))
def test_nauty_and_vf2_agree(t, s):
    P, Q = translate(t), translate(s)
    a = net_iso(P, Q) is not None
    assert a == (net_iso(P, Q, method="vf2") is not None)
    assert a == (canonical_key(P) == canonical_key(Q))
    assert a == (fingerprint(P) == fingerprint(Q))


@given(terms(max_size=10))
def test_json_round_trip(t):
    P = translate(t, ["w1"])
    Q = loads(dumps(P))
    assert (Q.nodes, Q.links, Q.root, Q.iboxes) == (P.nodes, P.links, P.root, P.iboxes)
    assert validate(Q) == []


def test_to_dot():
    dot = to_dot(T("x"))
    assert dot.count('label="d"') == 1
    assert "cluster" in to_dot(T("x y"))


def test_plug_net_identity_context():
    P = plug_net(translate(parse("[.]{x}")), T("x"))
    assert net_iso(P, T("x")) is not None


def test_plug_net_interface_violation():
    with pytest.raises(InterfaceViolation):
        plug_net(translate(parse("[.]{x}")), T("y", ["x"]))


def test_plug_net_adds_weakening_for_unused_interface():
    P = plug_net(translate(parse("[.]{x,y}")), T("x"))
    assert net_iso(P, T("x", ["y"])) is not None
