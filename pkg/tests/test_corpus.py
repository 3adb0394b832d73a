import random
from itertools import combinations

import pytest

from lscnets.church import arithmetic_corpus, numeral, numeral_value
from lscnets.corpus import CorpusSpec, enumerate_terms, random_term
from lscnets.terms import (
    alpha_eq, alpha_key, free_vars, is_term, is_well_named, parse, size,
)


def test_size_one():
    assert list(enumerate_terms(CorpusSpec(max_constructors=1, free_names=("x",)))) == [parse("x")]


def test_hand_count_up_to_three():
    # x | \a.a, \a.x | \a.\b.{a,b,x}, x x, a[a<-x], x[a<-x]
    ts = list(enumerate_terms(CorpusSpec(max_constructors=3, free_names=("x",))))
    assert len(ts) == 9
    for src in [r"\a.a", "x x", "a[a<-x]"]:
        assert any(alpha_eq(t, parse(src)) for t in ts)


def test_duplicate_free_modulo_alpha():
    ts = list(enumerate_terms(CorpusSpec(max_constructors=5)))
    assert len({alpha_key(t) for t in ts}) == len(ts)
    small = [t for t in ts if size(t) <= 4]
    assert not any(alpha_eq(a, b) for a, b in combinations(small, 2))


def test_corpus_terms_well_formed():
    spec = CorpusSpec(max_constructors=5)
    for t in enumerate_terms(spec):
        assert is_term(t) and is_well_named(t)
        assert free_vars(t) <= set(spec.free_names)
        assert 1 <= size(t) <= 5


def test_min_size():
    ts = list(enumerate_terms(CorpusSpec(max_constructors=4, min_constructors=4)))
    assert ts and all(size(t) == 4 for t in ts)


def test_random_term():
    rng = random.Random(7)
    for n in range(1, 15):
        t = random_term(rng, n)
        assert size(t) == n and is_well_named(t)


@pytest.mark.parametrize("n", range(5))
def test_numerals(n):
    assert numeral_value(numeral(n)) == n


def test_arithmetic_corpus():
    items = arithmetic_corpus()
    assert len(items) == 56
    assert all(not free_vars(t) and is_well_named(t) for _, t in items)
