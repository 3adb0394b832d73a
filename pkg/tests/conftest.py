import random

from hypothesis import HealthCheck, settings, strategies as st

from lscnets.corpus import CorpusSpec, enumerate_terms, random_term

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@st.composite
def terms(draw, min_size=1, max_size=10):
    """Random well-named terms over the free names x, y, z."""
    seed = draw(st.integers(0, 2**32 - 1))
    n = draw(st.integers(min_size, max_size))
    return random_term(random.Random(seed), n)


def small_corpus(max_size=5):
    return list(enumerate_terms(CorpusSpec(max_constructors=max_size)))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
