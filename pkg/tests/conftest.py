import os
import random

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from jordan2local.ring import GAUSSIAN, RATIONAL, polynomial, prime_field
from jordan2local.sampling import random_hermitian, random_matrix, random_scalar, random_skew

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("thorough", max_examples=400, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

FIELDS = [RATIONAL, GAUSSIAN, prime_field(101)]
ALL_RINGS = FIELDS + [prime_field(7), polynomial(RATIONAL, -1), polynomial(GAUSSIAN, 1)]

fields = st.sampled_from(FIELDS)
rings = st.sampled_from(ALL_RINGS)
sizes = st.integers(min_value=2, max_value=5)
rngs = st.integers(min_value=0, max_value=2**32).map(random.Random)


@st.composite
def scalars(draw, ring=None):
    ring = ring or draw(rings)
    return ring, random_scalar(draw(rngs), ring)


@st.composite
def matrices(draw, kind="any", ring_st=rings, n_st=sizes):
    ring, n, rng = draw(ring_st), draw(n_st), draw(rngs)
    gen = {"any": random_matrix, "herm": random_hermitian, "skew": random_skew}[kind]
    return gen(rng, ring, n)


@pytest.fixture(params=FIELDS, ids=str)
def field(request):
    return request.param


_ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_report(capsys):
    """Print one criterion line live and again in the terminal summary."""
    def emit(line):
        _ACCEPTANCE_LINES.append(line)
        with capsys.disabled():
            print(line)
    return emit


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
