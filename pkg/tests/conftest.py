import random

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from abdual.corpus import bundled, random_framework, random_program
from abdual.model import Interpretation, ObjectiveLiteral

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

NAMES = ("a", "b", "c", "d")


@st.composite
def programs(draw, **kw):
    return random_program(random.Random(draw(st.integers(0, 2**32))), **kw)


@st.composite
def frameworks(draw, **kw):
    return random_framework(random.Random(draw(st.integers(0, 2**32))), **kw)


objectives = st.builds(ObjectiveLiteral, st.sampled_from(NAMES), st.booleans())
interpretations = st.builds(
    lambda t, f: Interpretation(frozenset(t), frozenset(f)),
    st.sets(objectives, max_size=4),
    st.sets(objectives, max_size=4),
)


@pytest.fixture
def fw_of():
    return lambda name: bundled(name).framework()


def pytest_terminal_summary(terminalreporter):
    from .test_acceptance import REPORT

    if REPORT:
        terminalreporter.section("acceptance criteria")
        for line in REPORT:
            terminalreporter.write_line(line)
