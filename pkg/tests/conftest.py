import os
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from wvgpower.game import VectorWeightedGame, WeightedGame

settings.register_profile("default", max_examples=100, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=300, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

DATA = Path(__file__).parent / "data"


@st.composite
def weighted_games(draw, max_n=10, max_w=50, zeros=True):
    n = draw(st.integers(1, max_n))
    lo = 0 if zeros else 1
    weights = draw(st.lists(st.integers(lo, max_w), min_size=n, max_size=n))
    if sum(weights) == 0:
        weights[0] = 1
    q = draw(st.integers(1, sum(weights)))
    return WeightedGame(q, tuple(weights))


@st.composite
def vector_games(draw, max_n=7, max_k=3, max_w=9):
    n = draw(st.integers(1, max_n))
    k = draw(st.integers(1, max_k))
    games = []
    for _ in range(k):
        weights = draw(st.lists(st.integers(0, max_w), min_size=n, max_size=n))
        if sum(weights) == 0:
            weights[0] = 1
        games.append(WeightedGame(draw(st.integers(1, sum(weights))), tuple(weights)))
    return VectorWeightedGame(tuple(games))


@pytest.fixture
def tiny():
    return WeightedGame(3, (2, 1, 1))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS):
            terminalreporter.write_line(line)
