import cmath
import math
import random
from pathlib import Path

import pytest

from scripts.config import Simulation
from scripts.core.handlers import spin_handler

SCHEDULES = Path(__file__).resolve().parents[1] / "schedules"


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def random_amplitudes(rng):
    """Draws a random normalized (alpha, beta) pair."""

    def draw():
        theta = rng.uniform(0.0, math.pi)
        phase_a, phase_b = rng.uniform(0.0, 2 * math.pi), rng.uniform(0.0, 2 * math.pi)
        return math.cos(theta / 2) * cmath.exp(1j * phase_a), math.sin(theta / 2) * cmath.exp(1j * phase_b)

    return draw


@pytest.fixture
def plus_state():
    def build(N: int):
        return spin_handler.coherent_qubit_state(1 / math.sqrt(2), 1 / math.sqrt(2), N)

    return build


@pytest.fixture
def dim_cap(monkeypatch):
    """Lowers the configured dimension cap for one test."""

    def apply(cap: int):
        monkeypatch.setattr(Simulation, "DIM_CAP", cap)

    return apply


@pytest.fixture
def schedules_dir():
    return SCHEDULES
