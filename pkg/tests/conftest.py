"""Shared fixtures.

The bundled-player fits and evidence runs are expensive (a few seconds
each), so they are computed once per session and shared between the
acceptance criteria that need them.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from crease import Career, HazardParams, Innings, ModelKind, sample_scores
from crease.career import load_career
from crease.mcmc import ChainConfig, run_chain

DATA_DIR = Path(__file__).resolve().parent.parent / "src" / "crease" / "data"
PLAYER_NAMES = ("cairns", "hussain", "kirsten", "langer", "lara", "pollock", "warne", "waugh")


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def bundled_careers() -> dict[str, Career]:
    return {name: load_career(DATA_DIR / f"{name}.txt") for name in PLAYER_NAMES}


@pytest.fixture(scope="session")
def bundled_fits(bundled_careers):
    """Default-settings posterior fits of all bundled players, seed 0."""
    return {
        name: run_chain(career, ModelKind.VARYING, ChainConfig(seed=0))
        for name, career in bundled_careers.items()
    }


@pytest.fixture()
def tiny_career() -> Career:
    return Career("tiny", (Innings(42, False), Innings(7, True), Innings(0, False)))


@pytest.fixture(scope="session")
def synthetic_career_500() -> Career:
    """500 innings from known parameters, lightly censored; used for recovery."""
    rng = np.random.default_rng(7)
    scores = sample_scores(HazardParams(15, 60, 5, 3), 500, rng)
    flags = rng.random(500) < 0.1
    return Career("synthetic", tuple(Innings(int(s), bool(f)) for s, f in zip(scores, flags)))
