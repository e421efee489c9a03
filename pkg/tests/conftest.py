"""
conftest.py: shared fixtures and test isolation for the relaydelay suite.

1. PATH: make the repo root importable without an install.
2. FIXTURES: committed network descriptions under tests/fixtures/.
3. ENV CLEANUP: snapshot and restore RELAYDELAY_* variables around each test.
"""
import os
import sys

import numpy as np
import pytest

ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))
if ROOT not in sys.path:
    sys.path.insert(0, ROOT)

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")

from relaydelay.channel import Network  # noqa: E402
from relaydelay.exponent import ReliabilityBudget  # noqa: E402


def fixture_path(name: str) -> str:
    return os.path.join(FIXTURES, name)


@pytest.fixture
def budget():
    """B = 1000 bits, delta_e = 1e-6."""
    return ReliabilityBudget(bits=1000, delta_e=1e-6)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def symmetric_4relay():
    return Network.symmetric(relays=4, gain=1.0, noise_var=1.0, power=100.0)


# ─── Environment Variable Safety ────────────────────────────────────────────

_ENV_PREFIX = "RELAYDELAY_"


@pytest.fixture(autouse=True)
def _clean_env_vars():
    """Snapshot and restore RELAYDELAY_* environment variables after each test."""
    saved = {k: v for k, v in os.environ.items() if k.startswith(_ENV_PREFIX)}

    yield

    for key in [k for k in os.environ if k.startswith(_ENV_PREFIX)]:
        if key not in saved:
            os.environ.pop(key, None)
    os.environ.update(saved)
