import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from purb.rng import seeded_rng
from purb.suites import PUBLIC_KEY, default_registry, keygen


@pytest.fixture(scope="session")
def registry():
    return default_registry()


@pytest.fixture(scope="session")
def keypairs(registry):
    """A small pool of deterministic key pairs per public-key suite."""
    pool = {}
    for suite in registry:
        if suite.kind != PUBLIC_KEY:
            continue
        rng = seeded_rng(b"pool-" + suite.alias.encode())
        pool[suite.alias] = [keygen(suite, rng) for _ in range(8)]
    return pool
