"""Session fixtures shared across test modules.

The acceptance gate exercises several properties over the same large
deterministic family of configurations; building it once per session keeps
those tests inside their wall-clock budgets.
"""

import random
from fractions import Fraction

import pytest

from winterbottom_lab import Configuration, ModelParams

from test_energy import grow_blob, scatter, stacked_rows

PARAM_POOL = (
    ModelParams(c_F=1, c_S=2, q=1),
    ModelParams(c_F=1, c_S=4, q=1),
    ModelParams(c_F=2, c_S=3, q=1),
    ModelParams(c_F=Fraction(3, 2), c_S=2, q=1),
    ModelParams(c_F=1, c_S=6, p=1, q=2),
    ModelParams(c_F=1, c_S=4, p=1, q=2),
    ModelParams(c_F=1, c_S=7, p=1, q=3),
    ModelParams(c_F=2, c_S=5, p=1, q=3),
)


@pytest.fixture(scope="session")
def random_family():
    """Ten thousand configurations, n <= 60, cycling mixed-regime parameters."""
    rng = random.Random(20260815)
    makers = (grow_blob, scatter, stacked_rows)
    family = []
    for i in range(10_000):
        params = PARAM_POOL[i % len(PARAM_POOL)]
        if i % 10 == 0:
            n = rng.randint(1, 60)
        else:
            n = min(rng.randint(1, 60), rng.randint(1, 60))
        sites = makers[rng.randrange(3)](rng, n)
        family.append((Configuration(sites), params))
    return family
