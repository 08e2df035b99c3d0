import pytest
from hypothesis import settings

settings.register_profile("suite", deadline=None)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def corpus():
    """1000 seeded admissible complexes with at most 40 points."""
    from morseminmax.gen import random_admissible_complex

    return [random_admissible_complex(seed, max_points=40) for seed in range(1000)]
