import numpy as np
import pytest

from iofootprint import GeneratorConfig, build_economy, generate_economy

# Corpus used by the conservation, oracle-equivalence, and monotonicity
# properties: 100 seeded economies with sector counts spanning 1..200.
CORPUS_SEEDS = list(range(1, 101))


def corpus_sizes():
    rng = np.random.default_rng(20240801)
    sizes = rng.integers(1, 201, size=len(CORPUS_SEEDS))
    sizes[0] = 1    # pin both extremes into the corpus
    sizes[1] = 200
    return [int(n) for n in sizes]


@pytest.fixture(scope="session")
def corpus():
    return [
        generate_economy(GeneratorConfig(n=n, seed=seed))
        for n, seed in zip(corpus_sizes(), CORPUS_SEEDS)
    ]


@pytest.fixture
def worked_economy():
    """The hand-checked 2-sector table used across modules."""
    return build_economy(
        ["s1", "s2"],
        [[100.0, 50.0], [30.0, 20.0]],
        [50.0, 50.0],
        money_unit="MU",
    )
