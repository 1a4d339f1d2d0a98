import pytest

from simax import TrainingConfig, build_scenario, train_model


@pytest.fixture(scope="session")
def model_cache():
    """Lazily trained models shared across the whole session.

    Training is deterministic, so sharing is safe; frequencies are kept so
    tests can audit trees against their actual training counts.
    """
    cache = {}

    def get(kind, n, seed=101, epsilon=0.5):
        key = (kind, n, seed, epsilon)
        if key not in cache:
            spec = build_scenario(kind, n)
            config = TrainingConfig(epsilon=epsilon)
            cache[key] = train_model(spec, config, seed=seed, keep_frequencies=True)
        return cache[key]

    return get
