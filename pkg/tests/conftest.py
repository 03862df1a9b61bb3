import pytest

from quasiuniform import LevelKey, ProblemSetup, build_state


@pytest.fixture(scope="session")
def osc_setup():
    return ProblemSetup()  # hbar=1, 2m=1, alpha=1, k=2


@pytest.fixture(scope="session")
def lin_setup():
    return ProblemSetup(k=1.0)


@pytest.fixture(scope="session")
def state_cache(osc_setup, lin_setup):
    """Lazily built, session-shared ApproxStates keyed by (k, n, l)."""
    cache = {}

    def get(k, n, l):
        key = (k, n, l)
        if key not in cache:
            setup = osc_setup if k == 2.0 else lin_setup
            cache[key] = build_state(setup, LevelKey(n, l))
        return cache[key]

    return get


@pytest.fixture(scope="session")
def osc01(state_cache):
    return state_cache(2.0, 0, 1)
