import pytest

from genairy import PrecisionContext, recurrence_pipeline, weight_params


@pytest.fixture(scope="session")
def ctx30():
    return PrecisionContext(target_digits=30)


@pytest.fixture(scope="session")
def ctx60():
    return PrecisionContext(target_digits=60)


@pytest.fixture(scope="session")
def pipeline_cache():
    """Share exact pipelines across test modules; keyed (lam, t, nmax, digits)."""
    cache = {}

    def get(lam, t, nmax, digits):
        key = (str(lam), str(t), nmax, digits)
        if key not in cache:
            cache[key] = recurrence_pipeline(
                weight_params(lam, t), nmax, PrecisionContext(target_digits=digits)
            )
        return cache[key]

    return get
