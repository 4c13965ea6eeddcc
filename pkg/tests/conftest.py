import os
from functools import lru_cache

import pytest

from polyeval import exp_taylor_coeffs, generate, geometric_coeffs


def pytest_collection_modifyitems(config, items):
    if os.environ.get("POLYEVAL_SLOW"):
        return
    skip = pytest.mark.skip(reason="slow; set POLYEVAL_SLOW=1")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@lru_cache(maxsize=None)
def cached_exp_report(m, s=None, type_pol=1, precision="double"):
    return generate(exp_taylor_coeffs(m), precision, type_pol, s=s)


@lru_cache(maxsize=None)
def cached_geometric_report(N):
    return generate(geometric_coeffs(N))


@pytest.fixture(scope="session")
def exp28():
    return cached_exp_report(28)


@pytest.fixture(scope="session")
def psi17():
    return cached_geometric_report(17)
