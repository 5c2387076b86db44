"""Shared fixtures: censuses at n = 5..7, checkpoint-cached across runs."""

import os

import pytest

from gooddraw.census import enumerate_classes

CACHE = os.path.join(os.path.dirname(__file__), "_cache")


def _cached_census(n):
    os.makedirs(CACHE, exist_ok=True)
    return enumerate_classes(n, checkpoint_path=os.path.join(CACHE, f"census{n}.ckpt"))


@pytest.fixture(scope="session")
def census5():
    return enumerate_classes(5)


@pytest.fixture(scope="session")
def census6():
    return _cached_census(6)


@pytest.fixture(scope="session")
def census7():
    # ~90s cold, instant from the checkpoint afterwards
    return _cached_census(7)
