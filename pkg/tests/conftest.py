import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import support  # noqa: E402

SAMPLES = Path(__file__).parent.parent / "samples"


@pytest.fixture
def dyad():
    return support.dyad()


@pytest.fixture
def triad():
    return support.triad()


@pytest.fixture
def stacked_dyads():
    return support.stacked_dyads()


@pytest.fixture
def basic_5():
    return support.basic_5()


@pytest.fixture
def samples_dir():
    return SAMPLES
