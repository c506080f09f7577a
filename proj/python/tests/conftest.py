import importlib.util

import pytest


def pytest_sessionstart(session):
    if importlib.util.find_spec("graphemb") is None:
        pytest.exit("graphemb extension is not installed; run `pip install --no-build-isolation .`", returncode=77)
