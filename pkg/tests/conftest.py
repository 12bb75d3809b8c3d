import os
import sys

import pytest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if ROOT not in sys.path:
    sys.path.insert(0, ROOT)

DATA_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data")


@pytest.fixture
def data_path():
    def resolve(name: str) -> str:
        return os.path.join(DATA_DIR, name)

    return resolve


@pytest.fixture
def golden(data_path):
    def read(name: str) -> str:
        with open(data_path(name), encoding="utf-8") as fh:
            return fh.read()

    return read
