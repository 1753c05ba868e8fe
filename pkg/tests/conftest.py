"""
Fixtures compartidas por los tests de xkit
"""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from core.config_manager import ConfigManager
from core.data_parser import DataParser
from modules.catalogue import Catalogue

BOUND = 4096


@pytest.fixture
def bound():
    return BOUND


@pytest.fixture(scope="session")
def catalogue():
    return Catalogue(bound=BOUND)


@pytest.fixture
def parser():
    return DataParser(BOUND)


@pytest.fixture
def config(tmp_path):
    return ConfigManager(str(tmp_path))


@pytest.fixture(autouse=True)
def _no_env_bound(monkeypatch):
    monkeypatch.delenv("XKIT_BOUND", raising=False)
