import json
from pathlib import Path

import pytest

from combnet.network import read_network

ROOT = Path(__file__).resolve().parent.parent
NETWORKS = ROOT / "networks"
GOLDEN = Path(__file__).resolve().parent / "golden_expectations.json"


def network_path(name: str) -> str:
    return str(NETWORKS / f"{name}.net")


@pytest.fixture(scope="session")
def golden():
    return json.loads(GOLDEN.read_text())


@pytest.fixture(scope="session")
def fig2():
    return read_network(network_path("fig2"))


@pytest.fixture(scope="session")
def fig3():
    return read_network(network_path("fig3"))


@pytest.fixture(scope="session")
def fig5():
    return read_network(network_path("fig5"))


@pytest.fixture(scope="session")
def fig7():
    return read_network(network_path("fig7"))


@pytest.fixture(scope="session")
def fig8():
    return read_network(network_path("fig8"))
