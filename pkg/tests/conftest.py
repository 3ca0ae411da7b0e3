import sys
from pathlib import Path

import pytest

TESTS_DIR = Path(__file__).parent
REPO_ROOT = TESTS_DIR.parent
DEMO_DIR = REPO_ROOT / "data" / "demo"

sys.path.insert(0, str(TESTS_DIR))


@pytest.fixture
def demo_dir() -> Path:
    return DEMO_DIR


@pytest.fixture
def server_config(tmp_path):
    from geolink.server.config import ServerConfig

    return ServerConfig(
        data_dir=tmp_path / "data",
        persons_path=DEMO_DIR / "gazetteer-persons.txt",
        companies_path=DEMO_DIR / "gazetteer-companies.txt",
    )
