from pathlib import Path

import pytest

from semaps.kb import load_kb

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURES = REPO_ROOT / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def fixture_kb():
    return load_kb(FIXTURES / "kb" / "concepts.tsv", FIXTURES / "kb" / "relations.tsv")
