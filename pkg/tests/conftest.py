import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from kanoa.parser import parse_problem
from kanoa.validation import validate_problem

FIXTURES = Path(__file__).parent.parent / "fixtures"


@pytest.fixture(scope="session")
def hospital_path():
    return FIXTURES / "hospital.kanoa"


@pytest.fixture(scope="session")
def hospital_text(hospital_path):
    return hospital_path.read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def hospital(hospital_text):
    return validate_problem(parse_problem(hospital_text))


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES
