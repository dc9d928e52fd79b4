from pathlib import Path

import pytest

from confdebug.lang import parse_program

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def load_fixture_program(name: str):
    path = FIXTURES / name / f"{name}.mcf"
    return parse_program(path.read_text(), file=path.name)


@pytest.fixture(scope="session")
def berkeley():
    return load_fixture_program("berkeley_mini")


@pytest.fixture(scope="session")
def density():
    return load_fixture_program("density_mini")


def berkeley_config(dup=False, txn=False, evict=False, temp=False, repl=False):
    return {"Duplicates": dup, "Transactions": txn, "Evict": evict,
            "Temporary": temp, "Replicated": repl}
