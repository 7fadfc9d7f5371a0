import numpy as np
import pytest

from strictpoly import adjoints


@pytest.fixture(scope="session")
def witness_dir(tmp_path_factory):
    return str(tmp_path_factory.mktemp("cache"))


@pytest.fixture(scope="session")
def ctx3(witness_dir):
    """p = n = d = 3; every verified isomorphism stores and re-validates its witness."""
    return adjoints.AdjointContext(3, 3, 3, cache_dir=witness_dir)


@pytest.fixture(scope="session")
def identity_reports(ctx3):
    return adjoints.verify_identity_suite(ctx3)


@pytest.fixture(scope="session")
def theorem_reports(ctx3):
    return adjoints.verify_adjoint_theorems(ctx3)


@pytest.fixture(scope="session")
def monoidal_reports(ctx3):
    return adjoints.verify_monoidality(ctx3)


@pytest.fixture(scope="session")
def simples_reports(ctx3):
    return adjoints.verify_simples(ctx3)


@pytest.fixture(scope="session")
def mullineux_reports():
    return adjoints.verify_mullineux(0)


@pytest.fixture
def rng():
    return np.random.default_rng(0)


ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
