import pytest

from levdun import bundled_dataset, load_csv


def _dataset_or_skip(name):
    try:
        return bundled_dataset(name)
    except FileNotFoundError as exc:
        pytest.skip(f"{name}.csv not available: {exc}")


@pytest.fixture
def survival_csv():
    return _dataset_or_skip("survival")


@pytest.fixture
def survival(survival_csv):
    return load_csv(survival_csv, "survival", "site")


@pytest.fixture
def litter_csv():
    return _dataset_or_skip("litter")


@pytest.fixture
def litter(litter_csv):
    return load_csv(litter_csv, "weight", "dose", control_label="0")


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
