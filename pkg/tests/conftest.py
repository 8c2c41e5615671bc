import pytest

from whittaker import CharacterTuple, LanglandsParams, WhittakerConfig, restrict


@pytest.fixture(scope="session")
def cfg2():
    return WhittakerConfig(2, LanglandsParams([0.3, -0.3]), CharacterTuple([1]))


@pytest.fixture(scope="session")
def cfg3():
    return WhittakerConfig(3, LanglandsParams([1, 0, -1]), CharacterTuple([1, 1]))


@pytest.fixture(scope="session")
def r32(cfg3):
    return restrict(cfg3, 2)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
