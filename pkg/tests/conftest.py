import pytest

from blockroute import build_quotient, generate_regular, place_blocks

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def small_instance():
    """A 40-regular host on 600 vertices with 8 blocks of 9."""
    g = generate_regular(600, 40, seed=11)
    cfg = place_blocks(g, 8, 3, 1, seed=11)
    q = build_quotient(g, cfg, seed=11)
    return g, cfg, q
