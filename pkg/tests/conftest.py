import pytest

ACCEPTANCE = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[ACCEPTANCE] = {}


@pytest.fixture
def acceptance(request):
    """Registry of acceptance outcomes: number -> (passed, title, detail)."""
    return request.config.stash[ACCEPTANCE]


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash.get(ACCEPTANCE, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        passed, title, detail = results[n]
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] criterion {n:2d} {title}: {detail}")
