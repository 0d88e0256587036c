import pytest

_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def acceptance_log(pytestconfig):
    """Writes acceptance verdict lines past output capture and keeps them for the summary."""
    lines = pytestconfig.stash.setdefault(_ACCEPTANCE, [])
    reporter = pytestconfig.pluginmanager.get_plugin("terminalreporter")

    def write(line):
        lines.append(line)
        if reporter is not None:
            reporter.ensure_newline()
            reporter.write_line(line)

    return write


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
