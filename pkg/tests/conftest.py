"""Shared test helpers: cached graph sweeps and the acceptance report."""

from functools import lru_cache

from nonham.graphs import enumerate_graphs, is_hamiltonian

# one line per acceptance criterion, echoed at the end of the run
_acceptance_lines: list[str] = []


def record_acceptance(line: str):
    _acceptance_lines.append(line)
    print(line)


@lru_cache(maxsize=None)
def nonham_graphs(n: int) -> tuple:
    """All non-Hamiltonian digraphs on n vertices, in graph_id order."""
    return tuple(g for g in enumerate_graphs(n) if is_hamiltonian(g) is None)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in _acceptance_lines:
        terminalreporter.write_line(line)
