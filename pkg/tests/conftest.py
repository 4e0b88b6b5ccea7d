import pytest

from corpus import corpus
from hc2l.index import build_index


@pytest.fixture(scope="session")
def corpus_builds():
    """name -> (graph, index, build) at the default settings."""
    out = {}
    for name, g in corpus():
        idx, build = build_index(g, keep_subgraphs=True)
        out[name] = (g, idx, build)
    return out


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[k])
