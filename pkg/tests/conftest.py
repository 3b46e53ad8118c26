import numpy as np
import pytest

from crawlnet import Network, NetworkConfig, init_network


@pytest.fixture
def tiny_net():
    """hidden=1, w_ih=[[1]], b_h=[0], w_ho=[[1],[1]], b_o=[0,0]."""
    return Network([[1.0]], [[1.0], [1.0]], [0.0], [0.0, 0.0])


@pytest.fixture
def random_net():
    return init_network(NetworkConfig(hidden_size=5, seed=42))


def random_triples(n, sizes=(1, 2, 20, 25), seed=1234):
    rng = np.random.default_rng(seed)
    for i in range(n):
        h = sizes[i % len(sizes)]
        net = init_network(NetworkConfig(hidden_size=h, seed=int(rng.integers(2**31))))
        yield net, float(rng.uniform(0, 1)), rng.uniform(0, 1, size=2)


_ACCEPTANCE_LINES = []


@pytest.fixture
def report(request):
    """Record one PASS/FAIL line per acceptance criterion for the summary."""

    def _report(label, ok, detail):
        _ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
        print(_ACCEPTANCE_LINES[-1])
        return ok

    return _report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
