import math

import pytest

from levmem.config import load_config
from levmem.gaussian import ProtocolSpec


@pytest.fixture(scope="session")
def cfg():
    return load_config()


@pytest.fixture(scope="session")
def scn(cfg):
    return cfg.scenario()


@pytest.fixture(scope="session")
def params(scn):
    return scn.params


@pytest.fixture(scope="session")
def rates(scn):
    return scn.rates


@pytest.fixture
def fig3_proto(scn):
    return scn.proto


@pytest.fixture
def lossless_swap():
    G = 1e5
    t = 0.5 * math.pi / G
    return ProtocolSpec(G_w=G, G_r=G, t_1s=t, t_2s=t, t_f=0.0, B=0.0, B_r=0.0, Gamma=0.0)


_VERDICTS = []


@pytest.fixture
def verdict():
    """Record one PASS/FAIL line per acceptance criterion; printed at the end of the run."""

    def record(number, title, checks, runtime=None):
        ok = all(c[1] for c in checks)
        detail = "; ".join(f"{name} {'ok' if good else 'FAILED'} ({info})" for name, good, info in checks)
        timing = "" if runtime is None else f" [{runtime:.2f} s]"
        _VERDICTS.append(f"{'PASS' if ok else 'FAIL'}  criterion {number}: {title}{timing}: {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_VERDICTS, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
