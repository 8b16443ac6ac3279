import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from twopatch.model import ModelParams

settings.register_profile("ci", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ci")


def random_params(rng: np.random.Generator, s=None, **fixed) -> ModelParams:
    """Broad draw over the valid parameter box; predators can grow in each patch."""
    kw = {}
    for i in (1, 2):
        a = rng.uniform(0.2, 3.0)
        kw.update({f"r{i}": rng.uniform(0.2, 3.0), f"K{i}": rng.uniform(1.0, 20.0),
                   f"a{i}": a, f"d{i}": rng.uniform(0.02, 0.98) * a,
                   f"rho{i}": rng.uniform(0.05, 15.0)})
    kw["s"] = rng.uniform(0.01, 0.99) if s is None else s
    kw.update(fixed)
    return ModelParams(**kw)


def fd_jacobian(f, z, h_rel=1e-6):
    z = np.asarray(z, dtype=float)
    n = z.size
    J = np.zeros((n, n))
    for k in range(n):
        h = h_rel * (1.0 + abs(z[k]))
        e = np.zeros(n)
        e[k] = h
        J[:, k] = (f(z + e) - f(z - e)) / (2.0 * h)
    return J


positive = st.floats(0.05, 5.0)


@st.composite
def params_strategy(draw, s=None):
    kw = {}
    for i in (1, 2):
        a = draw(st.floats(0.2, 3.0))
        kw.update({f"r{i}": draw(positive), f"K{i}": draw(st.floats(1.0, 20.0)), f"a{i}": a,
                   f"d{i}": a * draw(st.floats(0.02, 0.98)), f"rho{i}": draw(st.floats(0.0, 15.0))})
    kw["s"] = draw(st.floats(0.0, 1.0)) if s is None else s
    return ModelParams(**kw)


@pytest.fixture
def rng():
    return np.random.default_rng(20261014)


# -- acceptance report ------------------------------------------------------------------

_ACCEPTANCE_LINES: list[tuple[int, str]] = []


@pytest.fixture
def gate():
    """``gate(n, ok, detail, t0)`` records and prints a criterion line, then asserts ``ok``."""
    import time

    def record(n: int, ok: bool, detail: str, t0: float) -> None:
        line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}  [{time.perf_counter() - t0:.2f} s]"
        _ACCEPTANCE_LINES.append((n, line))
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_ACCEPTANCE_LINES):
        terminalreporter.write_line(line)
