import math

import numpy as np
import pytest
from hypothesis import strategies as st

R2 = 1 / math.sqrt(2)
ATOL = 1e-12


def loop_partial_trace(m, dims, traced):
    """Reference partial trace by explicit index summation."""
    keep = [i for i in range(len(dims)) if i not in traced]
    kd = [dims[i] for i in keep]
    td = [dims[i] for i in traced]
    out = np.zeros((int(np.prod(kd)), int(np.prod(kd))), dtype=complex)

    def flat(idx):
        n = 0
        for i, d in zip(idx, dims):
            n = n * d + i
        return n

    for a in np.ndindex(*kd):
        for b in np.ndindex(*kd):
            s = 0
            for t in np.ndindex(*td):
                ia = [0] * len(dims)
                ib = [0] * len(dims)
                for pos, v in zip(keep, a):
                    ia[pos] = v
                for pos, v in zip(keep, b):
                    ib[pos] = v
                for pos, v in zip(traced, t):
                    ia[pos] = v
                    ib[pos] = v
                s += m[flat(ia), flat(ib)]
            out[np.ravel_multi_index(a, kd), np.ravel_multi_index(b, kd)] = s
    return out


def random_density(rng, dim, rank=None):
    rank = rank or dim
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho)


@st.composite
def qubit_amplitudes(draw):
    """(alpha, beta) on the unit sphere of C^2."""
    theta = draw(st.floats(0, math.pi))
    phi = draw(st.floats(0, 2 * math.pi))
    return complex(math.cos(theta / 2)), math.sin(theta / 2) * complex(math.cos(phi), math.sin(phi))


@pytest.fixture
def rng():
    return np.random.default_rng(20261014)


ACCEPTANCE_LINES = []


@pytest.fixture
def criterion(request):
    """Record one acceptance line; the test body must call it with (number, detail)."""
    state = {}

    def record(number, detail):
        state["line"] = (number, detail)

    yield record
    if "line" in state:
        number, detail = state["line"]
        rep = getattr(request.node, "rep_call", None)
        verdict = "PASS" if rep is not None and rep.passed else "FAIL"
        ACCEPTANCE_LINES.append(f"criterion {number:>2}: {verdict}  {detail}")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
