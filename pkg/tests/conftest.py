import numpy as np
import pytest
from hypothesis import strategies as st

from masschain.devices import DEVICE_1, DEVICE_2, DEVICE_3, TABLE_MASS


def dist_to_cut(h):
    """Euclidean distance from h to the segment [-4, 0]."""
    h = complex(h)
    x = min(max(h.real, -4.0), 0.0)
    return abs(h - x)


def random_h_off_cut(rng, n, margin=0.05, radius=10.0):
    out = []
    while len(out) < n:
        h = complex(rng.uniform(-radius, radius), rng.uniform(-radius, radius))
        if dist_to_cut(h) > margin:
            out.append(h)
    return np.array(out)


def zeta_oracle(h):
    """Smaller-modulus root of z^2 - (h+2) z + 1 via numpy.roots."""
    r = np.roots([1.0, -(complex(h) + 2.0), 1.0])
    return r[np.argmin(np.abs(r))]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=[DEVICE_1, DEVICE_2, DEVICE_3], ids=lambda d: d.name)
def table_device(request):
    return request.param


@pytest.fixture
def mass():
    return TABLE_MASS


# complex h bounded away from the cut [-4, 0]
finite = dict(allow_nan=False, allow_infinity=False)
h_off_cut = st.builds(
    complex, st.floats(-8, 8, **finite), st.floats(-8, 8, **finite)
).filter(lambda h: dist_to_cut(h) > 0.05)
h_any = st.builds(complex, st.floats(-8, 8, **finite), st.floats(-8, 8, **finite))


# --- acceptance report ------------------------------------------------------------

ACCEPTANCE = {}


def record(criterion, ok, detail):
    """Store and print one PASS/FAIL line for an acceptance criterion."""
    line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE[criterion] = line
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[key])
