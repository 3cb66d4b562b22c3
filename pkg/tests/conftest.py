import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from shiftlab.operators import FinSuppVector

settings.register_profile(
    "default", deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False, allow_subnormal=False)


@st.composite
def finsupp(draw, lo_range=(-12, 12), max_len=8):
    lo = draw(st.integers(*lo_range))
    n = draw(st.integers(1, max_len))
    re = draw(st.lists(finite, min_size=n, max_size=n))
    im = draw(st.lists(finite, min_size=n, max_size=n))
    return FinSuppVector(lo, np.array(re) + 1j * np.array(im))


@st.composite
def off_circle(draw, min_gap=0.1, max_gap=0.8):
    gap = draw(st.floats(min_gap, max_gap))
    inside = draw(st.booleans())
    theta = draw(st.floats(0, 2 * np.pi))
    r = 1 - gap if inside else 1 + gap
    return r * np.exp(1j * theta)


@pytest.fixture
def rng():
    return np.random.default_rng(20240229)


# -- acceptance reporting ----------------------------------------------------------------

_CRITERIA = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_CRITERIA] = {}


class _Criterion:
    def __init__(self, store, number, title):
        self.store, self.number, self.title = store, number, title
        self.notes = []

    def note(self, text):
        self.notes.append(str(text))

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        status = "PASS" if exc_type is None else "FAIL"
        detail = "; ".join(self.notes)
        if exc_type is not None and exc is not None:
            detail = f"{detail}; {str(exc).splitlines()[0]}" if detail else str(exc).splitlines()[0]
        line = f"criterion {self.number:>2}: {status}  {self.title}" + (f"  [{detail}]" if detail else "")
        self.store[self.number] = line
        print(line)
        return False


@pytest.fixture
def criterion(request):
    store = request.config.stash[_CRITERIA]
    return lambda number, title: _Criterion(store, number, title)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_CRITERIA, {})
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(lines):
        terminalreporter.write_line(lines[n])
