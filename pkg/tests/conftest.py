import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_away_from_poles(rng, size, radius=20.0, gap=0.05):
    """Uniform points in the disc |z| <= radius, at least ``gap`` from 0, -1, -2, ..."""
    out = []
    while len(out) < size:
        r = radius * np.sqrt(rng.random())
        th = 2 * np.pi * rng.random()
        z = r * np.exp(1j * th)
        if z.real < 0.5:
            k = np.round(z.real)
            if abs(z - k) < gap or abs((1 - z) - np.round((1 - z).real)) < gap:
                continue
        if abs(np.sin(np.pi * z)) < gap:
            continue
        out.append(z)
    return np.array(out)


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)
