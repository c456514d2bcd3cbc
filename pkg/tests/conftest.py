import itertools
import math

import numpy as np
import pytest

from rispace.rearrange import StepFunction
from rispace.spaces import is_ri_norm_lz


def random_step(rng, k_max=32, value_scale=10.0, measure_scale=5.0):
    k = int(rng.integers(1, k_max + 1))
    meas = rng.uniform(0.01, measure_scale, size=k)
    vals = rng.uniform(0.0, value_scale, size=k)
    return StepFunction(zip(meas, vals))


# tail exponents (p0, alpha0, pinf, alphainf) of Young-function test profiles
POWER_LOG_PROFILES = [
    (1.5, 0, 1.5, 0), (2, 0, 2, 0), (3, 0, 3, 0), (2, 1, 2, 1),
    (2, -1, 2, -1), (1.5, 0, 3, 0), (3, 0, 1.5, 0), (2, 1, 3, -1),
    (6, 0, 6, 0), (4, -1, 2, 1), (1.2, 0.5, 5, 2), (2.5, 0, 2.5, -1),
]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def dictionary(seed=11, size=50):
    """Indicators over eight decades plus random steps with log-uniform data."""
    rng = np.random.default_rng(seed)
    out = [StepFunction(((r, 1.0),)) for r in np.logspace(-4, 4, 10)]
    while len(out) < size:
        k = int(rng.integers(1, 9))
        out.append(StepFunction(zip(10 ** rng.uniform(-4, 4, k), 10 ** rng.uniform(-3, 3, k))))
    return out


def reduction_sweep():
    """20 ``(A, B, expected)`` pairs for m=1, n=3.

    ``expected`` compares the tails of ``B`` with those of ``A_m``
    (``t^(3p/(3-p)) ell^(3a/(3-p))`` at each end, capped when ``pinf > 3``).
    """
    from rispace import young as Y

    P, PL = Y.power, Y.power_log
    true = [(P(2), P(6)), (P(2), PL(6, 0, 4, 0)), (P(2), PL(8, 0, 6, 0)), (P(1.5), P(3)),
            (P(1.5), PL(4, 0, 2, 0)), (PL(2, 0, 1.5, 0), PL(6, 0, 3, 0)),
            (PL(2, 0, 4, 0), PL(6, 0, 10, 0)), (PL(2, 0, 4, 0), P(6)),
            (PL(2, 1, 2, 1), PL(6, 0, 6, 3)), (P(1), P(1.5))]
    false = [(P(2), P(7)), (P(2), P(5)), (P(2), PL(6, 0, 6, 1)), (P(4), P(6)), (P(1), P(1)),
             (P(1.5), P(3.5)), (PL(2, 0, 4, 0), P(5)), (P(1.5), P(2.9)),
             (PL(2, 1, 2, 1), PL(6, 4, 6, 3)), (P(1.5), P(2.5))]
    return [(a, b, True) for a, b in true] + [(a, b, False) for a, b in false]


def sweep_points():
    """Deterministic (p, q, alpha) sweep around the critical exponents for n=3, m=1."""
    ps = [1.0, 1.2, 1.5, 2.0, 3.0, 4.0, math.inf]
    qs = [1.0, 2.0, math.inf]
    alphas = [-1.0, 0.0, 0.5, 2.0]
    pts = [(p, q, (a0, ai)) for p, q, a0, ai in itertools.product(ps, qs, alphas, alphas)
           if is_ri_norm_lz(p, q, (a0, ai))]
    rng = np.random.default_rng(7)
    idx = np.sort(rng.choice(len(pts), size=60, replace=False))
    return [pts[i] for i in idx]


# one PASS/FAIL line per acceptance criterion, repeated in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def acceptance_line(k: int, title: str, ok: bool, detail: str, elapsed: float) -> None:
    line = f"criterion {k:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail} [{elapsed:.2f} s]"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
