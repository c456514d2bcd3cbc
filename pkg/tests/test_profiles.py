import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from rispace.profiles import (
    PowerLog,
    exp_layer_integral,
    hardy_profile,
    hardy_profile_arranged,
    step_profile,
    weight_integral,
)
from rispace.rearrange import StepFunction


def quad_weight(r, layers, a, b):
    """Oracle: scipy quad in t, split at 1."""
    def w(t):
        u = abs(math.log(t))
        L = 1.0 + u
        out = t ** r
        for e0, einf in layers:
            out *= L ** (e0 if t < 1 else einf)
            L = 1.0 + math.log(L)
        return out
    cuts = sorted({a, b} | ({1.0} if a < 1 < b else set()))
    return sum(quad(w, x, y, limit=400, epsrel=1e-12)[0] for x, y in zip(cuts, cuts[1:]))


class TestWeightIntegral:
    def test_power_closed_forms(self):
        assert weight_integral(-0.5, [], 0, 1) == pytest.approx(2.0, rel=1e-15)
        assert weight_integral(-2.0, [], 1, math.inf) == pytest.approx(1.0, rel=1e-15)
        assert weight_integral(0.0, [], 2, 5) == pytest.approx(3.0, rel=1e-15)

    def test_log_antiderivatives(self):
        # (1 - log t)^-1 and log log antiderivatives
        assert weight_integral(-1.0, [(-2.0, 0.0)], 0, 1) == pytest.approx(1.0, rel=1e-12)
        assert weight_integral(-1.0, [(0.0, -1.0), (0.0, -2.0)], 1, math.inf) == pytest.approx(
            1.0, rel=1e-12)

    def test_divergence(self):
        assert math.isinf(weight_integral(-1.0, [], 0, 1))
        assert math.isinf(weight_integral(-1.0, [(0.0, -1.0), (0.0, -1.0)], 1, math.inf))
        assert math.isinf(weight_integral(-1.0, [(-1.0, 0.0)], 0, 1))
        assert math.isinf(weight_integral(0.1, [(0.0, -5.0)], 1, math.inf))

    @pytest.mark.parametrize("r,layers,a,b", [
        (0.3, [(1.5, -2.0), (2.0, 1.0)], 0.01, 100.0),
        (-2.0, [(0.0, 3.0)], 1.0, math.inf),
        (-0.7, [(-0.5, 0.5)], 0.0, 1.0),
        (-1.5, [(2.0, -1.0), (-1.0, 1.0)], 1.0, math.inf),
        (1.0, [(0.0, 0.0), (1.0, 1.0)], 0.5, 7.0),
    ])
    def test_against_quad(self, r, layers, a, b):
        assert weight_integral(r, layers, a, b) == pytest.approx(
            quad_weight(r, layers, a, b), rel=1e-8)

    def test_layer_substitution_matches_direct_quad(self):
        # sigma = 0 at infinity: int_0^inf (1+u)^-1 (1+log(1+u))^-3 du = 1/2
        assert exp_layer_integral(0.0, [-1.0, -3.0], 0.0, math.inf) == pytest.approx(0.5, rel=1e-12)


class TestPowerLog:
    def test_algebra(self):
        a = PowerLog(2.0, 0.5, ((1.0, -1.0),))
        b = PowerLog(3.0, -0.25, ((0.0, 2.0), (1.0, 1.0)))
        t = np.array([0.01, 0.5, 1.0, 3.0, 1e4])
        np.testing.assert_allclose((a * b)(t), a(t) * b(t), rtol=1e-14)
        np.testing.assert_allclose((a ** 2.5)(t), a(t) ** 2.5, rtol=1e-13)

    def test_sup(self):
        # t^-1/2 (1 - log t) on (0.1, 1) is decreasing: sup at 0.1
        w = PowerLog(1.0, -0.5, ((1.0, 0.0),))
        assert w.sup(0.1, 1.0) == pytest.approx(0.1 ** -0.5 * (1 - math.log(0.1)), rel=1e-9)
        assert math.isinf(w.sup(0.0, 1.0))
        assert math.isinf(PowerLog(1.0, 0.5, ((-1.0, 0.0),)).sup(0.0, math.inf))
        assert PowerLog(1.0, 0.5, ((-1.0, 0.0),)).sup(0.0, 1.0) == pytest.approx(1.0)


class TestHardyProfile:
    def test_indicator_closed_form(self):
        h = hardy_profile(step_profile(StepFunction.indicator(1.0)), 1 / 3)
        t = np.array([0.001, 0.2, 0.9])
        np.testing.assert_allclose(h(t), 3 * (1 - t ** (1 / 3)), rtol=1e-13)
        assert h(2.0) == 0.0

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.tuples(st.floats(0.05, 3.0), st.floats(0.0, 5.0)), min_size=1, max_size=6),
           st.floats(0.1, 0.9))
    def test_arranged_against_quad(self, pieces, theta):
        f = StepFunction(pieces)
        h = hardy_profile_arranged(f, theta)
        for t in (0.03, 0.7, 2.5):
            bps = f.breakpoints()
            cuts = sorted({t, *[b for b in bps if b > t]})
            ref = sum(quad(lambda s: f.pointwise(s) * s ** (theta - 1), a, b)[0]
                      for a, b in zip(cuts, cuts[1:]))
            assert h(t) == pytest.approx(ref, rel=1e-9, abs=1e-12)

    def test_powerlog_segment_against_quad(self):
        from rispace.profiles import Profile, Segment
        model = PowerLog(1.0, -0.5, ((-0.75, 0.0),))
        prof = Profile((Segment(0.0, 1e-3, model=PowerLog(0.0)), Segment(1e-3, 1.0, model=model)))
        h = hardy_profile(prof, 1 / 3)
        for t in (1e-5, 2e-3, 0.1, 0.8):
            ref = quad(lambda s: model(s) * s ** (-2 / 3), max(t, 1e-3), 1.0, limit=200)[0]
            assert h(t) == pytest.approx(ref, rel=1e-9)
