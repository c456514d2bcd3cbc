import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, optimize

from conftest import dictionary, reduction_sweep
from rispace import optimal_orlicz as O
from rispace import spaces as S
from rispace import young as Y
from rispace.errors import InadmissibleError
from rispace.rearrange import StepFunction

PL = Y.power_log

# (p0, a0, pinf, ainf) with p0, pinf < 3: targets of L^A exist for m=1, n=3
TARGET_PROFILES = [
    (1.0, 0, 1.0, 0), (1.5, 0, 1.5, 0), (2, 0, 2, 0), (2.5, 0, 2.5, 0),
    (2, 1, 2, 1), (2, -1, 2, -1), (1.5, 0, 2.5, 0), (2.5, 0, 1.5, 0),
    (2, 1, 2.5, -1), (1.2, 0, 2, 1),
]

# (p0, a0, pinf, ainf) with lower index above 3/2
DOMAIN_PROFILES = [
    (2, 0, 2, 0), (6, 0, 6, 0), (3, 0, 2, 0), (2, 0, 4, 0),
    (4, -1, 4, 1), (2, 1, 6, 0), (1.8, -1, 2.2, 2),
]


def log_slope(F, a, b):
    return (F.log_evaluate(b) - F.log_evaluate(a)) / math.log(b / a)


def em_constant(p, m, n):
    """``E_m = lam^(1-p) t^p`` for ``A = t^p``, ``lam = (N-1)^gam / kappa^P``."""
    gam, P, N = m / (n - m), n / (n - m), n / m
    kappa = 1 - gam * (p - 1)
    lam = (N - 1) ** gam / kappa ** P
    return lam ** (1 - p)


class TestConditions:
    def test_near_zero(self):
        assert O.integral_near_zero_condition(Y.power(2), 1, 3)
        assert O.integral_near_zero_condition(Y.power(1), 1, 3)
        assert not O.integral_near_zero_condition(Y.power(4), 1, 3)

    def test_near_zero_boundary_log(self):
        # p0 = n/m: converges iff alpha0 > (n-m)/m = 2
        assert O.integral_near_zero_condition(PL(3, 2.5, 2, 0), 1, 3)
        assert not O.integral_near_zero_condition(PL(3, 2.0, 2, 0), 1, 3)
        assert not O.integral_near_zero_condition(PL(3, 0, 2, 0), 1, 3)

    def test_at_infinity(self):
        assert O.integral_at_infinity(Y.power(4), 1, 3)
        assert not O.integral_at_infinity(Y.power(2), 1, 3)
        assert O.integral_at_infinity(Y.linf_profile(), 1, 3)
        assert not O.integral_at_infinity(PL(2, 0, 3, 2), 1, 3)
        assert O.integral_at_infinity(PL(2, 0, 3, 2.5), 1, 3)

    def test_domain_condition(self):
        assert O.orlicz_domain_condition(Y.power(6), 1, 3)
        assert O.orlicz_domain_condition(Y.power(1.5), 1, 3)
        assert not O.orlicz_domain_condition(Y.power(1.2), 1, 3)
        assert not O.orlicz_domain_condition(PL(1.5, 1, 2, 0), 1, 3)
        assert O.orlicz_domain_condition(PL(1.5, -1, 2, 0), 1, 3)
        assert O.orlicz_domain_condition(Y.linf_profile(), 1, 3)

    def test_orders(self):
        with pytest.raises(InadmissibleError):
            O.integral_near_zero_condition(Y.power(2), 3, 3)


class TestHm:
    def test_power_closed_form(self):
        t = np.array([1e-6, 1e-2, 1.0, 1e3, 1e7])
        np.testing.assert_allclose(O.H_m(Y.power(2), 1, 3, t), (2 * np.sqrt(t)) ** (2 / 3), rtol=1e-10)

    def test_zero(self):
        assert O.H_m(Y.power(2), 1, 3, 0.0) == 0.0

    def test_beyond_grid(self):
        t = np.array([1e-30, 1e30])
        np.testing.assert_allclose(O.H_m(Y.power(2), 1, 3, t), (2 * np.sqrt(t)) ** (2 / 3), rtol=1e-9)

    def test_divergent_tail(self):
        assert O.H_inf(Y.power(2), 1, 3) == math.inf

    def test_finite_tail_against_quad(self):
        A = PL(2, 0, 4, 0)
        f = lambda u: (math.exp(u) / A(math.exp(u))) ** 0.5 * math.exp(u)
        J = sum(integrate.quad(f, a, b, limit=400)[0] for a, b in ((-80, 0), (0, 80)))
        assert O.H_inf(A, 1, 3) == pytest.approx(J ** (2 / 3), rel=1e-6)

    def test_no_target(self):
        with pytest.raises(O.NoTargetAtAll):
            O.H_m(Y.power(4), 1, 3, 1.0)


class TestAm:
    def test_power_closed_form(self):
        # H^-1(t) = t^3/4, D_m = t^6/8, A_m = t^6/48
        Am = O.construct_A_m(Y.power(2), 1, 3)
        t = np.array([1e-3, 1.0, 1e3])
        np.testing.assert_allclose(Am(t), t ** 6 / 48, rtol=1e-6)
        np.testing.assert_allclose(O.D_m(Y.power(2), 1, 3, t), t ** 6 / 8, rtol=1e-8)
        assert log_slope(Am, 1e-3, 1e3) == pytest.approx(6.0, abs=1e-2)
        assert (Am.p0, Am.pinf) == (6.0, 6.0)

    @pytest.mark.parametrize("prof", TARGET_PROFILES)
    def test_tail_exponents(self, prof):
        p0, a0, pinf, ainf = prof
        Am = O.construct_A_m(PL(*prof), 1, 3)
        assert Am.p0 == pytest.approx(3 * p0 / (3 - p0))
        assert Am.alpha0 == pytest.approx(3 * a0 / (3 - p0))
        assert Am.pinf == pytest.approx(3 * pinf / (3 - pinf))
        assert Am.alphainf == pytest.approx(3 * ainf / (3 - pinf))

    @pytest.mark.parametrize("prof", TARGET_PROFILES)
    def test_equivalent_to_D_m(self, prof):
        A = PL(*prof)
        d = Y.equivalent(O.construct_A_m(A, 1, 3), O.D_m_profile(A, 1, 3))
        assert d.holds and d.c <= 4

    @pytest.mark.parametrize("prof", TARGET_PROFILES)
    def test_inverse_formula(self, prof):
        A = PL(*prof)
        assert Y.boyd_indices(A).upper < 3
        Am = O.construct_A_m(A, 1, 3)
        t = np.geomspace(1e-6, 1e6, 61)
        r = Am.inverse(t) / (A.inverse(t) * t ** (-1 / 3))
        assert r.max() / r.min() <= 4.0

    def test_exponential_class(self):
        A = PL(2, 0, 3, 0)
        Am = O.construct_A_m(A, 1, 3)
        assert math.isinf(Am.pinf) and Am.cap is None
        # (s/A)^(1/2) ~ 1/s at infinity, so log A_m(t) / t^(3/2) -> 3
        assert Am.log_evaluate(1e4) / 1e6 == pytest.approx(3.0, rel=1e-4)

    def test_exponential_class_inverse_against_quad(self):
        A = PL(2, 0, 3, 0)
        tab = O._hardy_table(A, 1, 3)
        f = lambda u: (math.exp(u) / A(math.exp(u))) ** 0.5 * math.exp(u)
        J0 = integrate.quad(f, -80, 0, limit=400)[0]
        for t in (3.0, 10.0):
            us = optimize.brentq(
                lambda u: (J0 + integrate.quad(f, 0, u, limit=400)[0]) ** (2 / 3) - t, 0.0, 200.0,
                xtol=1e-12)
            assert tab.log_J_inverse(1.5 * math.log(t))[0] == pytest.approx(us, rel=1e-6)

    def test_cap(self):
        A = PL(2, 0, 4, 0)
        Am = O.construct_A_m(A, 1, 3)
        h = O.H_inf(A, 1, 3)
        assert Am.cap == h
        assert math.isfinite(Am(0.99 * h))
        assert Am(1.01 * h) == math.inf
        assert O.D_m(A, 1, 3, 1.01 * h) == math.inf

    def test_no_target(self):
        with pytest.raises(O.NoTargetAtAll):
            O.construct_A_m(Y.power(4), 1, 3)

    @settings(max_examples=12, deadline=None)
    @given(st.floats(1.0, 2.8), st.floats(-2, 2), st.floats(1.1, 2.8), st.floats(-2, 2))
    def test_D_m_equivalence_property(self, p0, a0, pinf, ainf):
        if p0 == 1.0 and a0 > 0:
            a0 = -a0
        A = PL(p0, a0, pinf, ainf)
        d = Y.equivalent(O.construct_A_m(A, 1, 3), O.D_m_profile(A, 1, 3))
        assert d.holds and d.c <= 4


class TestEm:
    @pytest.mark.parametrize("p", [1.2, 1.5, 2.0, 2.5])
    def test_power_closed_form(self, p):
        E = O.construct_E_m(Y.power(p), 1, 3)
        t = np.array([1e-3, 1.0, 1e3])
        np.testing.assert_allclose(E(t), em_constant(p, 1, 3) * t ** p, rtol=1e-6)
        assert log_slope(E, 1e-8, 1e-6) == pytest.approx(p, abs=1e-2)
        assert log_slope(E, 1e6, 1e8) == pytest.approx(p, abs=1e-2)

    def test_t_squared_is_quarter(self):
        assert O.construct_E_m(Y.power(2), 1, 3)(1.0) == pytest.approx(0.25, rel=1e-10)

    def test_vanishes_at_zero(self):
        assert O.construct_E_m(Y.power(2), 1, 3)(0.0) == 0.0

    def test_supercritical_tail(self):
        # A ~ t^4 at infinity: E_m ~ t^(1 + 3/rho), rho = gam (P (p-1) - 1) = 7/4
        E = O.construct_E_m(PL(2, 0, 4, 0), 1, 3)
        assert E.pinf == pytest.approx(1 + 3 / 1.75)
        assert log_slope(E, 1e6, 1e8) == pytest.approx(E.pinf, abs=1e-2)
        assert Y.orlicz_lorentz_admissible(3, 1, E)

    @pytest.mark.parametrize("prof", TARGET_PROFILES)
    def test_admissible_and_convex(self, prof):
        E = O.construct_E_m(PL(*prof), 1, 3)
        assert Y.orlicz_lorentz_admissible(3, 1, E)
        assert np.all(np.diff(E.log_a) >= 0)
        assert not E.repaired

    def test_orlicz_lorentz_vs_lorentz(self):
        # E_m = t^2/4 makes the Luxemburg norm exactly half the L^{6,2} norm
        X = O.optimal_orlicz_target(Y.power(2), 1, 3).X_m_spec
        L = S.Lorentz(6, 2)
        ratios = np.array([S.norm(X, f).value / S.norm(L, f).value for f in dictionary()])
        np.testing.assert_allclose(ratios, 0.5, rtol=1e-8)

    def test_fundamental_slope(self):
        X = O.optimal_orlicz_target(Y.power(2), 1, 3).X_m_spec
        a, b = 1e-3, 1e3
        s = math.log(S.fundamental_function(X, b) / S.fundamental_function(X, a)) / math.log(b / a)
        assert s == pytest.approx(1 / 6, abs=1e-2)


class TestTarget:
    def test_diverging_case(self):
        r = O.optimal_orlicz_target(Y.power(2), 1, 3)
        assert not r.integral_at_infinity_converges
        assert isinstance(r.X_m_spec, S.OrliczLorentz)
        assert (r.X_m_spec.p, r.X_m_spec.q) == (3.0, 1.0)
        d = Y.equivalent(r.A_m, Y.power(6))
        assert d.holds and d.c <= 4
        assert not r.convexity_repair_applied

    def test_converging_case(self):
        r = O.optimal_orlicz_target(PL(2, 0, 4, 0), 1, 3)
        assert r.integral_at_infinity_converges
        assert isinstance(r.X_m_spec, S.Intersection)
        ol, linf = r.X_m_spec.parts
        assert linf == S.Lebesgue(math.inf)
        f = StepFunction(((0.5, 3.0), (2.0, 1.0)))
        assert S.norm(r.X_m_spec, f).value == pytest.approx(
            max(S.norm(ol, f).value, S.norm(linf, f).value), rel=1e-12)

    def test_no_target(self):
        with pytest.raises(O.NoTargetAtAll):
            O.optimal_orlicz_target(Y.power(4), 1, 3)

    def test_to_dict(self):
        d = O.optimal_orlicz_target(Y.power(2), 1, 3).to_dict()
        assert d["A_m_tails"] == [6.0, 0.0, 6.0, 0.0]
        assert d["X_m"].startswith("orlicz-lorentz:p=3,q=1")


class TestBm:
    def test_G_m_power(self):
        t = np.array([1e-6, 1.0, 1e6])
        np.testing.assert_allclose(O.G_m(Y.power(6), 1, 3, t), t ** (1 / 6 + 1 / 3), rtol=1e-8)

    def test_power_closed_form(self):
        # G = t^a with a = 1/2, so B_m = a t^(1/a) = t^2/2
        Bm = O.construct_B_m(Y.power(6), 1, 3)
        t = np.array([1e-3, 1.0, 1e3])
        np.testing.assert_allclose(Bm(t), t ** 2 / 2, rtol=1e-6)
        assert log_slope(Bm, 1e-3, 1e3) == pytest.approx(2.0, abs=1e-2)

    def test_critical_power_gives_linear(self):
        Bm = O.construct_B_m(Y.power(1.5), 1, 3)
        t = np.array([1e-4, 1.0, 1e4])
        np.testing.assert_allclose(Bm(t), t, rtol=1e-6)
        assert (Bm.p0, Bm.pinf) == (1.0, 1.0)

    def test_G_m_against_brute_force(self):
        B = PL(2, 0, 6, 0)
        s = np.geomspace(1e-12, 1e6, 200_001)
        phi = B.inverse(s) * s ** (-2 / 3)
        for t in (1e-3, 1.0, 1e3):
            brute = t * phi[s <= t].min()
            assert O.G_m(B, 1, 3, t) == pytest.approx(brute, rel=1e-4)

    def test_G_m_running_infimum(self):
        # p0 = 3/2 with alpha0 = 0 near zero: B^-1(s) s^(-2/3) -> const, the inf is global
        B = PL(1.5, 0, 6, 0)
        t = np.geomspace(1e-6, 1e6, 25)
        g = O.G_m(B, 1, 3, t)
        assert np.all(np.diff(g) > 0)
        assert np.all(np.diff(g / t) <= 1e-12)

    @pytest.mark.parametrize("prof", DOMAIN_PROFILES)
    def test_inverse_close_to_G_m(self, prof):
        B = PL(*prof)
        Bm = O.construct_B_m(B, 1, 3)
        t = np.geomspace(1e-6, 1e6, 61)
        r = Bm.inverse(t) / O.G_m(B, 1, 3, t)
        assert r.max() <= 4 and r.min() >= 0.25

    @pytest.mark.parametrize("prof", DOMAIN_PROFILES)
    def test_inverse_formula(self, prof):
        B = PL(*prof)
        assert Y.boyd_indices(B).lower > 1.5
        Bm = O.construct_B_m(B, 1, 3)
        t = np.geomspace(1e-6, 1e6, 61)
        r = Bm.inverse(t) / (B.inverse(t) * t ** (1 / 3))
        assert r.max() / r.min() <= 4.0

    @pytest.mark.parametrize("prof", DOMAIN_PROFILES)
    def test_tail_exponents(self, prof):
        p0, a0, pinf, ainf = prof
        Bm = O.construct_B_m(PL(*prof), 1, 3)
        assert Bm.p0 == pytest.approx(3 * p0 / (3 + p0))
        assert Bm.alpha0 == pytest.approx(3 * a0 / (3 + p0))
        assert Bm.pinf == pytest.approx(3 * pinf / (3 + pinf))
        assert Bm.alphainf == pytest.approx(3 * ainf / (3 + pinf))

    def test_condition_fails(self):
        with pytest.raises(O.DomainConditionFails):
            O.construct_B_m(Y.power(1.2), 1, 3)


class TestDomain:
    def test_optimal(self):
        r = O.optimal_orlicz_domain(Y.power(6), 1, 3)
        assert isinstance(r, O.Optimal)
        assert r.upper_index == pytest.approx(2.0, abs=1e-2)

    def test_exponential_class(self):
        r = O.optimal_orlicz_domain(Y.exponential(1.0), 1, 3)
        assert isinstance(r, O.NoOptimalButNonempty)
        assert r.B_m.pinf == 3.0

    def test_linf(self):
        r = O.optimal_orlicz_domain(Y.linf_profile(), 1, 3)
        assert isinstance(r, O.NoOptimalButNonempty)
        t = np.array([1e-3, 1.0, 1e3])
        # G = t^(1/3), B_m = t^3/3
        np.testing.assert_allclose(r.B_m(t), t ** 3 / 3, rtol=1e-6)

    def test_no_domain(self):
        r = O.optimal_orlicz_domain(PL(1.5, 1, 2, 0), 1, 3)
        assert isinstance(r, O.NoDomainAtAll)
        assert isinstance(O.optimal_orlicz_domain(Y.power(1.2), 1, 3), O.NoDomainAtAll)

    def test_large_pinf_is_optimal(self):
        # B_m ~ t^(3q/(3+q)) < t^3 for every finite q
        r = O.optimal_orlicz_domain(PL(2, 0, 30, 0), 1, 3)
        assert isinstance(r, O.Optimal)
        assert r.upper_index == pytest.approx(90 / 33, abs=1e-2)


class TestConjugateIntegral:
    def test_power_closed_form(self):
        # A~ = t^2/4, K = t^(3/2) int_0^t s^(-1/2)/4 ds = t^2/2
        K = O.conjugate_integral(Y.power(2), 1, 3)
        t = np.array([1e-3, 1.0, 1e3])
        np.testing.assert_allclose(K(t), t ** 2 / 2, rtol=1e-6)

    def test_divergent(self):
        assert O.conjugate_integral(Y.power(4), 1, 3) is None

    def test_l1_is_capped(self):
        K = O.conjugate_integral(Y.power(1), 1, 3)
        assert K(0.5) == 0.0 and K(2.0) == math.inf


class TestReduction:
    def test_true_case(self):
        r = O.orlicz_reduction_check(Y.power(2), Y.power(6), 1, 3)
        assert r.statement2 and r.statement3 and r.statement4 and r.agree
        assert r.c2 <= 4 and r.c3 <= 4

    def test_false_case(self):
        r = O.orlicz_reduction_check(Y.power(2), Y.power(7), 1, 3)
        assert (r.statement2, r.statement3, r.statement4) == (False, False, False)
        assert r.verdicts["large"] == "unbounded_trend"

    def test_linear_pair_is_false(self):
        # t <= A_m(C t) = C^(3/2) t^(3/2) / ... fails as t -> 0
        r = O.orlicz_reduction_check(Y.power(1), Y.power(1), 1, 3)
        assert (r.statement2, r.statement3, r.statement4) == (False, False, False)
        assert r.verdicts["small"] == "unbounded_trend"

    def test_records_at_dyadic_constant(self):
        r = O.orlicz_reduction_check(Y.power(2), Y.power(6), 1, 3)
        assert math.log2(r.c4) == int(math.log2(r.c4))
        assert max(x.ratio for x in r.records) <= 1.0 + 1e-9
        np.testing.assert_allclose([x.ratio for x in r.records], [x.lhs / x.rhs for x in r.records])

    def test_custom_family(self):
        fam = [O.FamilyMember(f"h{k}", StepFunction(((2.0, 10.0 ** k),)), k) for k in range(-3, 4)]
        r = O.orlicz_reduction_check(Y.power(2), Y.power(6), 1, 3, fam)
        assert len(r.records) == 7 and r.statement4

    def test_to_dict(self):
        d = O.orlicz_reduction_check(Y.power(2), Y.power(6), 1, 3).to_dict()
        assert d["agree"] is True and len(d["records"]) == 33


# log-only mismatch near zero: the family ratios grow like a power of log
# after an initial dip, and the plateau rule rates them bounded
SLOW_LOG_PAIR = 18


@pytest.mark.parametrize("k", range(20))
def test_reduction_sweep(k, request):
    if k == SLOW_LOG_PAIR:
        request.applymarker(pytest.mark.xfail(
            strict=True, reason="statement (4) judged bounded on a log-rate mismatch"))
    A, B, expected = reduction_sweep()[k]
    r = O.orlicz_reduction_check(A, B, 1, 3)
    assert r.statement2 == expected and r.statement3 == expected
    assert r.statement4 == expected
