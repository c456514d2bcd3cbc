import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad
from scipy.optimize import minimize_scalar

from conftest import sweep_points
from rispace import young
from rispace.errors import InadmissibleError
from rispace.profiles import PowerLog, Profile, Segment
from rispace.rearrange import PowerLogFunction, StepFunction
from rispace.spaces import (
    GLZ,
    X1,
    X2,
    Y1,
    Y2,
    Lebesgue,
    Lorentz,
    LorentzZygmund,
    Orlicz,
    is_ri_norm_lz,
    norm,
)
from rispace.optimal_ri import (
    EmbeddingProblem,
    NoDomain,
    NoTarget,
    SimplificationInvalid,
    T_alpha,
    VerificationReport,
    domain_condition,
    dual_operator,
    hardy_operator,
    iteration_check,
    iteration_constant_upper,
    necessary_condition_sup,
    optimal_domain_lz,
    optimal_target_lz,
    sharpness_family,
    sigma_m,
    t_alpha_bounded_on_associate,
    target_condition,
    tau_m_heuristic,
    tau_m_simplified,
    verdict_of,
    verify_reduction,
)

INF = math.inf
CHI = StepFunction.indicator(1.0)
pieces = st.lists(st.tuples(st.floats(0.05, 3.0), st.floats(0.01, 5.0)), min_size=1, max_size=6)


class TestProblem:
    def test_theta_and_invariant(self):
        assert EmbeddingProblem(3, 1, Lebesgue(2)).theta == pytest.approx(1 / 3)
        with pytest.raises(InadmissibleError):
            EmbeddingProblem(3, 3, Lebesgue(2))


class TestOperators:
    def test_hardy_examples(self):
        assert hardy_operator(CHI, 1, 3, 0.2) == pytest.approx(3 * (1 - 0.2 ** (1 / 3)), rel=1e-14)
        assert hardy_operator(CHI, 1, 3, 1.0) == 0.0
        assert hardy_operator(CHI, 1, 3, 5.0) == 0.0
        f = PowerLogFunction(1.0, 2 / 3, 0.0, 0.0, (1.0, 8.0))
        assert hardy_operator(f, 1, 3, 1.0) == pytest.approx(1.5, rel=1e-12)

    def test_hardy_divergent(self):
        f = PowerLogFunction(1.0, 1 / 3, 0.0, 0.0, (1.0, INF))
        assert math.isinf(hardy_operator(f, 1, 3, 1.0))

    @settings(max_examples=40, deadline=None)
    @given(pieces, st.floats(0.01, 5.0))
    def test_hardy_against_quad(self, pc, t):
        f = StepFunction(pc)
        ends, vals = f.rearrangement_arrays()
        cuts = sorted({t, *[e for e in ends if e > t]})
        star = lambda s: vals[min(np.searchsorted(ends, s, side="right"), len(vals) - 1)]
        ref = sum(quad(lambda s: star(s) * s ** (-2 / 3), a, b)[0] for a, b in zip(cuts, cuts[1:]))
        assert hardy_operator(f, 1, 3, t) == pytest.approx(ref, rel=1e-9, abs=1e-13)

    def test_dual_examples(self):
        assert dual_operator(CHI, 1, 3, 1 / 8) == pytest.approx(0.5, rel=1e-14)
        assert dual_operator(CHI, 1, 3, 8.0) == pytest.approx(0.25, rel=1e-14)
        assert dual_operator(StepFunction(), 1, 3, 2.0) == 0.0
        assert dual_operator(StepFunction([(1.0, 2.0)]), 1, 3, 2.0) == pytest.approx(2 ** (1 / 3))


class TestTargetCondition:
    @pytest.mark.parametrize("p", [1.0, 1.5, 2.0, 2.9])
    def test_lebesgue_below_critical(self, p):
        assert target_condition(Lebesgue(p), 1, 3)

    @pytest.mark.parametrize("p", [3.0, 4.0, INF])
    def test_lebesgue_at_or_above_critical(self, p):
        assert not target_condition(Lebesgue(p), 1, 3)

    def test_lorentz_critical(self):
        assert target_condition(Lorentz(3, 1), 1, 3)
        assert not target_condition(Lorentz(3, 2), 1, 3)

    def test_log_layer_at_critical(self):
        # L^{3,2;[0,a]} needs a > 1/2
        assert target_condition(LorentzZygmund(3, 2, (0, 1.0)), 1, 3)
        assert not target_condition(LorentzZygmund(3, 2, (0, 0.5)), 1, 3)

    def test_orlicz(self):
        assert target_condition(Orlicz(young.power(2)), 1, 3)
        assert not target_condition(Orlicz(young.power(4)), 1, 3)


class TestSigma:
    def test_closed_forms(self):
        assert sigma_m(Lebesgue(1), 1, 3, CHI) == pytest.approx(1.0, rel=1e-12)
        assert sigma_m(Lebesgue(2), 1, 3, CHI) == pytest.approx(math.sqrt(18 / 5), rel=1e-6)
        assert sigma_m(Lebesgue(2), 1, 3, StepFunction()) == 0.0

    def test_rearranged_route_matches_lebesgue(self):
        # Orlicz(t^2) is L^2 with equal norms, but goes through the rearranged curve
        got = sigma_m(Orlicz(young.power(2)), 1, 3, CHI)
        assert got == pytest.approx(math.sqrt(18 / 5), rel=1e-4)

    def test_two_pieces_against_quad(self):
        f = StepFunction([(1.0, 2.0), (2.0, 1.0)])
        F = lambda t: 2 * t if t < 1 else (2 + (t - 1) if t < 3 else 4.0)
        g = lambda t: (t ** (1 / 3 - 1) * F(t)) ** 2
        ref = math.sqrt(sum(quad(g, a, b, limit=200)[0]
                            for a, b in [(0, 1), (1, 3), (3, INF)]))
        assert sigma_m(Lebesgue(2), 1, 3, f) == pytest.approx(ref, rel=1e-6)

    @settings(max_examples=25, deadline=None)
    @given(pieces, pieces, st.floats(0.1, 10.0))
    def test_norm_axioms(self, pa, pb, c):
        f, g = StepFunction(pa), StepFunction(pb)
        for X in (Lebesgue(1), Lebesgue(2)):
            sf, sg = sigma_m(X, 1, 3, f), sigma_m(X, 1, 3, g)
            assert sigma_m(X, 1, 3, f.scaled(c)) == pytest.approx(c * sf, rel=1e-9)
            # (f + g)** <= f** + g**, realised with the two functions laid side by side
            n = min(len(pa), len(pb))
            meas = [min(a[0], b[0]) for a, b in zip(pa[:n], pb[:n])]
            fa = StepFunction([(m, a[1]) for m, a in zip(meas, pa)])
            fb = StepFunction([(m, b[1]) for m, b in zip(meas, pb)])
            fs = StepFunction([(m, a[1] + b[1]) for m, a, b in zip(meas, pa, pb)])
            lhs = sigma_m(X, 1, 3, fs)
            assert lhs <= (sigma_m(X, 1, 3, fa) + sigma_m(X, 1, 3, fb)) * (1 + 1e-9)


class TestTargetTable:
    def test_examples(self):
        assert optimal_target_lz(2, 2, (0, 0), 1, 3) == Lorentz(6, 2)
        assert optimal_target_lz(3, 1, (0, 0), 1, 3) == Lebesgue(INF)
        assert isinstance(optimal_target_lz(3, 2, (0, 0), 1, 3), NoTarget)
        assert optimal_target_lz(3, 2, (0, 0), 1, 3).spec() == "none"

    def test_subcritical_rows(self):
        assert optimal_target_lz(1, 1, (0.5, -1), 1, 3) == LorentzZygmund(1.5, 1, (0.5, -1))
        assert optimal_target_lz(1.5, INF, (1, 2), 1, 3) == LorentzZygmund(3, INF, (1, 2))
        assert isinstance(optimal_target_lz(4, 2, (0, 0), 1, 3), NoTarget)
        assert isinstance(optimal_target_lz(INF, INF, (0, 0), 1, 3), NoTarget)

    def test_limiting_rows(self):
        t = lambda q, a0, ai: optimal_target_lz(3, q, (a0, ai), 1, 3)
        assert t(2, 0.0, 1.0) == LorentzZygmund(INF, 2, (-1.0, 0.0))
        assert t(1, -1.0, 0.0) == Y1(-1.0)
        assert t(1, 0.5, 0.0) == Lebesgue(INF)
        assert t(1, 0.5, 2.0) == Y2(1, 2.0)
        assert t(2, 1.0, 2.0) == Y2(2, 2.0)
        assert t(2, 0.5, 2.0) == GLZ(INF, 2, (-0.5, 1.0), (-1.0, 0.0))
        assert t(INF, 1.0, 2.0) == GLZ(INF, INF, (0.0, 1.0), (-1.0, 0.0))
        assert t(INF, 2.0, 2.0) == LorentzZygmund(INF, INF, (0.0, 1.0))
        assert t(1, -1.0, 2.0) == LorentzZygmund(INF, 1, (-2.0, 1.0))

    def test_converse_rows(self):
        assert isinstance(optimal_target_lz(3, 1, (0, -1), 1, 3), NoTarget)
        assert isinstance(optimal_target_lz(3, 2, (1, 0.5), 1, 3), NoTarget)
        assert isinstance(optimal_target_lz(3, INF, (2, 1), 1, 3), NoTarget)

    def test_triple_log_row(self):
        row = optimal_target_lz(3, 1, (0, 1.5), 1, 3)
        assert row == GLZ(INF, 1, (-1.0, 0.5), (-1.0, 0.0), (-1.0, 0.0))
        assert row.trivial
        assert optimal_target_lz(3, 1, (0, 1.5), 1, 3, repair_degenerate=True) == Y2(1, 1.5)

    def test_inadmissible(self):
        with pytest.raises(InadmissibleError):
            optimal_target_lz(1, 2, (0, 0), 1, 3)


class TestDomain:
    def test_condition_examples(self):
        assert domain_condition(Lebesgue(INF), 1, 3)
        assert domain_condition(Lorentz(1.5, 1), 1, 3)
        assert domain_condition(Lebesgue(2), 1, 3)
        assert not domain_condition(Lebesgue(1.2), 1, 3)
        assert not domain_condition(LorentzZygmund(1.5, 2, (0, 0.5)), 1, 3)
        assert domain_condition(LorentzZygmund(1.5, 2, (0, -0.5)), 1, 3)

    def test_table_examples(self):
        x2 = optimal_domain_lz(INF, INF, (0, 0), 1, 3)
        assert x2 == X2(INF, (0, 0), 1 / 3)
        assert optimal_domain_lz(3, 2, (0, 0), 1, 3) == Lorentz(1.5, 2)
        assert isinstance(optimal_domain_lz(1, 1, (0, 0), 1, 3), NoDomain)
        assert optimal_domain_lz(1.5, 1, (0.5, -1), 1, 3) == LorentzZygmund(1, 1, (0.5, -1))
        assert optimal_domain_lz(1.5, 2, (0, 0), 1, 3) == X1(2, (0, 0), 1 / 3)
        assert isinstance(optimal_domain_lz(1.5, 2, (0, 0.5), 1, 3), NoDomain)

    def test_x2_is_critical_lorentz_for_plain_weights(self, rng):
        # sup_t int_t^inf f* s^(-2/3) ds = int_0^inf f* s^(-2/3) ds, the L^{3,1} norm
        for _ in range(10):
            f = StepFunction(zip(rng.uniform(0.1, 3, 5), rng.uniform(0, 5, 5)))
            assert norm(X2(INF, (0, 0), 1 / 3), f).value == pytest.approx(
                norm(Lorentz(3, 1), f).value, rel=1e-9)


class TestSweep:
    def test_sweep_size(self):
        assert len(sweep_points()) == 60

    def test_target_consistency(self):
        for p, q, a in sweep_points():
            none = isinstance(optimal_target_lz(p, q, a, 1, 3), NoTarget)
            assert none == (not target_condition(LorentzZygmund(p, q, a), 1, 3)), (p, q, a)

    def test_domain_consistency(self):
        for p, q, a in sweep_points():
            none = isinstance(optimal_domain_lz(p, q, a, 1, 3), NoDomain)
            assert none == (not domain_condition(LorentzZygmund(p, q, a), 1, 3)), (p, q, a)

    def test_converse_sets(self):
        for p, q, (a0, ai) in sweep_points():
            t_none = (p == 3 and q == 1 and ai < 0) or (p == 3 and q > 1 and ai <= 1 - 1 / q) \
                or p > 3
            d_none = (p == 1.5 and ai > 0) or p < 1.5
            assert isinstance(optimal_target_lz(p, q, (a0, ai), 1, 3), NoTarget) == t_none
            assert isinstance(optimal_domain_lz(p, q, (a0, ai), 1, 3), NoDomain) == d_none

    def test_t_alpha_clauses(self):
        for p, q, (a0, ai) in sweep_points():
            want = (p == 1.5 and q == 1 and a0 >= 0 and ai <= 0) or p > 1.5
            assert t_alpha_bounded_on_associate(p, q, (a0, ai), 1 / 3) == want


class TestTAlpha:
    def test_indicator(self):
        t = np.array([0.25, 0.9, 1.0, 2.0])
        np.testing.assert_allclose(T_alpha(CHI, 0.5, t), [2.0, 0.9 ** -0.5, 0.0, 0.0], rtol=1e-14)
        assert T_alpha(StepFunction(), 0.5, 0.3) == 0.0

    def test_power_profile(self):
        prof = Profile((Segment(0.0, INF, model=PowerLog(1.0, -0.5)),))
        np.testing.assert_allclose(T_alpha(prof, 0.5, [0.01, 1.0, 100.0]),
                                   [10.0, 1.0, 0.1], rtol=1e-9)

    def test_clauses(self):
        assert t_alpha_bounded_on_associate(1.5, 1, (0, 0), 1 / 3)
        assert t_alpha_bounded_on_associate(INF, 2, (-1, 0), 1 / 3)
        assert not t_alpha_bounded_on_associate(1.5, 2, (0, 0), 1 / 3)
        assert not t_alpha_bounded_on_associate(1.2, 1, (0, 0), 1 / 3)

    @settings(max_examples=50, deadline=None)
    @given(pieces, st.floats(0.1, 0.9))
    def test_domination_and_idempotence(self, pc, alpha):
        f = StepFunction(pc)
        ends, vals = f.rearrangement_arrays()
        t = np.geomspace(ends[-1] * 1e-3, ends[-1] * 0.999, 200)
        g = T_alpha(f, alpha, t)
        assert np.all(g >= f.f_star(t) * (1 - 1e-12))
        # T_alpha f is c_i t^-alpha on each cell; apply T_alpha to that profile
        c = g * t ** alpha
        starts = np.concatenate(([0.0], ends[:-1]))
        mids = 0.5 * (starts + ends)
        levels = T_alpha(f, alpha, mids) * mids ** alpha
        segs = [Segment(a, b, model=PowerLog(float(k), -alpha))
                for a, b, k in zip(starts, ends, levels)]
        segs.append(Segment(float(ends[-1]), INF, model=PowerLog(0.0)))
        np.testing.assert_allclose(T_alpha(Profile(tuple(segs)), alpha, t), g, rtol=1e-10)
        assert np.all(np.diff(c) <= 1e-12 * c[:-1])


class TestTau:
    def test_simplified_examples(self):
        assert tau_m_simplified(Lebesgue(INF), 1, 3, CHI) == pytest.approx(3.0, rel=1e-12)
        assert tau_m_simplified(Lebesgue(INF), 1, 3, StepFunction()) == 0.0

    def test_simplified_two_stage_quad(self):
        inner = lambda t: quad(lambda s: s ** (-2 / 3), t, 1.0)[0]
        ref = quad(lambda t: t ** (1 / 1.5 - 1) * inner(t), 0, 1)[0]
        assert tau_m_simplified(Lorentz(1.5, 1), 1, 3, CHI) == pytest.approx(ref, rel=1e-8)

    def test_simplification_refused(self):
        with pytest.raises(SimplificationInvalid):
            tau_m_simplified(Lebesgue(1.2), 1, 3, CHI)
        with pytest.raises(SimplificationInvalid):
            tau_m_simplified(Lorentz(1.5, 2), 1, 3, CHI)
        with pytest.raises(SimplificationInvalid):
            tau_m_simplified(Orlicz(young.power(4)), 1, 3, CHI)
        v = tau_m_simplified(Orlicz(young.power(4)), 1, 3, CHI, assume_bounded=True)
        assert v > 0

    def test_heuristic_single_piece(self):
        r = tau_m_heuristic(Lorentz(1.5, 1), 1, 3, CHI)
        assert r.method == "brute_force_lower_bound"
        assert r.value == pytest.approx(tau_m_simplified(Lorentz(1.5, 1), 1, 3, CHI), rel=1e-12)
        assert tau_m_heuristic(Lebesgue(2), 1, 3, StepFunction()).value == 0.0

    def test_heuristic_two_pieces_enumerated(self):
        def l2_of_hardy(order):
            # order: contiguous (measure, value) pieces from 0; quad in both stages
            cuts = np.concatenate(([0.0], np.cumsum([m for m, _ in order])))
            H = lambda t: sum(v * quad(lambda s: s ** (-2 / 3), max(t, a), b)[0]
                              for (_, v), a, b in zip(order, cuts, cuts[1:]) if t < b)
            return math.sqrt(sum(quad(lambda t: H(t) ** 2, a, b, limit=200)[0]
                                 for a, b in zip(cuts, cuts[1:])))
        f = StepFunction([(1.0, 1.0), (4.0, 3.0)])
        ref = max(l2_of_hardy([(4.0, 3.0), (1.0, 1.0)]), l2_of_hardy([(1.0, 1.0), (4.0, 3.0)]))
        got = tau_m_heuristic(Lebesgue(2), 1, 3, f).value
        assert got == pytest.approx(ref, rel=1e-7)
        assert got >= tau_m_simplified(Lebesgue(2), 1, 3, f) * (1 - 1e-12)


class TestNecessary:
    def test_peetre_pair_is_constant(self):
        # phi_Y(a) = 3^(1/2) a^(1/6), tail norm 3^(1/2) a^(-1/6)
        assert necessary_condition_sup(Lebesgue(2), Lorentz(6, 2), 1, 3) == pytest.approx(
            3.0, rel=1e-8)

    def test_subcritical_lebesgue_pair(self):
        # phi_{L^2}(a) = a^(1/2), ||t^(-2/3) chi_(a, inf)||_6 = 3^(-1/6) a^(-1/2)
        assert necessary_condition_sup(Lebesgue(1.2), Lebesgue(2), 1, 3) == pytest.approx(
            3 ** (-1 / 6), rel=1e-8)

    def test_refutations(self):
        assert math.isinf(necessary_condition_sup(Lebesgue(4), Lorentz(6, 2), 1, 3))
        # a^(-2/3) is unbounded as a -> 0
        assert math.isinf(necessary_condition_sup(Lebesgue(1), Lebesgue(INF), 1, 3))
        assert math.isinf(necessary_condition_sup(Lebesgue(2), Lebesgue(7), 1, 3))


class TestIteration:
    def test_indicator_two_stage_oracle(self):
        # u(tau) = tau^(1/4) min(1, 1/tau); |{u > lam}| = lam^(-4/3) - lam^4 for lam < 1
        prim = lambda t: quad(lambda lam: min(lam ** (-4 / 3) - lam ** 4, t), 0, 1,
                              points=[t ** -0.75] if t > 1 else None, limit=200)[0]
        res = minimize_scalar(lambda x: -math.exp(x) ** -0.75 * prim(math.exp(x)),
                              bounds=(-6, 6), method="bounded", options={"xatol": 1e-10})
        lhs_ref = -res.fun
        rec = iteration_check(Lebesgue(1), 1, 1, 4, CHI)
        assert rec.lhs == pytest.approx(lhs_ref, rel=1e-6)
        assert rec.rhs == pytest.approx(lhs_ref, rel=1e-6)
        assert rec.mid == pytest.approx(1.0, rel=1e-12)
        assert 1 / 8 <= rec.mid / rec.lhs <= 8

    def test_zero(self):
        assert iteration_check(Lebesgue(1), 1, 1, 4, StepFunction()) == (0.0, 0.0, 0.0)

    def test_needs_admissible_orders(self):
        with pytest.raises(InadmissibleError):
            iteration_check(Lebesgue(1), 2, 2, 4, CHI)

    @pytest.mark.parametrize("X", [Lebesgue(1), Lebesgue(1.2), Lorentz(1.5, 1)])
    def test_sandwich(self, X, rng):
        worst = []
        for k, l, n in [(1, 2, 5), (2, 1, 5), (1, 1, 4)]:
            for _ in range(6):
                f = StepFunction(zip(rng.uniform(0.05, 3, 4), rng.uniform(0.1, 5, 4)))
                lhs, mid, rhs = iteration_check(X, k, l, n, f)
                assert mid <= iteration_constant_upper(l, n) * lhs * (1 + 1e-9)
                assert mid <= iteration_constant_upper(k, n) * rhs * (1 + 1e-9)
                worst.append(max(lhs, rhs) / mid)
        assert max(worst) <= 16

    def test_two_pieces_n5(self):
        f = StepFunction([(0.5, 4.0), (2.0, 1.0)])
        lhs, mid, rhs = iteration_check(Lebesgue(1), 1, 2, 5, f)
        assert mid <= iteration_constant_upper(2, 5) * lhs
        assert mid <= iteration_constant_upper(1, 5) * rhs
        assert max(lhs, rhs) <= 16 * mid


class TestVerdict:
    def test_rules(self):
        assert verdict_of([]) == "bounded"
        assert verdict_of([0, 0, 0]) == "bounded"
        assert verdict_of([1.0, 1.02, 1.03]) == "bounded"
        assert verdict_of([1.0, 1.2, 1.5, 2.0]) == "unbounded_trend"
        assert verdict_of([1.0, 2.0, 1.5, 3.0]) == "inconclusive"
        assert verdict_of([1.0, INF]) == "unbounded_trend"


class TestVerifyReduction:
    def test_zero_family(self):
        rep = verify_reduction(Lebesgue(2), Lorentz(6, 2), 1, 3, [StepFunction()])
        assert rep.verdict == "bounded"
        assert rep.records[0].ratio == 0.0

    def test_peetre_sharpness(self):
        fam = sharpness_family(0.75, 2)
        assert [m.id for m in fam][0] == "eps=1e-02"
        good = verify_reduction(Lebesgue(2), Lorentz(6, 2), 1, 3, fam)
        bad = verify_reduction(Lebesgue(2), Lorentz(6, 1), 1, 3, fam)
        assert good.verdict == "bounded"
        assert bad.verdict == "unbounded_trend"
        r = [x.ratio for x in bad.records]
        assert r[-1] >= 1.3 * r[0]
        assert good.dual_consistent
        assert good.best_constant <= 4 * good.dual_best_constant
        assert good.dual_best_constant <= 4 * good.best_constant

    def test_rhs_against_quad(self):
        fam = sharpness_family(0.75, 2, eps=(1e-3,))
        rep = verify_reduction(Lebesgue(2), Lorentz(6, 2), 1, 3, fam)
        f = lambda s: s ** -0.5 * (1 - math.log(s)) ** -0.75
        rhs = math.sqrt(quad(lambda s: f(s) ** 2, 1e-3, 1, limit=200)[0])
        assert rep.records[0].rhs == pytest.approx(rhs, rel=1e-8)
        H = lambda t: quad(lambda s: f(s) * s ** (-2 / 3), max(t, 1e-3), 1, limit=200)[0]
        w = lambda t: (t ** (1 / 6 - 1 / 2) * H(t)) ** 2
        lhs = math.sqrt(quad(w, 0, 1e-3, limit=200)[0] + quad(w, 1e-3, 1, limit=200)[0])
        assert rep.records[0].lhs == pytest.approx(lhs, rel=1e-6)

    def test_report_round_trip(self):
        rep = verify_reduction(Lebesgue(2), Lorentz(6, 2), 1, 3,
                               sharpness_family(0.75, 2, eps=(1e-2, 1e-3)))
        again = VerificationReport.from_dict(rep.to_dict())
        assert again == rep
