"""Acceptance suite: each test checks one criterion at its stated tolerance and budget.

Every test prints a single PASS/FAIL line (also collected in the terminal
summary).  Criteria that are not met are marked ``xfail(strict=True)``;
they still evaluate the criterion as stated and fail on it.
"""

import math
import time

import numpy as np
import pytest
from click.testing import CliRunner

from conftest import (POWER_LOG_PROFILES, acceptance_line, dictionary, random_step,
                      reduction_sweep, sweep_points)
from rispace import cli
from rispace import optimal_orlicz as O
from rispace import young as Y
from rispace.numerics import conjugate_exponent
from rispace.optimal_ri import (NoDomain, NoTarget, domain_condition, iteration_check,
                                iteration_constant_upper, optimal_domain_lz, optimal_target_lz,
                                sharpness_family, sigma_m, t_alpha_bounded_on_associate,
                                target_condition, verify_reduction)
from rispace.rearrange import (StepFunction, arranged_pairing, combine,
                               decreasing_rearrangement, rearranged_pairing)
from rispace.spaces import (Lebesgue, Lorentz, LorentzZygmund, OrliczLorentz,
                            associate_norm_bruteforce, fundamental_function, norm)


def finish(k, title, checks, detail, t0, budget):
    elapsed = time.perf_counter() - t0
    checks = dict(checks, within_budget=elapsed < budget)
    ok = all(checks.values())
    failed = [name for name, v in checks.items() if not v]
    acceptance_line(k, title, ok, detail + ("" if ok else f"; failed: {', '.join(failed)}"),
                    elapsed)
    assert ok, failed


def log_slopes(A, lo, hi, k=400):
    t = np.geomspace(lo, hi, k)
    return np.diff(np.log(A(t))) / np.diff(np.log(t))


def test_criterion_01_rearrangement_exactness():
    t0 = time.perf_counter()
    rng = np.random.default_rng(1)
    exact = 0
    for _ in range(1000):
        f = random_step(rng, k_max=32)
        oracle = tuple(sorted(((m, v) for m, v in f.pieces if v > 0), key=lambda p: -p[1]))
        exact += decreasing_rearrangement(f).pieces == oracle
    hl = sub = 0
    for _ in range(200):
        f, g = random_step(rng), random_step(rng)
        hl += arranged_pairing(f, g) > rearranged_pairing(f, g) * (1 + 1e-12) + 1e-12
        t = rng.uniform(1e-3, 2 * max(f.total_measure, g.total_measure), size=50)
        lhs = combine(f, g).f_star_star(t)
        sub += np.any(lhs > (f.f_star_star(t) + g.f_star_star(t)) * (1 + 1e-12) + 1e-12)
    finish(1, "rearrangement exactness",
           {"exact": exact == 1000, "hardy_littlewood": hl == 0, "subadditive": sub == 0},
           f"{exact}/1000 exact, {hl} HL and {sub} f** violations", t0, 1.0)


def test_criterion_02_duality():
    t0 = time.perf_counter()
    rng = np.random.default_rng(2)
    worst_rel, worst_over = 0.0, -math.inf
    for p in (1.5, 2.0, 3.0):
        pp = conjugate_exponent(p)
        for _ in range(50):
            g = random_step(rng)
            opt = StepFunction((m, v ** (pp - 1)) for m, v in g.pieces)
            dic = [random_step(rng) for _ in range(3)] + [opt]
            val = associate_norm_bruteforce(Lebesgue(p), g, dic).value
            # ||g||_{p'} from the pieces
            exact = sum(m * v ** pp for m, v in g.pieces) ** (1 / pp)
            worst_rel = max(worst_rel, abs(val - exact) / exact)
            worst_over = max(worst_over, (val - exact) / exact)
    finish(2, "duality", {"rel_1e-6": worst_rel <= 1e-6, "never_above": worst_over <= 1e-9},
           f"max rel error {worst_rel:.2e}, max excess {worst_over:.2e}", t0, 5.0)


def test_criterion_03_peetre_target():
    t0 = time.perf_counter()
    target = optimal_target_lz(2, 2, [0, 0], 1, 3)
    fam = sharpness_family(0.75, 2)
    good = verify_reduction(Lebesgue(2), Lorentz(6, 2), 1, 3, fam)
    bad = verify_reduction(Lebesgue(2), Lorentz(6, 1), 1, 3, fam)
    r = [x.ratio for x in bad.records]
    growth = r[-1] / r[0]
    finish(3, "Peetre optimal target",
           {"target": target == Lorentz(6, 2), "good_bounded": good.verdict == "bounded",
            "bad_unbounded": bad.verdict == "unbounded_trend", "growth": growth >= 1.3},
           f"target {target.spec()}, verdicts {good.verdict}/{bad.verdict}, "
           f"L^(6,1) ratio growth {growth:.3f}", t0, 30.0)


def test_criterion_04_sigma_closed_forms():
    t0 = time.perf_counter()
    chi = StepFunction.indicator(1.0)
    s1 = sigma_m(Lebesgue(1), 1, 3, chi)
    s2 = sigma_m(Lebesgue(2), 1, 3, chi)
    e1, e2 = abs(s1 - 1.0), abs(s2 - math.sqrt(18 / 5))
    finish(4, "sigma_m closed forms", {"L1": e1 <= 1e-6, "L2": e2 <= 1e-6},
           f"sigma_1(L1) = {s1:.12f}, sigma_1(L2) = {s2:.12f} (errors {e1:.1e}, {e2:.1e})",
           t0, 1.0)


@pytest.mark.xfail(strict=True, reason="log A_m(t)/t^1.5 spreads by 9% over [10, 1e4]")
def test_criterion_05_orlicz_target_slopes():
    t0 = time.perf_counter()
    sl = log_slopes(O.construct_A_m(Y.power(2), 1, 3), 1e-3, 1e3)
    slope_err = float(np.max(np.abs(sl - 6)))
    A_m = O.construct_A_m(Y.power_log(2, 0, 3, 0), 1, 3)
    t = np.geomspace(10, 1e4, 200)
    q = A_m.log_evaluate(t) / t ** 1.5
    spread = float(q.max() / q.min() - 1)
    finish(5, "Orlicz target slopes", {"slope_6": slope_err <= 1e-2, "exp_class_5pct": spread <= 0.05},
           f"max |slope - 6| = {slope_err:.1e}; log A_m/t^1.5 in [{q.min():.4f}, {q.max():.4f}], "
           f"spread {100 * spread:.1f}%", t0, 10.0)


def test_criterion_06_orlicz_domain_slopes():
    t0 = time.perf_counter()
    sl = log_slopes(O.construct_B_m(Y.power(6), 1, 3), 1e-3, 1e3)
    slope_err = float(np.max(np.abs(sl - 2)))
    dom = O.optimal_orlicz_domain(Y.power(6), 1, 3)
    expo = O.optimal_orlicz_domain(Y.exponential(1.0), 1, 3)
    finish(6, "Orlicz domain slopes",
           {"slope_2": slope_err <= 1e-2, "optimal": isinstance(dom, O.Optimal),
            "index_2": isinstance(dom, O.Optimal) and abs(dom.upper_index - 2) <= 1e-2,
            "exp_class": isinstance(expo, O.NoOptimalButNonempty)},
           f"max |slope - 2| = {slope_err:.1e}, {dom.kind} with I = {dom.upper_index:.6f}, "
           f"exponential class {expo.kind}", t0, 10.0)


def test_criterion_07_boyd_and_conjugates():
    t0 = time.perf_counter()
    boyd_err = 0.0
    for p in (1, 1.5, 2, 3, 6):
        b = Y.boyd_indices(Y.power(p))
        boyd_err = max(boyd_err, abs(b.lower - p), abs(b.upper - p))
    consts = []
    for args in POWER_LOG_PROFILES:
        A = Y.power_log(*args)
        d = Y.equivalent(Y.conjugate(Y.conjugate(A)), A, "global")
        consts.append(d.c if d.holds else math.inf)
    C = Y.conjugate(Y.linf_profile())
    pts = C.grid.points
    linf_err = float(np.max(np.abs(C(pts) - pts) / pts))
    finish(7, "Boyd and conjugate calculus",
           {"boyd": boyd_err <= 1e-2, "involution": max(consts) <= 4, "linf": linf_err <= 1e-8},
           f"max Boyd error {boyd_err:.1e}, max involution constant {max(consts):g} on "
           f"{len(consts)} profiles, L^inf conjugate error {linf_err:.1e}", t0, 10.0)


def test_criterion_08_em_coherence():
    t0 = time.perf_counter()
    X = O.optimal_orlicz_target(Y.power(2), 1, 3).X_m_spec
    L = Lorentz(6, 2)
    r = np.array([norm(X, f).value / norm(L, f).value for f in dictionary()])
    spread = float(max(r.max(), 1 / r.min()))
    a, b = 1e-3, 1e3
    slope = lambda sp: math.log(fundamental_function(sp, b) / fundamental_function(sp, a)) / \
        math.log(b / a)
    ds = abs(slope(X) - slope(L))
    finish(8, "E_m coherence",
           {"orlicz_lorentz": isinstance(X, OrliczLorentz) and X.p == 3 and X.q == 1,
            "factor_10": bool(np.all((r <= 10) & (r >= 0.1))), "slopes": ds <= 1e-2},
           f"norm ratios in [{r.min():.6f}, {r.max():.6f}] over {r.size} functions "
           f"(worst factor {spread:.3f}), fundamental slope gap {ds:.1e}", t0, 30.0)


def test_criterion_09_condition_tables():
    t0 = time.perf_counter()
    pts = sweep_points()
    bad_t = bad_d = bad_conv = bad_ta = 0
    for p, q, (a0, ai) in pts:
        X = LorentzZygmund(p, q, (a0, ai))
        t_none = isinstance(optimal_target_lz(p, q, (a0, ai), 1, 3), NoTarget)
        d_none = isinstance(optimal_domain_lz(p, q, (a0, ai), 1, 3), NoDomain)
        bad_t += t_none == target_condition(X, 1, 3)
        bad_d += d_none == domain_condition(X, 1, 3)
        # converse parameter sets for n = 3, m = 1 (n/m = 3, n/(n-m) = 3/2)
        want_t = (p == 3 and q == 1 and ai < 0) or (p == 3 and q > 1 and ai <= 1 - 1 / q) or p > 3
        want_d = (p == 1.5 and ai > 0) or p < 1.5
        bad_conv += (t_none != want_t) + (d_none != want_d)
        want = (p == 1.5 and q == 1 and a0 >= 0 and ai <= 0) or p > 1.5
        bad_ta += t_alpha_bounded_on_associate(p, q, (a0, ai), 1 / 3) != want
    finish(9, "condition checkers and tables",
           {"sweep_60": len(pts) == 60, "target": bad_t == 0, "domain": bad_d == 0,
            "converse": bad_conv == 0, "t_alpha": bad_ta == 0},
           f"{len(pts)} points; mismatches target {bad_t}, domain {bad_d}, converse {bad_conv}, "
           f"T_alpha {bad_ta}", t0, 5.0)


def test_criterion_10_iteration_principle():
    t0 = time.perf_counter()
    rng = np.random.default_rng(10)
    X = Lebesgue(1.2)
    worst, violations = 0.0, 0
    for k, l, n in [(1, 1, 4), (1, 2, 5), (2, 1, 5)]:
        for _ in range(100):
            f = StepFunction(zip(rng.uniform(0.05, 3, 4), rng.uniform(0.1, 5, 4)))
            lhs, mid, rhs = iteration_check(X, k, l, n, f)
            violations += mid > iteration_constant_upper(l, n) * lhs * (1 + 1e-9)
            violations += mid > iteration_constant_upper(k, n) * rhs * (1 + 1e-9)
            worst = max(worst, lhs / mid, rhs / mid, mid / lhs, mid / rhs)
    finish(10, "iteration principle", {"constant_16": worst <= 16, "no_violation": violations == 0},
           f"max sandwich constant {worst:.3f} over 300 records, {violations} violations", t0, 20.0)


@pytest.mark.xfail(strict=True, reason="statement (4) misjudges one log-rate pair")
def test_criterion_11_orlicz_reduction_coherence():
    t0 = time.perf_counter()
    sweep = reduction_sweep()
    agree, wrong = 0, []
    for i, (A, B, expected) in enumerate(sweep):
        r = O.orlicz_reduction_check(A, B, 1, 3)
        ok = r.statement2 == r.statement3 == r.statement4 == expected
        agree += ok
        if not ok:
            wrong.append(f"#{i} ({r.statement2}, {r.statement3}, {r.statement4})")
    both = {e for *_, e in sweep} == {True, False}
    finish(11, "Orlicz reduction coherence", {"all_agree": agree == len(sweep), "both_verdicts": both},
           f"{agree}/{len(sweep)} pairs agree" + (f", disagreeing {'; '.join(wrong)}" if wrong else ""),
           t0, 60.0)


CLI_RUNS = [
    ["norm", "--space", "lorentz:p=2,q=1", "--f", '{"pieces":[[1,2],[3,1]]}'],
    ["rearrange", "--f", '{"pieces":[[1,1],[3,2]]}', "--t", "2"],
    ["conjugate", "--A", "young:p0=2,a0=0,pinf=3,ainf=1"],
    ["boyd", "--A", "young:p0=2,pinf=3"],
    ["optimal-target", "--space", "lz:p=2,q=2,a0=0,ainf=0", "--m", "1", "--n", "3"],
    ["optimal-domain", "--space", "lorentz:p=6,q=2", "--m", "1", "--n", "3"],
    ["orlicz-target", "--A", "young:p0=2,a0=0,pinf=2,ainf=0", "--m", "1", "--n", "3"],
    ["orlicz-domain", "--B", "power:p=6", "--m", "1", "--n", "3"],
    ["verify-reduction", "--X", "lebesgue:p=2", "--Y", "lorentz:p=6,q=2", "--m", "1", "--n", "3",
     "--family", "steps(k=6)", "--seed", "7"],
    ["verify-reduction", "--X", "lebesgue:p=2", "--Y", "lorentz:p=6,q=2", "--m", "1", "--n", "3",
     "--family", "sharpness(0.75,2)", "--seed", "7", "--format", "csv"],
    ["orlicz-reduce", "--A", "power:p=2", "--B", "power:p=6", "--m", "1", "--n", "3",
     "--seed", "7"],
]


def test_criterion_12_reproducibility(tmp_path):
    t0 = time.perf_counter()
    runner = CliRunner()
    same, codes = 0, set()
    for i, args in enumerate(CLI_RUNS):
        outs = []
        for rep in range(2):
            path = tmp_path / f"run{i}-{rep}"
            res = runner.invoke(cli.main, args + ["--out", str(path)], catch_exceptions=False)
            codes.add(res.exit_code)
            outs.append(path.read_bytes())
        same += outs[0] == outs[1]
    finish(12, "reproducibility", {"identical": same == len(CLI_RUNS), "exit_0": codes == {0}},
           f"{same}/{len(CLI_RUNS)} subcommand runs byte-identical", t0, math.inf)
