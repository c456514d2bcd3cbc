"""Optimal Orlicz targets and domains for the Sobolev-type reduction.

Order ``m`` and dimension ``n`` enter through ``gam = m/(n-m)``,
``P = n/(n-m)`` and ``N = n/m``.  Every construction works in log
coordinates on a working grid that extends the input's grid by
``EXT_DECADES`` on each side; beyond it the power-log tail models are
used in closed form.  Tail exponents of the results are derived from the
input's exponents, not fitted, except where the input itself has no
power-log tail (capped or super-polynomial functions).
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import young as _young
from .errors import InadmissibleError, NumericalError, RispaceError
from .numerics import LogGrid, _exp_log_integral, find_root_decreasing, log_cumulative_integral
from .optimal_ri import GROWTH_FACTOR, PLATEAU_FACTOR, FamilyMember, Record, verdict_of
from .profiles import hardy_profile
from .rearrange import StepFunction
from .spaces import Intersection, Lebesgue, Orlicz, OrliczLorentz, _modular, as_profile
from .young import YoungFunction, _close, _ell_log, _solve_tail, _tail_allows, _tail_witness

EXT_DECADES = 40.0
WORK_PER_DECADE = 512
INDEX_AMBIGUITY = 0.05
FIT_DECADES = 2.0
DYADIC_MAX_K = 20

INF = math.inf


class NoTargetAtAll(RispaceError):
    """``int_0 (s/A(s))^(m/(n-m)) ds`` diverges: no r.i. target exists."""


class DomainConditionFails(RispaceError):
    """``B(t) / t^(n/(n-m))`` is unbounded near 0: no Orlicz domain exists."""


def _orders(m, n):
    if not (isinstance(m, (int, np.integer)) and isinstance(n, (int, np.integer)) and 0 < m < n):
        raise InadmissibleError(f"need integers 0 < m < n, got m={m}, n={n}")
    return m / (n - m), n / (n - m), n / m


def _work_grid(grid: LogGrid) -> np.ndarray:
    lo = math.log(grid.t_min) - EXT_DECADES * math.log(10.0)
    hi = math.log(grid.t_max) + EXT_DECADES * math.log(10.0)
    npts = int(round((hi - lo) / math.log(10.0) * WORK_PER_DECADE)) + 1
    return np.linspace(lo, hi, npts)


def _strict(x: np.ndarray, *ys):
    """Restrict to finite, strictly increasing ``x`` (first occurrence kept)."""
    keep = np.isfinite(x)
    for y in ys:
        keep &= np.isfinite(y)
    idx = np.flatnonzero(keep)
    if idx.size == 0:
        return (x[idx],) + tuple(y[idx] for y in ys)
    xs = x[idx]
    run = np.maximum.accumulate(xs)
    first = np.concatenate(([True], xs[1:] > run[:-1]))
    idx = idx[first]
    return (x[idx],) + tuple(y[idx] for y in ys)


def _fit_log_exponent(u, la, p_minus_1, side):
    """``ell`` exponent of ``a ~ t^(p-1) ell^alpha`` from the last decades of a table."""
    width = FIT_DECADES * math.log(10.0)
    if side == "zero":
        i, j = 0, int(np.searchsorted(u, u[0] + width))
    else:
        i, j = int(np.searchsorted(u, u[-1] - width)), u.size - 1
    if not (np.isfinite(la[i]) and np.isfinite(la[j])):
        return 0.0
    dl = _ell_log(u[j]) - _ell_log(u[i])
    return float((la[j] - la[i] - p_minus_1 * (u[j] - u[i])) / dl)


# ---------------------------------------------------------------------------
# conditions


def integral_near_zero_condition(A: YoungFunction, m: int, n: int) -> bool:
    """Whether ``int_0 (s/A(s))^(m/(n-m)) ds`` converges (tail exponents at 0)."""
    gam, _, _ = _orders(m, n)
    if math.isinf(A.p0):
        return False
    k = gam * (A.p0 - 1.0)
    if _close(k, 1.0):
        return gam * A.alpha0 > 1.0 + 1e-12
    return k < 1.0


def integral_at_infinity(A: YoungFunction, m: int, n: int) -> bool:
    """Whether ``int^inf (s/A(s))^(m/(n-m)) ds`` converges."""
    gam, _, _ = _orders(m, n)
    if A.cap is not None or math.isinf(A.pinf):
        return True
    k = gam * (A.pinf - 1.0)
    if _close(k, 1.0):
        return gam * A.alphainf > 1.0 + 1e-12
    return k > 1.0


def orlicz_domain_condition(B: YoungFunction, m: int, n: int) -> bool:
    """Whether ``sup_{0<t<1} B(t) / t^(n/(n-m))`` is finite (tail exponents at 0)."""
    _, P, _ = _orders(m, n)
    if math.isinf(B.p0):
        return True
    if _close(B.p0, P):
        return B.alpha0 <= 1e-12
    return B.p0 > P


# ---------------------------------------------------------------------------
# H_m and its inverse


@dataclass(frozen=True, eq=False)
class _HardyTable:
    """``J(t) = int_0^t (s/A(s))^gam ds`` in log form, so that ``H_m = J^(1/P)``."""

    u: np.ndarray
    log_J: np.ndarray
    k0: float
    lam0: float
    kinf: float
    binf: float
    log_c: float
    log_J_inf: float
    finite_tail: bool

    def _log_T(self, w):
        """Log of the right-tail integral over ``(u_end, u_end + w)`` divided by ``c``."""
        w = np.asarray(w, dtype=float)
        le = 1.0 + abs(self.u[-1])
        lr = np.log1p(w / le)
        k, b = self.kinf, self.binf
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            if k == 0:
                if b == -1:
                    return math.log(le) + np.log(lr)
                e = (b + 1.0) * lr
                return math.log(le) + np.log(np.expm1(e) / (b + 1.0))
            if k > 0:
                x = k * w
                return x + np.log(-np.expm1(-x)) - math.log(k) + b * lr
            tinf = self.log_J_inf_rel
            return tinf + np.log(-np.expm1(k * w))

    @functools.cached_property
    def log_J_inf_rel(self) -> float:
        return math.log(_exp_log_integral(-self.kinf, self.binf, self.u[-1]))

    def log_J_at(self, uu):
        uu = np.atleast_1d(np.asarray(uu, dtype=float))
        u, lJ = self.u, self.log_J
        out = np.interp(uu, u, lJ)
        lo, hi = uu < u[0], uu > u[-1]
        if lo.any():
            out[lo] = lJ[0] + self.k0 * (uu[lo] - u[0]) + self.lam0 * (
                _ell_log(uu[lo]) - _ell_log(u[0]))
        if hi.any():
            if self.log_c == -np.inf:
                out[hi] = lJ[-1]
            else:
                out[hi] = np.logaddexp(lJ[-1], self.log_c + self._log_T(uu[hi] - u[-1]))
        return out

    def log_J_inverse(self, v):
        """``u`` with ``log J(u) = v``; ``+inf`` at or beyond ``log J(inf)``."""
        v = np.atleast_1d(np.asarray(v, dtype=float))
        x, y = _strict(self.log_J, self.u)
        out = np.interp(v, x, y)
        lo, hi = v < x[0], v > x[-1]
        if lo.any():
            out[lo] = _solve_tail(v[lo] - x[0], self.k0, self.lam0, y[0], -1)
        if hi.any():
            res = np.full(hi.sum(), np.inf)
            vv = v[hi]
            reach = vv < self.log_J_inf if self.finite_tail else np.ones(vv.size, bool)
            if self.log_c == -np.inf:
                reach[:] = False
            if reach.any():
                target = vv[reach]
                # bisection on z = log w
                zl = np.full(target.size, -60.0)
                zh = np.full(target.size, 700.0)
                for _ in range(200):
                    zm = 0.5 * (zl + zh)
                    val = np.logaddexp(self.log_J[-1], self.log_c + self._log_T(np.exp(zm)))
                    up = ~(val < target)
                    zh = np.where(up, zm, zh)
                    zl = np.where(up, zl, zm)
                w = np.exp(0.5 * (zl + zh))
                res[reach] = np.where(zh >= 699.0, np.inf, self.u[-1] + w)
            out[hi] = res
        return out


@functools.lru_cache(maxsize=64)
def _hardy_table(A: YoungFunction, m: int, n: int) -> _HardyTable:
    if not integral_near_zero_condition(A, m, n):
        raise NoTargetAtAll("int_0 (s/A(s))^(m/(n-m)) ds diverges")
    gam, _, _ = _orders(m, n)
    u = _work_grid(A.grid)
    lA = A._log_A_u(u)
    with np.errstate(invalid="ignore"):
        g = gam * (u - lA) + u
    g = np.where(np.isposinf(lA), -np.inf, g)
    k0 = 1.0 + gam * (1.0 - A.p0)
    b0 = -gam * A.alpha0
    if _close(k0, 0.0):
        k0 = 0.0
    log_init = g[0] + math.log(_exp_log_integral(k0, b0, -u[0]))
    log_J = log_cumulative_integral(g, u, log_init)
    lam0 = b0 if k0 > 0 else b0 + 1.0
    if A.cap is not None or math.isinf(A.pinf) or not np.isfinite(g[-1]):
        return _HardyTable(u, log_J, k0, lam0, 0.0, 0.0, -np.inf, float(log_J[-1]), True)
    kinf = 1.0 + gam * (1.0 - A.pinf)
    binf = -gam * A.alphainf
    if _close(kinf, 0.0):
        kinf = 0.0
    finite = kinf < 0 or (kinf == 0 and binf < -1)
    tab = _HardyTable(u, log_J, k0, lam0, kinf, binf, float(g[-1]), INF, finite)
    if finite:
        object.__setattr__(tab, "log_J_inf", float(np.logaddexp(
            log_J[-1], g[-1] + tab.log_J_inf_rel)))
    return tab


def H_m(A: YoungFunction, m: int, n: int, t):
    """``(int_0^t (s/A(s))^(m/(n-m)) ds)^((n-m)/n)``."""
    _, P, _ = _orders(m, n)
    tab = _hardy_table(A, m, n)
    t_arr = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore"):
        uu = np.log(np.where(t_arr > 0, t_arr, 1.0))
    val = np.exp(tab.log_J_at(uu.ravel()) / P).reshape(t_arr.shape)
    out = np.where(t_arr > 0, val, 0.0)
    return out if out.ndim else float(out)


def H_inf(A: YoungFunction, m: int, n: int) -> float:
    """``lim_{t -> inf} H_m(t)``, finite exactly when the integral at infinity converges."""
    _, P, _ = _orders(m, n)
    tab = _hardy_table(A, m, n)
    return math.exp(tab.log_J_inf / P) if tab.finite_tail else INF


def _log_D_u(A: YoungFunction, m: int, n: int, ut):
    """``log D_m(exp(ut))`` (vectorized)."""
    _, P, _ = _orders(m, n)
    tab = _hardy_table(A, m, n)
    ut = np.atleast_1d(np.asarray(ut, dtype=float))
    us = tab.log_J_inverse(P * ut)
    fin = np.isfinite(us)
    out = np.full(ut.shape, np.inf)
    if fin.any():
        out[fin] = P * (ut[fin] + A._log_A_u(us[fin]) - us[fin])
    return out


def D_m(A: YoungFunction, m: int, n: int, t):
    """``(t A(s) / s)^(n/(n-m))`` with ``s = H_m^{-1}(t)``; ``inf`` from ``H^inf`` on."""
    t_arr = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore"):
        uu = np.log(np.where(t_arr > 0, t_arr, 1.0))
    with np.errstate(over="ignore"):
        val = np.exp(_log_D_u(A, m, n, uu.ravel())).reshape(t_arr.shape)
    out = np.where(t_arr > 0, val, 0.0)
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# A_m


def _A_m_exponents(A: YoungFunction, m: int, n: int):
    """Tail exponents ``(p0, a0, pinf, ainf, capped)`` of ``A_m``."""
    _, _, N = _orders(m, n)
    if _close(A.p0, N):
        p0, a0 = INF, 0.0
    else:
        d = n - m * A.p0
        p0, a0 = n * A.p0 / d, n * A.alpha0 / d
    if integral_at_infinity(A, m, n):
        return p0, a0, INF, 0.0, True
    if A.pinf < N and not _close(A.pinf, N):
        d = n - m * A.pinf
        return p0, a0, n * A.pinf / d, n * A.alphainf / d, False
    return p0, a0, INF, 0.0, False


def _A_m_tables(A: YoungFunction, m: int, n: int):
    ut = A.u
    lD = _log_D_u(A, m, n, ut)
    return ut, lD, lD - ut


def construct_A_m(A: YoungFunction, m: int, n: int) -> YoungFunction:
    """Optimal Orlicz target Young function ``A_m(t) = int_0^t D_m(s)/s ds``.

    Raises
    ------
    NoTargetAtAll
        If the integral near zero diverges.
    """
    la = _A_m_tables(A, m, n)[2]
    p0, a0, pinf, ainf, capped = _A_m_exponents(A, m, n)
    cap = H_inf(A, m, n) if capped else None
    return YoungFunction(A.grid, la, p0, a0, pinf, ainf, cap,
                         f"A_m[{A.describe()};m={m},n={n}]")


def D_m_profile(A: YoungFunction, m: int, n: int) -> YoungFunction:
    """``D_m`` on the grid of ``A``, carried by a YoungFunction for comparisons."""
    _, lD, la = _A_m_tables(A, m, n)
    p0, a0, pinf, ainf, capped = _A_m_exponents(A, m, n)
    cap = H_inf(A, m, n) if capped else None
    return YoungFunction(A.grid, la, p0, a0, pinf, ainf, cap,
                         f"D_m[{A.describe()};m={m},n={n}]", log_A_grid=lD)


# ---------------------------------------------------------------------------
# E_m


def _E_m_zero(A: YoungFunction, N: float):
    if _close(A.p0, N):
        return N, A.alpha0 - N
    return A.p0, A.alpha0


def _E_m_inf(A: YoungFunction, gam: float, P: float, N: float):
    """Exponents of ``E_m`` at infinity, or None when they must be fitted."""
    if A.cap is not None:
        return 1.0, 0.0
    if math.isinf(A.pinf):
        return None
    p, al = A.pinf, A.alphainf
    if p < N and not _close(p, N):
        return p, al
    if _close(p, N):
        x = gam * al
        if _close(x, 1.0):
            # log-log correction: the nearest admissible power-log tail
            return N, -1.0 - 1e-6
        if x < 1.0:
            return N, al - N
        return N, al * (1.0 - P) + 0.0
    # "+ 0.0" normalizes -0.0 from a zero log exponent
    rho = gam * (P * (p - 1.0) - 1.0)
    return 1.0 + (p - 1.0) / rho, al * (1.0 - gam * P * (p - 1.0) / rho) + 0.0


def construct_E_m(A: YoungFunction, m: int, n: int) -> YoungFunction:
    """Young function ``E_m`` of the optimal Orlicz-Lorentz target.

    With ``I(s) = int_0^s a^(-gam)``, ``K = I^(-N) a^(-P)`` and
    ``F(x) = (int_x^inf K)^(-gam)``, one has ``e_m^{-1} = F o a^{-1}``,
    so ``e_m(F(x)) = a(x)``: the derivative is tabulated along the curve
    ``x -> (F(x), a(x))`` and interpolated onto the grid of ``A``.

    Raises
    ------
    NoTargetAtAll
        If the integral near zero diverges.
    NumericalError
        If the result fails the tail condition with ``p = n/m``.
    """
    gam, P, N = _orders(m, n)
    if not integral_near_zero_condition(A, m, n):
        raise NoTargetAtAll("int_0 (s/A(s))^(m/(n-m)) ds diverges")
    u = _work_grid(A.grid)
    la = A.log_derivative_u(u)
    with np.errstate(invalid="ignore"):
        gI = np.where(np.isposinf(la), -np.inf, -gam * la + u)
    k0 = 1.0 + gam * (1.0 - A.p0)
    if _close(k0, 0.0):
        k0 = 0.0
    log_I0 = gI[0] + math.log(_exp_log_integral(k0, -gam * A.alpha0, -u[0]))
    log_I = log_cumulative_integral(gI, u, log_I0)
    with np.errstate(invalid="ignore"):
        gK = np.where(np.isposinf(la), -np.inf, -N * log_I - P * la + u)
    # K s decays at least like s^(1-N) at the far end
    width = math.log(10.0)
    j = int(np.searchsorted(u, u[-1] - width))
    log_rem = -np.inf
    if np.isfinite(gK[-1]) and np.isfinite(gK[j]):
        k = -(gK[-1] - gK[j]) / (u[-1] - u[j])
        if k <= 0:
            raise NumericalError("tail of the E_m integrand does not decay")
        log_rem = gK[-1] - math.log(k)
    log_Q = log_cumulative_integral(gK[::-1], -u[::-1], log_rem)[::-1]
    with np.errstate(invalid="ignore"):
        log_F = np.where(np.isneginf(log_Q), np.inf, -gam * log_Q)
    x, y = _strict(log_F, la)
    out_u = A.u
    log_e = np.interp(out_u, x, y)
    p0E, a0E = _E_m_zero(A, N)
    infE = _E_m_inf(A, gam, P, N)
    lo, hi = out_u < x[0], out_u > x[-1]
    if lo.any():
        log_e[lo] = y[0] + (p0E - 1.0) * (out_u[lo] - x[0]) + a0E * (
            _ell_log(out_u[lo]) - _ell_log(x[0]))
    if infE is None:
        pinfE = 1.0 + (log_e[-1] - log_e[np.searchsorted(out_u, out_u[-1] - FIT_DECADES * width)]) / (
            FIT_DECADES * width)
        infE = (float(pinfE), 0.0)
    if hi.any():
        log_e[hi] = y[-1] + (infE[0] - 1.0) * (out_u[hi] - x[-1]) + infE[1] * (
            _ell_log(out_u[hi]) - _ell_log(x[-1]))
    E = YoungFunction(A.grid, log_e, p0E, a0E, infE[0], infE[1], None,
                      f"E_m[{A.describe()};m={m},n={n}]")
    if not _young.orlicz_lorentz_admissible(N, 1.0, E):
        raise NumericalError("E_m violates int^inf E_m(t) t^(-1-n/m) dt < inf")
    return E


@dataclass(frozen=True)
class OrliczTargetResult:
    """Optimal Orlicz target ``L^{A_m}`` and optimal r.i. target ``X_m``."""

    A_m: YoungFunction = field(compare=False)
    integral_at_infinity_converges: bool
    X_m_spec: object = field(compare=False)
    E_m: YoungFunction = field(compare=False)

    @property
    def target(self) -> Orlicz:
        return Orlicz(self.A_m)

    @property
    def convexity_repair_applied(self) -> bool:
        return bool(self.E_m.repaired or self.A_m.repaired)

    def to_dict(self) -> dict:
        return {
            "A_m": self.A_m.describe(),
            "A_m_tails": [self.A_m.p0, self.A_m.alpha0, self.A_m.pinf, self.A_m.alphainf],
            "A_m_cap": self.A_m.cap,
            "E_m_tails": [self.E_m.p0, self.E_m.alpha0, self.E_m.pinf, self.E_m.alphainf],
            "integral_at_infinity_converges": self.integral_at_infinity_converges,
            "X_m": self.X_m_spec.spec(),
            "convexity_repair_applied": self.convexity_repair_applied,
        }


def optimal_orlicz_target(A: YoungFunction, m: int, n: int) -> OrliczTargetResult:
    """Optimal Orlicz and r.i. targets of the Orlicz domain ``L^A``.

    Raises
    ------
    NoTargetAtAll
        If ``int_0 (s/A(s))^(m/(n-m)) ds`` diverges.
    """
    _, _, N = _orders(m, n)
    A_m = construct_A_m(A, m, n)
    E_m = construct_E_m(A, m, n)
    conv = integral_at_infinity(A, m, n)
    X = OrliczLorentz(N, 1.0, E_m, label=E_m.name)
    if conv:
        X = Intersection((X, Lebesgue(INF)))
    return OrliczTargetResult(A_m, conv, X, E_m)


# ---------------------------------------------------------------------------
# G_m and B_m


@functools.lru_cache(maxsize=64)
def _g_table(B: YoungFunction, m: int, n: int):
    """``(v, log G_m(exp(v)))`` on the working grid of ``B``."""
    _, P, _ = _orders(m, n)
    v = _work_grid(B.grid)
    psi = B._log_inverse_v(v) - v / P
    log_G = v + np.minimum.accumulate(psi)
    return v, log_G


def G_m(B: YoungFunction, m: int, n: int, t):
    """``t inf_{0<s<=t} B^{-1}(s) s^((m-n)/n)``."""
    if not orlicz_domain_condition(B, m, n):
        raise DomainConditionFails("B(t)/t^(n/(n-m)) is unbounded near 0")
    v, lG = _g_table(B, m, n)
    t_arr = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore"):
        uu = np.log(np.where(t_arr > 0, t_arr, 1.0)).ravel()
    out = np.interp(uu, v, lG)
    for mask, i, j in ((uu < v[0], 0, 1), (uu > v[-1], -2, -1)):
        if mask.any():
            slope = (lG[j] - lG[i]) / (v[j] - v[i])
            out[mask] = lG[i] + slope * (uu[mask] - v[i])
    val = np.exp(out).reshape(t_arr.shape)
    res = np.where(t_arr > 0, val, 0.0)
    return res if res.ndim else float(res)


def _B_m_exponents(B: YoungFunction, m: int, n: int):
    """Derived tail exponents of ``B_m``; an ``alpha`` of None is fitted."""
    _, P, N = _orders(m, n)

    def pl(p, al):
        d = n + m * p
        return n * p / d, n * al / d

    if math.isinf(B.p0):
        zero = (N, None)
    else:
        zero = pl(B.p0, B.alpha0)
    if B.cap is not None or math.isinf(B.pinf):
        inf = (N, None)
    elif B.pinf > P and not _close(B.pinf, P):
        inf = pl(B.pinf, B.alphainf)
    elif _close(B.pinf, P) and B.alphainf > 1e-12:
        inf = pl(B.pinf, B.alphainf)
    else:
        inf = (1.0, 0.0)
    return zero, inf


def construct_B_m(B: YoungFunction, m: int, n: int) -> YoungFunction:
    """Optimal Orlicz domain Young function ``B_m(t) = int_0^t G_m^{-1}(s)/s ds``.

    ``G_m`` is increasing and ``G_m(x)/x`` nonincreasing, so the derivative
    ``G_m^{-1}(y)/y`` is tabulated along ``x -> (G_m(x), x/G_m(x))``.

    Raises
    ------
    DomainConditionFails
        If ``B(t)/t^(n/(n-m))`` is unbounded near 0.
    """
    if not orlicz_domain_condition(B, m, n):
        raise DomainConditionFails("B(t)/t^(n/(n-m)) is unbounded near 0")
    v, lG = _g_table(B, m, n)
    x, y = _strict(lG, v - lG)
    out_u = B.u
    la = np.interp(out_u, x, y)
    (p0, a0), (pinf, ainf) = _B_m_exponents(B, m, n)
    if a0 is None:
        a0 = _fit_log_exponent(out_u, la, p0 - 1.0, "zero")
    if ainf is None:
        ainf = _fit_log_exponent(out_u, la, pinf - 1.0, "infinity")
    lo, hi = out_u < x[0], out_u > x[-1]
    if lo.any():
        la[lo] = y[0] + (p0 - 1.0) * (out_u[lo] - x[0]) + a0 * (_ell_log(out_u[lo]) - _ell_log(x[0]))
    if hi.any():
        la[hi] = y[-1] + (pinf - 1.0) * (out_u[hi] - x[-1]) + ainf * (
            _ell_log(out_u[hi]) - _ell_log(x[-1]))
    return YoungFunction(B.grid, la, p0, a0, pinf, ainf, None,
                         f"B_m[{B.describe()};m={m},n={n}]")


@dataclass(frozen=True)
class Optimal:
    """``L^{B_m}`` is the optimal Orlicz domain."""

    B_m: YoungFunction = field(compare=False)
    upper_index: float
    kind: str = "optimal"


@dataclass(frozen=True)
class NoOptimalButNonempty:
    """Orlicz domains exist (``L^{B_m}`` among them) but none is optimal."""

    B_m: YoungFunction = field(compare=False)
    upper_index: float
    kind: str = "no_optimal_but_nonempty"


@dataclass(frozen=True)
class NoDomainAtAll:
    """No Orlicz space is a domain for the target ``L^B``."""

    reason: str
    kind: str = "no_domain_at_all"


def _upper_index_below(B_m: YoungFunction, N: float):
    """``(I, I < N)`` with the numeric index; exponents decide near ``N``."""
    I = _young.boyd_indices(B_m).upper
    if abs(I - N) > INDEX_AMBIGUITY:
        return I, I < N
    exact = max(B_m.p0 if not math.isinf(B_m.p0) else 0.0,
                INF if B_m.cap is not None else B_m.pinf)
    return I, exact < N and not _close(exact, N)


def optimal_orlicz_domain(B: YoungFunction, m: int, n: int):
    """Classify the Orlicz domains of the Orlicz target ``L^B``.

    Returns
    -------
    Optimal | NoOptimalButNonempty | NoDomainAtAll
    """
    _, _, N = _orders(m, n)
    if not orlicz_domain_condition(B, m, n):
        return NoDomainAtAll("B(t)/t^(n/(n-m)) is unbounded near 0")
    B_m = construct_B_m(B, m, n)
    I, below = _upper_index_below(B_m, N)
    return Optimal(B_m, I) if below else NoOptimalButNonempty(B_m, I)


# ---------------------------------------------------------------------------
# four-way reduction


def dominates_global(big: YoungFunction, small: YoungFunction,
                     max_k: int = DYADIC_MAX_K) -> _young.Domination:
    """Whether ``small(t) <= big(c t)`` for all ``t`` with a dyadic ``c``.

    The tail exponents decide beyond the grid of ``small``; on the grid the
    smallest working ``c = 2**k`` is searched.
    """
    for side in ("zero", "infinity"):
        if not _tail_allows(big, small, side):
            return _young.Domination(False, None, _tail_witness(big, small, side, 2.0 ** max_k))
    t = small.grid.points
    ls = small.log_evaluate(t)
    ok = None
    for k in range(max_k + 1):
        c = 2.0 ** k
        lb = big.log_evaluate(c * t)
        with np.errstate(invalid="ignore"):
            ok = (ls <= lb + 1e-9 * np.maximum(1.0, np.abs(lb))) | np.isneginf(ls) | np.isposinf(lb)
        if ok.all():
            return _young.Domination(True, c, None)
    return _young.Domination(False, None, float(t[np.argmax(~ok)]))


def _K_exponents(Ac: YoungFunction, P: float):
    q, b = Ac.p0, Ac.alpha0
    if math.isinf(q):
        zero = (INF, 0.0)
    elif _close(q, P):
        zero = (P, b + 1.0)
    else:
        zero = (q, b)
    if Ac.cap is not None:
        return zero, (INF, 0.0)
    q, b = Ac.pinf, Ac.alphainf
    if math.isinf(q):
        inf = (INF, 0.0)
    elif _close(q, P):
        # b = -1 carries a log-log factor that the tail model drops
        inf = (P, b + 1.0) if b > -1 else (P, 0.0)
    elif q > P:
        inf = (q, b)
    else:
        inf = (P, 0.0)
    return zero, inf


def conjugate_integral(A: YoungFunction, m: int, n: int) -> YoungFunction | None:
    """``K(t) = t^P int_0^t A~(s) s^(-P-1) ds`` with ``P = n/(n-m)``; None if divergent.

    ``K' = P t^(P-1) Phi + A~/t`` is nondecreasing, so ``K`` is a Young
    function.
    """
    _, P, _ = _orders(m, n)
    Ac = _young.conjugate(A)
    u = Ac.u
    lAc = np.array(Ac.log_A, dtype=float)
    q0, b0 = Ac.p0, Ac.alpha0
    if not math.isinf(q0) and (q0 < P and not _close(q0, P) or _close(q0, P) and b0 >= -1):
        return None
    with np.errstate(invalid="ignore"):
        g = lAc - P * u
    if math.isinf(q0) or not np.isfinite(lAc[0]):
        init = -np.inf
    else:
        k = 0.0 if _close(q0, P) else q0 - P
        init = lAc[0] - P * u[0] + math.log(_exp_log_integral(k, b0, -u[0]))
    log_Phi = log_cumulative_integral(g, u, init)
    log_K = P * u + log_Phi
    with np.errstate(invalid="ignore"):
        log_k = np.logaddexp(math.log(P) + (P - 1.0) * u + log_Phi, lAc - u)
    log_k = np.where(np.isposinf(log_Phi) | np.isposinf(lAc), np.inf, log_k)
    (p0, a0), (pinf, ainf) = _K_exponents(Ac, P)
    return YoungFunction(Ac.grid, log_k, p0, a0, pinf, ainf, Ac.cap,
                         f"K[{A.describe()};m={m},n={n}]", log_A_grid=log_K)


def standard_orlicz_family(k_max: int = 16) -> list[FamilyMember]:
    """Indicators ``c chi_(0,1)`` with ``c = 10**(k/2)``, ``|k| <= k_max``.

    The modular inequality is invariant under dilations of the argument,
    so heights alone sweep both ends of the Young functions.
    """
    out = []
    for k in range(-k_max, k_max + 1):
        c = 10.0 ** (k / 2.0)
        out.append(FamilyMember(f"height=1e{k / 2:+g}", StepFunction(((1.0, c),)), k / 2.0))
    return out


def _member_data(A: YoungFunction, theta: float, f):
    """``(M, h)`` with ``M = int A(f)`` and ``h = Hf / M^theta`` as a profile."""
    prof = as_profile(f)
    M = _modular(A, prof, 1.0)
    if not (0 < M < INF):
        return M, None
    return M, hardy_profile(prof, theta).scaled(M ** (-theta))


def _needed_constant(B: YoungFunction, M: float, h) -> float:
    """Least ``C`` with ``int B(h / C) <= M``."""
    return find_root_decreasing(lambda C: _modular(B, h, C), M, bracket=(0.5, 1.0)).value


@dataclass
class OrliczReductionReport:
    """Truth values of statements (2)-(4) of the Orlicz reduction principle.

    ``statement4`` is None when the family evidence is inconclusive.
    """

    statement2: bool
    c2: float | None
    statement3: bool
    c3: float | None
    statement4: bool | None
    c4: float | None
    verdicts: dict
    records: list[Record]

    @property
    def agree(self) -> bool:
        return self.statement2 == self.statement3 == self.statement4

    def to_dict(self) -> dict:
        return {
            "statement2": self.statement2, "c2": self.c2,
            "statement3": self.statement3, "c3": self.c3,
            "statement4": self.statement4, "c4": self.c4,
            "verdicts": dict(self.verdicts), "agree": self.agree,
            "records": [r._asdict() for r in self.records],
        }


def orlicz_reduction_check(A: YoungFunction, B: YoungFunction, m: int, n: int,
                           family: Sequence[FamilyMember] | None = None,
                           plateau: float = PLATEAU_FACTOR,
                           growth: float = GROWTH_FACTOR) -> OrliczReductionReport:
    """Evaluate the equivalent statements for ``L^A -> L^B``.

    (2) ``B(t) <= A_m(C t)``; (3) ``K(t) <= B~_m(C t)`` with ``K`` from
    :func:`conjugate_integral`; (4) ``int B(Hf/(C M^(m/n))) <= M`` with
    ``M = int A(f)`` over ``family``.  ``C`` is the least power of two
    that serves every member; the ratios ``int B(Hf/(C M^(m/n))) / M`` are
    judged by :func:`verdict_of` separately towards small and large scales.
    """
    _, _, _ = _orders(m, n)
    theta = m / n
    okA = integral_near_zero_condition(A, m, n)
    okB = orlicz_domain_condition(B, m, n)
    s2, c2 = False, None
    if okA:
        d = dominates_global(construct_A_m(A, m, n), B)
        s2, c2 = d.holds, d.c
    s3, c3 = False, None
    if okB:
        K = conjugate_integral(A, m, n)
        if K is not None:
            d = dominates_global(_young.conjugate(construct_B_m(B, m, n)), K)
            s3, c3 = d.holds, d.c
    members = standard_orlicz_family() if family is None else list(family)
    data = []
    for mem in members:
        M, h = _member_data(A, theta, mem.f)
        if h is not None:
            data.append((mem, M, h, _needed_constant(B, M, h)))
    # least dyadic constant that works for every member, then modular ratios at it
    worst = max((c for *_, c in data), default=0.0)
    c4 = 2.0 ** math.ceil(math.log2(worst)) if worst > 0 else 0.0
    records = []
    for mem, M, h, _ in data:
        lhs = _modular(B, h, c4) if c4 > 0 else 0.0
        records.append(Record(mem.id, float(mem.scale), float(lhs), float(M), float(lhs / M)))
    small = [r.ratio for r in sorted((r for r in records if r.scale <= 0), key=lambda r: -r.scale)]
    large = [r.ratio for r in sorted((r for r in records if r.scale >= 0), key=lambda r: r.scale)]
    verdicts = {"small": verdict_of(small, plateau, growth),
                "large": verdict_of(large, plateau, growth)}
    vals = set(verdicts.values())
    if "unbounded_trend" in vals:
        s4 = False
    elif vals == {"bounded"}:
        s4 = True
    else:
        s4 = None
    return OrliczReductionReport(s2, c2, s3, c3, s4, c4 if s4 else None, verdicts, records)
