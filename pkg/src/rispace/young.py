"""Young functions: evaluation, inversion, conjugation, comparison, Boyd indices.

A :class:`YoungFunction` is stored through the logarithm of its derivative
``a`` on a :class:`~rispace.numerics.LogGrid`, plus power-log tail exponents
describing ``A(t) ~ t**p * ell(t)**alpha`` near 0 and near infinity.  All
internal arithmetic happens in the coordinates ``u = log t`` and
``v = log A``, so exponential-type functions such as ``exp(t**1.5)`` stay
representable far beyond the float range of ``A`` itself.

Inside a grid cell ``log a`` is linear in ``u``; this makes pure power
functions exact.  Beyond the grid the tail exponents take over.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import InadmissibleError, ParseError
from .numerics import LogGrid, log_expm1_ratio, _exp_log_integral


def _ell_log(u):
    """``log(1 + |u|)``, the log of ``ell`` at ``t = exp(u)``."""
    return np.log1p(np.abs(u))


def _conj(p: float) -> float:
    if p == 1:
        return math.inf
    if math.isinf(p):
        return 1.0
    return p / (p - 1.0)


def _solve_tail(target, p, alpha, u_edge, direction):
    """Solve ``p w + alpha (log ell(u_edge + w) - log ell(u_edge)) = target``.

    ``direction`` is -1 (zero side, w <= 0) or +1 (infinity side, w >= 0).
    Returns ``u = u_edge + w`` (vectorized).
    """
    target = np.asarray(target, dtype=float)
    if alpha == 0:
        return u_edge + target / p
    base = _ell_log(u_edge)

    def F(w):
        return p * w + alpha * (_ell_log(u_edge + w) - base)

    lo = np.where(direction < 0, -1.0, 0.0) * np.ones_like(target)
    hi = np.where(direction < 0, 0.0, 1.0) * np.ones_like(target)
    # expand the outer end until it brackets the target
    for _ in range(200):
        if direction < 0:
            need = F(lo) > target
            if not need.any():
                break
            lo = np.where(need, lo * 2.0, lo)
        else:
            need = F(hi) < target
            if not need.any():
                break
            hi = np.where(need, hi * 2.0, hi)
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        up = F(mid) >= target
        hi = np.where(up, mid, hi)
        lo = np.where(up, lo, mid)
    return u_edge + 0.5 * (lo + hi)


@dataclass(frozen=True, eq=False)
class YoungFunction:
    """Young function ``A(t) = int_0^t a`` tabulated through ``log a``.

    Parameters
    ----------
    grid : LogGrid
        Abscissas for the tabulation.
    log_a : array_like
        ``log a`` at the grid points; ``-inf`` where ``a = 0`` and ``+inf``
        beyond ``cap``.  Must be nondecreasing.
    p0, alpha0 : float
        ``A(t) ~ t**p0 ell(t)**alpha0`` as ``t -> 0``; ``p0 = inf`` means
        ``A`` vanishes near 0 faster than any power.
    pinf, alphainf : float
        Same near infinity; ``pinf = inf`` marks super-polynomial growth,
        in which case ``A`` is taken to be infinite beyond the grid.
    cap : float, optional
        ``A(t) = inf`` for ``t > cap``.
    name : str
        Short description for reports.
    """

    grid: LogGrid
    log_a: np.ndarray
    p0: float
    alpha0: float = 0.0
    pinf: float = 0.0
    alphainf: float = 0.0
    cap: float | None = None
    name: str = ""
    repaired: bool = field(default=False, compare=False)
    log_A_grid: np.ndarray | None = field(default=None, compare=False, repr=False)
    log_A: np.ndarray = field(init=False, repr=False)
    log_A_cap: float = field(init=False, repr=False)

    def __post_init__(self):
        la = np.array(self.log_a, dtype=float)
        if la.shape != self.grid.points.shape:
            raise ValueError("log_a must have one entry per grid point")
        if np.isnan(la).any():
            raise ValueError("log_a contains NaN")
        if self.cap is not None:
            if not self.cap > 0:
                raise ValueError("cap must be positive")
            la[self.grid.points > self.cap] = np.inf
        if self.p0 < 1 or self.pinf < 1:
            raise InadmissibleError("Young functions grow at least linearly: need p0, pinf >= 1")
        fin = np.isfinite(la)
        both = fin[:-1] & fin[1:]
        viol = la[1:][both] - la[:-1][both]
        repaired = self.repaired
        if viol.size and viol.min() < -1e-9:
            if viol.min() < -1e-3:
                raise InadmissibleError("derivative of a Young function must be nondecreasing")
            repaired = True
        la = np.maximum.accumulate(la)
        la.setflags(write=False)
        object.__setattr__(self, "log_a", la)
        object.__setattr__(self, "repaired", repaired)
        object.__setattr__(self, "p0", float(self.p0))
        object.__setattr__(self, "pinf", float(self.pinf))
        self._build_primitive()

    # -- construction helpers --------------------------------------------

    @property
    def u(self) -> np.ndarray:
        return self.grid.log_points

    def _build_primitive(self):
        u, la = self.u, self.log_a
        # A(t_min) from the zero tail of a ~ s^(p0-1) ell^alpha0
        if math.isinf(self.p0) or not np.isfinite(la[0]):
            start = -np.inf
        else:
            start = la[0] + u[0] + math.log(
                _exp_log_integral(self.p0, self.alpha0, -u[0]))
        g = la + u
        du = np.diff(u)
        g0, g1 = g[:-1], g[1:]
        cells = np.full(du.shape, -np.inf)
        fin = np.isfinite(g0) & np.isfinite(g1)
        cells[fin] = g0[fin] + np.log(du[fin]) + log_expm1_ratio(g1[fin] - g0[fin])
        cells[np.isposinf(g1)] = np.inf
        with np.errstate(invalid="ignore"):
            acc = np.logaddexp.accumulate(np.concatenate(([start], cells)))
        acc[np.isnan(acc)] = np.inf
        if self.log_A_grid is not None:
            # pointwise values known exactly (e.g. from a Legendre identity)
            given = np.array(self.log_A_grid, dtype=float)
            if given.shape != acc.shape:
                raise ValueError("log_A_grid must have one entry per grid point")
            given[np.isnan(given)] = np.inf
            acc = np.maximum.accumulate(given)
        infs = np.isposinf(acc)
        if infs.any():
            acc[np.argmax(infs):] = np.inf
        acc.setflags(write=False)
        object.__setattr__(self, "log_A", acc)
        cap_val = np.inf
        if self.cap is not None:
            pts = self.grid.points
            if self.cap >= pts[-1]:
                cap_val = float(self._log_A_u(np.array([math.log(self.cap)]))[0])
            else:
                i = int(np.searchsorted(pts, self.cap, side="right")) - 1
                if i < 0:
                    cap_val = -np.inf
                else:
                    cap_val = float(np.logaddexp(
                        acc[i], la[i] + math.log(self.cap - pts[i])
                        if np.isfinite(la[i]) and self.cap > pts[i] else -np.inf))
        object.__setattr__(self, "log_A_cap", cap_val)

    # -- evaluation -------------------------------------------------------

    def _log_A_u(self, u):
        """``log A(exp(u))`` (vectorized, ``u`` may be huge)."""
        u = np.atleast_1d(np.asarray(u, dtype=float))
        out = np.empty_like(u)
        ug, la, lA = self.u, self.log_a, self.log_A
        lo_mask = u < ug[0]
        hi_mask = u > ug[-1]
        mid = ~(lo_mask | hi_mask)
        if lo_mask.any():
            uu = u[lo_mask]
            if math.isinf(self.p0) or not np.isfinite(lA[0]):
                out[lo_mask] = -np.inf
            else:
                out[lo_mask] = lA[0] + self.p0 * (uu - ug[0]) + self.alpha0 * (
                    _ell_log(uu) - _ell_log(ug[0]))
        if hi_mask.any():
            uu = u[hi_mask]
            if math.isinf(self.pinf) or not np.isfinite(lA[-1]):
                out[hi_mask] = np.inf
            else:
                out[hi_mask] = lA[-1] + self.pinf * (uu - ug[-1]) + self.alphainf * (
                    _ell_log(uu) - _ell_log(ug[-1]))
        if mid.any():
            uu = u[mid]
            i = np.clip(np.searchsorted(ug, uu, side="right") - 1, 0, ug.size - 2)
            out[mid] = self._log_A_cell(i, uu)
        if self.cap is not None:
            lc = math.log(self.cap)
            out[u > lc] = np.inf
        return out

    def _log_A_cell(self, i, uu):
        """``log A`` inside cell ``i``.

        Where both ends are finite, a monotone cubic Hermite interpolant of
        ``log A`` in ``u`` is used, with end slopes ``a t / A``; it is exact
        for powers.  Otherwise the log-linear derivative is integrated from
        the left end.
        """
        ug, la, lA = self.u, self.log_a, self.log_A
        g0 = la[i] + ug[i]
        g1 = la[i + 1] + ug[i + 1]
        du = ug[i + 1] - ug[i]
        delta = uu - ug[i]
        y0, y1 = lA[i], lA[i + 1]
        herm = np.isfinite(g0) & np.isfinite(g1) & np.isfinite(y0) & np.isfinite(y1)
        res = np.full(uu.shape, -np.inf)
        if herm.any():
            h = du[herm]
            s = delta[herm] / h
            a0, a1 = y0[herm], y1[herm]
            m0 = np.exp(g0[herm] - a0)
            m1 = np.exp(g1[herm] - a1)
            d = (a1 - a0) / h
            with np.errstate(divide="ignore", invalid="ignore"):
                r = np.hypot(m0, m1) / d
            scale = np.where(np.isfinite(r) & (r > 3.0), 3.0 / r, 1.0)
            m0, m1 = m0 * scale, m1 * scale
            m0 = np.where(d > 0, m0, 0.0)
            m1 = np.where(d > 0, m1, 0.0)
            s2, s3 = s * s, s * s * s
            res[herm] = ((2 * s3 - 3 * s2 + 1) * a0 + (s3 - 2 * s2 + s) * h * m0
                         + (-2 * s3 + 3 * s2) * a1 + (s3 - s2) * h * m1)
        rest = ~herm
        if rest.any():
            g0r, g1r, dr, yr = g0[rest], g1[rest], delta[rest], y0[rest]
            with np.errstate(invalid="ignore"):
                slope = np.where(np.isfinite(g1r) & np.isfinite(g0r), (g1r - g0r) / du[rest], 1.0)
            out = np.array(yr, dtype=float)
            ok = np.isfinite(g0r) & (dr > 0)
            if ok.any():
                part = g0r[ok] + np.log(dr[ok]) + log_expm1_ratio(slope[ok] * dr[ok])
                out[ok] = np.logaddexp(yr[ok], part)
            res[rest] = out
        return res

    def log_evaluate(self, t):
        """``log A(t)``; ``-inf`` where ``A = 0``."""
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore"):
            u = np.log(t)
        out = np.where(t > 0, self._log_A_u(np.where(t > 0, u, 0.0)).reshape(t.shape), -np.inf)
        return out if out.ndim else float(out)

    def __call__(self, t):
        with np.errstate(over="ignore"):
            out = np.exp(self.log_evaluate(t))
        return out if np.ndim(out) else float(out)

    evaluate = __call__

    def log_derivative_u(self, u):
        """``log a(exp(u))`` with the same cell and tail model as ``A``."""
        u = np.atleast_1d(np.asarray(u, dtype=float))
        ug, la = self.u, self.log_a
        out = np.interp(u, ug, la)
        lo, hi = u < ug[0], u > ug[-1]
        if lo.any():
            out[lo] = (-np.inf if math.isinf(self.p0) else
                       la[0] + (self.p0 - 1) * (u[lo] - ug[0])
                       + self.alpha0 * (_ell_log(u[lo]) - _ell_log(ug[0])))
        if hi.any():
            out[hi] = (np.inf if math.isinf(self.pinf) else
                       la[-1] + (self.pinf - 1) * (u[hi] - ug[-1])
                       + self.alphainf * (_ell_log(u[hi]) - _ell_log(ug[-1])))
        if self.cap is not None:
            out[u > math.log(self.cap)] = np.inf
        return out

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        with np.errstate(over="ignore", divide="ignore"):
            out = np.where(t > 0, np.exp(self.log_derivative_u(np.log(np.where(t > 0, t, 1.0)))
                                         .reshape(t.shape)), 0.0)
        return out if out.ndim else float(out)

    # -- inversion --------------------------------------------------------

    def _log_inverse_v(self, v):
        """``log A^{-1}(exp(v))`` with ``A^{-1}(y) = inf{t : A(t) >= y}``."""
        v = np.atleast_1d(np.asarray(v, dtype=float))
        ug, lA = self.u, self.log_A
        out = np.empty_like(v)
        idx = np.searchsorted(lA, v, side="left")
        # below the grid: zero tail
        lo = idx == 0
        if lo.any():
            if math.isinf(self.p0) or not np.isfinite(lA[0]):
                out[lo] = ug[0]
            else:
                out[lo] = _solve_tail(v[lo] - lA[0], self.p0, self.alpha0, ug[0], -1)
        # above the grid
        hi = idx == lA.size
        if hi.any():
            if self.cap is not None or math.isinf(self.pinf):
                out[hi] = math.log(self.cap) if self.cap is not None else ug[-1]
            else:
                out[hi] = _solve_tail(v[hi] - lA[-1], self.pinf, self.alphainf, ug[-1], 1)
        mid = ~(lo | hi)
        if mid.any():
            i = idx[mid] - 1
            vv = v[mid]
            res = np.empty_like(vv)
            capcell = ~np.isfinite(lA[i + 1]) | ~np.isfinite(self.log_a[i + 1])
            if capcell.any():
                lc = math.log(self.cap) if self.cap is not None else ug[i[capcell] + 1]
                sat = vv[capcell] > self.log_A_cap
                lin = np.empty(capcell.sum())
                ii = i[capcell]
                with np.errstate(divide="ignore", invalid="ignore"):
                    # A(t) = A_i + a_i (t - t_i) inside the cell
                    dt = (np.exp(vv[capcell]) - np.exp(lA[ii])) / np.exp(self.log_a[ii])
                    lin = np.log(np.exp(ug[ii]) + np.maximum(dt, 0.0))
                lin = np.where(np.isfinite(lin), lin, lc)
                res[capcell] = np.where(sat, lc, np.minimum(lin, lc))
            reg = ~capcell
            if reg.any():
                ii = i[reg]
                a_lo, a_hi = ug[ii].copy(), ug[ii + 1].copy()
                target = vv[reg]
                # safeguarded Newton on log A(u) = v inside the cell
                x = np.interp(target, lA, ug)
                x = np.clip(x, a_lo, a_hi)
                for _ in range(50):
                    f = self._log_A_cell(ii, x) - target
                    a_hi = np.where(f >= 0, x, a_hi)
                    a_lo = np.where(f >= 0, a_lo, x)
                    lg = self.log_a[ii] + (x - ug[ii]) * np.where(
                        np.isfinite(self.log_a[ii + 1]),
                        (self.log_a[ii + 1] - self.log_a[ii]) / (ug[ii + 1] - ug[ii]), 0.0)
                    with np.errstate(over="ignore", invalid="ignore"):
                        step = f / np.exp(lg + x - (f + target))
                    nx = x - step
                    bad = ~np.isfinite(nx) | (nx < a_lo) | (nx > a_hi)
                    nx = np.where(bad, 0.5 * (a_lo + a_hi), nx)
                    if np.all(np.abs(nx - x) <= 1e-13 * np.maximum(1.0, np.abs(x))):
                        x = nx
                        break
                    x = nx
                res[reg] = x
            out[mid] = res
        return out

    def inverse(self, y):
        """Generalized inverse ``inf{t : A(t) >= y}``; saturates at ``cap``."""
        y = np.asarray(y, dtype=float)
        with np.errstate(divide="ignore"):
            v = np.log(np.where(y > 0, y, 1.0))
        res = np.exp(self._log_inverse_v(v.ravel())).reshape(y.shape)
        out = np.where(y > 0, res, 0.0)
        return out if out.ndim else float(out)

    # -- derived functions ------------------------------------------------

    @property
    def is_capped(self) -> bool:
        return self.cap is not None

    def tail_moment(self, p: float) -> "TailMoment":
        """``x -> int_x^inf A(s) s**(-1-p) ds`` as a callable."""
        return TailMoment(self, p)

    def describe(self) -> str:
        if self.name:
            return self.name
        cap = f",cap={self.cap:g}" if self.cap is not None else ""
        return (f"young:p0={self.p0:g},a0={self.alpha0:g},"
                f"pinf={self.pinf:g},ainf={self.alphainf:g}{cap}")

    # -- serialization ----------------------------------------------------

    def to_dict(self) -> dict:
        with np.errstate(over="ignore"):
            a = np.exp(self.log_a)
        return {
            "grid": self.grid.to_dict(),
            "a": [float(x) if np.isfinite(x) else None for x in a],
            "log_a": _encode_logs(self.log_a),
            "log_A": _encode_logs(self.log_A),
            "p0": self.p0, "alpha0": self.alpha0,
            "pinf": self.pinf, "alphainf": self.alphainf,
            "cap": self.cap, "name": self.name,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "YoungFunction":
        g = data["grid"]
        grid = LogGrid(float(g["t_min"]), float(g["t_max"]), int(g["n"]))
        if "log_a" in data:
            la = np.array([float(x) for x in data["log_a"]], dtype=float)
        else:
            a = np.array([np.inf if x is None else float(x) for x in data["a"]])
            with np.errstate(divide="ignore"):
                la = np.log(a)
        cap = data.get("cap")
        lA = data.get("log_A")
        lA = None if lA is None else np.array([float(x) for x in lA], dtype=float)
        return cls(grid, la, float(data["p0"]), float(data.get("alpha0", 0.0)),
                   float(data["pinf"]), float(data.get("alphainf", 0.0)),
                   None if cap is None else float(cap), data.get("name", ""),
                   log_A_grid=lA)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "YoungFunction":
        return cls.from_dict(json.loads(text))


def _encode_logs(values):
    return [float(x) if np.isfinite(x) else ("-inf" if x < 0 else "inf") for x in values]


class TailMoment:
    """``Psi(x) = int_x^inf A(s) s**(-1-p) ds`` for a Young function ``A``."""

    def __init__(self, A: YoungFunction, p: float):
        self.A, self.p = A, float(p)
        u = A.u
        g = A.log_A - self.p * u  # log of integrand times s (ds = s du)
        self.converges = orlicz_lorentz_admissible(self.p, 1.0, A)
        if not self.converges:
            self.log_tail = np.full(u.shape, np.inf)
            return
        if A.cap is not None and A.cap < A.grid.points[-1]:
            end = -np.inf
        else:
            k = self.p - A.pinf
            end = (A.log_A[-1] - self.p * u[-1] +
                   math.log(_exp_log_integral(k, A.alphainf, u[-1])))
        # integrate from the right end backwards
        gr = g[::-1]
        ur = -u[::-1]
        cells = np.full(u.size - 1, -np.inf)
        g0, g1 = gr[:-1], gr[1:]
        du = np.diff(ur)
        fin = np.isfinite(g0) & np.isfinite(g1)
        cells[fin] = g0[fin] + np.log(du[fin]) + log_expm1_ratio(g1[fin] - g0[fin])
        with np.errstate(invalid="ignore"):
            acc = np.logaddexp.accumulate(np.concatenate(([end], cells)))
        acc[np.isnan(acc)] = -np.inf
        self.log_tail = acc[::-1]

    def log_value_u(self, u):
        """``log Psi(exp(u))``."""
        u = np.atleast_1d(np.asarray(u, dtype=float))
        A, ug = self.A, self.A.u
        if not self.converges:
            return np.full(u.shape, np.inf)
        out = np.interp(u, ug, self.log_tail)
        lo = u < ug[0]
        if lo.any():
            if math.isinf(A.p0) or not np.isfinite(A.log_A[0]):
                out[lo] = self.log_tail[0]
            else:
                # add int_x^{t_min} of the zero tail t^(p0-1-p) ell^alpha0
                gam = A.p0 - 1.0 - self.p
                logc = A.log_A[0] - A.p0 * ug[0] - A.alpha0 * _ell_log(ug[0])
                uu = u[lo]
                extra = _power_log_segment(gam, A.alpha0, uu, ug[0]) + logc
                out[lo] = np.logaddexp(self.log_tail[0], extra)
        hi = u > ug[-1]
        if hi.any():
            if A.cap is not None or math.isinf(A.pinf):
                out[hi] = -np.inf if A.cap is not None else np.inf
            else:
                k = self.p - A.pinf
                uu = u[hi]
                lAu = A._log_A_u(uu)
                out[hi] = lAu - self.p * uu + np.log(
                    [_exp_log_integral(k, A.alphainf, x) for x in uu])
        return out

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", over="ignore"):
            res = np.exp(self.log_value_u(np.log(np.where(x > 0, x, 1.0)).ravel())).reshape(x.shape)
        out = np.where(x > 0, res, np.inf if not self.converges else res)
        return out if out.ndim else float(out)


def _power_log_segment(gam, alpha, u_lo, u_hi):
    """log of int over s in (e^u_lo, e^u_hi) of s^gam (1+|log s|)^alpha, vectorized in u_lo."""
    u_lo = np.atleast_1d(u_lo)
    out = np.empty_like(u_lo)
    for j, a in enumerate(u_lo):
        n = 256
        uu = np.linspace(a, u_hi, n)
        g = (gam + 1.0) * uu + alpha * _ell_log(uu)
        cells = g[:-1] + np.log(np.diff(uu)) + log_expm1_ratio(np.diff(g))
        out[j] = np.logaddexp.reduce(cells)
    return out


# ---------------------------------------------------------------------------
# factories


def _grid(grid):
    return grid if grid is not None else LogGrid.from_env()


def from_log_derivative(log_a_of_u, p0, alpha0, pinf, alphainf, cap=None,
                        grid: LogGrid | None = None, name: str = "",
                        log_primitive=None) -> YoungFunction:
    """Young function from a vectorized ``u -> log a(exp(u))``.

    ``log_primitive`` optionally gives ``u -> log A(exp(u))`` in closed
    form; it replaces the cell-wise integration at the grid points.
    """
    grid = _grid(grid)
    la = np.asarray(log_a_of_u(grid.log_points), dtype=float)
    lA = None if log_primitive is None else np.asarray(
        log_primitive(grid.log_points), dtype=float)
    return YoungFunction(grid, la, p0, alpha0, pinf, alphainf, cap, name, log_A_grid=lA)


def from_derivative(a, p0, alpha0, pinf, alphainf, cap=None,
                    grid: LogGrid | None = None, name: str = "") -> YoungFunction:
    """Young function from a vectorized derivative ``a(s)``."""
    def la(u):
        with np.errstate(divide="ignore"):
            return np.log(np.asarray(a(np.exp(u)), dtype=float))
    return from_log_derivative(la, p0, alpha0, pinf, alphainf, cap, grid, name)


def power(p: float, c: float = 1.0, grid: LogGrid | None = None) -> YoungFunction:
    """``A(t) = c t**p``, ``p >= 1``."""
    if p < 1:
        raise InadmissibleError("t**p is a Young function only for p >= 1")
    name = f"{c:g}*t^{p:g}" if c != 1 else f"t^{p:g}"
    return from_log_derivative(lambda u: math.log(c * p) + (p - 1) * u,
                               p, 0.0, p, 0.0, grid=grid, name=name,
                               log_primitive=lambda u: math.log(c) + p * u)


def power_log(p0: float, alpha0: float = 0.0, pinf: float | None = None,
              alphainf: float | None = None, grid: LogGrid | None = None) -> YoungFunction:
    """Power-log recipe ``A ~ t**p0 ell**alpha0`` near 0 and ``t**pinf ell**alphainf`` near inf.

    The derivative is ``p t**(p-1) ell**alpha`` on each side; in between,
    ``log a`` is blended with the weight ``(1 + tanh(log t)) / 2``, which
    keeps the blend smooth, and then made nondecreasing.
    """
    pinf = p0 if pinf is None else pinf
    alphainf = alpha0 if alphainf is None else alphainf
    for p, al, side in ((p0, alpha0, "zero"), (pinf, alphainf, "infinity")):
        if p < 1 or (p == 1 and ((side == "zero" and al > 0) or (side == "infinity" and al < 0))):
            raise InadmissibleError(
                f"t^{p:g} ell^{al:g} near {side} is not equivalent to a Young function")

    def la(u):
        ell = _ell_log(u)
        l0 = math.log(p0) + (p0 - 1) * u + alpha0 * ell
        l1 = math.log(pinf) + (pinf - 1) * u + alphainf * ell
        w = 0.5 * (1.0 + np.tanh(u))
        return np.maximum.accumulate((1 - w) * l0 + w * l1)

    name = f"young:p0={p0:g},a0={alpha0:g},pinf={pinf:g},ainf={alphainf:g}"
    return from_log_derivative(la, p0, alpha0, pinf, alphainf, grid=grid, name=name)


def linf_profile(cap: float = 1.0, grid: LogGrid | None = None) -> YoungFunction:
    """``A = 0`` on ``[0, cap]`` and ``inf`` beyond: the Orlicz space is ``L^inf``."""
    grid = _grid(grid)
    la = np.full(grid.points.shape, -np.inf)
    return YoungFunction(grid, la, math.inf, 0.0, math.inf, 0.0, cap, f"linf:cap={cap:g}")


def exponential(beta: float = 1.0, p0: float = 2.0, grid: LogGrid | None = None) -> YoungFunction:
    """``A(t) = t**p0 exp(t**beta)``: power near 0, exponential class near inf."""
    if p0 < 1 or beta <= 0:
        raise InadmissibleError("need p0 >= 1 and beta > 0")

    def la(u):
        tb = np.exp(beta * u)
        return (p0 - 1) * u + tb + np.log(p0 + beta * tb)

    return from_log_derivative(la, p0, 0.0, math.inf, 0.0, grid=grid,
                               name=f"exp:beta={beta:g},p0={p0:g}",
                               log_primitive=lambda u: p0 * u + np.exp(beta * u))


def parse_young(text: str, grid: LogGrid | None = None) -> YoungFunction:
    """Build a Young function from a recipe string.

    Recipes: ``young:p0=2,a0=0,pinf=3,ainf=1``, ``power:p=2[,c=1]``,
    ``linf[:cap=1]``, ``exp:beta=1,p0=2``.
    """
    raw = text.strip()
    kind, _, rest = raw.partition(":")
    params: dict[str, float] = {}
    pos = len(kind) + 1
    if rest:
        for item in rest.split(","):
            key, eq, val = item.partition("=")
            if not eq:
                raise ParseError(f"expected key=value, got {item!r}", raw, pos)
            try:
                params[key.strip()] = float(val.replace("∞", "inf"))
            except ValueError:
                raise ParseError(f"bad number {val!r}", raw, pos + len(key) + 1) from None
            pos += len(item) + 1
    allowed = {"young": {"p0", "a0", "pinf", "ainf"}, "power": {"p", "c"},
               "linf": {"cap"}, "exp": {"beta", "p0"}}
    if kind not in allowed:
        raise ParseError(f"unknown Young recipe {kind!r}", raw, 0)
    extra = set(params) - allowed[kind]
    if extra:
        key = sorted(extra)[0]
        raise ParseError(f"unknown parameter {key!r}", raw, raw.find(key + "="))
    if kind == "young":
        if "p0" not in params:
            raise ParseError("young recipe needs p0", raw, len(raw))
        return power_log(params["p0"], params.get("a0", 0.0), params.get("pinf"),
                         params.get("ainf"), grid=grid)
    if kind == "power":
        if "p" not in params:
            raise ParseError("power recipe needs p", raw, len(raw))
        return power(params["p"], params.get("c", 1.0), grid=grid)
    if kind == "linf":
        return linf_profile(params.get("cap", 1.0), grid=grid)
    return exponential(params.get("beta", 1.0), params.get("p0", 2.0), grid=grid)


# ---------------------------------------------------------------------------
# operations


def evaluate(A: YoungFunction, t):
    return A(t)


def inverse(A: YoungFunction, y):
    return A.inverse(y)


def conjugate(A: YoungFunction) -> YoungFunction:
    """Young conjugate ``sup_s (s t - A(s))``.

    The derivative of the conjugate is the generalized inverse of ``a``;
    it is evaluated on the same grid, so power laws are reproduced exactly,
    and integrated like any other Young function.
    """
    ug, la = A.u, A.log_a
    v = ug  # log of the abscissa, now playing the role of a value of a
    out = np.empty_like(v)
    idx = np.searchsorted(la, v, side="left")
    lo = idx == 0
    if lo.any():
        if not np.isfinite(la[0]):
            out[lo] = ug[0]
        elif (A.p0 == 1 and A.alpha0 == 0) or math.isinf(A.p0):
            out[lo] = np.where(v[lo] < la[0], -np.inf, ug[0])
        else:
            out[lo] = _solve_tail(v[lo] - la[0], A.p0 - 1, A.alpha0, ug[0], -1)
    hi = idx == la.size
    if hi.any():
        if A.pinf == 1 and A.alphainf == 0:
            out[hi] = np.inf
        elif math.isinf(A.pinf):
            out[hi] = ug[-1]
        elif A.pinf == 1:
            # a grows like a power of log: its inverse grows exponentially
            out[hi] = (np.expm1(_ell_log(ug[-1]) + (v[hi] - la[-1]) / A.alphainf)
                       if A.alphainf > 0 else np.inf)
        else:
            out[hi] = _solve_tail(v[hi] - la[-1], A.pinf - 1, A.alphainf, ug[-1], 1)
    mid = ~(lo | hi)
    if mid.any():
        i = idx[mid] - 1
        a0, a1 = la[i], la[i + 1]
        with np.errstate(invalid="ignore", divide="ignore"):
            frac = np.where(np.isfinite(a0) & np.isfinite(a1) & (a1 > a0),
                            (v[mid] - a0) / (a1 - a0), 1.0)
        frac = np.where(~np.isfinite(a0), 1.0, frac)
        if A.cap is not None:
            frac = np.where(np.isposinf(a1) & np.isfinite(a0), 1.0, frac)
        res = ug[i] + np.clip(frac, 0.0, 1.0) * (ug[i + 1] - ug[i])
        if A.cap is not None:
            res = np.minimum(res, math.log(A.cap))
        out[mid] = res

    def top_log_exponent():
        # super-polynomial A: estimate ell-exponent of the conjugate derivative
        m = max(2, out.size // 40)
        du = _ell_log(ug[-1]) - _ell_log(ug[-m])
        val = (out[-1] - out[-m]) / du if np.isfinite(out[-1] - out[-m]) else 0.0
        return float(max(val, 0.0))

    def side(p, alpha):
        if math.isinf(p):
            return 1.0, 0.0
        if p == 1:
            return math.inf, 0.0
        return p / (p - 1), -alpha / (p - 1)

    p0c, a0c = side(A.p0, A.alpha0)
    if A.cap is not None:
        pic, aic = 1.0, 0.0
    elif math.isinf(A.pinf):
        pic, aic = 1.0, top_log_exponent()
    else:
        pic, aic = side(A.pinf, A.alphainf)
    capc = None
    if A.pinf == 1 and A.alphainf == 0 and A.cap is None:
        capc = float(np.exp(la[-1]))
    elif math.isinf(pic) and not np.isfinite(out).all():
        capc = None
    # Legendre identity at the grid: conj(t) = t s - A(s) with s = conj'(t)
    lts = ug + out
    with np.errstate(invalid="ignore"):
        lAs = A._log_A_u(np.where(np.isfinite(out), out, 0.0))
        diff = np.where(np.isfinite(out), lAs - lts, np.nan)
        log_conj = np.where(diff < 0, lts + np.log(-np.expm1(np.minimum(diff, 0.0))),
                            -np.inf)
    log_conj = np.where(np.isneginf(out), -np.inf, log_conj)
    log_conj = np.where(np.isposinf(out), np.inf, log_conj)
    res = YoungFunction(A.grid, out, p0c, a0c, pic, aic, capc,
                        f"conj({A.describe()})", log_A_grid=log_conj)
    return res


class Domination(NamedTuple):
    """Outcome of a domination test; ``c`` is the certified constant."""

    holds: bool
    c: float | None
    witness: float | None


def _order(A: YoungFunction, side: str):
    if side == "zero":
        return (A.p0, A.alpha0)
    if A.cap is not None:
        return (math.inf, math.inf)
    return (A.pinf, A.alphainf)


def _close(x: float, y: float) -> bool:
    return x == y or abs(x - y) <= 1e-9 * max(1.0, abs(x), abs(y))


def _tail_allows(A: YoungFunction, B: YoungFunction, side: str) -> bool:
    """Whether the tail exponents permit ``B(t) <= A(c t)`` eventually."""
    pa, aa = _order(A, side)
    pb, ab = _order(B, side)
    if side == "zero":
        if math.isinf(pb) or math.isinf(pa):
            return math.isinf(pb) or not math.isinf(pa)
        if _close(pa, pb):
            return ab <= aa + 1e-9
        return pb > pa
    if math.isinf(pa) and math.isinf(pb):
        return True  # both super-polynomial: decided on the grid
    if _close(pa, pb):
        return ab <= aa + 1e-9
    return pb < pa


DYADIC_MAX_K = 20
WINDOW_DECADES = 4.0


def _window(A: YoungFunction, side: str, decades: float = WINDOW_DECADES):
    pts = A.grid.points
    if side == "zero":
        return pts[pts <= A.grid.t_min * 10 ** decades]
    return pts[pts >= A.grid.t_max * 10 ** (-decades)]


def _tail_witness(A, B, side, c):
    """First ``t`` past the grid edge (through the tail models) with ``B(t) > A(c t)``."""
    edge = A.grid.t_min if side == "zero" else A.grid.t_max
    step = -1.0 if side == "zero" else 1.0
    u = math.log(edge) + step * np.arange(0, 1160) * math.log(10.0) / 4
    lb = B._log_A_u(u)
    la = A._log_A_u(u + math.log(c))
    bad = lb > la + 1e-9 * np.maximum(1.0, np.abs(la))
    return float(math.exp(u[np.argmax(bad)]) if bad.any() else edge)


def dominates_near(A: YoungFunction, B: YoungFunction, side: str,
                   max_k: int = DYADIC_MAX_K) -> Domination:
    """Whether ``B(t) <= A(c t)`` near ``side`` for some dyadic ``c``.

    The smallest ``c = 2**k`` (``k <= max_k``) that works over the last
    decades of the grid towards ``side`` is returned.  Tail exponents
    decide what happens beyond the grid.
    """
    if side not in ("zero", "infinity"):
        raise ValueError("side must be 'zero' or 'infinity'")
    t = _window(B, side)
    lb = B.log_evaluate(t)
    if not _tail_allows(A, B, side):
        return Domination(False, None, _tail_witness(A, B, side, 2.0 ** max_k))
    tol = 1e-9
    worst = None
    for k in range(max_k + 1):
        c = 2.0 ** k
        la = A.log_evaluate(c * t)
        with np.errstate(invalid="ignore"):
            bad = ~((lb <= la + tol * np.maximum(1.0, np.abs(la))) | np.isneginf(lb) | np.isposinf(la))
        if not bad.any():
            return Domination(True, c, None)
        worst = float(t[np.argmax(bad)])
    return Domination(False, None, worst)


def equivalent(A: YoungFunction, B: YoungFunction, scope: str = "global",
               max_k: int = DYADIC_MAX_K) -> Domination:
    """Mutual domination near zero, infinity or both (``scope='global'``).

    For ``global`` the whole grid is checked as well.  The returned ``c``
    is the larger of the certified constants.
    """
    sides = ("zero", "infinity") if scope == "global" else (scope,)
    cs = []
    for s in sides:
        for X, Y in ((A, B), (B, A)):
            d = dominates_near(X, Y, s, max_k)
            if not d.holds:
                return d
            cs.append(d.c)
    if scope == "global":
        t = A.grid.points
        for X, Y in ((A, B), (B, A)):
            ly = Y.log_evaluate(t)
            for k in range(max_k + 1):
                c = 2.0 ** k
                lx = X.log_evaluate(c * t)
                ok = (ly <= lx + 1e-9 * np.maximum(1.0, np.abs(lx))) | np.isneginf(ly) | np.isposinf(lx)
                if ok.all():
                    cs.append(c)
                    break
            else:
                return Domination(False, None, float(t[np.argmax(~ok)]))
    return Domination(True, max(cs), None)


# ---------------------------------------------------------------------------
# Boyd indices


def _log_h(A: YoungFunction, log_t: float, n_ext: int = 600) -> float:
    """``log h_A(t)`` with ``h_A(t) = sup_s A^{-1}(s t) / A^{-1}(s)``.

    The supremum runs over the tabulated values of ``A`` extended by the
    tail models far enough that both ``s`` and ``s t`` are covered, and is
    then refined locally.
    """
    lA = A.log_A
    fin = np.isfinite(lA)
    if A.cap is not None:
        fin &= lA <= A.log_A_cap
    v = lA[fin]
    best = -np.inf
    if v.size:
        ext = abs(log_t) + 5.0
        parts = [v]
        if np.isfinite(A.p0):
            parts.insert(0, np.linspace(v[0] - ext, v[0], n_ext, endpoint=False))
        if A.cap is None and np.isfinite(A.pinf):
            parts.append(np.linspace(v[-1], v[-1] + ext, n_ext + 1)[1:])
        v = np.concatenate(parts)
        vs = np.sort(np.concatenate([v, v - log_t]))

        def gap(x):
            return A._log_inverse_v(x + log_t) - A._log_inverse_v(x)

        vals = gap(vs)
        j = int(np.argmax(vals))
        best = float(vals[j])
        lo, hi = vs[max(j - 1, 0)], vs[min(j + 1, vs.size - 1)]
        for _ in range(3):
            x = np.linspace(lo, hi, 101)
            y = gap(x)
            j = int(np.argmax(y))
            best = max(best, float(y[j]))
            lo, hi = x[max(j - 1, 0)], x[min(j + 1, x.size - 1)]
    # s -> 0 and s -> inf limits from the tails (1/inf = 0)
    for p in (A.p0, math.inf if A.cap is not None else A.pinf):
        best = max(best, log_t / p if not math.isinf(p) else 0.0)
    return best


def h_A(A: YoungFunction, t: float) -> float:
    """Dilation function of ``A^{-1}``."""
    return math.exp(_log_h(A, math.log(t)))


class BoydIndices(NamedTuple):
    lower: float
    upper: float
    slow_convergence: bool
    history: tuple


BOYD_STAGES = (20, 40, 80, 160, 320)


def _index(A: YoungFunction, direction: int, stages=BOYD_STAGES):
    """Boyd index from local log-slopes of ``h_A`` at ``t = 4**(+-k)``.

    Log factors leave an error of order ``1 / k`` in the slopes; ``k`` is
    doubled along ``stages`` and two rounds of Richardson extrapolation
    remove the first two orders.
    """
    L = math.log(4.0)

    def slope(k):
        return (_log_h(A, direction * k * L) - _log_h(A, direction * (k - 1) * L)) / (direction * L)

    s = np.array([slope(k) for k in stages])
    r1 = 2.0 * s[1:] - s[:-1]
    r2 = (4.0 * r1[1:] - r1[:-1]) / 3.0

    def to_index(x):
        return math.inf if x <= 1e-12 else 1.0 / x

    ests = tuple(to_index(x) for x in r2)
    idx, prev = ests[-1], ests[-2] if len(ests) > 1 else ests[-1]
    if math.isinf(idx) or math.isinf(prev):
        slow = math.isinf(idx) != math.isinf(prev)
    else:
        slow = abs(idx - prev) > 1e-3
    return idx, slow, ests


def boyd_indices(A: YoungFunction, stages=BOYD_STAGES) -> BoydIndices:
    """Lower and upper Boyd indices ``(i_A, I_A)``.

    Local log-slopes of ``h_A`` along ``t = 4**k`` (and ``4**-k``) are
    extrapolated in ``k``; the last two extrapolations are compared to flag
    slow convergence.  Capped functions report an infinite upper index.
    """
    lower, slow_l, hist_l = _index(A, +1, stages)
    upper, slow_u, hist_u = _index(A, -1, stages)
    if A.cap is not None:
        upper, slow_u = math.inf, False
    lower = max(lower, 1.0)
    upper = max(upper, lower)
    return BoydIndices(lower, upper, slow_l or slow_u, (hist_l, hist_u))


def orlicz_lorentz_admissible(p: float, q: float, A: YoungFunction) -> bool:
    """Whether ``int^inf A(t) t**(-1-p) dt`` converges (tail exponents)."""
    if A.cap is not None or math.isinf(A.pinf):
        return False
    return A.pinf < p or (A.pinf == p and A.alphainf < -1)
