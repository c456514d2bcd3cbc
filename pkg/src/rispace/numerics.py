"""Shared numerical substrate on the half line (0, inf).

Logarithmic grids, quadrature with power-log tail models, generalized
inversion of monotone functions and a bracketing root finder.

Infinite values are plain ``math.inf``.  Products follow the measure
theory convention ``0 * inf = 0`` (see :func:`xmul`).
"""

from __future__ import annotations

import math
import os
import warnings
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy import integrate as _spi

from .errors import NumericalError

DEFAULT_T_MIN = 1e-8
DEFAULT_T_MAX = 1e8
DEFAULT_N_POINTS = 4096
QUAD_TOL = 1e-8
ROOT_TOL = 1e-10

GRID_ENV_VAR = "RISPACE_GRID"


class NonFiniteEvaluation(NumericalError):
    """The integrand produced NaN."""


class MissingTailModel(NumericalError):
    """An unbounded integration range has no tail description."""


class EmptyBracket(NumericalError):
    """The search interval is empty or reversed."""


class BracketFailure(NumericalError):
    """Sampled values contradict the assumed monotonicity."""


# ---------------------------------------------------------------------------
# extended-real helpers


def xmul(a, b):
    """Product with the convention ``0 * inf = 0``."""
    if a == 0 or b == 0:
        return 0.0
    return a * b


def xdiv(a, b):
    """Quotient with ``1/inf = 0`` and ``a/0 = inf`` for ``a > 0``."""
    if math.isinf(b):
        return 0.0 if not math.isinf(a) else math.nan
    if b == 0:
        if a == 0:
            return math.nan
        return math.copysign(math.inf, a)
    return a / b


def conjugate_exponent(p: float) -> float:
    """Hoelder conjugate p' with 1/p + 1/p' = 1 (1' = inf, inf' = 1)."""
    if p == 1:
        return math.inf
    if math.isinf(p):
        return 1.0
    return p / (p - 1.0)


def broken_log(t, alpha0: float = 1.0, alpha_inf: float | None = None):
    """Broken power of the logarithm ``ell^[alpha0, alpha_inf](t)``.

    ``(1 - log t)**alpha0`` on (0, 1) and ``(1 + log t)**alpha_inf`` on
    [1, inf).  With a single exponent the same power is used on both sides.
    """
    if alpha_inf is None:
        alpha_inf = alpha0
    t = np.asarray(t, dtype=float)
    base = 1.0 + np.abs(np.log(t))
    out = np.where(t < 1.0, base ** alpha0, base ** alpha_inf)
    return out if out.ndim else float(out)


def broken_loglog(t, beta0: float, beta_inf: float):
    """Iterated broken logarithm ``ell ell^[beta0, beta_inf](t)``."""
    t = np.asarray(t, dtype=float)
    base = 1.0 + np.log(1.0 + np.abs(np.log(t)))
    out = np.where(t < 1.0, base ** beta0, base ** beta_inf)
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# grids


@dataclass(frozen=True)
class LogGrid:
    """Geometrically spaced abscissas on [t_min, t_max]."""

    t_min: float = DEFAULT_T_MIN
    t_max: float = DEFAULT_T_MAX
    n_points: int = DEFAULT_N_POINTS
    points: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not (0 < self.t_min < 1 < self.t_max < math.inf):
            raise ValueError("LogGrid needs 0 < t_min < 1 < t_max < inf")
        if int(self.n_points) != self.n_points or self.n_points < 3:
            raise ValueError("LogGrid needs at least 3 points")
        pts = np.geomspace(self.t_min, self.t_max, int(self.n_points))
        pts[0], pts[-1] = self.t_min, self.t_max
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "n_points", int(self.n_points))

    @property
    def ratio(self) -> float:
        return (self.t_max / self.t_min) ** (1.0 / (self.n_points - 1))

    @property
    def log_points(self) -> np.ndarray:
        return np.log(self.points)

    @classmethod
    def from_env(cls, default: "LogGrid | None" = None) -> "LogGrid":
        """Grid from ``RISPACE_GRID="t_min,t_max,n"`` if set."""
        raw = os.environ.get(GRID_ENV_VAR)
        if not raw:
            return default if default is not None else cls()
        try:
            lo, hi, n = (x.strip() for x in raw.split(","))
            return cls(float(lo), float(hi), int(n))
        except ValueError as exc:
            raise ValueError(
                f"{GRID_ENV_VAR} must look like 't_min,t_max,n', got {raw!r}"
            ) from exc

    def to_dict(self) -> dict:
        return {"t_min": self.t_min, "t_max": self.t_max, "n": self.n_points}


# ---------------------------------------------------------------------------
# quadrature


@dataclass(frozen=True)
class TailModel:
    """Asymptotic model ``c * t**exponent * ell(t)**log_exponent``.

    ``ell(t) = 1 + |log t|``.  When ``coefficient`` is None it is matched
    to the integrand at the point where the tail takes over.
    """

    exponent: float
    log_exponent: float = 0.0
    side: str = "infinity"
    coefficient: float | None = None

    def __post_init__(self):
        if self.side not in ("zero", "infinity"):
            raise ValueError("TailModel.side must be 'zero' or 'infinity'")

    def shape(self, t: float) -> float:
        return t ** self.exponent * (1.0 + abs(math.log(t))) ** self.log_exponent

    def converges(self) -> bool:
        g, a = self.exponent, self.log_exponent
        if self.side == "zero":
            return g > -1 or (g == -1 and a < -1)
        return g < -1 or (g == -1 and a < -1)

    def integral(self, t0: float, value_at_t0: float | None = None) -> float:
        """Integral of the model over (0, t0) or (t0, inf)."""
        if value_at_t0 is None or self.coefficient is not None:
            if self.coefficient is None:
                raise ValueError("tail coefficient or edge value required")
            value_at_t0 = self.coefficient * self.shape(t0)
        if value_at_t0 == 0:
            return 0.0
        if not self.converges():
            return math.inf
        # substitute u = |log s| and normalize by the value at the edge
        if self.side == "zero":
            u0 = -math.log(t0)
            k = self.exponent + 1.0
        else:
            u0 = math.log(t0)
            k = -(self.exponent + 1.0)
        return value_at_t0 * t0 * _exp_log_integral(k, self.log_exponent, u0)


def _exp_log_integral(k: float, alpha: float, u0: float) -> float:
    """Integral of exp(-k (u - u0)) ((1+|u|) / (1+|u0|))**alpha over (u0, inf)."""
    base = 1.0 + abs(u0)
    if k == 0:
        # only reached with alpha < -1 and u0 >= 0
        return base / (-alpha - 1.0)
    if alpha == 0:
        return 1.0 / k

    def h(v):
        return math.exp(-k * v) * ((1.0 + abs(u0 + v)) / base) ** alpha

    pieces = [0.0]
    if u0 < 0:
        pieces.append(-u0)
    total = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", _spi.IntegrationWarning)
        for lo, hi in zip(pieces, pieces[1:] + [math.inf]):
            val, _ = _spi.quad(h, lo, hi, epsabs=0.0, epsrel=1e-12, limit=200)
            total += val
    return total


def _sample(f: Callable, x: np.ndarray) -> np.ndarray:
    try:
        y = np.asarray(f(x), dtype=float)
        if y.shape == x.shape:
            return y
    except Exception:
        pass
    return np.array([float(f(float(v))) for v in x])


def _tails_by_side(tails) -> dict:
    if tails is None:
        return {}
    if isinstance(tails, TailModel):
        tails = [tails]
    return {t.side: t for t in tails if t is not None}


def _quad_log(f: Callable, lo: float, hi: float, tol: float, breaks) -> float:
    """Integral over [lo, hi] with 0 < lo < hi < inf, split per decade."""
    cuts = {lo, hi}
    if hi / lo > 10.0:
        cuts.update(np.geomspace(lo, hi, int(math.ceil(math.log10(hi / lo))) + 1))
    for b in breaks:
        if lo < b < hi:
            cuts.add(float(b))
    cuts = sorted(cuts)

    def g(u):
        s = math.exp(u)
        v = f(s)
        if v != v:
            raise NonFiniteEvaluation(f"integrand is NaN at s={s!r}")
        return v * s

    total = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", _spi.IntegrationWarning)
        for a, b in zip(cuts, cuts[1:]):
            if b <= a:
                continue
            val, _ = _spi.quad(g, math.log(a), math.log(b), epsabs=0.0,
                               epsrel=tol, limit=200)
            if math.isinf(val):
                return math.inf
            total += val
    return total


def integrate(
    f: Callable[[float], float],
    a: float,
    b: float,
    tails: TailModel | Sequence[TailModel] | None = None,
    tol: float = QUAD_TOL,
    grid: LogGrid | None = None,
    breakpoints: Sequence[float] = (),
) -> float:
    """Integral of ``f`` over (a, b) with 0 <= a <= b <= inf.

    Beyond the grid edges an unbounded range is handled by a tail model:
    the integrand is matched to ``c t**gamma ell(t)**alpha`` at the edge
    and the model is integrated analytically.  A divergent model gives
    ``inf``.

    Parameters
    ----------
    f : callable
        Integrand, scalar or vectorized.
    a, b : float
        Endpoints; ``a`` may be 0 and ``b`` may be ``inf``.
    tails : TailModel or sequence of TailModel, optional
        At most one model per side.  Required for ``b = inf`` unless ``f``
        vanishes near the right grid edge.
    tol : float
        Relative tolerance.
    grid : LogGrid, optional
        Supplies the edges where the tail models take over.
    breakpoints : sequence of float
        Known kinks or jumps of ``f``.

    Returns
    -------
    float
        The integral, possibly ``inf``.

    Examples
    --------
    >>> round(integrate(lambda s: s ** (-2 / 3), 1.0, 8.0), 12)
    3.0
    >>> integrate(lambda s: 1 / s, 1.0, math.inf, TailModel(-1.0))
    inf
    """
    if not (0 <= a <= b):
        raise ValueError(f"need 0 <= a <= b, got a={a!r}, b={b!r}")
    if a == b:
        return 0.0
    grid = grid or LogGrid()
    side = _tails_by_side(tails)

    inside = grid.points[(grid.points > a) & (grid.points < b)]
    if inside.size:
        vals = _sample(f, inside)
        if np.isnan(vals).any():
            bad = inside[np.isnan(vals)][0]
            raise NonFiniteEvaluation(f"integrand is NaN at s={bad!r}")
        if np.isposinf(vals).any() and not np.isinf(b) and a > 0:
            return math.inf
    else:
        vals = np.empty(0)

    lo, hi = a, b
    total = 0.0

    if math.isinf(b):
        edge = max(a, grid.t_max)
        tail = side.get("infinity")
        if tail is None:
            probe = _sample(f, np.geomspace(edge / 10.0, edge, 16))
            if np.any(probe != 0):
                raise MissingTailModel("b = inf needs a tail model at infinity")
            tail_val = 0.0
        else:
            fe = float(f(edge))
            if fe != fe:
                raise NonFiniteEvaluation(f"integrand is NaN at s={edge!r}")
            tail_val = tail.integral(edge, fe)
        if math.isinf(tail_val):
            return math.inf
        total += tail_val
        hi = edge

    if a == 0:
        edge = min(b if not math.isinf(b) else grid.t_min, grid.t_min)
        tail = side.get("zero")
        if tail is not None:
            fe = float(f(edge))
            if fe != fe:
                raise NonFiniteEvaluation(f"integrand is NaN at s={edge!r}")
            zval = tail.integral(edge, fe)
        else:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", _spi.IntegrationWarning)
                zval, _ = _spi.quad(f, 0.0, edge, epsabs=0.0, epsrel=tol, limit=200)
        if math.isinf(zval):
            return math.inf
        total += zval
        lo = edge

    if hi > lo:
        mid = _quad_log(f, lo, hi, tol, breakpoints)
        if math.isinf(mid):
            return math.inf
        total += mid
    return total


# ---------------------------------------------------------------------------
# generalized inverse and roots


class Inverse(NamedTuple):
    """Generalized inverse value; ``clamp`` is None, 'below' or 'above'."""

    value: float
    clamp: str | None = None


class Root(NamedTuple):
    """Root value; ``at_boundary`` marks a root pinned to the domain edge."""

    value: float
    at_boundary: bool = False


def _midpoint(lo: float, hi: float) -> float:
    if lo > 0 and hi / lo > 4.0 and not math.isinf(hi):
        return math.sqrt(lo) * math.sqrt(hi)
    return lo + 0.5 * (hi - lo)


def invert_monotone(
    f: Callable[[float], float], y: float, bracket: tuple[float, float]
) -> Inverse:
    """Generalized inverse ``inf{x in bracket : f(x) >= y}``.

    ``f`` is nondecreasing on the bracket.  When ``y <= f(lo)`` the result is
    the left endpoint (flagged 'below' if ``y < f(lo)``); when no point of
    the bracket reaches ``y`` the right endpoint is returned flagged 'above'.

    Examples
    --------
    >>> invert_monotone(lambda x: x * x, 4.0, (0.0, 10.0)).value
    2.0
    >>> invert_monotone(lambda x: x, -1.0, (0.0, 1.0))
    Inverse(value=0.0, clamp='below')
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    if not lo < hi:
        raise EmptyBracket(f"empty bracket [{lo!r}, {hi!r}]")
    flo = f(lo)
    if flo >= y:
        return Inverse(lo, "below" if flo > y else None)
    if f(hi) < y:
        return Inverse(hi, "above")
    # invariant: f(lo) < y <= f(hi)
    for _ in range(2000):
        mid = _midpoint(lo, hi)
        if not lo < mid < hi:
            break
        if f(mid) >= y:
            hi = mid
        else:
            lo = mid
    return Inverse(hi, None)


def find_root_decreasing(
    g: Callable[[float], float],
    target: float,
    bracket: tuple[float, float] = (1.0, 2.0),
    tol: float = ROOT_TOL,
    lower_limit: float = 0.0,
    max_expand: int = 2000,
) -> Root:
    """Solve ``g(lam) = target`` for a nonincreasing ``g`` by bisection.

    If ``g`` is already below the target at the left end of the bracket the
    search falls back to ``[lower_limit, lo]``; if ``g`` is still above it
    at the right end the bracket is doubled until it is not.  When
    ``g(lower_limit)`` meets the target the lower limit is returned with
    ``at_boundary`` set.  ``g`` may return ``inf`` for small arguments.

    Returns
    -------
    Root
        ``value`` with ``|g(value) - target| <= tol * max(1, |target|)``
        whenever ``g`` is continuous at the root; at a jump, the crossing
        point to float resolution.

    Raises
    ------
    BracketFailure
        If sampled values increase or the target is out of reach.

    Examples
    --------
    >>> find_root_decreasing(lambda x: 1 / x, 2.0).value
    0.5
    >>> find_root_decreasing(lambda x: math.exp(-x), 1.0, (1.0, 2.0))
    Root(value=0.0, at_boundary=True)
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    if not lo < hi:
        raise EmptyBracket(f"empty bracket [{lo!r}, {hi!r}]")
    scale = tol * max(1.0, abs(target))

    def ev(x):
        try:
            v = g(x)
        except ZeroDivisionError:
            return math.inf
        if v != v:
            raise BracketFailure(f"objective is NaN at {x!r}")
        return v

    glo, ghi = ev(lo), ev(hi)
    if glo < ghi:
        raise BracketFailure(f"g increases on [{lo!r}, {hi!r}]")

    if glo < target:
        gb = ev(lower_limit)
        if gb < glo:
            raise BracketFailure("g is not nonincreasing on sampled points")
        if abs(gb - target) <= scale:
            return Root(lower_limit, True)
        if gb < target:
            raise BracketFailure(
                f"target {target!r} exceeds sup g = {gb!r} on the domain")
        hi, ghi = lo, glo
        lo, glo = lower_limit, gb

    n = 0
    while ghi > target:
        n += 1
        if n > max_expand or hi > 1e300:
            raise BracketFailure("could not expand the bracket upwards")
        new = hi * 2.0 if hi > 0 else 1.0
        gnew = ev(new)
        if gnew > ghi:
            raise BracketFailure("g is not nonincreasing on sampled points")
        lo, glo = hi, ghi
        hi, ghi = new, gnew

    # invariant: g(lo) >= target >= g(hi)
    for _ in range(4000):
        if abs(ghi - target) <= scale and (hi - lo) <= 1e-13 * hi:
            break
        mid = _midpoint(lo, hi)
        if not lo < mid < hi:
            break
        gm = ev(mid)
        if gm > ghi and gm < glo or glo >= gm >= ghi:
            pass
        else:
            raise BracketFailure(f"g is not nonincreasing near {mid!r}")
        if gm > target:
            lo, glo = mid, gm
        else:
            hi, ghi = mid, gm
    if abs(glo - target) < abs(ghi - target):
        return Root(lo, lo == lower_limit)
    return Root(hi, False)


# ---------------------------------------------------------------------------
# log-space quadrature on tabulated data


def log_expm1_ratio(d):
    """``log((exp(d) - 1) / d)``, stable for every real ``d``."""
    d = np.asarray(d, dtype=float)
    out = np.empty_like(d)
    small = np.abs(d) < 1e-6
    big = d > 30.0
    neg = d < -30.0
    mid = ~(small | big | neg)
    out[small] = d[small] / 2.0 + d[small] ** 2 / 24.0
    out[big] = d[big] - np.log(d[big]) + np.log1p(-np.exp(-d[big]))
    out[neg] = np.log1p(-np.exp(d[neg])) - np.log(-d[neg])
    out[mid] = np.log(np.expm1(d[mid]) / d[mid])
    return out if out.ndim else float(out)


def log_cell_integrals(g: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Log of ``int exp(g)`` over each cell ``[u_i, u_{i+1}]``.

    ``g`` is interpolated linearly inside a cell, which makes the rule exact
    for integrands that are pure powers of ``t = exp(u)`` cell by cell.
    Cells with a ``-inf`` end contribute half the other end's rectangle.
    """
    g = np.asarray(g, dtype=float)
    du = np.diff(u)
    g0, g1 = g[:-1], g[1:]
    out = np.full(du.shape, -np.inf)
    fin = np.isfinite(g0) & np.isfinite(g1)
    out[fin] = g0[fin] + np.log(du[fin]) + log_expm1_ratio(g1[fin] - g0[fin])
    half = ~fin & ~(np.isposinf(g0) | np.isposinf(g1))
    m = np.maximum(g0, g1)
    out[half & np.isfinite(m)] = m[half & np.isfinite(m)] + np.log(du[half & np.isfinite(m)] / 2.0)
    out[np.isposinf(g0) | np.isposinf(g1)] = np.inf
    return out


def log_cumulative_integral(g: np.ndarray, u: np.ndarray, log_initial: float = -np.inf) -> np.ndarray:
    """Log of ``C + int_{u_0}^{u_i} exp(g)`` at every node, ``C = exp(log_initial)``."""
    cells = log_cell_integrals(g, u)
    with np.errstate(invalid="ignore"):
        acc = np.logaddexp.accumulate(np.concatenate(([log_initial], cells)))
    # logaddexp(inf, inf) is nan; once infinite, stay infinite
    bad = np.isnan(acc)
    if bad.any():
        first = np.argmax(bad)
        acc[first:] = np.inf
    return acc
