"""Power-log weights and piecewise nonincreasing profiles on (0, inf).

The Lorentz-type norms, Hardy images and associate norms all reduce to
integrals of products ``t**r * prod_j L_j(t)**e_j`` against functions that
are simple on a few segments.  Here ``L_1 = ell = 1 + |log t|`` and
``L_{j+1} = 1 + log L_j``; the exponents ``e_j`` depend on whether
``t < 1`` or ``t >= 1``.

A :class:`Profile` is a list of contiguous segments starting at 0.  A
segment carries either an exact :class:`PowerLog` model or a vectorized
callable, optionally with an asymptotic model used outside the numeric
window.  Integration is exact on model segments and Gauss-Legendre in
``log t`` elsewhere.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import integrate as _spi
from scipy import optimize as _spo

from .rearrange import PowerLogFunction, StepFunction

ZERO_TOL = 1e-12
GL_NODES = 12
SUBCELL_LOG_WIDTH = 0.25
WINDOW_DECADES = 14.0

_GL_X, _GL_W = np.polynomial.legendre.leggauss(GL_NODES)


def _lex_sign(seq: Sequence[float], tol: float = ZERO_TOL) -> int:
    """Sign of the first entry with ``|x| > tol``, 0 if none."""
    for x in seq:
        if x > tol:
            return 1
        if x < -tol:
            return -1
    return 0


def _snap(x: float) -> float:
    return 0.0 if abs(x) < ZERO_TOL else float(x)


def iterated_logs(u, depth: int) -> list[np.ndarray]:
    """``[L_1, ..., L_depth]`` at ``u = |log t|``."""
    out = []
    cur = 1.0 + np.asarray(u, dtype=float)
    for _ in range(depth):
        out.append(cur)
        cur = 1.0 + np.log(cur)
    return out


# ---------------------------------------------------------------------------
# integrals of exp(sigma u) prod L_j(u)^c_j


def _quad(fun: Callable, a: float, b: float) -> float:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", _spi.IntegrationWarning)
        val, _ = _spi.quad(fun, a, b, epsabs=0.0, epsrel=1e-12, limit=400)
    return val


def exp_layer_integral(sigma: float, cs: Sequence[float], ua: float, ub: float) -> float:
    """``int_ua^ub exp(sigma u) prod_j L_j(u)**cs[j] du`` for ``0 <= ua <= ub <= inf``.

    On an infinite range with ``sigma = 0`` the substitution
    ``w = log(1 + u)`` maps the problem to the same form with
    ``sigma = cs[0] + 1`` and the remaining layers, since
    ``L_{j+1}(u) = L_j(w)``.
    """
    sigma = _snap(sigma)
    cs = [_snap(c) for c in cs]
    while cs and cs[-1] == 0.0:
        cs.pop()
    if ub <= ua:
        return 0.0
    if math.isinf(ub):
        if sigma > 0:
            return math.inf
        if sigma == 0:
            if not cs:
                return math.inf
            return exp_layer_integral(cs[0] + 1.0, cs[1:], math.log1p(ua), math.inf)
    if not cs:
        if sigma == 0:
            return ub - ua
        if math.isinf(ub):
            return -math.exp(sigma * ua) / sigma
        return math.exp(sigma * ua) * math.expm1(sigma * (ub - ua)) / sigma
    if len(cs) == 1 and sigma == 0:
        c = cs[0]
        if c == -1.0:
            return math.log1p(ub) - math.log1p(ua)
        return ((1.0 + ub) ** (c + 1.0) - (1.0 + ua) ** (c + 1.0)) / (c + 1.0)
    depth = len(cs)
    carr = np.asarray(cs)

    def g(u):
        logs = iterated_logs(u, depth)
        return math.exp(sigma * u + float(np.dot(carr, np.log(logs))))

    cuts = [ua]
    if math.isinf(ub):
        scale = 1.0 / abs(sigma)
        cuts += [ua + scale, ua + 10.0 * scale, ua + 60.0 * scale]
    else:
        n = int(min(64, max(1, math.ceil((ub - ua) / 4.0))))
        cuts += list(np.linspace(ua, ub, n + 1)[1:-1])
    cuts.append(ub)
    return float(sum(_quad(g, a, b) for a, b in zip(cuts, cuts[1:]) if b > a))


def weight_integral(r: float, layers: Sequence[tuple[float, float]], a: float, b: float) -> float:
    """``int_a^b t**r prod_j L_j(t)**e_j dt`` with ``e_j = layers[j][0]`` below 1."""
    if b <= a:
        return 0.0
    total = 0.0
    if a < 1.0:
        hi = min(b, 1.0)
        ua = -math.log(hi)
        ub = math.inf if a == 0 else -math.log(a)
        total += exp_layer_integral(-(r + 1.0), [l[0] for l in layers], ua, ub)
    if b > 1.0:
        lo = max(a, 1.0)
        ub = math.inf if math.isinf(b) else math.log(b)
        total += exp_layer_integral(r + 1.0, [l[1] for l in layers], math.log(lo), ub)
    return total


# ---------------------------------------------------------------------------
# power-log products


@dataclass(frozen=True)
class PowerLog:
    """``c t**r prod_j L_j(t)**e_j`` with ``layers[j] = (e_j below 1, e_j above 1)``."""

    c: float = 1.0
    r: float = 0.0
    layers: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        lay = tuple((float(a), float(b)) for a, b in self.layers)
        while lay and lay[-1] == (0.0, 0.0):
            lay = lay[:-1]
        object.__setattr__(self, "layers", lay)
        object.__setattr__(self, "c", float(self.c))
        object.__setattr__(self, "r", float(self.r))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            out = self.c * t ** self.r
            if self.layers:
                u = np.abs(np.log(t))
                below = t < 1
                for (e0, einf), L in zip(self.layers, iterated_logs(u, len(self.layers))):
                    out = out * L ** np.where(below, e0, einf)
        return out if out.ndim else float(out)

    def log_at(self, t):
        t = np.asarray(t, dtype=float)
        lt = np.log(t)
        out = math.log(self.c) + self.r * lt if self.c > 0 else np.full_like(t, -np.inf)
        if self.layers:
            below = t < 1
            for (e0, einf), L in zip(self.layers, iterated_logs(np.abs(lt), len(self.layers))):
                out = out + np.where(below, e0, einf) * np.log(L)
        return out

    def __mul__(self, other: "PowerLog") -> "PowerLog":
        n = max(len(self.layers), len(other.layers))
        a = list(self.layers) + [(0.0, 0.0)] * (n - len(self.layers))
        b = list(other.layers) + [(0.0, 0.0)] * (n - len(other.layers))
        return PowerLog(self.c * other.c, self.r + other.r,
                        tuple((x0 + y0, x1 + y1) for (x0, x1), (y0, y1) in zip(a, b)))

    def __pow__(self, q: float) -> "PowerLog":
        return PowerLog(self.c ** q, self.r * q, tuple((a * q, b * q) for a, b in self.layers))

    def scaled(self, k: float) -> "PowerLog":
        return PowerLog(self.c * k, self.r, self.layers)

    def integral(self, a: float, b: float) -> float:
        if self.c == 0 or b <= a:
            return 0.0
        return self.c * weight_integral(self.r, self.layers, a, b)

    def limit_sign(self, side: str) -> int:
        """+1 if the product blows up at the given end, -1 if it vanishes, 0 if it tends to c."""
        if side == "zero":
            return _lex_sign([-self.r] + [a for a, _ in self.layers])
        return _lex_sign([self.r] + [b for _, b in self.layers])

    def sup(self, a: float, b: float) -> float:
        """Supremum over the open interval (a, b)."""
        if self.c == 0 or b <= a:
            return 0.0
        if a == 0 and self.limit_sign("zero") > 0:
            return math.inf
        if math.isinf(b) and self.limit_sign("infinity") > 0:
            return math.inf
        best = 0.0
        if a == 0 and self.limit_sign("zero") == 0:
            best = self.c
        if math.isinf(b) and self.limit_sign("infinity") == 0:
            best = max(best, self.c)
        lo = a if a > 0 else 1e-300
        hi = b if math.isfinite(b) else 1e300
        ll, lh = math.log(lo), math.log(hi)
        u_pts = np.concatenate(([0.0], np.geomspace(1e-8, 700.0, 400)))
        pts = np.unique(np.clip(np.concatenate((u_pts, -u_pts, [ll, lh])), ll, lh))
        vals = self.log_at(np.exp(pts))
        k = int(np.nanargmax(vals))
        lo_k, hi_k = pts[max(k - 1, 0)], pts[min(k + 1, pts.size - 1)]
        cand = float(vals[k])
        if hi_k > lo_k:
            res = _spo.minimize_scalar(lambda x: -float(self.log_at(np.array([math.exp(x)]))[0]),
                                       bounds=(lo_k, hi_k), method="bounded",
                                       options={"xatol": 1e-12})
            cand = max(cand, -float(res.fun))
        return max(best, math.exp(cand))


# ---------------------------------------------------------------------------
# profiles


@dataclass(frozen=True)
class Segment:
    """Piece of a profile on ``(lo, hi)``.

    Either ``model`` (exact) or ``func`` is given.  ``asym`` models the
    function beyond the numeric window when ``lo = 0`` or ``hi = inf``.
    """

    lo: float
    hi: float
    model: PowerLog | None = None
    func: Callable | None = None
    asym_zero: PowerLog | None = None
    asym_inf: PowerLog | None = None

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.model is not None:
            return self.model(t)
        return np.asarray(self.func(t), dtype=float)


def _window(lo: float, hi: float, scale_lo: float, scale_hi: float) -> tuple[float, float]:
    a = lo if lo > 0 else scale_lo * 10.0 ** (-WINDOW_DECADES)
    b = hi if math.isfinite(hi) else scale_hi * 10.0 ** WINDOW_DECADES
    return a, b


def _gl_nodes(a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights (in t) of composite GL in log t on (a, b), 0 < a < b < inf."""
    la, lb = math.log(a), math.log(b)
    n = max(1, int(math.ceil((lb - la) / SUBCELL_LOG_WIDTH)))
    edges = np.linspace(la, lb, n + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    u = (mid[:, None] + half[:, None] * _GL_X[None, :]).ravel()
    w = (half[:, None] * _GL_W[None, :]).ravel()
    t = np.exp(u)
    return t, w * t


@dataclass(frozen=True, eq=False)
class Profile:
    """Nonincreasing function on (0, inf) made of contiguous segments.

    The profile vanishes beyond the last segment.
    """

    segments: tuple[Segment, ...]
    label: str = ""
    exact: bool = True

    def __post_init__(self):
        segs = tuple(self.segments)
        if segs and segs[0].lo != 0:
            raise ValueError("profile must start at 0")
        for s0, s1 in zip(segs, segs[1:]):
            if s1.lo != s0.hi:
                raise ValueError("profile segments must be contiguous")
        object.__setattr__(self, "segments", segs)

    @property
    def support_end(self) -> float:
        return self.segments[-1].hi if self.segments else 0.0

    @property
    def is_zero(self) -> bool:
        return not self.segments

    def _scales(self) -> tuple[float, float]:
        finite = [s.hi for s in self.segments if math.isfinite(s.hi) and s.hi > 0]
        finite += [s.lo for s in self.segments if s.lo > 0]
        if not finite:
            return 1.0, 1.0
        return min(min(finite), 1.0), max(max(finite), 1.0)

    def breakpoints(self) -> np.ndarray:
        pts = [s.hi for s in self.segments[:-1]]
        if self.segments and math.isfinite(self.segments[-1].hi):
            pts.append(self.segments[-1].hi)
        return np.array(pts, dtype=float)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for s in self.segments:
            m = (t > s.lo) & (t <= s.hi) if math.isfinite(s.hi) else (t > s.lo)
            if np.any(m):
                out[m] = s(t[m])
        return out if out.ndim else float(out)

    def value_at_zero(self) -> float:
        if not self.segments:
            return 0.0
        s = self.segments[0]
        model = s.model if s.model is not None else s.asym_zero
        if model is not None:
            sign = model.limit_sign("zero")
            return math.inf if sign > 0 else (model.c if sign == 0 else 0.0)
        lo, _ = self._scales()
        return float(s(np.array([lo * 1e-14]))[0])

    # -- integration ----------------------------------------------------

    def weighted_power_integral(self, weight: PowerLog, q: float, lo: float = 0.0,
                                hi: float = math.inf) -> float:
        """``int_lo^hi weight(t)**q g(t)**q dt``."""
        wq = weight ** q
        s_lo, s_hi = self._scales()
        total = 0.0
        for s in self.segments:
            a, b = max(s.lo, lo), min(s.hi, hi)
            if b <= a:
                continue
            if s.model is not None:
                val = (wq * s.model ** q).integral(a, b)
            else:
                wa, wb = _window(a, b, s_lo, s_hi)
                val = 0.0
                if wb > wa:
                    t, w = _gl_nodes(wa, wb)
                    with np.errstate(over="ignore", invalid="ignore"):
                        vals = wq(t) * np.power(s(t), q)
                    vals = np.where(np.isnan(vals), 0.0, vals)
                    val = float(np.dot(vals, w))
                if a == 0 and s.asym_zero is not None:
                    val += (wq * s.asym_zero ** q).integral(0.0, min(wa, b))
                if math.isinf(b) and s.asym_inf is not None:
                    val += (wq * s.asym_inf ** q).integral(max(wb, a), math.inf)
            if math.isinf(val):
                return math.inf
            total += val
        return total

    def modular(self, phi: Callable, lo: float = 0.0, hi: float = math.inf) -> float:
        """``int_lo^hi phi(t, g(t)) dt`` for vectorized ``phi``, GL on the window."""
        s_lo, s_hi = self._scales()
        total = 0.0
        for s in self.segments:
            a, b = max(s.lo, lo), min(s.hi, hi)
            if b <= a:
                continue
            wa, wb = _window(a, b, s_lo, s_hi)
            if wa == 0 or not math.isfinite(wb):
                wa, wb = _window(wa, wb, s_lo, s_hi)
            t, w = _gl_nodes(wa, wb)
            with np.errstate(over="ignore", invalid="ignore"):
                vals = np.asarray(phi(t, s(t)), dtype=float)
            if np.any(np.isposinf(vals) & (w > 0)):
                return math.inf
            total += float(np.dot(np.nan_to_num(vals), w))
        return total

    def sup_weighted(self, weight: PowerLog, lo: float = 0.0, hi: float = math.inf) -> float:
        """``sup_{lo < t < hi} weight(t) g(t)``."""
        best = 0.0
        s_lo, s_hi = self._scales()
        for s in self.segments:
            a, b = max(s.lo, lo), min(s.hi, hi)
            if b <= a:
                continue
            if s.model is not None:
                best = max(best, (weight * s.model).sup(a, b))
                continue
            wa, wb = _window(a, b, s_lo, s_hi)
            t, _ = _gl_nodes(wa, wb)
            t = np.concatenate((t, [wa, wb]))
            best = max(best, float(np.nanmax(weight(t) * s(t))))
            if a == 0 and s.asym_zero is not None:
                best = max(best, (weight * s.asym_zero).sup(0.0, wa))
            if math.isinf(b) and s.asym_inf is not None:
                best = max(best, (weight * s.asym_inf).sup(wb, math.inf))
        return best

    def cumulative(self, points: np.ndarray) -> np.ndarray:
        """``G(t) = int_0^t g`` at increasing finite ``points``."""
        points = np.asarray(points, dtype=float)
        out = np.empty_like(points)
        prev, acc = 0.0, 0.0
        one = PowerLog()
        for i, t in enumerate(points):
            acc += self.weighted_power_integral(one, 1.0, prev, t)
            out[i] = acc
            prev = t
        return out

    def total_integral(self) -> float:
        return self.weighted_power_integral(PowerLog(), 1.0)

    def scaled(self, k: float) -> "Profile":
        segs = []
        for s in self.segments:
            if s.model is not None:
                segs.append(Segment(s.lo, s.hi, model=s.model.scaled(k)))
            else:
                f = s.func
                segs.append(Segment(s.lo, s.hi, func=(lambda t, f=f: k * np.asarray(f(t))),
                                    asym_zero=s.asym_zero.scaled(k) if s.asym_zero else None,
                                    asym_inf=s.asym_inf.scaled(k) if s.asym_inf else None))
        return Profile(tuple(segs), self.label, self.exact)


# ---------------------------------------------------------------------------
# constructors


def step_profile(f: StepFunction) -> Profile:
    """Profile of ``f*``: one constant segment per canonical piece."""
    ends, vals = f.rearrangement_arrays()
    segs, lo = [], 0.0
    for e, v in zip(ends, vals):
        segs.append(Segment(lo, float(e), model=PowerLog(float(v))))
        lo = float(e)
    return Profile(tuple(segs), "step")


def powerlog_segment_model(f: PowerLogFunction) -> PowerLog:
    return PowerLog(f.c, -f.gamma, ((-f.alpha0, -f.alpha_inf),))


def powerlog_profile(f: PowerLogFunction) -> Profile:
    """Profile of a nonincreasing power-log function supported on (0, T)."""
    return Profile((Segment(0.0, f.support[1], model=powerlog_segment_model(f)),), "powerlog")


def discretize_powerlog(f: PowerLogFunction, per_decade: int = 64) -> StepFunction:
    """Step function of geometric-midpoint values of ``f`` on its support.

    The pieces follow the natural left-to-right order and start with a
    zero piece of measure ``support[0]``, so ``pointwise`` reproduces the
    arrangement of ``f``.  Cells adjacent to 0 or inf are cut at the
    default window.
    """
    lo, hi = f.support
    a = lo if lo > 0 else 1e-12
    b = hi if math.isfinite(hi) else 1e12
    n = max(2, int(math.ceil(per_decade * math.log10(b / a))))
    edges = np.geomspace(a, b, n + 1)
    edges[0], edges[-1] = a, b
    mids = np.sqrt(edges[1:] * edges[:-1])
    vals = np.asarray(f(mids), dtype=float)
    pieces = []
    if lo > 0:
        pieces.append((lo, 0.0))
    else:
        pieces.append((a, float(f(np.array([a]))[0])))
    pieces += [(float(m), float(v)) for m, v in zip(np.diff(edges), vals)]
    return StepFunction(pieces)


def sampled_rearrangement(func: Callable, lo: float, hi: float, per_decade: int = 200,
                          head: float | None = None, tail: PowerLog | None = None,
                          breaks: Sequence[float] = ()) -> Profile:
    """Nonincreasing rearrangement of a nonnegative function sampled on (lo, hi).

    The window is split into geometric cells (refined at ``breaks``) and
    each cell takes the value at its geometric midpoint.  ``head`` values
    the cell (0, lo) and ``tail`` models the function beyond ``hi``; the
    tail is appended after the sorted body, which is exact when every body
    value exceeds the tail's values.
    """
    n = max(2, int(math.ceil(per_decade * math.log10(hi / lo))))
    edges = np.unique(np.concatenate((np.geomspace(lo, hi, n + 1),
                                      [b for b in breaks if lo < b < hi])))
    mids = np.sqrt(edges[1:] * edges[:-1])
    vals = np.asarray(func(mids), dtype=float)
    meas = np.diff(edges)
    if head is not None and lo > 0:
        vals = np.concatenate(([head], vals))
        meas = np.concatenate(([lo], meas))
    body = StepFunction((float(m), float(v)) for m, v in zip(meas, vals)).canonical()
    segs = list(step_profile(body).segments)
    if tail is not None:
        start = segs[-1].hi if segs else 0.0
        shift = hi - start
        # s -> tail(s + shift): after the body, the tail occupies its own measure
        segs.append(Segment(start, math.inf,
                            func=lambda s, shift=shift: tail(np.asarray(s) + shift),
                            asym_inf=tail))
    return Profile(tuple(segs), "sampled", exact=False)


# ---------------------------------------------------------------------------
# Hardy images


class _RightPrimitive:
    """``t -> int_t^hi k(s) ds`` on ``(lo, hi)`` from a cumulative table."""

    def __init__(self, k: Callable, lo: float, hi: float, scale_lo: float, scale_hi: float,
                 asym_inf: PowerLog | None = None, log_step: float = 0.05):
        self.k = k
        a, b = _window(lo, hi, scale_lo, scale_hi)
        n = max(1, int(math.ceil(math.log(b / a) / log_step)))
        self.nodes = np.geomspace(a, b, n + 1)
        self.nodes[0], self.nodes[-1] = a, b
        cells = self._gl(self.nodes[:-1], self.nodes[1:])
        rest = 0.0
        if math.isinf(hi) and asym_inf is not None:
            rest = asym_inf.integral(b, math.inf)
        self.right = np.concatenate((np.cumsum(cells[::-1])[::-1], [0.0])) + rest
        self.lo, self.hi = lo, hi

    def _gl(self, a, b):
        la, lb = np.log(a), np.log(b)
        half, mid = 0.5 * (lb - la), 0.5 * (lb + la)
        xg, wg = np.polynomial.legendre.leggauss(8)
        t = np.exp(mid[..., None] + half[..., None] * xg)
        vals = np.asarray(self.k(t.ravel()), dtype=float).reshape(t.shape)
        return np.sum(vals * t * wg, axis=-1) * half

    def __call__(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        tc = np.clip(t, self.nodes[0], self.nodes[-1])
        idx = np.clip(np.searchsorted(self.nodes, tc, side="right"), 1, self.nodes.size - 1)
        out = self.right[idx] + self._gl(tc, self.nodes[idx])
        return out


def hardy_profile(prof: Profile, theta: float) -> Profile:
    """Profile of ``H g(t) = int_t^inf g(s) s**(theta - 1) ds``.

    ``prof`` need not be monotone: ``H g`` is nonincreasing for every
    nonnegative ``g``.
    """
    kern = PowerLog(1.0, theta - 1.0)
    s_lo, s_hi = prof._scales()
    segs = prof.segments
    # contribution of each segment over its whole range
    whole = []
    for s in segs:
        if s.model is not None:
            whole.append((s.model * kern).integral(s.lo, s.hi))
        else:
            prim = _RightPrimitive(lambda t, s=s: s(t) * t ** (theta - 1.0), s.lo, s.hi, s_lo, s_hi,
                                   asym_inf=(s.asym_inf * kern) if s.asym_inf else None)
            whole.append(float(prim.right[0]))
    whole = np.array(whole)
    after = np.concatenate((np.cumsum(whole[::-1])[::-1][1:], [0.0]))
    out = []
    for s, c_after in zip(segs, after):
        if s.model is not None:
            k = s.model * kern
            if not k.layers:
                sig = _snap(k.r + 1.0)
                hi = s.hi

                def f(t, k=k, sig=sig, hi=hi, c_after=c_after):
                    t = np.asarray(t, dtype=float)
                    if sig == 0:
                        return c_after + k.c * (math.log(hi) - np.log(t))
                    if math.isinf(hi):
                        return c_after - k.c * t ** sig / sig
                    return c_after + k.c * (hi ** sig - t ** sig) / sig
            else:
                prim = _RightPrimitive(k, s.lo, s.hi, s_lo, s_hi, asym_inf=k)

                def f(t, prim=prim, c_after=c_after):
                    return c_after + prim(t)
            asym = None
            if s.lo == 0:
                sig = _snap(k.r + 1.0)
                if sig > 0 or (sig == 0 and _lex_sign([a for a, _ in k.layers]) < 0):
                    tot = float(c_after + whole[0])
                    asym = PowerLog(tot)
                elif sig < 0:
                    asym = PowerLog(k.c / -sig, sig, k.layers)
            out.append(Segment(s.lo, s.hi, func=f, asym_zero=asym))
        else:
            prim = _RightPrimitive(lambda t, s=s: s(t) * t ** (theta - 1.0), s.lo, s.hi, s_lo, s_hi,
                                   asym_inf=(s.asym_inf * kern) if s.asym_inf else None)
            out.append(Segment(s.lo, s.hi, func=lambda t, prim=prim, c=c_after: c + prim(t),
                               asym_zero=PowerLog(float(c_after + prim.right[0])) if s.lo == 0 else None))
    return Profile(tuple(out), "hardy", prof.exact)


def arranged_profile(f: StepFunction) -> Profile:
    """``f`` with its pieces laid left to right in input order."""
    segs, lo = [], 0.0
    for m, v in f.pieces:
        segs.append(Segment(lo, lo + m, model=PowerLog(v)))
        lo += m
    return Profile(tuple(segs), "arranged")


def hardy_profile_arranged(f: StepFunction, theta: float) -> Profile:
    return hardy_profile(arranged_profile(f), theta)


# ---------------------------------------------------------------------------
# general nonnegative curves

CURVE_CELL_LOG_WIDTH = 0.025
CURVE_GL_NODES = 8
CURVE_MAX_END = 1e200

_CGL_X, _CGL_W = np.polynomial.legendre.leggauss(CURVE_GL_NODES)


def _log_cells(lo: float, hi: float, breaks: Sequence[float], width: float) -> np.ndarray:
    """Cell edges in log t on ``(lo, hi)``: ``breaks`` plus a uniform split."""
    edges = [lo] + sorted(b for b in set(breaks) if lo < b < hi) + [hi]
    out = [np.array([math.log(lo)])]
    for a, b in zip(edges, edges[1:]):
        la, lb = math.log(a), math.log(b)
        n = max(1, int(math.ceil((lb - la) / width)))
        out.append(np.linspace(la, lb, n + 1)[1:])
    return np.concatenate(out)


@dataclass(frozen=True, eq=False)
class Curve:
    """Nonnegative function on (0, inf), not necessarily monotone.

    ``func`` is evaluated on ``[lo, hi]``; ``head`` and ``tail`` model the
    function on ``(0, lo)`` and ``(hi, inf)``.  ``breaks`` mark kinks of
    ``func`` that quadrature cells should not straddle.
    """

    func: Callable
    lo: float
    hi: float
    head: PowerLog
    tail: PowerLog
    breaks: tuple[float, ...] = ()

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.where(t < self.lo, self.head(np.minimum(t, self.lo)),
                       self.tail(np.maximum(t, self.hi)))
        mid = (t >= self.lo) & (t <= self.hi)
        if np.any(mid):
            out = np.array(out, dtype=float)
            out[mid] = np.asarray(self.func(t[mid]), dtype=float)
        return out if out.ndim else float(out)

    def nodes(self, hi: float | None = None) -> tuple[np.ndarray, np.ndarray]:
        """GL nodes and weights (in t) on ``(lo, hi)``."""
        hi = self.hi if hi is None else hi
        u = _log_cells(self.lo, hi, self.breaks, CURVE_CELL_LOG_WIDTH)
        half = 0.5 * np.diff(u)
        mid = 0.5 * (u[1:] + u[:-1])
        x = (mid[:, None] + half[:, None] * _CGL_X[None, :]).ravel()
        w = (half[:, None] * _CGL_W[None, :]).ravel()
        t = np.exp(x)
        return t, w * t

    def lebesgue_norm(self, p: float) -> float:
        """``||g||_{L^p(0, inf)}`` in the given arrangement."""
        t, w = self.nodes()
        vals = np.asarray(self.func(t), dtype=float)
        if math.isinf(p):
            edge = np.asarray(self.func(np.array([self.lo, self.hi] + list(self.breaks))))
            return max(float(np.max(vals)), float(np.max(edge)),
                       self.head.sup(0.0, self.lo), self.tail.sup(self.hi, math.inf))
        body = float(np.dot(vals ** p, w))
        total = body + (self.head ** p).integral(0.0, self.lo) + (self.tail ** p).integral(
            self.hi, math.inf)
        return math.inf if math.isinf(total) else total ** (1.0 / p)

    def rearranged(self) -> "SortedCurve":
        """Nonincreasing rearrangement from quadrature-weighted samples.

        Each GL node carries its weight as measure, so integrals of
        ``Phi(g*)`` reproduce the quadrature of ``Phi(g)``.  The body is
        extended into the tail until the tail drops below every body
        value; the rest of the tail is appended after the sorted body.
        """
        head_mean = self.head.integral(0.0, self.lo) / self.lo
        t, w = self.nodes()
        vals = np.asarray(self.func(t), dtype=float)
        floor = min(float(np.min(vals)) if vals.size else math.inf, head_mean)
        end = self.hi
        if self.tail.c > 0 and self.tail.limit_sign("infinity") < 0 and floor > 0:
            if self.tail(self.hi) > floor:
                end = self._tail_crossing(floor)
        if end > self.hi:
            t2, w2 = Curve(self.tail, self.hi, end, self.tail, self.tail).nodes()
            t, w = np.concatenate((t, t2)), np.concatenate((w, w2))
            vals = np.concatenate((vals, self.tail(t2)))
        vals = np.concatenate(([head_mean], vals))
        w = np.concatenate(([self.lo], w))
        order = np.argsort(-vals, kind="stable")
        return SortedCurve(np.cumsum(w[order]), vals[order], self.tail, end)

    def _tail_crossing(self, level: float) -> float:
        a, b = math.log(self.hi), math.log(CURVE_MAX_END)
        if self.tail(CURVE_MAX_END) > level:
            return CURVE_MAX_END
        for _ in range(200):
            m = 0.5 * (a + b)
            if self.tail(math.exp(m)) > level:
                a = m
            else:
                b = m
        return math.exp(b)


@dataclass(frozen=True, eq=False)
class SortedCurve:
    """Nonincreasing step function (``ends``, ``vals``) followed by a tail.

    Beyond ``ends[-1]`` the value is ``tail(s - ends[-1] + tail_start)``.
    """

    ends: np.ndarray
    vals: np.ndarray
    tail: PowerLog
    tail_start: float

    @property
    def body_measure(self) -> float:
        return float(self.ends[-1])

    def _shift(self) -> float:
        return self.tail_start - self.body_measure

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        idx = np.searchsorted(self.ends, s, side="right")
        inside = idx < self.ends.size
        out = np.where(inside, self.vals[np.minimum(idx, self.ends.size - 1)], 0.0)
        beyond = ~inside
        if np.any(beyond):
            out = np.array(out, dtype=float)
            out[beyond] = self.tail(s[beyond] + self._shift())
        return out if out.ndim else float(out)

    def primitive(self, s) -> np.ndarray:
        """``int_0^s g*``, exact for the step body and the power tail."""
        s = np.atleast_1d(np.asarray(s, dtype=float))
        cum = np.concatenate(([0.0], np.cumsum(self.vals * np.diff(np.concatenate(([0.0],
                                                                                   self.ends))))))
        starts = np.concatenate(([0.0], self.ends[:-1]))
        idx = np.clip(np.searchsorted(self.ends, s, side="right"), 0, self.ends.size)
        out = np.empty_like(s)
        inside = idx < self.ends.size
        i = idx[inside]
        out[inside] = cum[i] + self.vals[i] * (s[inside] - starts[i])
        if np.any(~inside):
            x = s[~inside] + self._shift()
            k = self.tail
            sig = _snap(k.r + 1.0)
            if k.layers:
                extra = np.array([k.integral(self.tail_start, b) for b in x])
            elif sig == 0:
                extra = k.c * np.log(x / self.tail_start)
            else:
                extra = k.c * (x ** sig - self.tail_start ** sig) / sig
            out[~inside] = cum[-1] + extra
        return out

    def profile(self) -> Profile:
        """As a :class:`Profile` whose body interpolates log g* in log s."""
        mids = self.ends - 0.5 * np.diff(np.concatenate(([0.0], self.ends)))
        pos = self.vals > 0
        lx, ly = np.log(mids[pos]), np.log(self.vals[pos])
        S = self.body_measure

        def body(s, lx=lx, ly=ly):
            return np.exp(np.interp(np.log(np.asarray(s, dtype=float)), lx, ly))

        sh = self._shift()
        segs = [Segment(0.0, S, func=body, asym_zero=PowerLog(float(self.vals[0])))]
        if self.tail.c > 0:
            segs.append(Segment(S, math.inf, func=lambda s: self.tail(np.asarray(s) + sh),
                                asym_inf=self.tail))
        return Profile(tuple(segs), "rearranged", exact=False)
