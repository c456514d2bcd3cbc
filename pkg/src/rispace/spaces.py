"""Rearrangement-invariant norms, associate norms and fundamental functions.

Every space here is a frozen dataclass.  Lorentz-type spaces reduce to a
weighted Lebesgue norm ``||w f*||_{L^q(lo, hi)}`` with a power-log weight
``w``; this is the "Lambda form" used both for norms and for exact
associate norms (via the level function of ``g*`` with respect to
``w**q dt``).

Inputs are :class:`~rispace.rearrange.StepFunction`,
:class:`~rispace.rearrange.PowerLogFunction` or an already nonincreasing
:class:`~rispace.profiles.Profile`.
"""

from __future__ import annotations

import dataclasses
import functools
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy import optimize as _spo

from .errors import InadmissibleError, ParseError, RispaceError
from .numerics import conjugate_exponent, find_root_decreasing
from .profiles import (
    GL_NODES,
    PowerLog,
    Profile,
    Segment,
    ZERO_TOL,
    _gl_nodes,
    _lex_sign,
    discretize_powerlog,
    hardy_profile,
    hardy_profile_arranged,
    powerlog_profile,
    powerlog_segment_model,
    step_profile,
)
from .rearrange import PowerLogFunction, StepFunction, rearranged_pairing
from . import young as _young

INF = math.inf
HOLDER_SLACK = 1e-6
DUALITY_TOL = 1e-6
LEVEL_LOG_STEP = 0.004
LEVEL_DECADES = 12.0


class InadmissibleSpace(InadmissibleError):
    """Parameters do not define a (quasi-)normed space."""


class AssociateUnavailable(RispaceError):
    """No exact associate norm is implemented for this space."""


class NormResult(NamedTuple):
    """Norm value with the method used and an error estimate."""

    value: float
    method: str
    est_error: float = 0.0


# ---------------------------------------------------------------------------
# admissibility


def is_ri_norm_lz(p: float, q: float, alpha: Sequence[float] = (0.0, 0.0)) -> bool:
    """Whether ``L^{p,q;alpha}`` is equivalent to an r.i. norm.

    The four admissible clauses are: ``p = q = 1`` with ``alpha0 >= 0``
    and ``alpha_inf <= 0``; ``1 < p < inf``; ``p = inf``, ``q < inf``
    with ``alpha0 + 1/q < 0``; ``p = q = inf`` with ``alpha0 <= 0``.
    """
    a0, ainf = float(alpha[0]), float(alpha[1])
    if not (1 <= p <= INF and 1 <= q <= INF):
        return False
    if p == 1:
        return q == 1 and a0 >= 0 and ainf <= 0
    if p < INF:
        return True
    if q < INF:
        return a0 + 1.0 / q < 0
    return a0 <= 0


def _glz_condition(p: float, q: float, layers) -> tuple[bool, bool]:
    """``(nontrivial, normable)`` for a Lorentz-Zygmund space with log layers."""
    zero = [a for a, _ in layers]
    inf_side = [b for _, b in layers]
    if p < INF:
        if p < 1 or (p == 1 and q > 1):
            return True, False
        if p == 1:
            return True, _lex_sign(zero, 0.0) >= 0 and _lex_sign(inf_side, 0.0) <= 0
        return True, True
    if q < INF:
        # int_0 t^-1 prod L_j^{q e_j} dt < inf iff the first q e_j != -1 is below -1
        ok = _lex_sign([q * a + 1.0 for a in zero], 0.0) < 0
        return ok, ok
    ok = _lex_sign(zero, 0.0) <= 0
    return ok, ok


# ---------------------------------------------------------------------------
# space types


class Space:
    """Base class.  Subclasses are frozen dataclasses."""

    quasi_norm = False

    def spec(self) -> str:
        raise NotImplementedError

    def to_dict(self) -> dict:
        return {"space": self.spec()}

    def __str__(self) -> str:
        return self.spec()

    def canonical(self) -> "Space":
        return self


def _fmt(x: float) -> str:
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    r = repr(float(x))
    return r[:-2] if r.endswith(".0") else r


@dataclass(frozen=True)
class Lebesgue(Space):
    p: float

    def __post_init__(self):
        object.__setattr__(self, "p", float(self.p))
        if not self.p > 0:
            raise InadmissibleSpace("Lebesgue exponent must be positive")

    @property
    def quasi_norm(self) -> bool:
        return self.p < 1

    def lambda_form(self):
        if math.isinf(self.p):
            return [(PowerLog(), INF, 0.0, INF)]
        return [(PowerLog(), self.p, 0.0, INF)]

    def spec(self) -> str:
        return f"lebesgue:p={_fmt(self.p)}"


@dataclass(frozen=True)
class LorentzZygmund(Space):
    """``||t^(1/p - 1/q) ell^alpha(t) L_2^beta(t) ... f*(t)||_{L^q}``.

    ``extra`` holds further log layers, e.g. ``((b0, binf),)`` for the
    generalized spaces with an ``ell ell`` factor.  Parameters for which
    only the zero function has finite norm are rejected, except with extra
    layers, where they are kept and flagged by :attr:`trivial`.
    """

    p: float
    q: float
    alpha: tuple[float, float] = (0.0, 0.0)
    extra: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "p", float(self.p))
        object.__setattr__(self, "q", float(self.q))
        object.__setattr__(self, "alpha", (float(self.alpha[0]), float(self.alpha[1])))
        object.__setattr__(self, "extra", tuple((float(a), float(b)) for a, b in self.extra))
        if not (self.p > 0 and self.q > 0):
            raise InadmissibleSpace("Lorentz exponents must be positive")
        nontrivial, _ = _glz_condition(self.p, self.q, self.layers)
        if not nontrivial and not self.extra:
            raise InadmissibleSpace(
                f"L^{{{_fmt(self.p)},{_fmt(self.q)}}} with log exponents {self.layers} is trivial"
                + (" (p = inf needs alpha0 + 1/q < 0)" if math.isinf(self.p) and self.q < INF
                   else ""))

    @property
    def trivial(self) -> bool:
        """True when only the zero function has finite norm."""
        return not _glz_condition(self.p, self.q, self.layers)[0]

    @property
    def layers(self) -> tuple[tuple[float, float], ...]:
        return (self.alpha,) + self.extra

    @property
    def quasi_norm(self) -> bool:
        return not _glz_condition(self.p, self.q, self.layers)[1]

    def lambda_form(self):
        if math.isinf(self.q):
            r = 0.0 if math.isinf(self.p) else 1.0 / self.p
        else:
            r = (0.0 if math.isinf(self.p) else 1.0 / self.p) - 1.0 / self.q
        return [(PowerLog(1.0, r, self.layers), self.q, 0.0, INF)]

    def canonical(self) -> Space:
        if all(a == 0 and b == 0 for a, b in self.layers):
            return Lorentz(self.p, self.q).canonical()
        return self

    def spec(self) -> str:
        s = f"lz:p={_fmt(self.p)},q={_fmt(self.q)},a0={_fmt(self.alpha[0])},ainf={_fmt(self.alpha[1])}"
        if self.extra:
            s = "g" + s
            for (a, b), (k0, k1) in zip(self.extra, _LAYER_KEYS):
                s += f",{k0}={_fmt(a)},{k1}={_fmt(b)}"
        return s


_LAYER_KEYS = (("b0", "binf"), ("c0", "cinf"), ("d0", "dinf"))


def GLZ(p: float, q: float, alpha, beta, *more) -> LorentzZygmund:
    """Lorentz-Zygmund space with iterated-log layers ``beta, ...``."""
    return LorentzZygmund(p, q, tuple(alpha), (tuple(beta),) + tuple(tuple(m) for m in more))


@dataclass(frozen=True)
class Lorentz(LorentzZygmund):
    """``L^{p,q}``.  ``p = inf`` with ``q < inf`` is rejected (only 0)."""

    def __init__(self, p: float, q: float):
        super().__init__(p, q, (0.0, 0.0), ())

    def canonical(self) -> Space:
        if self.p == self.q:
            return Lebesgue(self.p)
        return self

    def spec(self) -> str:
        return f"lorentz:p={_fmt(self.p)},q={_fmt(self.q)}"


@dataclass(frozen=True)
class Orlicz(Space):
    young: _young.YoungFunction = field(compare=False)
    label: str = ""

    def spec(self) -> str:
        kind = self.label or self.young.name or "inline"
        return f"orlicz:young={kind}"

    def to_dict(self) -> dict:
        return {"space": self.spec(), "young": self.young.to_dict()}

    @functools.cached_property
    def conjugate(self) -> _young.YoungFunction:
        return _young.conjugate(self.young)


@dataclass(frozen=True)
class OrliczLorentz(Space):
    """``||t^(-1/p) f*(t^(1/q))||_{L^A}``."""

    p: float
    q: float
    young: _young.YoungFunction = field(compare=False)
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "p", float(self.p))
        object.__setattr__(self, "q", float(self.q))
        if not (1 < self.p < INF and 1 <= self.q < INF):
            raise InadmissibleSpace("Orlicz-Lorentz needs 1 < p < inf and 1 <= q < inf")
        if not _young.orlicz_lorentz_admissible(self.p, self.q, self.young):
            raise InadmissibleSpace("int^inf A(t)/t^(1+p) dt diverges")

    @functools.cached_property
    def tail_moment(self) -> _young.TailMoment:
        return _young.TailMoment(self.young, self.p)

    def spec(self) -> str:
        kind = self.label or self.young.name or "inline"
        return f"orlicz-lorentz:p={_fmt(self.p)},q={_fmt(self.q)},young={kind}"

    def to_dict(self) -> dict:
        return {"space": self.spec(), "young": self.young.to_dict()}


@dataclass(frozen=True)
class Y1(Space):
    """``int_0^1 t^-1 ell(t)^(alpha0 - 1) f*(t) dt`` (needs ``alpha0 < 0``)."""

    alpha0: float

    def __post_init__(self):
        object.__setattr__(self, "alpha0", float(self.alpha0))
        if not self.alpha0 < 0:
            raise InadmissibleSpace("Y1 needs alpha0 < 0")

    def lambda_form(self):
        return [(PowerLog(1.0, -1.0, ((self.alpha0 - 1.0, 0.0),)), 1.0, 0.0, 1.0)]

    def spec(self) -> str:
        return f"y1:a0={_fmt(self.alpha0)}"


@dataclass(frozen=True)
class Y2(Space):
    """``||f||_inf + ||t^(-1/q) ell(t)^(alpha_inf - 1) f*(t)||_{L^q(1, inf)}``."""

    q: float
    alpha_inf: float

    def __post_init__(self):
        object.__setattr__(self, "q", float(self.q))
        object.__setattr__(self, "alpha_inf", float(self.alpha_inf))
        if not 1 <= self.q < INF:
            raise InadmissibleSpace("Y2 needs 1 <= q < inf")

    def lambda_form(self):
        w = PowerLog(1.0, -1.0 / self.q, ((0.0, self.alpha_inf - 1.0),))
        return [(PowerLog(), INF, 0.0, INF), (w, self.q, 1.0, INF)]

    def spec(self) -> str:
        return f"y2:q={_fmt(self.q)},ainf={_fmt(self.alpha_inf)}"


@dataclass(frozen=True)
class X2(Space):
    """``||t^(-1/q) ell^alpha(t) int_t^inf f*(s) s^(theta - 1) ds||_{L^q}``."""

    q: float
    alpha: tuple[float, float]
    theta: float

    def __post_init__(self):
        object.__setattr__(self, "q", float(self.q))
        object.__setattr__(self, "alpha", (float(self.alpha[0]), float(self.alpha[1])))
        object.__setattr__(self, "theta", float(self.theta))
        if not 0 < self.theta < 1:
            raise InadmissibleSpace("X2 needs 0 < m/n < 1")

    def weight(self) -> PowerLog:
        r = 0.0 if math.isinf(self.q) else -1.0 / self.q
        return PowerLog(1.0, r, (self.alpha,))

    def spec(self) -> str:
        return (f"x2:q={_fmt(self.q)},a0={_fmt(self.alpha[0])},ainf={_fmt(self.alpha[1])},"
                f"mn={_fmt(self.theta)}")


@dataclass(frozen=True)
class X1(Space):
    """``sup_{h ~ f} ||t^(1 - theta - 1/q) ell^alpha(t) int_t^inf h(s) s^(theta-1) ds||_{L^q}``.

    The supremum over equimeasurable ``h`` is evaluated over piece
    orderings of step functions (a lower bound, flagged as such).
    """

    q: float
    alpha: tuple[float, float]
    theta: float
    n_shuffles: int = 32
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "q", float(self.q))
        object.__setattr__(self, "alpha", (float(self.alpha[0]), float(self.alpha[1])))
        object.__setattr__(self, "theta", float(self.theta))
        if not 0 < self.theta < 1:
            raise InadmissibleSpace("X1 needs 0 < m/n < 1")

    def weight(self) -> PowerLog:
        r = 1.0 - self.theta - (0.0 if math.isinf(self.q) else 1.0 / self.q)
        return PowerLog(1.0, r, (self.alpha,))

    def spec(self) -> str:
        return (f"x1:q={_fmt(self.q)},a0={_fmt(self.alpha[0])},ainf={_fmt(self.alpha[1])},"
                f"mn={_fmt(self.theta)}")


@dataclass(frozen=True)
class Associate(Space):
    """The associate space ``X'`` with its exact norm."""

    base: Space

    @property
    def quasi_norm(self) -> bool:
        return False

    def spec(self) -> str:
        return f"associate({self.base.spec()})"

    def to_dict(self) -> dict:
        return {"space": self.spec(), "base": self.base.to_dict()}


@dataclass(frozen=True)
class Intersection(Space):
    """``X_1 cap X_2 cap ...`` normed by the maximum of the norms."""

    parts: tuple[Space, ...]

    def spec(self) -> str:
        return " & ".join(p.spec() for p in self.parts)

    def to_dict(self) -> dict:
        return {"space": self.spec(), "parts": [p.to_dict() for p in self.parts]}


# ---------------------------------------------------------------------------
# inputs


def as_profile(f) -> Profile:
    """Nonincreasing rearrangement of ``f`` as a profile.

    Power-log functions that are not their own rearrangement are
    discretized into geometric steps first (``Profile.exact`` is False).
    """
    if isinstance(f, Profile):
        return f
    if isinstance(f, StepFunction):
        return step_profile(f)
    if isinstance(f, PowerLogFunction):
        if f.support[0] == 0 and f.is_nonincreasing:
            return powerlog_profile(f)
        prof = step_profile(discretize_powerlog(f, per_decade=256))
        return Profile(prof.segments, "discretized", exact=False)
    raise TypeError(f"cannot take a norm of {type(f).__name__}")


def natural_profile(f: PowerLogFunction) -> Profile:
    """``f`` in its own arrangement (not necessarily monotone)."""
    lo, hi = f.support
    segs = []
    if lo > 0:
        segs.append(Segment(0.0, lo, model=PowerLog(0.0)))
    segs.append(Segment(lo, hi, model=powerlog_segment_model(f)))
    return Profile(tuple(segs), "natural")


def _method(prof: Profile, weights: Sequence[PowerLog] = ()) -> tuple[str, float]:
    if not prof.exact:
        return "quadrature", 1e-4
    closed = all(s.model is not None for s in prof.segments) and all(
        len(w.layers) == 0 for w in weights)
    return ("closed_form", 0.0) if closed else ("quadrature", 1e-9)


def _lambda_value(prof: Profile, w: PowerLog, q: float, lo: float, hi: float) -> float:
    if math.isinf(q):
        return prof.sup_weighted(w, lo, hi)
    val = prof.weighted_power_integral(w, q, lo, hi)
    return INF if math.isinf(val) else val ** (1.0 / q)


# ---------------------------------------------------------------------------
# norms


def _magnitude(f) -> float:
    """A representative size of ``|f|``, used to keep powers in float range."""
    if isinstance(f, StepFunction):
        return max((v for _, v in f.pieces), default=0.0)
    if isinstance(f, PowerLogFunction):
        lo, hi = f.support
        t = math.sqrt(lo * hi) if lo > 0 and math.isfinite(hi) else (hi / 2 if math.isfinite(hi) else 1.0 + lo)
        return float(abs(f(t)))
    return 1.0


def norm(space: Space, f) -> NormResult:
    """Norm of ``f`` in ``space``; ``inf`` when it diverges.

    Lorentz-type spaces integrate the weighted rearrangement exactly on
    step and power-log pieces; Orlicz norms solve the Luxemburg equation
    ``int A(f*/lam) = 1`` for ``lam``.  Functions of extreme magnitude are
    rescaled first so that ``|f|^q`` does not underflow.
    """
    s = _magnitude(f)
    if s > 0 and math.isfinite(s) and not 1e-30 < s < 1e30:
        g = (dataclasses.replace(f, c=f.c / s) if isinstance(f, PowerLogFunction)
             else StepFunction([(m, v / s) for m, v in f.pieces]))
        r = _norm(space, g)
        return NormResult(r.value * s, r.method, r.est_error * s)
    return _norm(space, f)


def _norm(space: Space, f) -> NormResult:
    if isinstance(f, PowerLogFunction) and isinstance(space, Lebesgue):
        prof = natural_profile(f)
        (w, q, lo, hi), = space.lambda_form()
        m, e = _method(prof, [w])
        v = _lambda_value(prof, w, q, lo, hi)
        return NormResult(v, m, e * v if math.isfinite(v) else 0.0)
    prof = as_profile(f)
    if prof.is_zero:
        return NormResult(0.0, "closed_form", 0.0)
    if hasattr(space, "lambda_form"):
        form = space.lambda_form()
        val = sum(_lambda_value(prof, w, q, lo, hi) for w, q, lo, hi in form)
        m, e = _method(prof, [w for w, *_ in form])
        return NormResult(val, m, e * val if math.isfinite(val) else 0.0)
    if isinstance(space, Orlicz):
        return _luxemburg(space.young, prof)
    if isinstance(space, OrliczLorentz):
        return _orlicz_lorentz_norm(space, prof)
    if isinstance(space, X2):
        h = hardy_profile(prof, space.theta)
        val = _lambda_value(h, space.weight(), space.q, 0.0, INF)
        return NormResult(val, "quadrature", 1e-9 * val if math.isfinite(val) else 0.0)
    if isinstance(space, X1):
        return _x1_norm(space, f)
    if isinstance(space, Associate):
        return associate_norm(space.base, prof)
    if isinstance(space, Intersection):
        parts = [norm(p, prof) for p in space.parts]
        best = max(parts, key=lambda r: r.value)
        return NormResult(best.value, best.method, max(r.est_error for r in parts))
    raise TypeError(f"unsupported space {space!r}")


def _x1_norm(space: X1, f) -> NormResult:
    if not isinstance(f, StepFunction):
        prof = as_profile(f)
        h = hardy_profile(prof, space.theta)
        val = _lambda_value(h, space.weight(), space.q, 0.0, INF)
        return NormResult(val, "brute_force_lower_bound", 0.0)
    pieces = [p for p in f.pieces if p[1] > 0]
    if not pieces:
        return NormResult(0.0, "closed_form", 0.0)
    orders = [sorted(pieces, key=lambda p: -p[1]), sorted(pieces, key=lambda p: p[1])]
    rng = np.random.default_rng(space.seed)
    for _ in range(space.n_shuffles):
        orders.append([pieces[i] for i in rng.permutation(len(pieces))])
    best = 0.0
    for order in orders:
        h = hardy_profile_arranged(StepFunction(order), space.theta)
        best = max(best, _lambda_value(h, space.weight(), space.q, 0.0, INF))
    return NormResult(best, "brute_force_lower_bound", 0.0)


def _step_arrays(prof: Profile):
    """Measures and values when every segment is constant, else None."""
    if not all(s.model is not None and s.model.r == 0 and not s.model.layers
               for s in prof.segments):
        return None
    m = np.array([s.hi - s.lo for s in prof.segments])
    v = np.array([s.model.c for s in prof.segments])
    return m, v


def _log_young(A: _young.YoungFunction, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    out = np.full(x.shape, -np.inf)
    pos = x > 0
    if np.any(pos):
        out[pos] = A.log_evaluate(x[pos])
    return out


def _modular(A: _young.YoungFunction, prof: Profile, lam: float) -> float:
    if lam <= 0:
        return INF
    arrays = _step_arrays(prof)
    if arrays is not None:
        m, v = arrays
        if np.any(np.isinf(m) & (v > 0)):
            return INF
        la = _log_young(A, v / lam)
        with np.errstate(over="ignore"):
            return float(np.sum(m * np.exp(la)))
    return prof.modular(lambda t, g: np.exp(_log_young(A, g / lam)))


def _luxemburg_root(modular: Callable[[float], float], scale: float) -> tuple[float, str]:
    if not modular(1e300) <= 1.0:
        return INF, "root_find"
    root = find_root_decreasing(modular, 1.0, bracket=(scale * 0.5, scale * 2.0), tol=1e-12)
    return root.value, "root_find"


def _luxemburg(A: _young.YoungFunction, prof: Profile) -> NormResult:
    scale = max(prof.value_at_zero(), 1e-300)
    if math.isinf(scale):
        scale = 1.0
    val, m = _luxemburg_root(lambda lam: _modular(A, prof, lam), scale)
    return NormResult(val, m, 1e-10 * val if math.isfinite(val) else 0.0)


def _orlicz_lorentz_norm(space: OrliczLorentz, prof: Profile) -> NormResult:
    p, q, A = space.p, space.q, space.young
    arrays = _step_arrays(prof)
    if arrays is not None:
        m, v = arrays
        ends = np.cumsum(m)
        starts = np.concatenate(([0.0], ends[:-1]))
        a, b = starts ** q, ends ** q
        psi = space.tail_moment

        def modular(lam):
            if lam <= 0:
                return INF
            c = v / lam
            with np.errstate(divide="ignore"):
                lhi = np.where(a > 0, psi.log_value_u(np.log(c) - np.log(np.where(a > 0, a, 1.0)) / p),
                               -np.inf)
            llo = psi.log_value_u(np.log(c) - np.log(b) / p)
            # Psi(c b^-1/p) - Psi(c a^-1/p) in log form
            with np.errstate(invalid="ignore", over="ignore"):
                diff = np.exp(llo) * -np.expm1(np.minimum(lhi - llo, 0.0))
                total = float(np.sum(p * c ** p * diff))
            return total if np.isfinite(total) else INF
    else:
        def modular(lam):
            if lam <= 0:
                return INF

            def phi(s, g):
                with np.errstate(divide="ignore"):
                    return np.exp(_log_young(A, s ** (-q / p) * g / lam)) * q * s ** (q - 1.0)
            return prof.modular(phi)

    scale = max(prof.value_at_zero(), 1e-300)
    val, m = _luxemburg_root(modular, scale if math.isfinite(scale) else 1.0)
    return NormResult(val, m, 1e-8 * val if math.isfinite(val) else 0.0)


# ---------------------------------------------------------------------------
# associate norms


def _level_points(prof: Profile, lo: float, hi: float) -> np.ndarray:
    s_lo, s_hi = prof._scales()
    a = max(lo, s_lo * 10.0 ** (-LEVEL_DECADES)) if lo == 0 else lo
    b = min(hi, s_hi * 10.0 ** LEVEL_DECADES)
    n = max(2, int(math.ceil(math.log(b / a) / LEVEL_LOG_STEP)))
    bps = prof.breakpoints()
    pts = np.concatenate((np.geomspace(a, b, n + 1), bps[(bps > a) & (bps < b)],
                          [1.0] if a < 1.0 < b else []))
    return np.unique(pts)


def _interval_integrals(fun: Callable, pts: np.ndarray) -> np.ndarray:
    """GL integrals of a vectorized ``fun`` over consecutive ``pts`` (log variable)."""
    la, lb = np.log(pts[:-1]), np.log(pts[1:])
    half = 0.5 * (lb - la)
    mid = 0.5 * (lb + la)
    xg, wg = np.polynomial.legendre.leggauss(8)
    u = mid[:, None] + half[:, None] * xg[None, :]
    t = np.exp(u)
    vals = np.asarray(fun(t.ravel()), dtype=float).reshape(t.shape)
    return np.sum(vals * t * wg[None, :], axis=1) * half


def _upper_hull(x: np.ndarray, y: np.ndarray) -> list[int]:
    """Indices of the least concave majorant vertices (x increasing)."""
    hull: list[int] = []
    for i in range(x.size):
        while len(hull) >= 2:
            i0, i1 = hull[-2], hull[-1]
            # drop i1 if it lies on or below the chord i0 -> i
            if (y[i1] - y[i0]) * (x[i] - x[i0]) <= (y[i] - y[i0]) * (x[i1] - x[i0]):
                hull.pop()
            else:
                break
        hull.append(i)
    return hull


def level_associate(prof: Profile, w: PowerLog, q: float, lo: float = 0.0,
                    hi: float = INF) -> float:
    """Exact associate norm of ``||w f*||_{L^q(lo, hi)}`` at ``g*`` = ``prof``.

    With ``V(t) = int_lo^t w^q`` and ``G(t) = int_0^t g*``, the associate
    norm is ``(sum s_j^q' dV_j)^(1/q')`` over the slopes ``s_j`` of the
    least concave majorant of ``G`` as a function of ``V`` (``q > 1``),
    ``sup G / V`` for ``q = 1``, and ``int g* / sup_{s <= t} w(s)`` for
    ``q = inf``.
    """
    if prof.is_zero:
        return 0.0
    if math.isinf(q):
        return _sup_associate(prof, w, lo, hi)
    v = w ** q
    pts = _level_points(prof, lo, hi)
    start = pts[0]
    V0 = v.integral(lo, start) if start > lo else 0.0
    dV = _interval_integrals(v, pts)
    G0 = prof.weighted_power_integral(PowerLog(), 1.0, 0.0, start)
    dG = _interval_integrals(prof, pts)
    V = np.concatenate(([0.0, V0], V0 + np.cumsum(dV)))
    G = np.concatenate(([0.0, G0], G0 + np.cumsum(dG)))
    G_tot = prof.total_integral()
    V_end = V[-1] + v.integral(pts[-1], hi) if pts[-1] < hi else V[-1]
    if math.isinf(G_tot):
        if math.isfinite(V_end):
            return INF
        # both diverge: the window decides, with trailing growth of G/V read as divergence
        if q == 1:
            r = G[2:] / V[2:]
            if r.size >= 4 and np.argmax(r) == r.size - 1 and np.all(np.diff(r[-4:]) > 0):
                return INF
    elif G_tot > G[-1] * (1 + 1e-15):
        V = np.append(V, V_end)
        G = np.append(G, G_tot)
    if math.isinf(V[-1]):
        V, G = V[:-1], G[:-1]
    if q == 1:
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(V > 0, G / V, np.where(G > 0, INF, 0.0))
        return float(np.max(ratio))
    qp = conjugate_exponent(q)
    idx = _upper_hull(V, G)
    total = 0.0
    for i0, i1 in zip(idx, idx[1:]):
        dv, dg = V[i1] - V[i0], G[i1] - G[i0]
        if dg <= 0:
            continue
        if dv <= 0:
            return INF
        total += (dg / dv) ** qp * dv
    return total ** (1.0 / qp)


def _sup_associate(prof: Profile, w: PowerLog, lo: float, hi: float) -> float:
    if lo > 0 or math.isfinite(hi):
        raise AssociateUnavailable("sup-type associate needs the full half line")
    if w.limit_sign("zero") > 0:
        return 0.0
    pts = _level_points(prof, 0.0, INF)
    xg, wg = np.polynomial.legendre.leggauss(8)
    la, lb = np.log(pts[:-1]), np.log(pts[1:])
    half, mid = 0.5 * (lb - la), 0.5 * (lb + la)
    t = np.exp(mid[:, None] + half[:, None] * xg[None, :]).ravel()
    wt = (half[:, None] * wg[None, :]).ravel() * t
    w_run = np.maximum.accumulate(np.maximum(w(t), w.sup(0.0, pts[0])))
    total = float(np.sum(prof(t) / w_run * wt))
    # below the first point the running sup is w itself when w increases there
    if w.limit_sign("zero") < 0 or w.r > 0:
        total += prof.weighted_power_integral(w ** -1.0, 1.0, 0.0, pts[0])
    else:
        total += prof.weighted_power_integral(PowerLog(1.0 / w.sup(0.0, pts[0])), 1.0, 0.0, pts[0])
    rest = prof.weighted_power_integral(PowerLog(1.0 / w_run[-1]), 1.0, pts[-1], INF)
    return total + rest


def _amemiya(A_conj: _young.YoungFunction, prof: Profile) -> float:
    """Orlicz norm ``inf_k (1 + int Atilde(k g*)) / k``."""
    def F(logk):
        k = math.exp(logk)
        val = _modular(A_conj, prof, 1.0 / k)
        return (1.0 + val) / k

    grid = np.linspace(-60.0, 60.0, 241)
    vals = np.array([F(x) for x in grid])
    i = int(np.argmin(vals))
    a, b = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
    res = _spo.minimize_scalar(F, bounds=(a, b), method="bounded", options={"xatol": 1e-12})
    return float(min(res.fun, vals[i]))


def associate_norm(space: Space, g) -> NormResult:
    """Exact norm of ``g`` in the associate space of ``space``."""
    prof = as_profile(g)
    if prof.is_zero:
        return NormResult(0.0, "closed_form", 0.0)
    space = space.canonical()
    if getattr(space, "quasi_norm", False):
        raise AssociateUnavailable("quasi-normed spaces have no associate norm here")
    if isinstance(space, Lebesgue):
        return norm(Lebesgue(conjugate_exponent(space.p)), prof)
    if isinstance(space, Associate):
        return norm(space.base, prof)
    if isinstance(space, Orlicz):
        val = _amemiya(space.conjugate, prof)
        return NormResult(val, "root_find", 1e-8 * val)
    if hasattr(space, "lambda_form"):
        form = space.lambda_form()
        if len(form) != 1:
            raise AssociateUnavailable(f"no exact associate for {space.spec()}")
        w, q, lo, hi = form[0]
        val = level_associate(prof, w, q, lo, hi)
        err = 1e-6 * val if math.isfinite(val) else 0.0
        return NormResult(val, "quadrature", err)
    raise AssociateUnavailable(f"no exact associate for {space.spec()}")


def associate_space_lz(p: float, q: float, alpha: Sequence[float] = (0.0, 0.0)) -> Space:
    """Lorentz-Zygmund description of the associate of ``L^{p,q;alpha}``.

    For ``1 < p < inf`` this is ``L^{p',q';-alpha}`` (equivalent norms).
    ``L^1`` and ``L^inf`` map to each other.  The remaining endpoint cases
    are returned as :class:`Associate` wrappers, whose norm is the exact
    level-function or weighted-``L^1`` formula.
    """
    if not is_ri_norm_lz(p, q, alpha):
        raise InadmissibleSpace(f"L^{{{p},{q};{tuple(alpha)}}} is not normable")
    a0, ainf = float(alpha[0]), float(alpha[1])
    if 1 < p < INF:
        return LorentzZygmund(conjugate_exponent(p), conjugate_exponent(q),
                              (-a0 + 0.0, -ainf + 0.0)).canonical()
    if p == 1 and a0 == 0 and ainf == 0:
        return Lebesgue(INF)
    if math.isinf(p) and math.isinf(q) and a0 == 0:
        # weights ell^alpha_inf at infinity only matter for alpha_inf > 0
        if ainf == 0:
            return Lebesgue(1.0)
    return Associate(LorentzZygmund(p, q, (a0, ainf)).canonical())


def associate_space(space: Space) -> Space:
    """Nominal associate: LZ-type description when available, else :class:`Associate`."""
    space = space.canonical()
    if isinstance(space, Lebesgue):
        return Lebesgue(conjugate_exponent(space.p))
    if isinstance(space, Associate):
        return space.base
    if isinstance(space, LorentzZygmund) and not space.extra and is_ri_norm_lz(
            space.p, space.q, space.alpha):
        return associate_space_lz(space.p, space.q, space.alpha)
    return Associate(space)


def exact_associate(space: Space) -> Space:
    """Associate space carrying the exact associate norm."""
    space = space.canonical()
    if isinstance(space, Lebesgue):
        return Lebesgue(conjugate_exponent(space.p))
    if isinstance(space, Associate):
        return space.base
    return Associate(space)


# ---------------------------------------------------------------------------
# checks


def associate_norm_bruteforce(space: Space, g: StepFunction,
                              dictionary: Sequence[StepFunction]) -> NormResult:
    """``max_f int f* g* / ||f||`` over the dictionary: a lower bound for ``||g||'``."""
    best = 0.0
    gp = g.canonical()
    if gp.is_zero():
        return NormResult(0.0, "brute_force_lower_bound", 0.0)
    for f in dictionary:
        nf = norm(space, f).value
        if not (nf > 0) or math.isinf(nf):
            continue
        best = max(best, rearranged_pairing(f, gp) / nf)
    return NormResult(best, "brute_force_lower_bound", 0.0)


def fundamental_function(space: Space, t: float) -> float:
    """``||chi_(0,t)||`` in ``space``."""
    if not t > 0:
        raise ValueError("t must be positive")
    return norm(space, StepFunction.indicator(t)).value


def fundamental_duality_check(space: Space, t: float) -> bool:
    """``|phi_X(t) phi_X'(t) - t| <= 1e-6 t`` with the exact associate norm."""
    phi = fundamental_function(space, t)
    phi_d = associate_norm(space, StepFunction.indicator(t)).value
    return abs(phi * phi_d - t) <= DUALITY_TOL * t


def dilation_norm_bound(space: Space, f: StepFunction, a: float) -> tuple[float, float]:
    """``(||D_a f|| / ||f||, max(1, 1/a))`` with ``D_a f(s) = f(a s)``.

    Raises
    ------
    RispaceError
        If the ratio exceeds the bound beyond rounding.
    """
    if not a > 0:
        raise ValueError("dilation parameter must be positive")
    nf = norm(space, f).value
    bound = max(1.0, 1.0 / a)
    if nf == 0:
        return 0.0, bound
    ratio = norm(space, f.dilated(a)).value / nf
    if ratio > bound * (1 + 1e-6):
        raise RispaceError(f"dilation ratio {ratio!r} exceeds bound {bound!r}")
    return ratio, bound


def holder_check(space: Space, f: StepFunction, g: StepFunction,
                 dictionary: Sequence[StepFunction] | None = None) -> bool:
    """``int f* g* <= ||f|| ||g||'`` (up to a relative slack of 1e-6)."""
    lhs = rearranged_pairing(f, g)
    if lhs == 0:
        return True
    nf = norm(space, f).value
    try:
        ng = associate_norm(space, g).value
    except AssociateUnavailable:
        if dictionary is None:
            raise
        ng = associate_norm_bruteforce(space, g, dictionary).value
    return lhs <= nf * ng * (1 + HOLDER_SLACK)


# ---------------------------------------------------------------------------
# mini-language


def _parse_params(text: str, offset: int) -> dict[str, tuple[str, int]]:
    out: dict[str, tuple[str, int]] = {}
    pos = offset
    if not text:
        return out
    for item in text.split(","):
        key, eq, val = item.partition("=")
        if not eq or not key.strip():
            raise ParseError(f"expected key=value, got {item!r}", text, pos)
        out[key.strip()] = (val.strip(), pos + len(key) + 1)
        pos += len(item) + 1
    return out


def _num(params, key, default=None, full=None):
    if key not in params:
        if default is None:
            raise ParseError(f"missing parameter {key!r}", full or "", len(full or ""))
        return default
    raw, pos = params[key]
    try:
        return float(raw.replace("∞", "inf"))
    except ValueError:
        raise ParseError(f"parameter {key!r} is not a number: {raw!r}", full or "", pos) from None


def _young_from_params(params, full: str, power_key: str) -> tuple[_young.YoungFunction, str]:
    if "file" in params:
        raw, pos = params["file"]
        try:
            return _young.YoungFunction.from_json(Path(raw).read_text()), Path(raw).name
        except OSError as exc:
            raise ParseError(f"cannot read Young function file {raw!r}: {exc}", full, pos) from None
    if power_key in params:
        r = _num(params, power_key, full=full)
        return _young.power(r), f"power:p={_fmt(r)}"
    if "beta" in params:
        beta = _num(params, "beta", full=full)
        p0 = _num(params, "p0", 2.0, full)
        return _young.exponential(beta, p0), f"exp:beta={_fmt(beta)},p0={_fmt(p0)}"
    if "p0" in params:
        p0 = _num(params, "p0", full=full)
        a0 = _num(params, "a0", 0.0, full)
        pinf = _num(params, "pinf", p0, full)
        ainf = _num(params, "ainf", 0.0, full)
        label = f"young:p0={_fmt(p0)},a0={_fmt(a0)},pinf={_fmt(pinf)},ainf={_fmt(ainf)}"
        return _young.power_log(p0, a0, pinf, ainf), label
    raise ParseError("Orlicz spaces need file=..., p0=..., beta=... or a power", full, len(full))


_KEYS = {
    "lebesgue": {"p"},
    "lorentz": {"p", "q"},
    "lz": {"p", "q", "a0", "ainf"},
    "glz": {"p", "q", "a0", "ainf", "b0", "binf", "c0", "cinf", "d0", "dinf"},
    "orlicz": {"file", "p", "p0", "a0", "pinf", "ainf", "beta"},
    "orlicz-lorentz": {"p", "q", "file", "r", "p0", "a0", "pinf", "ainf", "beta"},
    "y1": {"a0"},
    "y2": {"q", "ainf"},
    "x1": {"q", "a0", "ainf", "mn", "m", "n"},
    "x2": {"q", "a0", "ainf", "mn", "m", "n"},
}


def parse_space(text: str, m_over_n: float | None = None) -> Space:
    """Parse a space from the mini-language.

    Examples: ``lebesgue:p=2``, ``lorentz:p=2,q=1``,
    ``lz:p=2,q=1,a0=1,ainf=-1``, ``glz:p=inf,q=1,a0=-1,ainf=0,b0=-1,binf=0``,
    ``orlicz:file=young.json``, ``orlicz:p0=2,pinf=3``,
    ``orlicz-lorentz:p=3,q=1,file=...``, ``y1:a0=-1``, ``y2:q=2,ainf=2``,
    ``x2:q=1,a0=0,ainf=0,mn=0.3333``.  ``m_over_n`` fills in ``mn`` for
    the X1/X2 families.  A parameter may be ``inf``.
    """
    full = text.strip()
    kind, _, rest = full.partition(":")
    kind = kind.strip().lower()
    if kind not in _KEYS:
        raise ParseError(f"unknown space kind {kind!r}", full, 0)
    params = _parse_params(rest, len(kind) + 1)
    for key, (_, pos) in params.items():
        if key not in _KEYS[kind]:
            raise ParseError(f"unknown parameter {key!r} for {kind}", full, pos - len(key) - 1)
    num = functools.partial(_num, params, full=full)
    try:
        if kind == "lebesgue":
            return Lebesgue(num("p"))
        if kind == "lorentz":
            return Lorentz(num("p"), num("q"))
        if kind in ("lz", "glz"):
            extra = []
            for k0, k1 in _LAYER_KEYS:
                if k0 in params or k1 in params:
                    extra.append((num(k0, 0.0), num(k1, 0.0)))
            return LorentzZygmund(num("p"), num("q"), (num("a0", 0.0), num("ainf", 0.0)),
                                  tuple(extra))
        if kind == "orlicz":
            A, label = _young_from_params(params, full, "p")
            return Orlicz(A, label)
        if kind == "orlicz-lorentz":
            A, label = _young_from_params(params, full, "r")
            return OrliczLorentz(num("p"), num("q"), A, label)
        if kind == "y1":
            return Y1(num("a0"))
        if kind == "y2":
            return Y2(num("q"), num("ainf", 0.0))
        if "mn" in params:
            theta = num("mn")
        elif "m" in params and "n" in params:
            theta = num("m") / num("n")
        elif m_over_n is not None:
            theta = m_over_n
        else:
            raise ParseError(f"{kind} needs mn=m/n (or m and n)", full, len(full))
        cls = X1 if kind == "x1" else X2
        return cls(num("q"), (num("a0", 0.0), num("ainf", 0.0)), theta)
    except InadmissibleSpace:
        raise
    except (ValueError, TypeError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(str(exc), full, 0) from None
