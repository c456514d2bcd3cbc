"""Optimal rearrangement-invariant targets and domains for Sobolev embeddings.

Everything is on the reduced, one-dimensional side: the embedding of
``V^m X`` into ``Y`` over ``R^n`` is equivalent to boundedness of the
Hardy-type operator ``f -> int_t^inf f(s) s^(m/n - 1) ds`` from
``X(0, inf)`` to ``Y(0, inf)``, and dually of ``g -> t^(m/n) g**(t)``
from ``Y'`` to ``X'``.  Throughout, ``theta = m / n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .errors import InadmissibleError, RispaceError
from .numerics import conjugate_exponent
from .profiles import (
    Curve,
    PowerLog,
    Profile,
    Segment,
    _lex_sign,
    discretize_powerlog,
    hardy_profile,
    hardy_profile_arranged,
    powerlog_segment_model,
    step_profile,
)
from .rearrange import PowerLogFunction, StepFunction
from .spaces import (
    GLZ,
    X1,
    X2,
    Y1,
    Y2,
    AssociateUnavailable,
    InadmissibleSpace,
    Intersection,
    Lebesgue,
    LorentzZygmund,
    NormResult,
    Orlicz,
    Space,
    as_profile,
    associate_norm,
    associate_space_lz,
    fundamental_function,
    is_ri_norm_lz,
    natural_profile,
    norm,
)

INF = math.inf
EXPONENT_TOL = 1e-12
PLATEAU_FACTOR = 1.05
GROWTH_FACTOR = 1.3
DUAL_AGREEMENT = 4.0
NECESSARY_GRID = np.linspace(-12.0, 12.0, 49)
CURVE_DECADES = 10.0


class SimplificationInvalid(InadmissibleError):
    """The simplified domain functional is not equivalent to the optimal one."""


@dataclass(frozen=True)
class NoTarget:
    """No rearrangement-invariant target space exists."""

    reason: str

    def spec(self) -> str:
        return "none"


@dataclass(frozen=True)
class NoDomain:
    """No rearrangement-invariant domain space exists."""

    reason: str

    def spec(self) -> str:
        return "none"


@dataclass(frozen=True)
class EmbeddingProblem:
    """``V^m X(R^n) -> Y(R^n)``; ``Y`` may be left open."""

    n: int
    m: int
    X: Space
    Y: Space | None = None

    def __post_init__(self):
        if self.n < 2 or not 1 <= self.m < self.n:
            raise InadmissibleError(f"need n >= 2 and 1 <= m < n, got m={self.m}, n={self.n}")

    @property
    def theta(self) -> float:
        return self.m / self.n


def _theta(m, n) -> float:
    if not (0 < m < n):
        raise InadmissibleError(f"need 0 < m < n, got m={m}, n={n}")
    return m / n


def _lz_params(space: Space):
    """``(p, q, alpha)`` of a plain Lorentz-Zygmund space, else None."""
    space = space.canonical() if hasattr(space, "canonical") else space
    if isinstance(space, Lebesgue):
        return space.p, space.p, (0.0, 0.0)
    if isinstance(space, LorentzZygmund) and not space.extra:
        return space.p, space.q, space.alpha
    return None


def _close(a: float, b: float) -> bool:
    if math.isinf(a) or math.isinf(b):
        return a == b
    return abs(a - b) <= EXPONENT_TOL * max(1.0, abs(b))


# ---------------------------------------------------------------------------
# the operators


def hardy_operator(f, m, n, t):
    """``int_t^inf f(s) s^(m/n - 1) ds``.

    Step functions are taken in their nonincreasing arrangement,
    power-log functions as given.  Divergent integrals give ``inf``.
    """
    theta = _theta(m, n)
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t_arr <= 0):
        raise ValueError("t must be positive")
    if isinstance(f, StepFunction):
        ends, vals = f.rearrangement_arrays()
        starts = np.concatenate(([0.0], ends[:-1]))
        a = np.maximum(starts[None, :], t_arr[:, None])
        b = np.maximum(ends[None, :], a)
        out = np.sum(vals[None, :] * (b ** theta - a ** theta), axis=1) / theta
    elif isinstance(f, PowerLogFunction):
        k = powerlog_segment_model(f) * PowerLog(1.0, theta - 1.0)
        lo, hi = f.support
        out = np.array([k.integral(max(x, lo), hi) for x in t_arr])
    else:
        raise TypeError(f"unsupported function {type(f).__name__}")
    return out if np.ndim(t) else float(out[0])


def dual_operator(g: StepFunction, m, n, t):
    """``t^(m/n) g**(t)``."""
    theta = _theta(m, n)
    t_arr = np.asarray(t, dtype=float)
    out = t_arr ** theta * np.asarray(g.f_star_star(t_arr), dtype=float)
    return out if out.ndim else float(out)


def T_alpha(f, alpha: float, t):
    """``t^-alpha sup_{s >= t} s^alpha f*(s)``.

    ``f`` is a step function, a nonincreasing power-log function, or a
    :class:`Profile` (taken as already nonincreasing).
    """
    if not 0 < alpha < 1:
        raise ValueError("need 0 < alpha < 1")
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    if isinstance(f, StepFunction):
        ends, vals = f.rearrangement_arrays()
        if ends.size == 0:
            out = np.zeros_like(t_arr)
        else:
            # s^alpha f* increases on each cell: its sup there is ends^alpha vals
            peak = ends ** alpha * vals
            suffix = np.maximum.accumulate(peak[::-1])[::-1]
            idx = np.searchsorted(ends, t_arr, side="right")
            inside = idx < ends.size
            out = np.where(inside, suffix[np.minimum(idx, ends.size - 1)], 0.0) * t_arr ** -alpha
    else:
        prof = as_profile(f) if not isinstance(f, Profile) else f
        w = PowerLog(1.0, alpha)
        out = np.array([prof.sup_weighted(w, x, INF) for x in t_arr]) * t_arr ** -alpha
    return out if np.ndim(t) else float(out[0])


def t_alpha_bounded_on_associate(p, q, alpha_vec, alpha: float) -> bool:
    """Whether ``T_alpha`` is bounded on the associate of ``L^{p,q;alpha_vec}``.

    True iff ``p = 1/(1 - alpha)``, ``q = 1``, ``alpha0 >= 0``,
    ``alpha_inf <= 0``, or ``1/(1 - alpha) < p <= inf``.
    """
    if not is_ri_norm_lz(p, q, alpha_vec):
        raise InadmissibleSpace(f"L^{{{p},{q};{tuple(alpha_vec)}}} is not normable")
    if not 0 < alpha < 1:
        raise ValueError("need 0 < alpha < 1")
    crit = 1.0 / (1.0 - alpha)
    a0, ainf = float(alpha_vec[0]), float(alpha_vec[1])
    if _close(p, crit):
        return q == 1 and a0 >= 0 and ainf <= 0
    return p > crit


# ---------------------------------------------------------------------------
# curves built from step functions


def _double_star_curve(f: StepFunction, theta: float) -> Curve:
    """``t -> t^theta f**(t)`` as a :class:`Curve`."""
    ends, vals = f.rearrangement_arrays()
    total = float(np.sum(vals * np.diff(np.concatenate(([0.0], ends)))))
    lo = ends[0] * 10.0 ** -CURVE_DECADES
    hi = ends[-1]

    def func(t):
        t = np.asarray(t, dtype=float)
        return t ** (theta - 1.0) * f.primitive(t)

    return Curve(func, lo, hi, PowerLog(float(vals[0]), theta), PowerLog(total, theta - 1.0),
                 tuple(ends))


def _dual_norm(X: Space, curve: Curve) -> float:
    """``||g||_{X'}`` for a curve ``g``; Lebesgue spaces skip the rearrangement."""
    base = X.canonical()
    if isinstance(base, Lebesgue):
        return curve.lebesgue_norm(conjugate_exponent(base.p))
    return associate_norm(base, curve.rearranged().profile()).value


def _tail_profile(theta: float, a: float) -> Profile:
    """Rearrangement of ``t^(theta-1) chi_(a, inf)``: ``(s + a)^(theta - 1)``."""
    seg = Segment(0.0, INF, func=lambda s: (np.asarray(s, dtype=float) + a) ** (theta - 1.0),
                  asym_zero=PowerLog(a ** (theta - 1.0)), asym_inf=PowerLog(1.0, theta - 1.0))
    return Profile((seg,), "tail", exact=False)


# ---------------------------------------------------------------------------
# target side


def _young_zero_exponents(A) -> tuple[float, float]:
    return float(A.p0), float(A.alpha0)


def target_condition(X: Space, m, n) -> bool:
    """Whether ``t^(m/n - 1) chi_(1, inf)`` belongs to ``X'``.

    Lorentz-Zygmund spaces with ``1 < p < inf`` are decided by exact
    integration against the associate ``L^{p',q';-alpha}`` (only the
    behaviour at infinity matters, so equivalent norms give the same
    answer).  ``p = 1`` always passes and ``p = inf`` never does.  Orlicz
    spaces are decided from the conjugate Young function near 0.
    """
    theta = _theta(m, n)
    params = _lz_params(X)
    if params is not None:
        p, q, alpha = params
        if not is_ri_norm_lz(p, q, alpha):
            raise InadmissibleSpace(f"{X.spec()} is not normable")
        if p == 1:
            return True
        if math.isinf(p):
            return False
        Xp = associate_space_lz(p, q, alpha)
        h = Profile((Segment(0.0, 1.0, model=PowerLog(1.0)),
                     Segment(1.0, INF, model=PowerLog(1.0, theta - 1.0))))
        return math.isfinite(norm(Xp, h).value)
    if isinstance(X, Orlicz):
        # t^(theta-1) on (1, inf) takes small values u with measure ~ u^(-1/(1-theta)),
        # so the modular is finite iff int_0 Atilde(u) u^(-1/(1-theta) - 1) du < inf
        P, a = _young_zero_exponents(X.conjugate)
        crit = 1.0 / (1.0 - theta)
        if math.isinf(P) or P > crit + EXPONENT_TOL:
            return True
        return _close(P, crit) and a < -1.0
    raise AssociateUnavailable(f"no target condition for {X.spec()}")


def sigma_m(X: Space, m, n, f: StepFunction) -> float:
    """``||t^(m/n) f**(t)||_{X'}``, the associate norm of the optimal target."""
    theta = _theta(m, n)
    if isinstance(f, PowerLogFunction):
        f = discretize_powerlog(f, per_decade=128)
    if f.is_zero():
        return 0.0
    base = X.canonical()
    if isinstance(base, Lebesgue) and base.p == 1:
        # t^theta f**(t) = t^(theta-1) F(t) has its maxima at the breakpoints
        ends, _ = f.rearrangement_arrays()
        return float(np.max(ends ** (theta - 1.0) * f.primitive(ends)))
    return _dual_norm(X, _double_star_curve(f, theta))


def optimal_target_lz(p, q, alpha, m, n, repair_degenerate: bool = False):
    """Optimal target for ``X = L^{p,q;alpha}``, or :class:`NoTarget`.

    With ``repair_degenerate`` the row ``p = n/m``, ``q = 1``,
    ``alpha0 = 0``, ``alpha_inf > 0`` returns ``Y2`` with ``q = 1``
    instead of the three-layer space, which only contains the zero
    function.
    """
    if not is_ri_norm_lz(p, q, alpha):
        raise InadmissibleSpace(f"L^{{{p},{q};{tuple(alpha)}}} is not normable")
    _theta(m, n)
    a0, ainf = float(alpha[0]), float(alpha[1])
    crit = n / m
    if _close(p, crit):
        return _limiting_target(q, a0, ainf, repair_degenerate)
    if p > crit:
        return NoTarget(f"p = {p} exceeds n/m = {crit}")
    r = n * p / (n - m * p)
    return LorentzZygmund(r, q, (a0, ainf)).canonical()


def _limiting_target(q, a0, ainf, repair):
    qp = conjugate_exponent(q)
    inv_q = 0.0 if math.isinf(q) else 1.0 / q
    edge = 0.0 if q == 1 else (1.0 if math.isinf(q) else 1.0 / qp)
    if q == 1:
        if ainf < 0:
            return NoTarget("q = 1 needs alpha_inf >= 0")
        if ainf == 0:
            return Y1(a0) if a0 < 0 else Lebesgue(INF)
        if a0 < 0:
            return LorentzZygmund(INF, 1, (a0 - 1.0, ainf - 1.0))
        if a0 == 0:
            if repair:
                return Y2(1, ainf)
            return GLZ(INF, 1, (-1.0, ainf - 1.0), (-1.0, 0.0), (-1.0, 0.0))
        return Y2(1, ainf)
    if not ainf > edge:
        return NoTarget(f"alpha_inf must exceed 1/q' = {edge}")
    if a0 < edge:
        return LorentzZygmund(INF, q, (a0 - 1.0, ainf - 1.0))
    if _close(a0, edge):
        return GLZ(INF, q, (-inv_q, ainf - 1.0), (-1.0, 0.0))
    if math.isinf(q):
        return LorentzZygmund(INF, INF, (0.0, ainf - 1.0))
    return Y2(q, ainf)


# ---------------------------------------------------------------------------
# domain side


def _growth_exponents(space: Space) -> tuple[float, ...] | None:
    """Exponent vector ``(a, b_1, b_2, ...)`` with ``phi(t) ~ t^a L_1^b_1 ...`` at infinity."""
    space = space.canonical()
    if isinstance(space, Intersection):
        parts = [_growth_exponents(p) for p in space.parts]
        return None if any(v is None for v in parts) else max(parts, key=_lex_key)
    if isinstance(space, Orlicz):
        A = space.young
        if math.isinf(A.p0):
            return (0.0,)
        return (1.0 / A.p0, A.alpha0 / A.p0)
    if not hasattr(space, "lambda_form"):
        return None
    best: tuple[float, ...] = (0.0,)
    for w, q, lo, hi in space.lambda_form():
        if math.isfinite(hi):
            continue
        layers = [b for _, b in w.layers]
        if math.isinf(q):
            vec = (w.r, *layers) if _lex_sign([w.r, *layers], 0.0) > 0 else (0.0,)
        else:
            vec = _integrated_growth(q * w.r, [q * b for b in layers], q)
        best = max(best, vec, key=_lex_key)
    return best


def _integrated_growth(r: float, layers: list[float], q: float) -> tuple[float, ...]:
    """Growth of ``(int_1^t s^r prod L_j^{c_j})^(1/q)``."""
    if r + 1.0 > EXPONENT_TOL:
        return ((r + 1.0) / q, *(c / q for c in layers))
    if r + 1.0 < -EXPONENT_TOL:
        return (0.0,)
    # s^-1: the first layer exponent that differs from -1 decides
    out = [0.0]
    for j, c in enumerate(layers):
        if c + 1.0 > EXPONENT_TOL:
            out += [0.0] * j + [(c + 1.0) / q] + [x / q for x in layers[j + 1:]]
            return tuple(out)
        if c + 1.0 < -EXPONENT_TOL:
            return (0.0,)
    # all layers critical: iterated logarithm one level deeper
    return tuple(out + [0.0] * len(layers) + [1.0 / q])


def _lex_key(vec: Sequence[float]):
    return tuple(vec) + (0.0,) * (8 - len(vec))


def domain_condition(Y: Space, m, n) -> bool:
    """Whether ``inf_{t >= 1} t^(1 - m/n) / phi_Y(t) > 0``.

    Decided from the growth exponents of ``phi_Y`` at infinity, and
    confirmed on the grid ``t = 10^k``; spaces without an exponent model
    use the grid alone.
    """
    theta = _theta(m, n)
    vec = _growth_exponents(Y)
    ts = 10.0 ** np.arange(0, 13)
    ratios = np.array([t ** (1.0 - theta) / fundamental_function(Y, float(t)) for t in ts])
    if vec is None:
        slope = math.log(ratios[-1] / ratios[-4]) / math.log(ts[-1] / ts[-4])
        return slope > -1e-3
    target = (1.0 - theta,)
    ok = _lex_key(np.round(vec, 12)) <= _lex_key(np.round(target, 12))
    slope = math.log(ratios[-1] / ratios[-4]) / math.log(ts[-1] / ts[-4])
    if ok and slope < -0.05:
        raise RispaceError(f"grid slope {slope:.3g} contradicts the exponent analysis")
    return ok


def optimal_domain_lz(p, q, alpha, m, n):
    """Optimal domain for ``Y = L^{p,q;alpha}``, or :class:`NoDomain`."""
    if not is_ri_norm_lz(p, q, alpha):
        raise InadmissibleSpace(f"L^{{{p},{q};{tuple(alpha)}}} is not normable")
    theta = _theta(m, n)
    a0, ainf = float(alpha[0]), float(alpha[1])
    crit = n / (n - m)
    if _close(p, crit):
        if ainf > 0:
            return NoDomain("p = n/(n-m) needs alpha_inf <= 0")
        if q == 1 and a0 >= 0:
            return LorentzZygmund(1, 1, (a0, ainf)).canonical()
        return X1(q, (a0, ainf), theta)
    if p < crit:
        return NoDomain(f"p = {p} is below n/(n-m) = {crit}")
    if math.isinf(p):
        return X2(q, (a0, ainf), theta)
    r = n * p / (n + m * p)
    return LorentzZygmund(r, q, (a0, ainf)).canonical()


def _hardy_of(f, theta: float) -> Profile:
    if isinstance(f, PowerLogFunction):
        return hardy_profile(natural_profile(f), theta)
    return hardy_profile(as_profile(f), theta)


def tau_m_simplified(Y: Space, m, n, f, assume_bounded: bool = False) -> float:
    """``||int_t^inf f*(s) s^(m/n - 1) ds||_Y``.

    Equivalent to the optimal domain norm when ``T_{m/n}`` is bounded on
    ``Y'``; for Lorentz-Zygmund ``Y`` this is checked, other spaces need
    ``assume_bounded=True``.

    Raises
    ------
    SimplificationInvalid
        If the boundedness condition fails or cannot be checked.
    """
    theta = _theta(m, n)
    params = _lz_params(Y)
    if params is not None:
        if not t_alpha_bounded_on_associate(*params, theta):
            raise SimplificationInvalid(f"T_{theta:g} is unbounded on the associate of {Y.spec()}")
    elif not assume_bounded:
        raise SimplificationInvalid(f"cannot check T_{theta:g} on the associate of {Y.spec()}")
    prof = as_profile(f)
    if prof.is_zero:
        return 0.0
    return norm(Y, hardy_profile(prof, theta)).value


def _orders(f: StepFunction, n_shuffles: int, seed: int) -> list[list[tuple[float, float]]]:
    pieces = [p for p in f.pieces if p[1] > 0]
    if not pieces:
        return []
    orders = [sorted(pieces, key=lambda p: -p[1]), sorted(pieces, key=lambda p: p[1])]
    rng = np.random.default_rng(seed)
    for _ in range(n_shuffles):
        orders.append([pieces[i] for i in rng.permutation(len(pieces))])
    return orders


def tau_m_heuristic(Y: Space, m, n, f: StepFunction, n_shuffles: int = 32,
                    seed: int = 0) -> NormResult:
    """Lower bound for the optimal domain functional.

    The maximum of ``||int_t^inf h(s) s^(m/n - 1) ds||_Y`` over the
    decreasing and increasing orders of the pieces of ``f`` and
    ``n_shuffles`` seeded random orders, laid contiguously from 0.
    """
    theta = _theta(m, n)
    best = 0.0
    for order in _orders(f, n_shuffles, seed):
        h = hardy_profile_arranged(StepFunction(order), theta)
        best = max(best, norm(Y, h).value)
    return NormResult(best, "brute_force_lower_bound", 0.0)


# ---------------------------------------------------------------------------
# necessary condition and iteration


def necessary_condition_sup(X: Space, Y: Space, m, n) -> float:
    """``sup_a phi_Y(a) ||t^(m/n - 1) chi_(a, inf)||_{X'}`` over ``a = 10^k``.

    Returns ``inf`` when the tail norm is infinite, or when the product
    still increases toward either end of the grid ``|k| <= 12`` (a power
    or logarithmic trend that the finite grid would otherwise cut off).
    """
    theta = _theta(m, n)
    try:
        ok = target_condition(X, m, n)
    except AssociateUnavailable:
        ok = True
    if not ok:
        return INF
    vals = []
    for k in NECESSARY_GRID:
        a = 10.0 ** k
        vals.append(fundamental_function(Y, a) * _tail_norm(X, theta, a))
    vals = np.array(vals)
    if not np.all(np.isfinite(vals)):
        return INF
    for end in (vals[:6][::-1], vals[-6:]):
        if np.all(np.diff(end) > 0) and end[-1] > end[0] * (1 + 1e-6):
            return INF
    return float(np.max(vals))


def _tail_norm(X: Space, theta: float, a: float) -> float:
    base = X.canonical()
    if isinstance(base, Lebesgue):
        pp = conjugate_exponent(base.p)
        if math.isinf(pp):
            return a ** (theta - 1.0)
        return PowerLog(1.0, (theta - 1.0) * pp).integral(a, INF) ** (1.0 / pp)
    return associate_norm(base, _tail_profile(theta, a)).value


def _nested_curve(f: StepFunction, outer: float, inner: float) -> Curve:
    """``t -> t^outer [tau^inner f**(tau)]**(t)``."""
    u = _double_star_curve(f, inner).rearranged()
    top = float(u.vals[0])
    ends, vals = f.rearrangement_arrays()
    total = float(np.sum(vals * np.diff(np.concatenate(([0.0], ends)))))
    lo = ends[0] * 10.0 ** -CURVE_DECADES
    hi = ends[-1] * 10.0 ** CURVE_DECADES

    def func(t):
        t = np.asarray(t, dtype=float)
        return t ** (outer - 1.0) * u.primitive(t)

    # u grows like total * s^(inner-1) at infinity, so its primitive ~ total s^inner / inner
    tail_c = float(func(np.array([hi]))[0]) / hi ** (outer + inner - 1.0)
    return Curve(func, lo, hi, PowerLog(top, outer), PowerLog(tail_c, outer + inner - 1.0),
                 tuple(ends))


class IterationRecord(NamedTuple):
    lhs: float
    mid: float
    rhs: float


def iteration_constant_upper(l, n) -> float:
    """``C`` in ``mid <= C lhs``: ``(l/n) / (2^(l/n) - 1)``."""
    b = l / n
    return b / (2.0 ** b - 1.0)


def iteration_check(X: Space, k, l, n, f: StepFunction) -> IterationRecord:
    """``(||t^(k/n)[tau^(l/n) f**]**||, ||t^((k+l)/n) f**||, ||t^(l/n)[tau^(k/n) f**]**||)`` in ``X'``.

    The middle term is bounded by :func:`iteration_constant_upper` times
    either outer term; the outer terms are bounded by a multiple of the
    middle one with a constant depending only on ``k``, ``l``, ``n``.
    """
    if not (k > 0 and l > 0 and k + l < n):
        raise InadmissibleError("need k, l > 0 and k + l < n")
    if f.is_zero():
        return IterationRecord(0.0, 0.0, 0.0)
    lhs = _iter_norm(X, _nested_curve(f, k / n, l / n))
    mid = sigma_m(X, k + l, n, f)
    rhs = _iter_norm(X, _nested_curve(f, l / n, k / n))
    return IterationRecord(float(lhs), float(mid), float(rhs))


def _iter_norm(X: Space, curve: Curve) -> float:
    return _dual_norm(X, curve)


# ---------------------------------------------------------------------------
# verification of a reduction


class FamilyMember(NamedTuple):
    id: str
    f: object
    scale: float


class Record(NamedTuple):
    id: str
    scale: float
    lhs: float
    rhs: float
    ratio: float


@dataclass
class VerificationReport:
    """Ratios ``||H f||_Y / ||f||_X`` over a family, with a verdict."""

    records: list[Record]
    best_constant: float
    verdict: str
    witness: str | None
    dual_records: list[Record] = field(default_factory=list)
    dual_best_constant: float = 0.0
    dual_consistent: bool = True

    def to_dict(self) -> dict:
        rec = lambda r: {"id": r.id, "scale": r.scale, "lhs": r.lhs, "rhs": r.rhs,
                         "ratio": r.ratio}
        return {"records": [rec(r) for r in self.records],
                "best_constant": self.best_constant, "verdict": self.verdict,
                "witness": self.witness,
                "dual_records": [rec(r) for r in self.dual_records],
                "dual_best_constant": self.dual_best_constant,
                "dual_consistent": self.dual_consistent}

    @classmethod
    def from_dict(cls, data: dict) -> "VerificationReport":
        rec = lambda d: Record(str(d["id"]), float(d["scale"]), float(d["lhs"]),
                               float(d["rhs"]), float(d["ratio"]))
        return cls([rec(d) for d in data["records"]], float(data["best_constant"]),
                   data["verdict"], data.get("witness"),
                   [rec(d) for d in data.get("dual_records", [])],
                   float(data.get("dual_best_constant", 0.0)),
                   bool(data.get("dual_consistent", True)))


def _members(family) -> list[FamilyMember]:
    out = []
    for i, item in enumerate(family):
        if isinstance(item, FamilyMember):
            out.append(item)
        else:
            out.append(FamilyMember(str(i), item, float(i)))
    return out


def _ratio(lhs: float, rhs: float) -> float:
    if lhs == 0:
        return 0.0
    if rhs == 0 or math.isinf(lhs):
        return INF
    return lhs / rhs


def verdict_of(ratios: Sequence[float], plateau: float = PLATEAU_FACTOR,
               growth: float = GROWTH_FACTOR) -> str:
    """``bounded``, ``unbounded_trend`` or ``inconclusive`` for ratios in scale order.

    Bounded: the maximum over the last third is within ``plateau`` (5%)
    of the maximum over the rest.  Unbounded trend: the ratios never
    decrease and the last is at least ``growth`` (30%) above the first.
    """
    r = np.asarray(ratios, dtype=float)
    if r.size == 0 or np.all(r == 0):
        return "bounded"
    if np.any(np.isinf(r)):
        return "unbounded_trend"
    if r.size == 1:
        return "bounded"
    k = max(1, r.size // 3)
    head, tail = r[:-k], r[-k:]
    if np.max(tail) <= plateau * np.max(head):
        return "bounded"
    if np.all(np.diff(r) >= 0) and r[-1] >= growth * r[0]:
        return "unbounded_trend"
    return "inconclusive"


def _as_step(f) -> StepFunction:
    if isinstance(f, StepFunction):
        return f
    return discretize_powerlog(f, per_decade=128).canonical()


def verify_reduction(X: Space, Y: Space, m, n, family, plateau: float = PLATEAU_FACTOR,
                     growth: float = GROWTH_FACTOR) -> VerificationReport:
    """Estimate the best constant of ``||H f||_Y <= C ||f||_X`` on a family.

    ``family`` holds :class:`FamilyMember` entries (or bare functions,
    whose index is the scale).  The dual ratios
    ``||t^(m/n) g**||_{X'} / ||g||_{Y'}`` are computed on the
    rearrangements of the same functions; ``dual_consistent`` records
    whether the two best-constant estimates agree within a factor 4.
    ``plateau`` and ``growth`` are passed to :func:`verdict_of`.
    """
    theta = _theta(m, n)
    members = sorted(_members(family), key=lambda mem: mem.scale)
    records, dual = [], []
    for mem in members:
        if _is_zero(mem.f):
            records.append(Record(mem.id, mem.scale, 0.0, 0.0, 0.0))
            dual.append(Record(mem.id, mem.scale, 0.0, 0.0, 0.0))
            continue
        lhs = norm(Y, _hardy_of(mem.f, theta)).value
        rhs = norm(X, mem.f).value
        records.append(Record(mem.id, mem.scale, lhs, rhs, _ratio(lhs, rhs)))
        g = _as_step(mem.f)
        try:
            dl = sigma_m(X, m, n, g)
            dr = associate_norm(Y, g).value
            dual.append(Record(mem.id, mem.scale, dl, dr, _ratio(dl, dr)))
        except AssociateUnavailable:
            pass
    ratios = [r.ratio for r in records]
    best = max(ratios, default=0.0)
    witness = records[int(np.argmax(ratios))].id if records else None
    dual_best = max((r.ratio for r in dual), default=0.0)
    consistent = True
    if dual and best > 0 and dual_best > 0:
        hi_, lo_ = max(best, dual_best), min(best, dual_best)
        consistent = bool(hi_ <= DUAL_AGREEMENT * lo_)
    return VerificationReport(records, best, verdict_of(ratios, plateau, growth), witness, dual, dual_best,
                              consistent)


def _is_zero(f) -> bool:
    if isinstance(f, StepFunction):
        return f.is_zero()
    return False


def sharpness_family(beta: float, p: float, eps=tuple(10.0 ** -k for k in range(2, 9))):
    """``f_eps(s) = s^(-1/p) (1 - log s)^(-beta) chi_(eps, 1)`` with scale ``log(1/eps)``."""
    return [FamilyMember(f"eps={e:.0e}", PowerLogFunction(1.0, 1.0 / p, beta, 0.0, (e, 1.0)),
                         math.log(1.0 / e)) for e in eps]


__all__ = [
    "EmbeddingProblem", "FamilyMember", "IterationRecord", "NoDomain", "NoTarget", "Record",
    "SimplificationInvalid", "T_alpha", "VerificationReport", "domain_condition",
    "dual_operator", "hardy_operator", "iteration_check", "iteration_constant_upper",
    "necessary_condition_sup", "optimal_domain_lz", "optimal_target_lz", "sharpness_family",
    "sigma_m", "t_alpha_bounded_on_associate", "target_condition", "tau_m_heuristic",
    "tau_m_simplified", "verdict_of", "verify_reduction",
]
