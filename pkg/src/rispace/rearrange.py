"""Rearrangements of simple functions and of power-log profiles.

A :class:`StepFunction` is a distribution: a finite list of
``(measure, value)`` pieces.  Its canonical form, with values strictly
decreasing and equal values merged, is the nonincreasing rearrangement
laid out on ``(0, total measure)``.

Pointwise operations need an arrangement.  The convention used here lays
the pieces left to right in input order (:meth:`StepFunction.breakpoints`).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .errors import InadmissibleError
from .numerics import LogGrid, TailModel, broken_log

EQUIMEASURABLE_TOL = 1e-12


class NotMonotone(InadmissibleError):
    """A profile that should be nonincreasing is not."""


@dataclass(frozen=True)
class StepFunction:
    """Simple function given by ``(measure, value)`` pieces.

    Parameters
    ----------
    pieces : iterable of (float, float)
        Positive finite measures and nonnegative finite values.
    """

    pieces: tuple[tuple[float, float], ...]

    def __init__(self, pieces: Iterable[tuple[float, float]] = ()):
        clean = []
        for m, v in pieces:
            m, v = float(m), float(v)
            if not (m > 0 and math.isfinite(m)):
                raise ValueError(f"piece measures must be positive and finite, got {m!r}")
            if not (v >= 0 and math.isfinite(v)):
                raise ValueError(f"piece values must be nonnegative and finite, got {v!r}")
            clean.append((m, v))
        object.__setattr__(self, "pieces", tuple(clean))

    # -- basic data -------------------------------------------------------

    @property
    def measures(self) -> np.ndarray:
        return np.array([m for m, _ in self.pieces], dtype=float)

    @property
    def values(self) -> np.ndarray:
        return np.array([v for _, v in self.pieces], dtype=float)

    @property
    def total_measure(self) -> float:
        return float(sum(m for m, _ in self.pieces))

    @property
    def support_measure(self) -> float:
        return float(sum(m for m, v in self.pieces if v > 0))

    def is_zero(self) -> bool:
        return all(v == 0 for _, v in self.pieces)

    def sup(self) -> float:
        return max((v for _, v in self.pieces), default=0.0)

    def integral(self) -> float:
        return float(sum(m * v for m, v in self.pieces))

    def scaled(self, c: float) -> "StepFunction":
        if c == 0:
            return StepFunction([(m, 0.0) for m, _ in self.pieces])
        return StepFunction([(m, abs(c) * v) for m, v in self.pieces])

    def dilated(self, a: float) -> "StepFunction":
        """Distribution of ``t -> f(a t)``: measures shrink by ``1/a``."""
        if not a > 0:
            raise ValueError("dilation factor must be positive")
        return StepFunction([(m / a, v) for m, v in self.pieces])

    def power(self, p: float) -> "StepFunction":
        return StepFunction([(m, v ** p) for m, v in self.pieces])

    # -- canonical form ---------------------------------------------------

    def canonical(self) -> "StepFunction":
        """Nonincreasing rearrangement (zero pieces dropped)."""
        order = sorted((p for p in self.pieces if p[1] > 0), key=lambda p: -p[1])
        merged: list[list[float]] = []
        for m, v in order:
            if merged and merged[-1][1] == v:
                merged[-1][0] += m
            else:
                merged.append([m, v])
        return StepFunction(merged)

    def is_canonical(self) -> bool:
        vals = [v for _, v in self.pieces]
        return all(v > 0 for v in vals) and all(a > b for a, b in zip(vals, vals[1:]))

    def rearrangement_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Right endpoints and values of the canonical pieces."""
        c = self.canonical()
        return np.cumsum(c.measures), c.values

    # -- evaluation -------------------------------------------------------

    def f_star(self, t):
        """Nonincreasing rearrangement evaluated at ``t`` (right-continuous)."""
        ends, vals = self.rearrangement_arrays()
        t = np.asarray(t, dtype=float)
        idx = np.searchsorted(ends, t, side="right")
        padded = np.append(vals, 0.0)
        out = padded[idx]
        return out if out.ndim else float(out)

    def primitive(self, t):
        """``int_0^t f*(s) ds`` computed exactly."""
        ends, vals = self.rearrangement_arrays()
        t = np.asarray(t, dtype=float)
        if ends.size == 0:
            out = np.zeros_like(t)
            return out if out.ndim else float(out)
        starts = np.concatenate(([0.0], ends[:-1]))
        cum = np.concatenate(([0.0], np.cumsum(vals * (ends - starts))))
        idx = np.searchsorted(ends, t, side="right")
        idx_c = np.minimum(idx, vals.size - 1)
        partial = cum[idx_c] + vals[idx_c] * (t - starts[idx_c])
        out = np.where(idx >= vals.size, cum[-1], partial)
        return out if out.ndim else float(out)

    def f_star_star(self, t):
        """Maximal function ``(1/t) int_0^t f*``; ``f**(0) = sup f``."""
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(t > 0, self.primitive(np.where(t > 0, t, 1.0)) / np.where(t > 0, t, 1.0),
                           self.sup())
        return out if out.ndim else float(out)

    def distribution(self, lam):
        """Measure of ``{f > lam}``."""
        lam = np.asarray(lam, dtype=float)
        m, v = self.measures, self.values
        out = (m[None, :] * (v[None, :] > lam.reshape(-1, 1))).sum(axis=1)
        out = out.reshape(lam.shape)
        return out if out.ndim else float(out)

    # -- arrangement ------------------------------------------------------

    def breakpoints(self) -> np.ndarray:
        """Left-to-right arrangement: ``[0, m1, m1+m2, ...]``."""
        return np.concatenate(([0.0], np.cumsum(self.measures)))

    def pointwise(self, x):
        """Value at ``x`` in the left-to-right arrangement."""
        bps = self.breakpoints()
        x = np.asarray(x, dtype=float)
        idx = np.searchsorted(bps, x, side="right") - 1
        vals = np.append(self.values, 0.0)
        idx = np.where((idx < 0) | (idx >= len(self.pieces)), len(self.pieces), idx)
        out = vals[idx]
        return out if out.ndim else float(out)

    # -- serialization ----------------------------------------------------

    def to_dict(self) -> dict:
        return {"pieces": [[m, v] for m, v in self.pieces]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "StepFunction":
        try:
            return cls((m, v) for m, v in data["pieces"])
        except (KeyError, TypeError) as exc:
            raise ValueError("StepFunction JSON needs a 'pieces' list of pairs") from exc

    @classmethod
    def from_json(cls, text: str) -> "StepFunction":
        return cls.from_dict(json.loads(text))

    @classmethod
    def indicator(cls, measure: float, value: float = 1.0) -> "StepFunction":
        return cls([(measure, value)])


def decreasing_rearrangement(f: StepFunction) -> StepFunction:
    """Canonical form of ``f``: pieces sorted by value, equal values merged.

    >>> decreasing_rearrangement(StepFunction([(1, 3), (2, 1), (1, 5)])).pieces
    ((1.0, 5.0), (1.0, 3.0), (2.0, 1.0))
    """
    return f.canonical()


def maximal_rearrangement(f: StepFunction, t) -> float:
    """``f**(t) = (1/t) int_0^t f*``.

    >>> maximal_rearrangement(StepFunction([(1, 2), (1, 1)]), 2.0)
    1.5
    """
    return f.f_star_star(t)


def equimeasurable(f: StepFunction, g: StepFunction, tol: float = EQUIMEASURABLE_TOL) -> bool:
    """Whether two step functions have the same distribution."""
    a, b = f.canonical().pieces, g.canonical().pieces
    if len(a) != len(b):
        return False
    return all(abs(ma - mb) <= tol and abs(va - vb) <= tol
               for (ma, va), (mb, vb) in zip(a, b))


def _merged_breaks(*fns: StepFunction, canonical: bool) -> np.ndarray:
    pts = [np.cumsum(g.canonical().measures) if canonical else g.breakpoints()
           for g in fns]
    return np.unique(np.concatenate([[0.0], *pts]))


def rearranged_pairing(f: StepFunction, g: StepFunction) -> float:
    """``int_0^inf f*(t) g*(t) dt``, exact."""
    bps = _merged_breaks(f, g, canonical=True)
    if bps.size < 2:
        return 0.0
    mids = 0.5 * (bps[1:] + bps[:-1])
    return float(np.sum(f.f_star(mids) * g.f_star(mids) * np.diff(bps)))


def arranged_pairing(f: StepFunction, g: StepFunction) -> float:
    """``int f g`` in the shared left-to-right arrangement, exact."""
    bps = _merged_breaks(f, g, canonical=False)
    if bps.size < 2:
        return 0.0
    mids = 0.5 * (bps[1:] + bps[:-1])
    return float(np.sum(f.pointwise(mids) * g.pointwise(mids) * np.diff(bps)))


def combine(f: StepFunction, g: StepFunction,
            op: Callable[[np.ndarray, np.ndarray], np.ndarray] = np.add) -> StepFunction:
    """Pointwise ``op(f, g)`` in the shared left-to-right arrangement."""
    bps = _merged_breaks(f, g, canonical=False)
    if bps.size < 2:
        return StepFunction()
    mids = 0.5 * (bps[1:] + bps[:-1])
    vals = np.abs(op(f.pointwise(mids), g.pointwise(mids)))
    widths = np.diff(bps)
    return StepFunction((m, v) for m, v in zip(widths, vals) if m > 0)


# ---------------------------------------------------------------------------
# analytic profiles


@dataclass(frozen=True)
class PowerLogFunction:
    """``c t**(-gamma) ell^(-[alpha0, alpha_inf])(t)`` on ``support``, 0 outside.

    ``ell(t) = 1 + |log t|``.  ``is_nonincreasing`` is decided at
    construction by sampling the support on a log grid.
    """

    c: float
    gamma: float
    alpha0: float = 0.0
    alpha_inf: float = 0.0
    support: tuple[float, float] = (0.0, math.inf)

    def __post_init__(self):
        lo, hi = (float(x) for x in self.support)
        if not (self.c > 0):
            raise ValueError("PowerLogFunction needs c > 0")
        if not (0 <= lo < hi):
            raise ValueError(f"bad support {self.support!r}")
        object.__setattr__(self, "support", (lo, hi))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        lo, hi = self.support
        inside = (t > lo) & (t < hi)
        ts = np.where(inside, t, 1.0)
        val = self.c * ts ** (-self.gamma) * broken_log(ts, -self.alpha0, -self.alpha_inf)
        out = np.where(inside, val, 0.0)
        return out if out.ndim else float(out)

    def _sample_points(self, n: int = 2048) -> np.ndarray:
        lo, hi = self.support
        grid = LogGrid()
        a = max(lo, grid.t_min) if lo == 0 else lo
        b = min(hi, grid.t_max)
        if a >= b:
            return np.array([a])
        pts = np.geomspace(a, b, n)
        pts = pts[(pts > lo) & (pts < hi)]
        return np.unique(np.concatenate([pts, [1.0] if lo < 1 < hi else []]))

    @property
    def is_nonincreasing(self) -> bool:
        vals = self(self._sample_points())
        return bool(np.all(np.diff(vals) <= 1e-12 * np.maximum(1.0, np.abs(vals[:-1]))))

    def tails(self) -> tuple[TailModel, TailModel]:
        return (TailModel(-self.gamma, -self.alpha0, "zero"),
                TailModel(-self.gamma, -self.alpha_inf, "infinity"))

    def to_dict(self) -> dict:
        return {"c": self.c, "gamma": self.gamma, "alpha0": self.alpha0,
                "alpha_inf": self.alpha_inf, "support": list(self.support)}

    @classmethod
    def from_dict(cls, data: dict) -> "PowerLogFunction":
        lo, hi = data.get("support", [0.0, math.inf])
        return cls(float(data["c"]), float(data["gamma"]),
                   float(data.get("alpha0", 0.0)), float(data.get("alpha_inf", 0.0)),
                   (float(lo), float(hi)))


def rearrangement_of_powerlog(f: PowerLogFunction) -> PowerLogFunction:
    """Return ``f`` itself when it is a nonincreasing profile on (0, T).

    Raises
    ------
    NotMonotone
        If the support does not start at 0 or sampling detects an increase.
    """
    if f.support[0] != 0:
        raise NotMonotone("profile support must start at 0 to be its own rearrangement")
    if not f.is_nonincreasing:
        raise NotMonotone("profile increases somewhere on its support")
    return f
