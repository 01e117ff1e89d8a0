"""Distance distribution functions on the extended real line.

A :class:`DDF` is an immutable description of a nondecreasing,
left-continuous map ``F: [-inf, inf] -> [0, 1]``.  Three shapes are
supported:

* ``dirac(a)``  -- the unit step ``H_a``: 0 on ``[-inf, a]``, 1 on ``(a, inf]``;
* ``ratio(c)``  -- ``t / (t + c)`` for ``t > 0`` and 0 otherwise;
* ``table``     -- a left-continuous staircase given by breakpoints.

The extended reals are ordinary floats with ``-math.inf`` / ``math.inf``
as the two sentinels.  ``F(inf) = 1`` is enforced for every kind.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence, Union

import numpy as np

__all__ = [
    "TOL",
    "DDF",
    "dirac",
    "ratio",
    "table",
    "H0",
    "H_INF",
    "evaluate",
    "ratio_values",
    "dirac_values",
    "default_grid",
    "sup_distance",
    "converges_to_H0",
]

#: Absolute tolerance for every comparison of DDF values.
TOL = 1e-9

ArrayLike = Union[float, Sequence[float], np.ndarray]


@dataclass(frozen=True)
class DDF:
    """A distance distribution function.

    Use the :func:`dirac`, :func:`ratio` and :func:`table` constructors
    rather than building instances directly.
    """

    kind: str
    param: float = 0.0
    breakpoints: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        if self.kind not in ("dirac", "ratio", "table"):
            raise ValueError(f"unknown DDF kind {self.kind!r}")

    def __call__(self, t: ArrayLike):
        return evaluate(self, t)

    def eval(self, t: ArrayLike):
        return evaluate(self, t)

    @property
    def is_distance(self) -> bool:
        """True when this is a member of the distance family (``F(0) = 0``,
        ``F`` attains 1 at infinity from below).

        ``H_inf`` is representable but never counts as a distance DDF.
        """
        if self.kind == "dirac":
            return math.isfinite(self.param)
        if self.kind == "ratio":
            return math.isfinite(self.param)
        return True

    def __repr__(self) -> str:
        if self.kind == "table":
            return f"table({list(self.breakpoints)!r})"
        return f"{self.kind}({self.param!r})"


def dirac(a: float) -> DDF:
    """The Dirac step ``H_a`` jumping from 0 to 1 just after ``a``.

    ``a = inf`` builds ``H_inf``; it is accepted here but is not a
    distance DDF (see :attr:`DDF.is_distance`).
    """
    a = float(a)
    if math.isnan(a) or a < 0:
        raise ValueError(f"dirac location must be nonnegative, got {a}")
    return DDF("dirac", a)


def ratio(c: float) -> DDF:
    """``t / (t + c)`` for ``t > 0``; ``ratio(0)`` equals ``H_0``."""
    c = float(c)
    if math.isnan(c) or c < 0:
        raise ValueError(f"ratio scale must be nonnegative, got {c}")
    return DDF("ratio", c)


def table(breakpoints: Iterable[tuple[float, float]]) -> DDF:
    """Left-continuous staircase: the value jumps to ``v_i`` just after ``t_i``.

    Breakpoints must have strictly increasing, nonnegative ``t`` and
    nondecreasing ``v`` in ``[0, 1]``.
    """
    pts = tuple((float(t), float(v)) for t, v in breakpoints)
    prev_t, prev_v = -math.inf, 0.0
    for t, v in pts:
        if not (t >= 0 and math.isfinite(t)):
            raise ValueError(f"breakpoint location must be finite and >= 0, got {t}")
        if t <= prev_t:
            raise ValueError("breakpoint locations must be strictly increasing")
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"breakpoint value {v} outside [0, 1]")
        if v < prev_v:
            raise ValueError("breakpoint values must be nondecreasing")
        prev_t, prev_v = t, v
    return DDF("table", 0.0, pts)


H0 = dirac(0.0)
H_INF = DDF("dirac", math.inf)


def ratio_values(c, t):
    """Vectorised ``t / (t + c)`` with the ``t <= 0 -> 0`` and ``t = inf -> 1`` edges."""
    c = np.asarray(c, dtype=float)
    t = np.asarray(t, dtype=float)
    c, t = np.broadcast_arrays(c, t)
    out = np.zeros(t.shape)
    pos = t > 0
    fin = pos & np.isfinite(t)
    with np.errstate(invalid="ignore", divide="ignore"):
        out[fin] = t[fin] / (t[fin] + c[fin])
    out[pos & ~np.isfinite(t)] = 1.0
    # c == 0 with t > 0 is exactly H_0
    out[pos & (c == 0)] = 1.0
    # c == inf never reaches 1 on finite t
    out[fin & np.isinf(c)] = 0.0
    return out


def dirac_values(a, t):
    """Vectorised ``H_a(t)``."""
    a = np.asarray(a, dtype=float)
    t = np.asarray(t, dtype=float)
    a, t = np.broadcast_arrays(a, t)
    return np.where((t > a) | np.isposinf(t), 1.0, 0.0)


def _table_values(pts, t):
    t = np.asarray(t, dtype=float)
    out = np.zeros(t.shape)
    if pts:
        locs = np.array([p[0] for p in pts])
        vals = np.array([p[1] for p in pts])
        # number of breakpoints strictly below t
        idx = np.searchsorted(locs, t, side="left")
        has = idx > 0
        out[has] = vals[idx[has] - 1]
    out[np.isposinf(t)] = 1.0
    out[np.isneginf(t)] = 0.0
    return out


def evaluate(F: DDF, t: ArrayLike):
    """Evaluate ``F`` at ``t``; returns a float for scalar input, else an array."""
    scalar = np.ndim(t) == 0
    if F.kind == "dirac":
        out = dirac_values(F.param, t)
    elif F.kind == "ratio":
        out = ratio_values(F.param, t)
    else:
        out = _table_values(F.breakpoints, t)
    return float(out) if scalar else out


def default_grid(base: float = 2.0, kmin: int = -10, kmax: int = 10) -> np.ndarray:
    """Geometric probe grid ``base**k`` for ``k = kmin..kmax`` (21 points by default)."""
    return float(base) ** np.arange(kmin, kmax + 1, dtype=float)


def _check_grid(grid) -> np.ndarray:
    g = np.atleast_1d(np.asarray(grid, dtype=float))
    if g.size == 0:
        raise ValueError("grid must be nonempty")
    if np.any(~(g > 0)):
        raise ValueError("grid points must be positive")
    return g


def sup_distance(F: DDF, G: DDF, grid) -> float:
    """Largest ``|F(t) - G(t)|`` over the grid."""
    g = _check_grid(grid)
    return float(np.max(np.abs(evaluate(F, g) - evaluate(G, g))))


def converges_to_H0(
    seq: Union[Sequence[DDF], Callable[[int], DDF]],
    grid,
    delta: float,
    M: int,
    stop: int | None = None,
) -> bool:
    """Finite-sample surrogate for ``seq[n] -> H_0``.

    True iff ``seq[n](t) > 1 - delta`` for every grid ``t`` and every sampled
    index ``n > M``.  A sequence is sampled over its remaining entries; a
    callable ``n -> DDF`` is sampled on ``M+1 .. stop`` (default ``M + 1000``).
    """
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    g = _check_grid(grid)
    if callable(seq) and not isinstance(seq, Sequence):
        stop = M + 1000 if stop is None else stop
        items: Iterable[DDF] = (seq(n) for n in range(M + 1, stop + 1))
    else:
        end = len(seq) if stop is None else min(len(seq), stop + 1)
        items = (seq[n] for n in range(max(M + 1, 0), end))
    for F in items:
        if np.any(evaluate(F, g) <= 1.0 - delta):
            return False
    return True
