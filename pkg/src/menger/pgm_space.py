"""Menger probabilistic G-metric spaces induced by a crisp kernel.

A space couples a point universe with a crisp generalized distance
``g(x, y, z)`` and one of two induced families:

* ``"ratio"``: ``G_{x,y,z}(t) = t / (t + g(x, y, z))``
* ``"dirac"``: ``G_{x,y,z} = H_{g(x, y, z)}``

All checks here are read-only; samplers take explicit seeds.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Hashable, Optional, Sequence, Union

import numpy as np
from scipy.stats import qmc

from . import ddf
from .ddf import TOL, DDF
from .tnorm import AxiomReport, TNorm

__all__ = [
    "Interval",
    "FinitePoints",
    "PerimeterKernel",
    "TableKernel",
    "PGMSpace",
    "Neighborhood",
    "PointError",
    "g_eval",
    "check_axioms",
    "in_neighborhood",
    "converged",
    "cauchy_window",
    "joint_continuity_check",
    "TAIL_FRACTION",
    "tail_start",
]

#: Fraction of a finite sequence treated as its "tail" when judging limits.
TAIL_FRACTION = 0.25

FAMILIES = ("ratio", "dirac")


class PointError(ValueError):
    """A point was given that does not belong to the universe."""


# -- universes ---------------------------------------------------------------


@dataclass(frozen=True)
class Interval:
    """Closed real interval ``[lo, hi]``; bounds may be infinite."""

    lo: float = -math.inf
    hi: float = math.inf

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    finite = False

    def contains(self, x) -> bool:
        try:
            x = float(x)
        except (TypeError, ValueError):
            return False
        return self.lo <= x <= self.hi

    def canonical(self) -> float:
        if math.isfinite(self.lo) and math.isfinite(self.hi):
            return 0.5 * (self.lo + self.hi)
        return min(max(0.0, self.lo), self.hi)

    def sample(self, n: int, seed: int, dim: int = 1) -> np.ndarray:
        """``n`` scrambled-Halton points in the interval, shape ``(n, dim)``."""
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError("cannot sample an unbounded interval")
        u = qmc.Halton(d=dim, scramble=True, seed=seed).random(n)
        return self.lo + (self.hi - self.lo) * u

    def distance(self, a, b) -> float:
        return abs(float(a) - float(b))

    def as_array(self, pts) -> np.ndarray:
        return np.asarray(pts, dtype=float)


class FinitePoints:
    """A finite universe of hashable points kept in a fixed order."""

    finite = True

    def __init__(self, points: Sequence[Hashable]):
        pts = tuple(points)
        if not pts:
            raise ValueError("finite universe must be nonempty")
        self.points = pts
        self._index = {p: i for i, p in enumerate(pts)}
        if len(self._index) != len(pts):
            raise ValueError("finite universe has duplicate points")

    def __len__(self):
        return len(self.points)

    def __eq__(self, other):
        return isinstance(other, FinitePoints) and self.points == other.points

    def __hash__(self):
        return hash(self.points)

    def __repr__(self):
        return f"FinitePoints({list(self.points)!r})"

    def contains(self, x) -> bool:
        try:
            return x in self._index
        except TypeError:
            return False

    def index(self, x) -> int:
        try:
            return self._index[x]
        except (KeyError, TypeError):
            raise PointError(f"{x!r} is not a point of the universe") from None

    def indices(self, pts) -> np.ndarray:
        return np.array([self.index(p) for p in pts], dtype=int)

    def canonical(self):
        return self.points[0]

    def sample(self, n: int, seed: int, dim: int = 1) -> np.ndarray:
        idx = np.random.default_rng(seed).integers(0, len(self.points), size=(n, dim))
        return np.array(self.points, dtype=object)[idx]

    def distance(self, a, b) -> float:
        return 0.0 if a == b else 1.0

    def as_array(self, pts) -> np.ndarray:
        arr = np.empty(len(pts), dtype=object)
        arr[:] = list(pts)
        return arr


Universe = Union[Interval, FinitePoints]


# -- kernels -----------------------------------------------------------------


@dataclass(frozen=True)
class PerimeterKernel:
    """``g(x, y, z) = |x - y| + |y - z| + |z - x|`` on numeric points."""

    def values(self, universe: Universe, x, y, z) -> np.ndarray:
        x, y, z = (np.asarray(v, dtype=float) for v in (x, y, z))
        return np.abs(x - y) + np.abs(y - z) + np.abs(z - x)


class TableKernel:
    """Explicit ``g`` values over a finite universe, indexed by point order.

    No invariant is enforced at construction, so deliberately broken
    kernels can be built and handed to :func:`check_axioms`.
    """

    def __init__(self, values):
        v = np.asarray(values, dtype=float)
        if v.ndim != 3 or not (v.shape[0] == v.shape[1] == v.shape[2]):
            raise ValueError(f"table kernel needs an (n, n, n) array, got shape {v.shape}")
        if np.any(~np.isfinite(v)) or np.any(v < 0):
            raise ValueError("table kernel values must be finite and nonnegative")
        v.setflags(write=False)
        self.table = v

    @classmethod
    def from_function(cls, n: int, fn) -> "TableKernel":
        """Tabulate ``fn(i, j, k)`` over point indices."""
        return cls([[[fn(i, j, k) for k in range(n)] for j in range(n)] for i in range(n)])

    @classmethod
    def from_points(cls, points: Sequence[float]) -> "TableKernel":
        """Perimeter kernel of numeric points, tabulated."""
        p = np.asarray(points, dtype=float)
        return cls.from_function(
            len(p), lambda i, j, k: abs(p[i] - p[j]) + abs(p[j] - p[k]) + abs(p[k] - p[i])
        )

    def __eq__(self, other):
        return isinstance(other, TableKernel) and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash(self.table.tobytes())

    def values(self, universe: Universe, x, y, z) -> np.ndarray:
        if not isinstance(universe, FinitePoints):
            raise TypeError("table kernels need a finite universe")
        i, j, k = (universe.indices(np.atleast_1d(np.asarray(v, dtype=object))) for v in (x, y, z))
        out = self.table[i, j, k]
        return out if np.ndim(x) else out.reshape(np.shape(x))


Kernel = Union[PerimeterKernel, TableKernel]


# -- space -------------------------------------------------------------------


@dataclass(frozen=True)
class PGMSpace:
    universe: Universe
    kernel: Kernel
    family: str = "ratio"
    tnorm: TNorm = TNorm.MIN

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected 'ratio' or 'dirac'")
        if isinstance(self.kernel, TableKernel):
            if not isinstance(self.universe, FinitePoints):
                raise ValueError("table kernels need a finite universe")
            if self.kernel.table.shape[0] != len(self.universe):
                raise ValueError("table kernel size does not match the universe")

    def check_point(self, x) -> None:
        if not self.universe.contains(x):
            raise PointError(f"{x!r} is not a point of the universe")

    def g(self, x, y, z) -> float:
        """Crisp kernel value for one triple."""
        for p in (x, y, z):
            self.check_point(p)
        arr = self.universe.as_array
        return float(self.kernel.values(self.universe, arr([x]), arr([y]), arr([z]))[0])

    def g_many(self, xs, ys, zs) -> np.ndarray:
        arr = self.universe.as_array
        return self.kernel.values(self.universe, arr(xs), arr(ys), arr(zs))

    def family_values(self, g, t) -> np.ndarray:
        """``G(t)`` for crisp values ``g``; broadcasts ``g`` against ``t``."""
        if self.family == "ratio":
            return ddf.ratio_values(g, t)
        return ddf.dirac_values(g, t)

    def G(self, x, y, z) -> DDF:
        return g_eval(self, x, y, z)

    def G_at(self, x, y, z, t) -> float:
        """``G_{x,y,z}(t)`` as a float."""
        return float(self.family_values(self.g(x, y, z), t))

    def G_grid(self, xs, ys, zs, grid) -> np.ndarray:
        """Matrix of ``G_{xs[i], ys[i], zs[i]}(grid[j])``."""
        g = self.g_many(xs, ys, zs)
        return self.family_values(g[:, None], np.asarray(grid, dtype=float)[None, :])

    def same(self, a, b) -> bool:
        return self.universe.distance(a, b) == 0.0


def g_eval(space: PGMSpace, x, y, z) -> DDF:
    """The distribution function ``G_{x,y,z}`` as a :class:`DDF`."""
    g = space.g(x, y, z)
    return ddf.ratio(g) if space.family == "ratio" else ddf.dirac(g)


# -- axioms ------------------------------------------------------------------


def _tuples(space: PGMSpace, point_samples: int, seed: int) -> np.ndarray:
    """Rows ``(x, y, z, a)`` with degenerate patterns mixed in.

    Small finite universes are enumerated exhaustively.
    """
    u = space.universe
    if isinstance(u, FinitePoints) and len(u) ** 4 <= max(point_samples, 1) * 8:
        rows = list(itertools.product(u.points, repeat=4))
        out = np.empty((len(rows), 4), dtype=object)
        out[:] = rows
        return out
    base = u.sample(point_samples, seed, dim=4)
    x, y, z, a = base.T
    variants = [
        (x, y, z, a),
        (x, x, x, a),
        (x, x, y, a),
        (x, y, y, a),
        (x, y, x, a),
        (x, y, z, x),
        (x, y, z, y),
        (x, y, y, y),
    ]
    return np.concatenate([np.stack(v, axis=1) for v in variants])


def _st_pairs(t_samples: int, grid: np.ndarray, seed: int) -> np.ndarray:
    lo, hi = float(grid.min()), float(grid.max())
    edges = [(0.0, 0.0), (0.0, 1.0), (1.0, 0.0)]
    n = max(t_samples - len(edges), 0)
    rng = np.random.default_rng(seed + 1)
    drawn = np.exp(rng.uniform(math.log(lo), math.log(hi), size=(n, 2)))
    return np.vstack([np.array(edges)[: max(t_samples, 1)], drawn])


def check_axioms(
    space: PGMSpace,
    point_samples: int = 1000,
    t_samples: int = 20,
    seed: int = 0,
    grid=None,
    max_witnesses: int = 20,
) -> AxiomReport:
    """Sample the four PGM axioms and collect any violations.

    Axioms (i)-(iii) are checked at every point of ``grid`` (default: the
    21-point power-of-two grid); axiom (iv) at ``t_samples`` pairs
    ``(t, s)`` that always include the ``0`` edge cases (decided exactly
    from crisp values for the dirac family).  Finite universes
    small enough to enumerate are checked exhaustively.
    """
    if point_samples < 1 or t_samples < 1:
        raise ValueError("sample counts must be >= 1")
    grid = ddf.default_grid() if grid is None else np.asarray(grid, dtype=float)
    rows = _tuples(space, point_samples, seed)
    x, y, z, a = rows.T
    report = AxiomReport(checked=len(rows))
    if not space.universe.finite:
        xf, yf, zf = (np.asarray(v, dtype=float) for v in (x, y, z))
        all_eq = (xf == yf) & (yf == zf)
        z_ne_y = zf != yf
    else:
        all_eq = np.array([p == q == r for p, q, r in zip(x, y, z)])
        z_ne_y = np.array([q != r for q, r in zip(y, z)])

    G = space.G_grid(x, y, z, grid)

    # (i) G(t) = 1 for all t > 0 iff x = y = z
    gmin = G.min(axis=1)
    is_one = gmin >= 1.0 - TOL
    bad = is_one != all_eq
    slack = np.where(all_eq, 1.0 - gmin, gmin - (1.0 - TOL))
    report.add("i", rows[bad], slack[bad], max_witnesses)

    # (ii) G_{x,x,y} >= G_{x,y,z} whenever z != y
    Gxxy = space.G_grid(x, x, y, grid)
    slack = (G - Gxxy).max(axis=1)
    bad = z_ne_y & (slack > TOL)
    report.add("ii", rows[bad], slack[bad], max_witnesses)

    # (iii) symmetry under all permutations
    worst = np.zeros(len(rows))
    cols = (x, y, z)
    for perm in itertools.permutations(range(3)):
        Gp = space.G_grid(*(cols[i] for i in perm), grid)
        worst = np.maximum(worst, np.abs(Gp - G).max(axis=1))
    bad = worst > TOL
    report.add("iii", rows[bad], worst[bad], max_witnesses)

    # (iv) G_{x,y,z}(t+s) >= G_{x,a,a}(t) * G_{a,y,z}(s)
    st = _st_pairs(t_samples, grid, seed)
    g_xyz = space.g_many(x, y, z)[:, None]
    g_xaa = space.g_many(x, a, a)[:, None]
    g_ayz = space.g_many(a, y, z)[:, None]
    wit = np.empty((len(rows), 6), dtype=object)
    wit[:, :4] = rows
    if space.family == "dirac":
        # decided exactly: some t > g_xaa, s > g_ayz with t + s <= g_xyz
        # exists iff g_xaa + g_ayz < g_xyz, and then both factors are 1
        slack = (g_xyz - g_xaa - g_ayz)[:, 0]
        bad = slack > TOL
        half = np.where(bad, slack / 2, 0.0)
        wit[:, 4] = g_xaa[:, 0] + half
        wit[:, 5] = g_ayz[:, 0] + half
    else:
        t, s = st[:, 0][None, :], st[:, 1][None, :]
        lhs = space.family_values(g_xyz, t + s)
        rhs = space.tnorm(space.family_values(g_xaa, t), space.family_values(g_ayz, s))
        gap = rhs - lhs
        j = gap.argmax(axis=1)
        slack = gap[np.arange(len(rows)), j]
        bad = slack > TOL
        wit[:, 4] = st[j, 0]
        wit[:, 5] = st[j, 1]
    report.add("iv", wit[bad], slack[bad], max_witnesses)
    return report


# -- neighbourhoods and limits ----------------------------------------------


@dataclass(frozen=True)
class Neighborhood:
    """The ``(eps, delta)``-neighbourhood of ``center``."""

    center: object
    eps: float
    delta: float

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError(f"eps must be positive, got {self.eps}")
        if not 0 < self.delta < 1:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")


def _in_nbhd_many(space: PGMSpace, center, ys, eps: float, delta: float) -> np.ndarray:
    ys = space.universe.as_array(list(ys))
    cs = space.universe.as_array([center] * len(ys))
    fwd = space.family_values(space.g_many(cs, ys, ys), eps)
    back = space.family_values(space.g_many(ys, cs, cs), eps)
    return (fwd > 1.0 - delta) & (back > 1.0 - delta)


def in_neighborhood(space: PGMSpace, nbhd: Neighborhood, y) -> bool:
    space.check_point(y)
    return bool(_in_nbhd_many(space, nbhd.center, [y], nbhd.eps, nbhd.delta)[0])


def tail_start(length: int, fraction: float = TAIL_FRACTION) -> int:
    """First index of the trailing ``fraction`` of a sequence (at least one entry)."""
    return max(0, length - max(1, math.ceil(fraction * length)))


def _min_tail(length: int, min_tail: Optional[int]) -> int:
    if min_tail is not None:
        return max(1, int(min_tail))
    return max(2, math.ceil(TAIL_FRACTION * length))


def _first_good_index(bad: np.ndarray, length: int, min_tail: Optional[int]) -> Optional[int]:
    idx = np.flatnonzero(bad)
    M = int(idx.max()) if idx.size else 0
    if length - 1 - M < _min_tail(length, min_tail):
        return None
    return M


def converged(space: PGMSpace, seq, x, eps: float, delta: float, min_tail: Optional[int] = None) -> Optional[int]:
    """Smallest ``M >= 0`` with ``seq[n]`` in ``N_x(eps, delta)`` for all ``n > M``.

    Returns ``None`` when fewer than ``min_tail`` trailing entries qualify
    (default: a quarter of the sequence, at least two).
    """
    Neighborhood(x, eps, delta)
    seq = list(seq)
    if not seq:
        raise ValueError("sequence must be nonempty")
    ok = _in_nbhd_many(space, x, seq, eps, delta)
    return _first_good_index(~ok, len(seq), min_tail)


def cauchy_window(space: PGMSpace, seq, eps: float, delta: float, min_tail: Optional[int] = None) -> Optional[int]:
    """Smallest ``M`` with ``G_{x_n, x_m, x_l}(eps) > 1 - delta`` for all ``n, m, l > M``.

    Exhaustive over the finite prefix; ``min_tail`` as in :func:`converged`.
    """
    Neighborhood(None, eps, delta)
    seq = list(seq)
    L = len(seq)
    if not L:
        raise ValueError("sequence must be nonempty")
    arr = space.universe.as_array(seq)
    bad = np.zeros(L, dtype=bool)
    for i in range(L):
        rest = arr[i:]
        jj, ll = np.meshgrid(np.arange(len(rest)), np.arange(len(rest)), indexing="ij")
        jj, ll = jj.ravel(), ll.ravel()
        keep = jj <= ll
        jj, ll = jj[keep], ll[keep]
        xs = space.universe.as_array([seq[i]] * len(jj))
        vals = space.family_values(space.g_many(xs, rest[jj], rest[ll]), eps)
        bad[i] = bool(np.any(vals <= 1.0 - delta))
    return _first_good_index(bad, L, min_tail)


def joint_continuity_check(space: PGMSpace, triples, limit, grid, tol: float) -> bool:
    """True iff ``G_{x_n,y_n,z_n}(t)`` stays within ``tol`` of ``G_{x,y,z}(t)``
    over the tail of the supplied triples, at every grid ``t``."""
    triples = list(triples)
    if not triples:
        raise ValueError("need at least one triple")
    grid = np.atleast_1d(np.asarray(grid, dtype=float))
    tail = triples[tail_start(len(triples)):]
    xs, ys, zs = zip(*tail)
    vals = space.G_grid(xs, ys, zs, grid)
    ref = space.G_grid([limit[0]], [limit[1]], [limit[2]], grid)
    return bool(np.all(np.abs(vals - ref) <= tol))
