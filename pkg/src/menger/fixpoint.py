"""Constructive common-fixed-point engine for six self-maps.

Given maps ``A, B, C`` and ``T, D, S`` the engine builds the interleaved
sequences

    y_{3n}   = A x_{3n}   = T x_{3n+1}
    y_{3n+1} = B x_{3n+1} = D x_{3n+2}
    y_{3n+2} = C x_{3n+2} = S x_{3n+3}

by preimage solving, follows ``y_n`` until it settles, and checks that
the settled point is fixed by all six maps.  The contraction hypothesis
and the chain of inequalities that drives convergence can be checked
numerically along the way.
"""

from __future__ import annotations

import csv
import enum
import io
import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator, Optional

import numpy as np

from . import ddf
from .ddf import TOL
from .maps import PREIMAGE_TOL, PreimageError, SelfMap, apply_many, apply_map, solve_preimage
from .pgm_space import PGMSpace, cauchy_window
from .tnorm import fold, is_idempotent

__all__ = [
    "Sextuple",
    "Termination",
    "IterationState",
    "FixpointReport",
    "ContractionResult",
    "MonitorReport",
    "ChainFailure",
    "ProbeResult",
    "PremiseError",
    "build_sequences",
    "check_contraction",
    "run",
    "uniqueness_probe",
    "proof_chain_monitor",
    "trace_rows",
    "write_trace",
    "require_premises",
]

MAP_NAMES = ("A", "B", "C", "D", "S", "T")


class PremiseError(ValueError):
    """The scenario violates a hypothesis the engine refuses to run without."""


@dataclass(frozen=True)
class Sextuple:
    A: SelfMap
    B: SelfMap
    C: SelfMap
    D: SelfMap
    S: SelfMap
    T: SelfMap

    def items(self):
        return [(name, getattr(self, name)) for name in MAP_NAMES]

    @property
    def sources(self):
        """Maps producing ``y_n`` from ``x_n``, cycled by ``n mod 3``."""
        return (self.A, self.B, self.C)

    @property
    def targets(self):
        """Maps whose preimage gives ``x_{n+1}`` from ``y_n``."""
        return (self.T, self.D, self.S)


class Termination(str, enum.Enum):
    CONVERGED = "converged"
    COLLISION = "collision"
    PREIMAGE_FAILURE = "preimage_failure"
    MAX_ITER = "max_iter"


@dataclass
class IterationState:
    x_seq: list
    y_seq: list
    k: float = 0.5
    step: int = 0
    termination: Optional[Termination] = None
    failure: Optional[dict] = None

    def invariant_residuals(self, sx: Sextuple) -> list[float]:
        """``|source(x_n) - y_n|`` and ``|target(x_{n+1}) - y_n|`` per step (numeric points)."""
        out = []
        for n, y in enumerate(self.y_seq):
            src, tgt = sx.sources[n % 3], sx.targets[n % 3]
            r = abs(float(apply_map(src, self.x_seq[n])) - float(y))
            if n + 1 < len(self.x_seq):
                r = max(r, abs(float(apply_map(tgt, self.x_seq[n + 1])) - float(y)))
            out.append(r)
        return out


def _same(space: PGMSpace, a, b, tol: float) -> bool:
    if space.universe.finite:
        return a == b
    a, b = float(a), float(b)
    return a == b or abs(a - b) <= tol * max(abs(a), abs(b))


def _iterate(space: PGMSpace, sx: Sextuple, x0, n_max: int, tol: float) -> Iterator[IterationState]:
    """Yield the state after each new ``y_n``; the last state carries any early stop."""
    u = space.universe
    space.check_point(x0)
    state = IterationState([x0], [])
    seen = {x0} if u.finite else None
    for n in range(n_max):
        x = state.x_seq[n]
        src, tgt = sx.sources[n % 3], sx.targets[n % 3]
        y = apply_map(src, x, u)
        state.y_seq.append(y)
        state.step = n
        if n and _same(space, y, state.y_seq[n - 1], tol):
            state.termination = Termination.COLLISION
            state.failure = {"index": n, "reason": "y_n equals y_{n-1}", "value": y}
            yield state
            return
        try:
            nxt = solve_preimage(tgt, y, tol, u)
        except PreimageError:
            nxt = None
        if nxt is None:
            state.termination = Termination.PREIMAGE_FAILURE
            state.failure = {"index": n, "map": "TDS"[n % 3], "target": y}
            yield state
            return
        state.x_seq.append(nxt)
        if seen is not None:
            if nxt in seen:
                state.termination = Termination.COLLISION
                state.failure = {"index": n + 1, "reason": "x_n repeats", "value": nxt}
                yield state
                return
            seen.add(nxt)
        yield state


def build_sequences(space: PGMSpace, sx: Sextuple, x0, n_max: int, tol: float = PREIMAGE_TOL) -> IterationState:
    """Build up to ``n_max`` terms of ``y_n`` (and ``n_max + 1`` of ``x_n``).

    Stops early on a collision of consecutive ``y`` values (relative
    tolerance ``tol``), a repeated ``x`` on a finite universe, or a
    missing preimage; ``termination`` is ``None`` when all terms were built.
    """
    state = IterationState([x0], [])
    for state in _iterate(space, sx, x0, n_max, tol):
        pass
    return state


# -- contraction -------------------------------------------------------------


@dataclass
class ContractionResult:
    violations: int
    checked: int
    worst: Optional[dict] = None

    @property
    def ok(self) -> bool:
        return self.violations == 0


def _check_k(k: float) -> None:
    if not 0 < k <= 0.5:
        raise ValueError(f"k outside (0, 1/2]: {k}")


def require_premises(space: PGMSpace, k: float) -> None:
    """Refuse scenarios whose t-norm is not idempotent or whose ``k`` is out of range."""
    _check_k(k)
    if not is_idempotent(space.tnorm, samples=1000, seed=0):
        raise PremiseError(
            f"t-norm {space.tnorm.value!r} fails a*a >= a; the fixed-point theorem needs an "
            "idempotent t-norm, and min is the only continuous one"
        )


def check_contraction(
    space: PGMSpace,
    sx: Sextuple,
    k: float = 0.5,
    triple_samples: int = 1000,
    t_samples: int = 1,
    seed: int = 0,
    grid=None,
    two_t: bool = True,
) -> ContractionResult:
    """Sample the contractive inequality on ``(x, y, z, t)``.

    Checks ``G_{Ax,By,Cz}(kt) >= G_{Sx,Ty,Dz}(t) * G_{Sx,Ax,Dz}(t) *
    G_{Ax,By,Cz}(t) * G_{Ty,By,Cz}(t) * G_{Sx,Cz,Dz}(2t)``.  With
    ``two_t=False`` the last term is taken at ``t`` instead, a weaker
    inequality.  ``t`` is drawn log-uniformly over the grid's range.
    """
    require_premises(space, k)
    grid = ddf.default_grid() if grid is None else np.asarray(grid, dtype=float)
    pts = space.universe.sample(triple_samples, seed, dim=3)
    x = np.repeat(pts[:, 0], t_samples)
    y = np.repeat(pts[:, 1], t_samples)
    z = np.repeat(pts[:, 2], t_samples)
    rng = np.random.default_rng(seed + 7)
    t = np.exp(rng.uniform(math.log(grid.min()), math.log(grid.max()), size=len(x)))

    Ax, By, Cz = apply_many(sx.A, x), apply_many(sx.B, y), apply_many(sx.C, z)
    Sx, Ty, Dz = apply_many(sx.S, x), apply_many(sx.T, y), apply_many(sx.D, z)

    def G(a, b, c, tt):
        return space.family_values(space.g_many(a, b, c), tt)

    lhs = G(Ax, By, Cz, k * t)
    rhs = fold(
        space.tnorm,
        G(Sx, Ty, Dz, t),
        G(Sx, Ax, Dz, t),
        G(Ax, By, Cz, t),
        G(Ty, By, Cz, t),
        G(Sx, Cz, Dz, 2 * t if two_t else t),
    )
    gap = rhs - lhs
    bad = gap > TOL
    worst = None
    if bad.any():
        i = int(np.argmax(gap))
        worst = {
            "x": x[i].item() if hasattr(x[i], "item") else x[i],
            "y": y[i].item() if hasattr(y[i], "item") else y[i],
            "z": z[i].item() if hasattr(z[i], "item") else z[i],
            "t": float(t[i]),
            "lhs": float(lhs[i]),
            "rhs": float(rhs[i]),
            "gap": float(gap[i]),
        }
    return ContractionResult(int(bad.sum()), len(x), worst)


# -- run ---------------------------------------------------------------------


@dataclass
class FixpointReport:
    candidate: object
    iterations: int
    cauchy_index: Optional[int]
    residuals: dict[str, float]
    contraction_violations: Optional[int]
    termination: Termination
    unique: Optional[bool] = None
    diagnosis: str = ""
    contraction: Optional[ContractionResult] = None
    state: Optional[IterationState] = field(default=None, repr=False)

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values()) if self.residuals else math.inf

    @property
    def settled(self) -> bool:
        """A verified common fixed point was reached (by convergence or collision)."""
        return self.termination is Termination.CONVERGED or self.diagnosis == "early_fixed_point"


def residuals(space: PGMSpace, sx: Sextuple, z, grid) -> dict[str, float]:
    """``max_t 1 - G_{fz, z, z}(t)`` for each of the six maps."""
    grid = np.asarray(grid, dtype=float)
    out = {}
    for name, f in sx.items():
        try:
            fz = apply_map(f, z, space.universe)
        except ValueError:
            out[name] = 1.0
            continue
        g = space.g(fz, z, z)
        out[name] = float(np.max(1.0 - space.family_values(g, grid)))
    return out


def _window_is_cauchy(space: PGMSpace, ys, eps: float, delta: float) -> bool:
    idx = list(itertools.combinations_with_replacement(range(len(ys)), 3))
    arr = space.universe.as_array(ys)
    i, j, l = (np.array(v) for v in zip(*idx))
    vals = space.family_values(space.g_many(arr[i], arr[j], arr[l]), eps)
    return bool(np.all(vals > 1.0 - delta))


def run(
    space: PGMSpace,
    sx: Sextuple,
    x0,
    k: float = 0.5,
    eps: float = 1e-6,
    delta: float = 1e-3,
    n_max: int = 200,
    grid=None,
    window: int = 3,
    contraction_samples: int = 1000,
    seed: int = 0,
    tol: float = PREIMAGE_TOL,
) -> FixpointReport:
    """Iterate towards a common fixed point and verify it.

    The iteration stops as ``converged`` once the last ``window`` terms of
    ``y_n`` are mutually within ``(eps, delta)`` and the latest term is
    fixed by all six maps to within ``delta`` on the grid.  Collisions and
    missing preimages stop it early; ``n_max`` bounds it.  The contraction
    inequality is sampled alongside when ``contraction_samples > 0``.
    """
    require_premises(space, k)
    if not eps > 0 or not 0 < delta < 1:
        raise ValueError("need eps > 0 and 0 < delta < 1")
    grid = ddf.default_grid() if grid is None else np.asarray(grid, dtype=float)

    state = None
    termination = Termination.MAX_ITER
    res: dict[str, float] = {}
    for state in _iterate(space, sx, x0, n_max, tol):
        if state.termination is not None:
            termination = state.termination
            break
        ys = state.y_seq
        if len(ys) >= window and _window_is_cauchy(space, ys[-window:], eps, delta):
            res = residuals(space, sx, ys[-1], grid)
            if max(res.values()) <= delta:
                termination = Termination.CONVERGED
                break
    if state is None:
        raise ValueError("n_max must be >= 1")
    state.k = k
    if termination is Termination.MAX_ITER:
        state.termination = termination

    candidate = state.y_seq[-1] if state.y_seq else x0
    if termination is not Termination.CONVERGED:
        res = residuals(space, sx, candidate, grid)
    diagnosis = ""
    if termination is Termination.COLLISION:
        diagnosis = "early_fixed_point" if max(res.values()) <= delta else "degenerate"

    contraction = None
    if contraction_samples > 0:
        contraction = check_contraction(space, sx, k, contraction_samples, 1, seed, grid)
    return FixpointReport(
        candidate=candidate,
        iterations=len(state.y_seq),
        cauchy_index=cauchy_window(space, state.y_seq, eps, delta, min_tail=min(window, len(state.y_seq) - 1) or 1),
        residuals=res,
        contraction_violations=None if contraction is None else contraction.violations,
        termination=termination,
        diagnosis=diagnosis,
        contraction=contraction,
        state=state,
    )


@dataclass
class ProbeResult:
    unique: Optional[bool]
    spread: float
    reports: list[FixpointReport]

    @property
    def inconclusive(self) -> bool:
        return self.unique is None


def uniqueness_probe(
    space: PGMSpace,
    sx: Sextuple,
    seeds,
    k: float = 0.5,
    eps: float = 1e-6,
    delta: float = 1e-3,
    n_max: int = 200,
    **kwargs,
) -> ProbeResult:
    """Run from several starting points and compare where the runs settle.

    ``unique`` is ``None`` (inconclusive) if any run fails to settle on a
    verified fixed point; otherwise it says whether all candidates agree
    (within ``eps`` on real universes, exactly on finite ones).
    """
    seeds = list(seeds)
    if len(seeds) < 2:
        raise ValueError("uniqueness probe needs at least two seeds")
    kwargs.setdefault("contraction_samples", 0)
    reports = [run(space, sx, s, k, eps, delta, n_max, **kwargs) for s in seeds]
    cands = [r.candidate for r in reports if r.settled]
    spread = max(
        (space.universe.distance(a, b) for a, b in itertools.combinations(cands, 2)),
        default=0.0,
    )
    if len(cands) < len(reports):
        unique = None
    elif space.universe.finite:
        unique = spread == 0.0
    else:
        unique = spread <= eps
    for r in reports:
        r.unique = unique
    return ProbeResult(unique, spread, reports)


# -- proof-chain monitor -----------------------------------------------------


@dataclass(frozen=True)
class ChainFailure:
    inequality: str
    n: int
    t: float
    lhs: float
    rhs: float
    p: int = 0
    q: int = 0


@dataclass
class MonitorReport:
    failures: list[ChainFailure]
    checked: dict[str, int]
    contraction_witness: Optional[dict] = None

    @property
    def ok(self) -> bool:
        return not self.failures

    def count(self, inequality: str) -> int:
        return sum(f.inequality == inequality for f in self.failures)


def proof_chain_monitor(
    space: PGMSpace,
    state: IterationState,
    k: float,
    grid=None,
    n_limit: Optional[int] = None,
    span: int = 8,
    contraction: Optional[ContractionResult] = None,
) -> MonitorReport:
    """Check the convergence inequalities along a built trace.

    Writing ``G_n = G_{y_n, y_{n+1}, y_{n+2}}``:

    * ``alpha``: ``G_{n+1}(t) >= G_n(t / k)``
    * ``beta``:  ``G_{n+1}(t) >= G_0(t / k**(n+1))``
    * ``gamma``: ``G_{y_n, y_{n+p}, y_{n+q}}(t) >= G_0(2**(n-1) t)`` for ``1 <= p <= q <= span``

    each within ``TOL``, for every grid ``t`` and every ``n <= n_limit``
    the trace supports (``n = 0`` included).
    """
    _check_k(k)
    grid = ddf.default_grid() if grid is None else np.asarray(grid, dtype=float)
    y = space.universe.as_array(state.y_seq)
    L = len(y)
    if L < 4:
        raise ValueError("proof-chain monitor needs at least four y terms")
    top = L - 1 if n_limit is None else min(n_limit, L - 1)

    def G(i, j, l, targs):
        return space.family_values(space.g_many(y[[i]], y[[j]], y[[l]])[0], targs)

    failures: list[ChainFailure] = []
    checked = {"alpha": 0, "beta": 0, "gamma": 0}

    def record(name, n, lhs, rhs, p=0, q=0):
        checked[name] += len(grid)
        for t, a, b in zip(grid, lhs, rhs):
            if a < b - TOL:
                failures.append(ChainFailure(name, n, float(t), float(a), float(b), p, q))

    for n in range(0, min(top, L - 4) + 1):
        nxt = G(n + 1, n + 2, n + 3, grid)
        record("alpha", n, nxt, G(n, n + 1, n + 2, grid / k))
        record("beta", n, nxt, G(0, 1, 2, grid * k ** -(n + 1)))
    for n in range(0, top + 1):
        base = G(0, 1, 2, grid * 2.0 ** (n - 1))
        for p in range(1, span + 1):
            for q in range(p, span + 1):
                if n + q >= L:
                    break
                record("gamma", n, G(n, n + p, n + q, grid), base, p, q)
    return MonitorReport(failures, checked, None if contraction is None else contraction.worst)


# -- trace -------------------------------------------------------------------


def trace_rows(space: PGMSpace, state: IterationState, grid, monitor: Optional[MonitorReport] = None):
    """Header plus one row per step: ``step, x_n, y_n, G(y_n, y_{n+1}, y_{n+2})(t)...,
    violations`` where the last column counts monitor failures up to step ``n``."""
    grid = np.asarray(grid, dtype=float)
    header = ["step", "x_n", "y_n"] + [f"G@{float(t)!r}" for t in grid] + ["violations"]
    per_step: dict[int, int] = {}
    if monitor is not None:
        for f in monitor.failures:
            per_step[f.n] = per_step.get(f.n, 0) + 1
    rows = [header]
    ys = state.y_seq
    cum = 0
    for n, y in enumerate(ys):
        cum += per_step.get(n, 0)
        if n + 2 < len(ys):
            vals = space.family_values(space.g(ys[n], ys[n + 1], ys[n + 2]), grid)
            gcols = [repr(float(v)) for v in np.atleast_1d(vals)]
        else:
            gcols = [""] * len(grid)
        rows.append([str(n), _fmt(state.x_seq[n]), _fmt(y)] + gcols + [str(cum)])
    return rows


def _fmt(p) -> str:
    return repr(float(p)) if isinstance(p, (float, int, np.floating, np.integer)) else str(p)


def write_trace(path, space: PGMSpace, state: IterationState, grid, monitor: Optional[MonitorReport] = None) -> str:
    """Write the trace CSV to ``path`` (or return it when ``path`` is None)."""
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(trace_rows(space, state, grid, monitor))
    text = buf.getvalue()
    if path is not None:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    return text
