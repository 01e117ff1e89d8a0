"""Continuity and compatibility checkers for self-maps on a PGM space.

Every checker certifies only the witnesses it is given: compatibility and
limit statements quantify over all sequences, which no finite run can
cover.  Limits are judged on the trailing quarter of a supplied sequence.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import ddf
from .maps import SelfMap, apply_many, apply_map
from .pgm_space import PGMSpace, _in_nbhd_many, converged, tail_start

__all__ = [
    "TARGET_EPS",
    "DELTA_LADDER",
    "SOURCE_EPS",
    "CompatReport",
    "PropagationReport",
    "check_continuity",
    "check_compatible_triple",
    "check_compatible_pair",
    "check_limit_propagation",
    "check_compat_propagation",
]

TARGET_EPS = (1e-1, 1e-2, 1e-3, 1e-4)
DELTA_LADDER = (0.5, 0.1, 0.01)
# searched for the source neighbourhood; extends below the target ladder so
# maps with Lipschitz constant > 1 can still be matched
SOURCE_EPS = tuple(10.0**-k for k in range(1, 9))

LABELS = ("ABx_n", "BCx_n", "CAx_n")


def _probes(space: PGMSpace, z, probe_count: int, seed: int) -> list:
    u = space.universe
    if u.finite:
        return list(u.points)
    z = float(z)
    rng = np.random.default_rng(seed)
    radii = 10.0 ** -np.arange(1, 15, dtype=float)
    pts = [z]
    pts += list(z + radii) + list(z - radii)
    scales = 10.0 ** rng.uniform(-14, 0, size=probe_count)
    pts += list(z + scales * rng.choice([-1.0, 1.0], size=probe_count))
    # no source radius on the ladder reaches beyond unit distance
    pts += list(z + rng.uniform(-1.0, 1.0, size=probe_count))
    return [p for p in pts if u.contains(p)]


def check_continuity(
    f: SelfMap,
    space: PGMSpace,
    z,
    probe_count: int = 64,
    seed: int = 0,
    targets=None,
    sources=None,
) -> bool:
    """Bounded search for the epsilon-delta continuity of ``f`` at ``z``.

    For every target ``(eps2, delta2)`` some source ``(eps1, delta1)`` must
    send all probes in ``N_z(eps1, delta1)`` into ``N_{fz}(eps2, delta2)``.
    Probes are exhaustive on finite universes and a seeded multiscale
    cloud around ``z`` otherwise.
    """
    space.check_point(z)
    targets = list(itertools.product(TARGET_EPS, DELTA_LADDER)) if targets is None else list(targets)
    sources = list(itertools.product(SOURCE_EPS, DELTA_LADDER)) if sources is None else list(sources)
    probes = _probes(space, z, probe_count, seed)
    fz = apply_map(f, z, space.universe)
    images = [apply_map(f, p, space.universe) for p in probes]

    inside = {s: _in_nbhd_many(space, z, probes, *s) for s in sources}
    for eps2, delta2 in targets:
        hit = _in_nbhd_many(space, fz, images, eps2, delta2)
        if not any(np.all(hit[mask]) for mask in inside.values()):
            return False
    return True


@dataclass
class CompatReport:
    """Outcome of a compatibility check along one supplied sequence.

    ``vacuous`` is set when the A/B/C images do not share a limit; the
    verdict is then true by default and says nothing about the maps.
    """

    pairs_checked: list[tuple[str, str]]
    worst_residual: float
    verdict: bool
    premise_ok: bool = True
    premise_spread: float = 0.0
    pair_residuals: dict = field(default_factory=dict)
    tail_max: dict = field(default_factory=dict)
    grid: Optional[np.ndarray] = None
    note: str = "certifies the supplied sequence only"

    @property
    def vacuous(self) -> bool:
        return not self.premise_ok


def _grid(grid):
    return ddf.default_grid() if grid is None else np.atleast_1d(np.asarray(grid, dtype=float))


def check_compatible_triple(
    space: PGMSpace,
    A: SelfMap,
    B: SelfMap,
    C: SelfMap,
    seq,
    grid=None,
    delta: float = 1e-3,
    premise_tol: float = 1e-3,
) -> CompatReport:
    """Check ``G_{alpha, beta, beta} -> H_0`` for all ordered pairs drawn
    from ``ABx_n``, ``BCx_n``, ``CAx_n``.

    The shared-limit premise is judged on the crisp kernel: the spread
    ``g(Ax_n, Bx_n, Cx_n)`` must stay within ``premise_tol`` over the tail.
    """
    grid = _grid(grid)
    xs = space.universe.as_array(list(seq))
    if not len(xs):
        raise ValueError("sequence must be nonempty")
    start = tail_start(len(xs))
    tail = xs[start:]
    a, b, c = (apply_many(m, tail) for m in (A, B, C))
    spread = float(np.max(space.g_many(a, b, c)))
    premise_ok = spread <= premise_tol

    comp = {
        "ABx_n": apply_many(A, b),
        "BCx_n": apply_many(B, c),
        "CAx_n": apply_many(C, a),
    }
    pairs = list(itertools.product(LABELS, repeat=2))
    worst = 0.0
    passed = True
    residuals, tail_max = {}, {}
    for alpha, beta in pairs:
        vals = space.G_grid(comp[alpha], comp[beta], comp[beta], grid)
        res = float(np.max(1.0 - vals))
        residuals[(alpha, beta)] = res
        tail_max[(alpha, beta)] = vals.max(axis=0)
        worst = max(worst, res)
        # same test as ddf.converges_to_H0 over the whole tail
        passed &= bool(np.all(vals > 1.0 - delta))
    return CompatReport(
        pairs_checked=pairs,
        worst_residual=worst,
        verdict=bool(passed) if premise_ok else True,
        premise_ok=premise_ok,
        premise_spread=spread,
        pair_residuals=residuals,
        tail_max=tail_max,
        grid=grid,
    )


def check_compatible_pair(space, A, B, seq, grid=None, delta=1e-3, premise_tol=1e-3) -> CompatReport:
    """Pair compatibility: the triple ``[A, B, B]``."""
    return check_compatible_triple(space, A, B, B, seq, grid, delta, premise_tol)


@dataclass
class PropagationReport:
    """``holds`` is ``None`` when a premise failed; ``premises`` records each one."""

    holds: Optional[bool]
    premises: dict[str, bool]
    conclusions: dict[str, bool] = field(default_factory=dict)

    @property
    def failed_premises(self) -> list[str]:
        return [k for k, v in self.premises.items() if not v]

    def __bool__(self):
        return self.holds is True


def _to_H0(space: PGMSpace, centers, points, grid, delta) -> bool:
    vals = space.G_grid(centers, points, points, grid)
    return bool(np.all(vals > 1.0 - delta))


def check_limit_propagation(f: SelfMap, space: PGMSpace, seq, z, grid=None, delta: float = 1e-3) -> PropagationReport:
    """Does ``x_n -> z`` carry over to ``f x_n -> f z`` along the tail?

    The premise ``x_n -> z`` is certified with :func:`converged` at
    ``eps = min(grid)``.
    """
    grid = _grid(grid)
    seq = list(seq)
    ok = converged(space, seq, z, float(grid.min()), delta) is not None
    premises = {"x_n -> z": ok}
    if not ok:
        return PropagationReport(None, premises)
    tail = space.universe.as_array(seq[tail_start(len(seq)):])
    fz = apply_map(f, z, space.universe)
    fx = apply_many(f, tail)
    fzs = space.universe.as_array([fz] * len(fx))
    forward = _to_H0(space, fzs, fx, grid, delta)
    backward = _to_H0(space, fx, fzs, grid, delta)
    conclusions = {"G(fz, fx_n, fx_n) -> H0": forward, "G(fx_n, fz, fz) -> H0": backward}
    return PropagationReport(forward and backward, premises, conclusions)


def check_compat_propagation(
    space: PGMSpace,
    A: SelfMap,
    B: SelfMap,
    C: SelfMap,
    seq,
    z,
    grid=None,
    delta: float = 1e-3,
    probe_count: int = 64,
    seed: int = 0,
) -> PropagationReport:
    """Given a shared limit ``z``, continuous ``B, C`` and a compatible
    triple, check ``ABx_n -> Bz`` and ``ACx_n -> Cz``.

    All premises are verified first; if any fails the report carries the
    failed premise and no verdict.
    """
    grid = _grid(grid)
    seq = list(seq)
    eps = float(grid.min())
    xs = space.universe.as_array(seq)
    premises = {}
    for name, m in (("A", A), ("B", B), ("C", C)):
        premises[f"{name}x_n -> z"] = converged(space, list(apply_many(m, xs)), z, eps, delta) is not None
    premises["B continuous at z"] = check_continuity(B, space, z, probe_count, seed)
    premises["C continuous at z"] = check_continuity(C, space, z, probe_count, seed)
    compat = check_compatible_triple(space, A, B, C, seq, grid, delta)
    premises["[A, B, C] compatible"] = compat.verdict and compat.premise_ok
    if not all(premises.values()):
        return PropagationReport(None, premises)
    ab = list(apply_many(A, apply_many(B, xs)))
    ac = list(apply_many(A, apply_many(C, xs)))
    Bz = apply_map(B, z, space.universe)
    Cz = apply_map(C, z, space.universe)
    conclusions = {
        "ABx_n -> Bz": converged(space, ab, Bz, eps, delta) is not None,
        "ACx_n -> Cz": converged(space, ac, Cz, eps, delta) is not None,
    }
    return PropagationReport(all(conclusions.values()), premises, conclusions)
