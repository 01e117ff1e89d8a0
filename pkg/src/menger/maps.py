"""Self-maps on a universe: application, composition and preimage selection."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Hashable, Mapping, Optional

import numpy as np

__all__ = [
    "SelfMap",
    "MapError",
    "PreimageError",
    "affine",
    "identity",
    "constant",
    "table_map",
    "composite",
    "function_map",
    "apply_map",
    "apply_many",
    "solve_preimage",
    "PREIMAGE_TOL",
]

#: Default acceptance tolerance for a solved preimage on real universes.
PREIMAGE_TOL = 1e-12


class MapError(ValueError):
    """A map sent a point outside the universe."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class PreimageError(ValueError):
    """The preimage problem is ill-posed for this map."""


@dataclass(frozen=True)
class SelfMap:
    """A self-map described by data.

    ``kind`` is one of ``affine`` (``slope * x + intercept``), ``table``
    (finite lookup, pairs kept in declaration order), ``composite``
    (``parts`` applied left to right) or ``function`` (an arbitrary
    callable with an optional inverse used as preimage selector).
    """

    kind: str
    slope: float = 0.0
    intercept: float = 0.0
    pairs: tuple = ()
    parts: tuple = ()
    fn: Optional[Callable] = field(default=None, compare=False)
    inverse: Optional[Callable] = field(default=None, compare=False)
    name: str = ""

    def __call__(self, x):
        return apply_map(self, x)

    def then(self, other: "SelfMap") -> "SelfMap":
        """``other`` after ``self``."""
        return composite(self, other)

    def __repr__(self):
        if self.name:
            return self.name
        if self.kind == "affine":
            return f"affine({self.slope!r}, {self.intercept!r})"
        if self.kind == "table":
            return f"table({dict(self.pairs)!r})"
        if self.kind == "composite":
            return " | ".join(repr(p) for p in self.parts)
        return "function"


def affine(slope: float, intercept: float = 0.0, name: str = "") -> SelfMap:
    return SelfMap("affine", slope=float(slope), intercept=float(intercept), name=name)


def identity() -> SelfMap:
    return affine(1.0, 0.0, name="identity")


def constant(c: float) -> SelfMap:
    return affine(0.0, c)


def table_map(mapping: Mapping[Hashable, Hashable], name: str = "") -> SelfMap:
    """Finite map; preimage ties are broken by the order of ``mapping``."""
    return SelfMap("table", pairs=tuple(mapping.items()), name=name)


def composite(*maps: SelfMap, name: str = "") -> SelfMap:
    """Apply ``maps[0]`` first, then ``maps[1]``, and so on."""
    if not maps:
        raise ValueError("composite needs at least one map")
    flat: list[SelfMap] = []
    for m in maps:
        flat.extend(m.parts if m.kind == "composite" and not m.name else (m,))
    return SelfMap("composite", parts=tuple(flat), name=name)


def function_map(fn: Callable, inverse: Optional[Callable] = None, name: str = "") -> SelfMap:
    return SelfMap("function", fn=fn, inverse=inverse, name=name)


def _raw(f: SelfMap, x):
    if f.kind == "affine":
        return f.slope * float(x) + f.intercept
    if f.kind == "table":
        for k, v in f.pairs:
            if k == x:
                return v
        raise MapError(f"{x!r} is outside the domain of table map {f!r}", witness=x)
    if f.kind == "composite":
        for part in f.parts:
            x = _raw(part, x)
        return x
    if f.kind == "function":
        return f.fn(x)
    raise ValueError(f"unknown map kind {f.kind!r}")


def apply_map(f: SelfMap, x, universe=None):
    """Image of ``x``; with a ``universe`` the image is checked for membership."""
    y = _raw(f, x)
    if universe is not None and not universe.contains(y):
        raise MapError(f"{f!r} maps {x!r} to {y!r}, outside the universe", witness=(x, y))
    return y


def apply_many(f: SelfMap, xs) -> np.ndarray:
    """Vectorised application over numeric points (loops for non-affine kinds)."""
    if f.kind == "affine":
        return f.slope * np.asarray(xs, dtype=float) + f.intercept
    if f.kind == "composite":
        out = xs
        for part in f.parts:
            out = apply_many(part, out)
        return out
    vals = [_raw(f, x) for x in xs]
    if isinstance(xs, np.ndarray) and xs.dtype != object:
        return np.asarray(vals, dtype=float)
    arr = np.empty(len(vals), dtype=object)
    arr[:] = vals
    return arr


def _close(a, b, tol) -> bool:
    if a == b:
        return True
    try:
        return abs(float(a) - float(b)) <= tol * max(1.0, abs(float(b)))
    except (TypeError, ValueError):
        return False


def solve_preimage(f: SelfMap, target, tol: float = PREIMAGE_TOL, universe=None):
    """A point ``x`` with ``f(x) == target`` (within ``tol``), or ``None``.

    Selection is deterministic: exact inverse for affine maps, the universe
    canonical point for constant maps, first matching entry for tables and
    right-to-left chaining for composites.  A constant map asked for a value
    it never takes raises :class:`PreimageError`.
    """
    if f.kind == "affine":
        if f.slope == 0.0:
            if _close(f.intercept, target, tol):
                return universe.canonical() if universe is not None else 0.0
            raise PreimageError(f"constant map {f!r} never takes the value {target!r}")
        x = (float(target) - f.intercept) / f.slope
        if not math.isfinite(x):
            return None
    elif f.kind == "table":
        keys = [k for k, v in f.pairs if _close(v, target, tol)]
        if universe is not None and getattr(universe, "finite", False):
            keys.sort(key=universe.index)
        x = keys[0] if keys else None
    elif f.kind == "composite":
        x = target
        for part in reversed(f.parts):
            x = solve_preimage(part, x, tol, universe)
            if x is None:
                return None
        return x
    elif f.kind == "function":
        if f.inverse is None:
            raise PreimageError(f"map {f!r} has no preimage selector")
        x = f.inverse(target)
    else:
        raise ValueError(f"unknown map kind {f.kind!r}")
    if x is None:
        return None
    if universe is not None and not universe.contains(x):
        return None
    if not _close(_raw(f, x), target, tol):
        return None
    return x
