"""Scenario documents: a small sectioned key-value format.

Grammar (one statement per line, ``#`` starts a comment)::

    [section]
    key = value

Sections and keys:

``[space]``
    ``family``   -- ``ratio`` | ``dirac``
    ``kernel``   -- ``perimeter`` | ``table``
    ``universe`` -- ``interval LO HI`` | ``points P1 P2 ...``
    ``tnorm``    -- ``min`` | ``product`` | ``lukasiewicz``
    ``fill``     -- ``symmetric`` (default) | ``none``; how table entries
    are completed over permutations

``[kernel]`` (table kernels only)
    ``P Q R = VALUE`` for an ordered triple of points.  Triples ``(p, p, p)``
    default to 0.  With ``fill = symmetric`` every permutation of a listed
    triple takes its value unless listed itself.

``[maps]``
    ``A`` .. ``T`` -- a map expression; ``|`` chains maps left to right::

        affine SLOPE INTERCEPT | identity | constant C | table P:Q P:Q ...

``[run]``
    ``x0``, ``k`` (in (0, 1/2]), ``eps``, ``delta``, ``n_max``, ``seed``,
    ``grid`` (``geom:BASE:KMIN:KMAX`` or ``list:T1,T2,...``),
    ``contraction_samples``, ``point_samples``, ``t_samples``

``[compat]``
    ``triple`` -- three map names, e.g. ``A S S`` for the pair ``[A, S]``;
    ``sequence`` -- ``geometric A R N`` | ``harmonic A B N`` | ``list V1 V2 ...``;
    ``limit`` -- optional common limit, enables the propagation checks.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import maps as mp
from .fixpoint import MAP_NAMES, Sextuple
from .pgm_space import FinitePoints, Interval, PerimeterKernel, PGMSpace, TableKernel
from .tnorm import TNorm

__all__ = ["Scenario", "ScenarioError", "parse_scenario", "render", "parse_grid", "parse_sequence"]


class ScenarioError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None, key: Optional[str] = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"field {key!r}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
        self.line = line
        self.key = key


KNOWN = {
    "space": {"family", "kernel", "universe", "tnorm", "fill"},
    "maps": set(MAP_NAMES),
    "run": {"x0", "k", "eps", "delta", "n_max", "seed", "grid", "contraction_samples", "point_samples", "t_samples"},
    "compat": {"triple", "sequence", "limit"},
}


@dataclass(frozen=True)
class Scenario:
    family: str
    kernel: str
    universe: tuple
    tnorm: str = "min"
    fill: str = "symmetric"
    kernel_entries: tuple = ()
    maps: tuple = ()
    x0: object = None
    k: float = 0.5
    eps: float = 1e-6
    delta: float = 1e-3
    n_max: int = 200
    seed: int = 0
    grid: str = "geom:2:-10:10"
    contraction_samples: int = 1000
    point_samples: int = 1000
    t_samples: int = 20
    compat: Optional[tuple] = None
    extras: tuple = field(default=(), compare=False)

    # -- builders ------------------------------------------------------------

    def build_universe(self):
        if self.universe[0] == "interval":
            return Interval(self.universe[1], self.universe[2])
        return FinitePoints(self.universe[1])

    def build_space(self) -> PGMSpace:
        u = self.build_universe()
        if self.kernel == "perimeter":
            kernel = PerimeterKernel()
        else:
            kernel = _table_kernel(u, self.kernel_entries, self.fill)
        return PGMSpace(u, kernel, self.family, TNorm.parse(self.tnorm))

    def map_dict(self) -> dict:
        return {name: build_map(spec, name) for name, spec in self.maps}

    def build_sextuple(self) -> Sextuple:
        d = self.map_dict()
        missing = [n for n in MAP_NAMES if n not in d]
        if missing:
            raise ScenarioError(f"missing maps: {', '.join(missing)}", key="maps")
        return Sextuple(**{n: d[n] for n in MAP_NAMES})

    def grid_values(self) -> np.ndarray:
        return parse_grid(self.grid)


# -- value parsers -------------------------------------------------------------


def _point(tok: str):
    try:
        v = float(tok)
    except ValueError:
        return tok
    return v


def _float(tok: str, key: str, line: int) -> float:
    try:
        v = float(tok)
    except ValueError:
        raise ScenarioError(f"expected a number, got {tok!r}", line, key) from None
    if math.isnan(v):
        raise ScenarioError("NaN is not allowed", line, key)
    return v


def _int(tok: str, key: str, line: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ScenarioError(f"expected an integer, got {tok!r}", line, key) from None


def parse_grid(spec: str) -> np.ndarray:
    """``geom:BASE:KMIN:KMAX`` -> ``BASE**k``; ``list:T1,T2,...`` -> the listed points."""
    kind, _, rest = spec.strip().partition(":")
    try:
        if kind == "geom":
            base, kmin, kmax = rest.split(":")
            vals = float(base) ** np.arange(int(kmin), int(kmax) + 1, dtype=float)
        elif kind == "list":
            vals = np.array([float(v) for v in rest.split(",")])
        else:
            raise ValueError(f"unknown grid kind {kind!r}")
    except ValueError as exc:
        raise ScenarioError(f"bad grid {spec!r}: {exc}") from None
    if vals.size == 0 or np.any(~(vals > 0)) or np.any(~np.isfinite(vals)):
        raise ScenarioError(f"grid {spec!r} must hold finite positive points")
    return vals


def parse_sequence(spec: tuple) -> list:
    kind, args = spec[0], spec[1:]
    if kind == "geometric":
        a, r, n = args
        return [a * r**i for i in range(int(n))]
    if kind == "harmonic":
        a, b, n = args
        return [a + b / i for i in range(1, int(n) + 1)]
    return list(args)


def _parse_part(text: str, key: str, line: int) -> tuple:
    toks = text.split()
    if not toks:
        raise ScenarioError("empty map expression", line, key)
    head, args = toks[0], toks[1:]
    if head == "identity" and not args:
        return ("identity",)
    if head == "constant" and len(args) == 1:
        return ("constant", _float(args[0], key, line))
    if head == "affine" and len(args) in (1, 2):
        slope = _float(args[0], key, line)
        icpt = _float(args[1], key, line) if len(args) == 2 else 0.0
        return ("affine", slope, icpt)
    if head == "table" and args:
        pairs = []
        for a in args:
            src, sep, dst = a.partition(":")
            if not sep:
                raise ScenarioError(f"table entry {a!r} must look like P:Q", line, key)
            pairs.append((_point(src), _point(dst)))
        return ("table", tuple(pairs))
    raise ScenarioError(f"cannot parse map expression {text!r}", line, key)


def build_map(spec: tuple, name: str = "") -> mp.SelfMap:
    parts = []
    for p in spec:
        if p[0] == "identity":
            parts.append(mp.identity())
        elif p[0] == "constant":
            parts.append(mp.constant(p[1]))
        elif p[0] == "affine":
            parts.append(mp.affine(p[1], p[2]))
        else:
            parts.append(mp.table_map(dict(p[1])))
    if len(parts) == 1:
        m = parts[0]
        return mp.SelfMap(m.kind, m.slope, m.intercept, m.pairs, m.parts, name=name)
    return mp.composite(*parts, name=name)


def _table_kernel(u, entries, fill: str) -> TableKernel:
    if not isinstance(u, FinitePoints):
        raise ScenarioError("table kernel needs a 'points' universe", key="kernel")
    n = len(u)
    vals = np.full((n, n, n), np.nan)
    for i in range(n):
        vals[i, i, i] = 0.0
    explicit = set()
    for (p, q, r), v in entries:
        try:
            idx = (u.index(p), u.index(q), u.index(r))
        except ValueError as exc:
            raise ScenarioError(str(exc), key="kernel") from None
        vals[idx] = v
        explicit.add(idx)
    if fill == "symmetric":
        for (p, q, r), v in entries:
            idx = (u.index(p), u.index(q), u.index(r))
            for perm in set(itertools.permutations(idx)):
                if perm not in explicit:
                    vals[perm] = v
    if np.isnan(vals).any():
        i, j, k = np.argwhere(np.isnan(vals))[0]
        raise ScenarioError(
            f"no value for triple ({u.points[i]!r}, {u.points[j]!r}, {u.points[k]!r})", key="kernel"
        )
    return TableKernel(vals)


# -- document parser -----------------------------------------------------------


def _lines(text: str):
    section = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip().lower()
            yield lineno, section, None, None
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ScenarioError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        if section is None:
            raise ScenarioError("statement outside any section", lineno)
        yield lineno, section, key.strip(), value.strip()


def parse_scenario(text: str, strict: bool = True) -> Scenario:
    """Parse and validate a scenario document.

    Unknown sections or keys raise :class:`ScenarioError` when ``strict``
    and emit a warning otherwise.  Every error names its line and field.
    """
    fields: dict = {}
    lines: dict = {}
    kernel_entries = []
    map_specs = {}
    compat: dict = {}
    extras = []

    def unknown(msg, lineno, key):
        if strict:
            raise ScenarioError(msg, lineno, key)
        warnings.warn(f"line {lineno}: {msg}", stacklevel=3)
        extras.append((lineno, key))

    seen_sections = set()
    for lineno, section, key, value in _lines(text):
        if key is None:
            if section not in KNOWN and section != "kernel":
                unknown(f"unknown section [{section}]", lineno, None)
            if section in seen_sections:
                raise ScenarioError(f"duplicate section [{section}]", lineno)
            seen_sections.add(section)
            continue
        if section == "kernel":
            toks = key.split()
            if len(toks) != 3:
                raise ScenarioError("kernel entries look like 'P Q R = VALUE'", lineno, key)
            v = _float(value, key, lineno)
            if v < 0:
                raise ScenarioError("kernel values must be nonnegative", lineno, key)
            kernel_entries.append((tuple(_point(t) for t in toks), v))
            continue
        if section not in KNOWN:
            continue
        if key not in KNOWN[section]:
            unknown(f"unknown key {key!r} in [{section}]", lineno, key)
            continue
        slot = (section, key)
        if slot in lines:
            raise ScenarioError(f"duplicate key (first on line {lines[slot]})", lineno, key)
        lines[slot] = lineno
        if section == "maps":
            map_specs[key] = tuple(_parse_part(p, key, lineno) for p in value.split("|"))
        elif section == "compat":
            compat[key] = (value, lineno)
        else:
            fields[key] = (value, lineno)

    def get(key, default=None, required=False):
        if key in fields:
            return fields[key]
        if required:
            raise ScenarioError("required field missing", None, key)
        return (default, None)

    family, ln = get("family", required=True)
    if family not in ("ratio", "dirac"):
        raise ScenarioError(f"unknown family {family!r}; expected ratio or dirac", ln, "family")
    kernel, ln = get("kernel", required=True)
    if kernel not in ("perimeter", "table"):
        raise ScenarioError(f"unknown kernel {kernel!r}; expected perimeter or table", ln, "kernel")
    tnorm, ln = get("tnorm", "min")
    try:
        TNorm.parse(tnorm)
    except ValueError as exc:
        raise ScenarioError(str(exc), ln, "tnorm") from None
    tnorm = TNorm.parse(tnorm).value
    fill, ln = get("fill", "symmetric")
    if fill not in ("symmetric", "none"):
        raise ScenarioError(f"fill must be symmetric or none, got {fill!r}", ln, "fill")

    utext, ln = get("universe", required=True)
    toks = utext.split()
    if toks and toks[0] == "interval" and len(toks) == 3:
        lo, hi = _float(toks[1], "universe", ln), _float(toks[2], "universe", ln)
        if not lo <= hi:
            raise ScenarioError("interval bounds must satisfy LO <= HI", ln, "universe")
        universe = ("interval", lo, hi)
    elif toks and toks[0] == "points" and len(toks) > 1:
        pts = tuple(_point(t) for t in toks[1:])
        if len(set(pts)) != len(pts):
            raise ScenarioError("duplicate points", ln, "universe")
        universe = ("points", pts)
    else:
        raise ScenarioError(f"cannot parse universe {utext!r}", ln, "universe")
    if kernel == "table" and universe[0] != "points":
        raise ScenarioError("table kernel needs a 'points' universe", ln, "universe")
    if kernel_entries and kernel != "table":
        raise ScenarioError("[kernel] entries given but kernel is not 'table'", None, "kernel")

    kw = {}
    x0, ln = get("x0")
    if x0 is not None:
        kw["x0"] = _point(x0) if universe[0] == "points" else _float(x0, "x0", ln)
    for key, conv in (("k", _float), ("eps", _float), ("delta", _float)):
        v, ln = get(key)
        if v is not None:
            kw[key] = conv(v, key, ln)
    for key in ("n_max", "seed", "contraction_samples", "point_samples", "t_samples"):
        v, ln = get(key)
        if v is not None:
            kw[key] = _int(v, key, ln)
    if "k" in kw and not 0 < kw["k"] <= 0.5:
        raise ScenarioError("k outside (0, 1/2]", lines[("run", "k")], "k")
    if "eps" in kw and not kw["eps"] > 0:
        raise ScenarioError("eps must be positive", lines[("run", "eps")], "eps")
    if "delta" in kw and not 0 < kw["delta"] < 1:
        raise ScenarioError("delta outside (0, 1)", lines[("run", "delta")], "delta")
    for key in ("n_max", "point_samples", "t_samples"):
        if key in kw and kw[key] < 1:
            raise ScenarioError("must be >= 1", lines[("run", key)], key)
    if "contraction_samples" in kw and kw["contraction_samples"] < 0:
        raise ScenarioError("must be >= 0", lines[("run", "contraction_samples")], "contraction_samples")
    g, ln = get("grid")
    if g is not None:
        try:
            parse_grid(g)
        except ScenarioError as exc:
            raise ScenarioError(str(exc).split(": ", 1)[-1], ln, "grid") from None
        kw["grid"] = g.strip()

    compat_spec = None
    if compat:
        if "triple" not in compat or "sequence" not in compat:
            raise ScenarioError("[compat] needs 'triple' and 'sequence'", None, "compat")
        tv, tl = compat["triple"]
        names = tuple(tv.split())
        if len(names) != 3 or any(n not in MAP_NAMES for n in names):
            raise ScenarioError("triple must name three of A B C D S T", tl, "triple")
        sv, sl = compat["sequence"]
        stoks = sv.split()
        if not stoks or stoks[0] not in ("geometric", "harmonic", "list"):
            raise ScenarioError("sequence must be geometric, harmonic or list", sl, "sequence")
        if stoks[0] in ("geometric", "harmonic") and len(stoks) != 4:
            raise ScenarioError(f"{stoks[0]} takes three arguments", sl, "sequence")
        if stoks[0] == "list":
            sargs = tuple(_point(t) if universe[0] == "points" else _float(t, "sequence", sl) for t in stoks[1:])
            if not sargs:
                raise ScenarioError("empty sequence", sl, "sequence")
        else:
            sargs = (_float(stoks[1], "sequence", sl), _float(stoks[2], "sequence", sl), _int(stoks[3], "sequence", sl))
        limit = None
        if "limit" in compat:
            lv, ll = compat["limit"]
            limit = _point(lv) if universe[0] == "points" else _float(lv, "limit", ll)
        compat_spec = (names, (stoks[0],) + sargs, limit)

    ordered_maps = tuple((n, map_specs[n]) for n in MAP_NAMES if n in map_specs)
    return Scenario(
        family=family,
        kernel=kernel,
        universe=universe,
        tnorm=tnorm,
        fill=fill,
        kernel_entries=tuple(kernel_entries),
        maps=ordered_maps,
        compat=compat_spec,
        extras=tuple(extras),
        **kw,
    )


# -- renderer ------------------------------------------------------------------


def _r(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _render_part(p: tuple) -> str:
    if p[0] == "identity":
        return "identity"
    if p[0] == "constant":
        return f"constant {_r(p[1])}"
    if p[0] == "affine":
        return f"affine {_r(p[1])} {_r(p[2])}"
    return "table " + " ".join(f"{_r(a)}:{_r(b)}" for a, b in p[1])


def render(s: Scenario) -> str:
    """Canonical text for ``s``; ``parse_scenario(render(s)) == s``."""
    out = ["[space]", f"family = {s.family}", f"kernel = {s.kernel}"]
    if s.universe[0] == "interval":
        out.append(f"universe = interval {_r(s.universe[1])} {_r(s.universe[2])}")
    else:
        out.append("universe = points " + " ".join(_r(p) for p in s.universe[1]))
    out += [f"tnorm = {s.tnorm}", f"fill = {s.fill}"]
    if s.kernel_entries:
        out += ["", "[kernel]"]
        out += [f"{_r(p)} {_r(q)} {_r(r)} = {_r(v)}" for (p, q, r), v in s.kernel_entries]
    if s.maps:
        out += ["", "[maps]"]
        out += [f"{name} = " + " | ".join(_render_part(p) for p in spec) for name, spec in s.maps]
    out += ["", "[run]"]
    if s.x0 is not None:
        out.append(f"x0 = {_r(s.x0)}")
    out += [
        f"k = {_r(s.k)}",
        f"eps = {_r(s.eps)}",
        f"delta = {_r(s.delta)}",
        f"n_max = {s.n_max}",
        f"seed = {s.seed}",
        f"grid = {s.grid}",
        f"contraction_samples = {s.contraction_samples}",
        f"point_samples = {s.point_samples}",
        f"t_samples = {s.t_samples}",
    ]
    if s.compat is not None:
        names, seq, limit = s.compat
        out += ["", "[compat]", "triple = " + " ".join(names), "sequence = " + " ".join(_r(v) for v in seq)]
        if limit is not None:
            out.append(f"limit = {_r(limit)}")
    return "\n".join(out) + "\n"
