"""Triangular norms and randomized checks of their axioms."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from .ddf import TOL

__all__ = [
    "TNorm",
    "Violation",
    "AxiomReport",
    "apply",
    "fold",
    "check_axioms",
    "is_idempotent",
    "ANCHORS",
]

#: Deterministic sample points mixed into every randomized check.
ANCHORS = np.array([0.0, 0.25, 0.5, 0.75, 1.0])


class TNorm(enum.Enum):
    MIN = "min"
    PRODUCT = "product"
    LUKASIEWICZ = "lukasiewicz"

    def __call__(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if self is TNorm.MIN:
            out = np.minimum(x, y)
        elif self is TNorm.PRODUCT:
            out = x * y
        else:
            out = np.maximum(0.0, x + y - 1.0)
        return float(out) if out.ndim == 0 else out

    @classmethod
    def parse(cls, name: str) -> "TNorm":
        key = name.strip().lower().replace("ł", "l")
        for member in cls:
            if member.value == key:
                return member
        raise ValueError(f"unknown t-norm {name!r}; expected one of min, product, lukasiewicz")


BinaryOp = Union[TNorm, Callable[[np.ndarray, np.ndarray], np.ndarray]]


@dataclass(frozen=True)
class Violation:
    """One failed axiom instance.

    ``axiom`` names the law, ``witness`` holds the offending inputs and
    ``slack`` is how far the law missed (positive means violated).
    """

    axiom: str
    witness: tuple
    slack: float


@dataclass
class AxiomReport:
    checked: int
    violations: list[Violation] = field(default_factory=list)
    counts: dict[str, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def axioms_failed(self) -> set[str]:
        return {v.axiom for v in self.violations}

    def add(self, axiom: str, witnesses, slacks, limit: int) -> None:
        n = len(slacks)
        if n == 0:
            return
        self.counts[axiom] = self.counts.get(axiom, 0) + n
        order = np.argsort(-np.asarray(slacks), kind="stable")[:limit]
        for i in order:
            w = tuple(v.item() if isinstance(v, np.generic) else v for v in witnesses[i])
            self.violations.append(Violation(axiom, w, float(slacks[i])))


def apply(op: TNorm, x: float, y: float) -> float:
    """``x * y`` under the chosen t-norm; both inputs must lie in [0, 1]."""
    for v in (x, y):
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"t-norm argument {v} outside [0, 1]")
    return float(op(x, y))


def fold(op: BinaryOp, *terms):
    """Left fold of ``op`` over two or more (array) terms."""
    acc = terms[0]
    for term in terms[1:]:
        acc = op(acc, term)
    return acc


def _samples(n: int, seed: int, width: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    drawn = rng.random((n, width))
    grids = np.meshgrid(*([ANCHORS] * width), indexing="ij")
    anchors = np.stack([g.ravel() for g in grids], axis=1)
    return np.vstack([anchors, drawn])


def check_axioms(op: BinaryOp, samples: int = 1000, seed: int = 0, max_witnesses: int = 20) -> AxiomReport:
    """Search for violations of commutativity, associativity, monotonicity
    and the unit law on ``samples`` seeded triples plus the anchor lattice.

    ``op`` may be a :class:`TNorm` or any vectorised binary callable.
    Axiom labels are ``"i"`` (commutativity), ``"ii"`` (associativity),
    ``"iii"`` (monotonicity) and ``"iv"`` (identity 1).
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    pts = _samples(samples, seed, 3)
    x, y, z = pts.T
    report = AxiomReport(checked=len(pts))

    def f(a, b):
        return np.asarray(op(a, b), dtype=float) * np.ones_like(a)

    slack = np.abs(f(x, y) - f(y, x))
    bad = slack > TOL
    report.add("i", np.stack([x, y], axis=1)[bad], slack[bad], max_witnesses)

    slack = np.abs(f(x, f(y, z)) - f(f(x, y), z))
    bad = slack > TOL
    report.add("ii", pts[bad], slack[bad], max_witnesses)

    lo, hi = np.minimum(y, z), np.maximum(y, z)
    slack = f(x, lo) - f(x, hi)
    bad = slack > TOL
    report.add("iii", np.stack([x, lo, hi], axis=1)[bad], slack[bad], max_witnesses)

    slack = np.abs(f(x, np.ones_like(x)) - x)
    bad = slack > TOL
    report.add("iv", x[bad][:, None], slack[bad], max_witnesses)
    return report


def is_idempotent(op: BinaryOp, samples: int = 1000, seed: int = 0) -> bool:
    """True iff ``a * a >= a`` (within tolerance) on seeded draws and the anchors."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    a = np.concatenate([ANCHORS, np.random.default_rng(seed).random(samples)])
    return bool(np.all(np.asarray(op(a, a), dtype=float) >= a - TOL))
