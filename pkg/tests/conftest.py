import sys

import pytest

from menger import PGMSpace, PerimeterKernel, Interval, Sextuple, affine, identity
from menger.tnorm import TNorm


@pytest.fixture
def unit_space():
    return PGMSpace(Interval(0.0, 1.0), PerimeterKernel(), "ratio", TNorm.MIN)


@pytest.fixture
def real_space():
    return PGMSpace(Interval(-1e6, 1e6), PerimeterKernel(), "ratio", TNorm.MIN)


@pytest.fixture
def quarter_half():
    q, h = affine(0.25, 0.0, name="x/4"), affine(0.5, 0.0, name="x/2")
    return Sextuple(A=q, B=q, C=q, D=h, S=h, T=h)


@pytest.fixture
def identity_sextuple():
    i = identity()
    return Sextuple(i, i, i, i, i, i)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", {})
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
