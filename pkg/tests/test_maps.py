import math

import pytest
from hypothesis import given, strategies as st

from menger import FinitePoints, Interval, affine, composite, constant, function_map, identity, table_map
from menger.maps import MapError, PreimageError, apply_many, apply_map, solve_preimage

finite = st.floats(-1e3, 1e3, allow_nan=False)
slopes = st.floats(0.01, 10.0) | st.floats(-10.0, -0.01)


def test_apply_examples():
    assert apply_map(affine(0.25, 0), 1) == 0.25
    assert apply_map(composite(affine(2, 0), affine(0.5, 0)), 3) == 3
    assert apply_map(table_map({0: 1, 1: 0}), 1) == 0


def test_composite_order_is_left_to_right():
    f = composite(affine(1, 1), affine(2, 0))
    assert f(3) == 8  # (3 + 1) * 2, not 3 * 2 + 1


def test_universe_escape_reports_witness():
    with pytest.raises(MapError) as err:
        apply_map(affine(2, 0), 0.75, Interval(0, 1))
    assert err.value.witness == (0.75, 1.5)
    with pytest.raises(MapError):
        apply_map(table_map({0: 1}), 5)


def test_preimage_examples():
    assert solve_preimage(affine(0.5, 0), 0.25) == 0.5
    assert solve_preimage(constant(3), 3, universe=Interval(0, 10)) == 5.0
    assert solve_preimage(table_map({0: 2, 1: 2}), 2) == 0
    with pytest.raises(PreimageError):
        solve_preimage(constant(3), 4)


def test_table_preimage_tie_break_uses_universe_order():
    u = FinitePoints(["a", "b", "c"])
    f = table_map({"c": "a", "b": "a", "a": "b"})
    assert solve_preimage(f, "a", universe=u) == "b"
    assert solve_preimage(f, "c", universe=u) is None


def test_preimage_outside_universe_is_none():
    assert solve_preimage(affine(0.5, 0), 0.9, universe=Interval(0, 1)) is None


def test_function_maps():
    sq = function_map(lambda x: x * x, inverse=math.sqrt, name="sq")
    assert sq(3.0) == 9.0
    assert solve_preimage(sq, 4.0) == 2.0
    assert repr(sq) == "sq"
    with pytest.raises(PreimageError):
        solve_preimage(function_map(abs), 1.0)


def test_composite_preimage_chains_backwards():
    f = composite(affine(2, 1), affine(0.5, 0))
    x = solve_preimage(f, 4.0)
    assert f(x) == 4.0


def test_identity_is_neutral():
    f = affine(3, -1)
    for x in (-2.0, 0.0, 5.5):
        assert composite(identity(), f)(x) == f(x) == composite(f, identity())(x)


def test_apply_many_matches_scalar():
    f = composite(affine(0.5, 1), function_map(lambda x: x**2))
    xs = [0.0, 1.0, -3.0]
    assert list(apply_many(f, xs)) == [f(x) for x in xs]


@given(slopes, finite, slopes, finite, slopes, finite, finite)
def test_composite_is_associative(a, b, c, d, e, f, x):
    p, q, r = affine(a, b), affine(c, d), affine(e, f)
    lhs = composite(composite(p, q), r)(x)
    rhs = composite(p, composite(q, r))(x)
    assert lhs == rhs


@given(slopes, finite, finite)
def test_preimage_round_trip(a, b, target):
    f = affine(a, b)
    x = solve_preimage(f, target)
    assert x is not None
    assert f(x) == pytest.approx(target, rel=1e-12, abs=1e-12)
