import textwrap
from dataclasses import replace

import pytest
from hypothesis import given, settings, strategies as st

from menger.cli import main
from menger.scenario import Scenario, ScenarioError, parse_scenario, render

GEOMETRIC = textwrap.dedent(
    """\
    [space]
    family = ratio
    kernel = perimeter
    universe = interval 0 1
    tnorm = min

    [maps]
    A = affine 0.25 0
    B = affine 0.25
    C = affine 0.25 0
    D = affine 0.5 0
    S = affine 0.5 0
    T = affine 0.5 0

    [run]
    x0 = 1
    k = 0.5
    eps = 1e-6
    delta = 1e-3
    n_max = 60
    seed = 42
    contraction_samples = 2000
    point_samples = 200

    [compat]
    triple = A S S
    sequence = geometric 1 0.5 60
    limit = 0
    """
)

BROKEN_SYMMETRY = textwrap.dedent(
    """\
    [space]
    family = ratio
    kernel = table
    universe = points a b c
    fill = none

    [kernel]
    a a b = 2
    a b a = 2
    b a a = 2
    a b b = 2
    b a b = 2
    b b a = 2
    a a c = 2
    a c a = 2
    c a a = 2
    a c c = 2
    c a c = 2
    c c a = 2
    b b c = 2
    b c b = 2
    c b b = 2
    b c c = 2
    c b c = 2
    c c b = 2
    a b c = 4
    a c b = 4
    b a c = 4
    b c a = 4
    c a b = 4
    c b a = 5
    """
)


def write(tmp_path, text, name="s.scn"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_minimal_document_parses():
    s = parse_scenario(GEOMETRIC)
    assert isinstance(s, Scenario)
    assert s.family == "ratio" and s.x0 == 1.0 and s.n_max == 60
    sx = s.build_sextuple()
    assert sx.B(1.0) == 0.25


def test_k_out_of_range():
    with pytest.raises(ScenarioError, match=r"k outside \(0, 1/2\]") as err:
        parse_scenario(GEOMETRIC.replace("k = 0.5", "k = 0.6"))
    assert err.value.line == 17
    assert err.value.key == "k"


@pytest.mark.parametrize(
    "old,new,key",
    [
        ("tnorm = min", "tnorm = drastic", "tnorm"),
        ("family = ratio", "family = gauss", "family"),
        ("A = affine 0.25 0", "A = rotate 3", "A"),
        ("n_max = 60", "n_max = sixty", "n_max"),
        ("universe = interval 0 1", "universe = interval 1 0", "universe"),
        ("triple = A S S", "triple = A S Q", "triple"),
    ],
)
def test_field_precise_errors(old, new, key):
    with pytest.raises(ScenarioError) as err:
        parse_scenario(GEOMETRIC.replace(old, new))
    assert err.value.key == key
    assert err.value.line is not None


def test_unknown_keys_strict_and_lenient():
    text = GEOMETRIC.replace("[run]\n", "[run]\ncolour = blue\n")
    with pytest.raises(ScenarioError, match="unknown key"):
        parse_scenario(text, strict=True)
    with pytest.warns(UserWarning):
        s = parse_scenario(text, strict=False)
    assert s == parse_scenario(GEOMETRIC)


def test_symmetric_fill_completes_table():
    text = textwrap.dedent(
        """\
        [space]
        family = dirac
        kernel = table
        universe = points 0 1

        [kernel]
        0 0 1 = 2
        0 1 1 = 2
        """
    )
    space = parse_scenario(text).build_space()
    assert space.g(1.0, 0.0, 0.0) == 2.0
    with pytest.raises(ScenarioError, match="no value"):
        parse_scenario(text.replace("0 1 1 = 2\n", "")).build_space()


def test_render_round_trip():
    s = parse_scenario(GEOMETRIC)
    assert parse_scenario(render(s)) == s
    b = parse_scenario(BROKEN_SYMMETRY)
    assert parse_scenario(render(b)) == b


names = st.sampled_from(["a", "b", "c", "p1", "q2", "zz"])
nums = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)


@st.composite
def scenarios(draw):
    finite = draw(st.booleans())
    if finite:
        pts = tuple(draw(st.lists(names, min_size=1, max_size=4, unique=True)))
        universe = ("points", pts)
        part = st.tuples(st.just("table"), st.lists(st.tuples(st.sampled_from(pts), st.sampled_from(pts)), min_size=1, max_size=3).map(tuple))
        x0 = draw(st.sampled_from(pts))
        kernel = "table"
        entries = tuple(((p, p, p), 0.0) for p in pts) + tuple(
            ((p, q, q), draw(st.floats(0.5, 10))) for p in pts for q in pts if p != q
        ) + tuple(
            ((p, p, q), draw(st.floats(0.5, 10))) for p in pts for q in pts if p != q
        )
        entries = tuple({k: v for k, v in entries}.items())
        if len(pts) >= 3:
            entries += (((pts[0], pts[1], pts[2]), 3.0),)
            entries = tuple({k: v for k, v in entries}.items())
    else:
        lo = draw(nums)
        hi = lo + draw(st.floats(0, 1e6))
        universe = ("interval", lo, hi)
        part = st.one_of(
            st.just(("identity",)),
            st.tuples(st.just("constant"), nums),
            st.tuples(st.just("affine"), nums, nums),
        )
        x0 = draw(st.one_of(st.none(), nums))
        kernel, entries = "perimeter", ()
    specs = draw(st.dictionaries(st.sampled_from("ABCDST"), st.lists(part, min_size=1, max_size=3).map(tuple)))
    maps = tuple((n, specs[n]) for n in "ABCDST" if n in specs)
    return Scenario(
        family=draw(st.sampled_from(["ratio", "dirac"])),
        kernel=kernel,
        universe=universe,
        tnorm=draw(st.sampled_from(["min", "product", "lukasiewicz"])),
        fill="symmetric",
        kernel_entries=entries if kernel == "table" else (),
        maps=maps,
        x0=x0,
        k=draw(st.floats(1e-6, 0.5)),
        eps=draw(st.floats(1e-12, 10)),
        delta=draw(st.floats(1e-9, 0.999)),
        n_max=draw(st.integers(1, 10_000)),
        seed=draw(st.integers(0, 2**63)),
        contraction_samples=draw(st.integers(0, 10_000)),
    )


@settings(max_examples=150, deadline=None)
@given(scenarios())
def test_render_round_trip_property(s):
    assert parse_scenario(render(s)) == s


# -- command line ----------------------------------------------------------------


def test_fixpoint_exit_zero_and_trace(tmp_path, capsys):
    out = tmp_path / "trace.csv"
    assert main(["fixpoint", "--scenario", write(tmp_path, GEOMETRIC), "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("step,x_n,y_n,G@")
    assert lines[0].endswith(",violations")
    assert 20 <= len(lines) - 1 <= 60
    assert "termination: converged" in capsys.readouterr().out


def test_fixpoint_missing_x0(tmp_path, capsys):
    text = GEOMETRIC.replace("x0 = 1\n", "")
    assert main(["fixpoint", "--scenario", write(tmp_path, text)]) == 2
    assert "x0" in capsys.readouterr().err


def test_fixpoint_refuses_product_tnorm(tmp_path, capsys):
    text = GEOMETRIC.replace("tnorm = min", "tnorm = product")
    assert main(["fixpoint", "--scenario", write(tmp_path, text)]) == 2
    assert "idempotent" in capsys.readouterr().err


def test_fixpoint_contraction_failure_exit_one(tmp_path):
    text = GEOMETRIC.replace("affine 0.25", "affine 0.45")
    assert main(["fixpoint", "--scenario", write(tmp_path, text)]) == 1


def test_check_axioms_broken_symmetry(tmp_path, capsys):
    out = tmp_path / "report.csv"
    assert main(["check-axioms", "--scenario", write(tmp_path, BROKEN_SYMMETRY), "--out", str(out)]) == 1
    printed = capsys.readouterr().out
    assert "axiom (iii)" in printed
    rows = out.read_text().splitlines()
    assert rows[0] == "source,axiom,witness,slack"
    assert rows[1].startswith('pgm,iii,"(\'a\', \'b\', \'c\'')


def test_check_axioms_pass(tmp_path):
    assert main(["check-axioms", "--scenario", write(tmp_path, GEOMETRIC)]) == 0


def test_compat_and_monitor(tmp_path):
    path = write(tmp_path, GEOMETRIC)
    assert main(["compat", "--scenario", path]) == 0
    assert main(["monitor", "--scenario", path, "--max-iter", "41"]) == 0


def test_compat_noncommuting_exit_one(tmp_path):
    text = GEOMETRIC.replace("sequence = geometric 1 0.5 60", "sequence = list 0.1 0.1 0.1 0.1").replace(
        "limit = 0", "limit = 0.1"
    )
    text = text.replace("A = affine 0.25 0", "A = affine 0.5 0.2").replace("universe = interval 0 1", "universe = interval -10 10")
    # A x = 0.25 and S x = 0.05 never share a limit: the verdict is vacuous
    assert main(["compat", "--scenario", write(tmp_path, text)]) == 1


def test_flags_override(tmp_path):
    path = write(tmp_path, GEOMETRIC)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["fixpoint", "--scenario", path, "--out", str(a), "--grid", "list:0.5,1"]) == 0
    assert a.read_text().splitlines()[0] == "step,x_n,y_n,G@0.5,G@1.0,violations"
    assert main(["fixpoint", "--scenario", path, "--out", str(b), "--max-iter", "5"]) == 1
    assert main(["fixpoint", "--scenario", path, "--grid", "geom:2"]) == 2
    assert main(["fixpoint", "--scenario", str(tmp_path / "missing.scn")]) == 2


def test_strict_flag(tmp_path):
    path = write(tmp_path, GEOMETRIC.replace("[run]\n", "[run]\ncolour = blue\n"))
    assert main(["check-axioms", "--scenario", path]) == 0
    assert main(["check-axioms", "--scenario", path, "--strict"]) == 2


def test_trace_is_byte_identical(tmp_path):
    path = write(tmp_path, GEOMETRIC)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["fixpoint", "--scenario", path, "--out", str(a), "--seed", "7"])
    main(["fixpoint", "--scenario", path, "--out", str(b), "--seed", "7"])
    assert a.read_bytes() == b.read_bytes()


def test_replace_keeps_validity():
    s = parse_scenario(GEOMETRIC)
    assert parse_scenario(render(replace(s, seed=9))).seed == 9
