import numpy as np
import pytest

from menger import FinitePoints, PGMSpace, Sextuple, TableKernel, affine, constant, identity, table_map
from menger.fixpoint import (
    PremiseError,
    Termination,
    build_sequences,
    check_contraction,
    proof_chain_monitor,
    run,
    uniqueness_probe,
    write_trace,
)
from menger.tnorm import TNorm


def test_sequences_for_quarter_half(unit_space, quarter_half):
    state = build_sequences(unit_space, quarter_half, 1.0, 60)
    assert state.termination is None
    assert len(state.y_seq) == 60 and len(state.x_seq) == 61
    # oracle by direct recursion: x_{n+1} = 2 * (x_n / 4)
    x = 1.0
    for n in range(60):
        assert state.x_seq[n] == x
        assert state.y_seq[n] == x / 4
        x = 2 * (x / 4)
    assert len(set(state.y_seq)) == 60
    assert max(state.invariant_residuals(quarter_half)) == 0.0


def test_identity_collides_at_step_one(unit_space, identity_sextuple):
    state = build_sequences(unit_space, identity_sextuple, 0.3, 10)
    assert state.termination is Termination.COLLISION
    assert state.failure["index"] == 1
    assert state.y_seq == [0.3, 0.3]


def test_constant_target_fails_preimage(unit_space):
    sx = Sextuple(A=affine(0.5, 0), B=identity(), C=identity(), D=identity(), S=identity(), T=constant(0.9))
    state = build_sequences(unit_space, sx, 1.0, 10)
    assert state.termination is Termination.PREIMAGE_FAILURE
    assert state.failure["index"] == 0
    assert state.failure["target"] == 0.5
    assert state.failure["map"] == "T"


def test_contraction_holds_for_quarter_half(unit_space, quarter_half):
    res = check_contraction(unit_space, quarter_half, 0.5, 2000, seed=3)
    assert res.ok and res.checked == 2000


def test_contraction_is_tight_at_half(unit_space, quarter_half):
    # equality case of kg/2 >= g/4: any k below 1/2 fails
    res = check_contraction(unit_space, quarter_half, 0.4, 2000, seed=3)
    assert res.violations > 0


def test_contraction_negative_control(unit_space):
    h = affine(0.5, 0)
    res = check_contraction(unit_space, Sextuple(h, h, h, h, h, h), 0.5, 2000, seed=0)
    assert res.violations > 0
    w = res.worst
    assert w["rhs"] - w["lhs"] == pytest.approx(w["gap"])
    assert w["gap"] > 1e-9


def test_contraction_at_shared_fixed_point(unit_space):
    # x = y = z = 0 and every map fixes 0: both sides equal 1
    from menger.fixpoint import fold
    h = affine(0.5, 0)
    sx = Sextuple(h, h, h, h, h, h)
    assert unit_space.G_at(0.0, 0.0, 0.0, 0.5) == 1.0
    assert fold(unit_space.tnorm, *[unit_space.G_at(0.0, 0.0, 0.0, t) for t in (1, 1, 1, 1, 2)]) == 1.0
    assert sx.A(0.0) == 0.0


def test_contraction_premises(unit_space, quarter_half):
    with pytest.raises(ValueError):
        check_contraction(unit_space, quarter_half, 0.6)
    prod = PGMSpace(unit_space.universe, unit_space.kernel, "ratio", TNorm.PRODUCT)
    with pytest.raises(PremiseError):
        check_contraction(prod, quarter_half, 0.5)


def test_two_t_flag_relaxes(unit_space):
    h = affine(0.5, 0)
    sx = Sextuple(h, h, h, h, h, h)
    strong = check_contraction(unit_space, sx, 0.5, 2000, seed=1)
    weak = check_contraction(unit_space, sx, 0.5, 2000, seed=1, two_t=False)
    assert weak.violations <= strong.violations


def test_run_converges(unit_space, quarter_half):
    rep = run(unit_space, quarter_half, 1.0, 0.5, 1e-6, 1e-3, contraction_samples=2000)
    assert rep.termination is Termination.CONVERGED
    assert abs(rep.candidate) <= 1e-6
    assert rep.iterations <= 60
    assert set(rep.residuals) == {"A", "B", "C", "D", "S", "T"}
    assert rep.max_residual <= 1e-3
    assert rep.contraction_violations == 0
    assert rep.cauchy_index is not None


def test_run_identity_collision(unit_space, identity_sextuple):
    rep = run(unit_space, identity_sextuple, 0.6, contraction_samples=0)
    assert rep.termination is Termination.COLLISION
    assert rep.candidate == 0.6
    assert all(v == 0.0 for v in rep.residuals.values())
    assert rep.diagnosis == "early_fixed_point"
    assert rep.settled


def test_run_degenerate_collision():
    # 0 -> 1 -> 0 under T; A = C = constant 1, B = D = S = swap
    u = FinitePoints([0, 1])
    space = PGMSpace(u, TableKernel.from_points([0.0, 1.0]), "ratio")
    swap = table_map({0: 1, 1: 0})
    sx = Sextuple(A=table_map({0: 1, 1: 1}), B=swap, C=swap, D=swap, S=swap, T=swap)
    rep = run(space, sx, 0, contraction_samples=0)
    assert rep.termination is Termination.COLLISION
    assert rep.diagnosis == "degenerate"
    assert not rep.settled


def test_run_is_deterministic(unit_space, quarter_half):
    a = run(unit_space, quarter_half, 1.0, seed=5)
    b = run(unit_space, quarter_half, 1.0, seed=5)
    assert a.candidate == b.candidate and a.residuals == b.residuals
    assert a.contraction.worst == b.contraction.worst


def test_convergence_implies_small_residuals(unit_space):
    for s in (0.1, 0.25, 0.4):
        sx = Sextuple(*(affine(s, 0),) * 3, *(affine(0.5, 0),) * 3)
        rep = run(unit_space, sx, 1.0, contraction_samples=500)
        if rep.termination is Termination.CONVERGED and rep.contraction_violations == 0:
            assert rep.max_residual <= 1e-3


def test_uniqueness_probe(unit_space, quarter_half):
    res = uniqueness_probe(unit_space, quarter_half, [1.0, 0.7, 0.3])
    assert res.unique is True and res.spread <= 1e-6


def test_uniqueness_probe_identity(unit_space, identity_sextuple):
    res = uniqueness_probe(unit_space, identity_sextuple, [0.2, 0.8])
    assert res.unique is False
    assert res.spread == pytest.approx(0.6)


def test_uniqueness_probe_single_point():
    space = PGMSpace(FinitePoints(["p"]), TableKernel(np.zeros((1, 1, 1))), "dirac")
    m = table_map({"p": "p"})
    res = uniqueness_probe(space, Sextuple(m, m, m, m, m, m), ["p", "p"])
    assert res.unique is True and res.spread == 0.0


def test_uniqueness_probe_inconclusive(unit_space):
    # five steps are not enough to settle
    sx = Sextuple(*(affine(0.45, 0),) * 3, *(affine(0.5, 0),) * 3)
    res = uniqueness_probe(unit_space, sx, [1.0, 0.5], n_max=5)
    assert res.unique is None and res.inconclusive


def test_monitor_clean_trace(unit_space, quarter_half):
    state = build_sequences(unit_space, quarter_half, 1.0, 44)
    rep = proof_chain_monitor(unit_space, state, 0.5, n_limit=40)
    assert rep.ok
    assert rep.checked["alpha"] > 0 and rep.checked["gamma"] > 0


def test_monitor_checks_n_zero_gamma(unit_space, quarter_half):
    state = build_sequences(unit_space, quarter_half, 1.0, 4)
    rep = proof_chain_monitor(unit_space, state, 0.5, grid=[1.0], span=2)
    # n = 0 is checked with the 2**-1 scaling: p, q in {1, 2} -> three pairs
    assert rep.checked["gamma"] >= 3


def test_monitor_alpha_is_monotone_improvement(unit_space, quarter_half):
    state = build_sequences(unit_space, quarter_half, 1.0, 40)
    y = state.y_seq
    vals = [unit_space.G_at(y[n], y[n + 1], y[n + 2], 0.01) for n in range(len(y) - 2)]
    assert all(b >= a for a, b in zip(vals, vals[1:]))


def test_monitor_cross_references_contraction(unit_space):
    # x_{n+1} = 0.9 x_n: too slow for k = 1/2
    sx = Sextuple(*(affine(0.45, 0),) * 3, *(affine(0.5, 0),) * 3)
    state = build_sequences(unit_space, sx, 1.0, 30)
    con = check_contraction(unit_space, sx, 0.5, 500)
    rep = proof_chain_monitor(unit_space, state, 0.5, contraction=con)
    assert not con.ok
    assert not rep.ok
    assert rep.contraction_witness == con.worst


def test_trace_layout(unit_space, quarter_half, tmp_path):
    rep = run(unit_space, quarter_half, 1.0, contraction_samples=0)
    grid = [0.5, 1.0]
    text = write_trace(tmp_path / "t.csv", unit_space, rep.state, grid)
    lines = text.splitlines()
    assert lines[0] == "step,x_n,y_n,G@0.5,G@1.0,violations"
    assert len(lines) == rep.iterations + 1
    assert (tmp_path / "t.csv").read_text() == text
