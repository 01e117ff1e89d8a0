# What the engine reports when a hypothesis of the theorem is missing.
from menger import Interval, PerimeterKernel, PGMSpace, Sextuple, affine, identity
from menger.fixpoint import PremiseError, build_sequences, check_contraction, proof_chain_monitor, run, uniqueness_probe
from menger.tnorm import TNorm

space = PGMSpace(Interval(0.0, 1.0), PerimeterKernel())

# all six maps x/2: 0 is a common fixed point, but the contraction fails
h = affine(0.5, 0)
res = check_contraction(space, Sextuple(h, h, h, h, h, h), 0.5, 10_000)
print(f"x/2 everywhere: {res.violations}/{res.checked} violations, worst {res.worst}")

# slower decay: the monitor's inequalities break and point at the contraction witness
sx = Sextuple(*(affine(0.45, 0),) * 3, *(h,) * 3)
con = check_contraction(space, sx, 0.5, 1000)
mon = proof_chain_monitor(space, build_sequences(space, sx, 1.0, 30), 0.5, contraction=con)
print("0.45x / 0.5x monitor failures:", {k: mon.count(k) for k in ("alpha", "beta", "gamma")})
print("  contraction witness:", mon.contraction_witness)

# identity maps: every point is fixed, the sequence collides at once
i = identity()
ident = Sextuple(i, i, i, i, i, i)
rep = run(space, ident, 0.2, contraction_samples=0)
print("identity:", rep.termination.value, rep.diagnosis, "candidate", rep.candidate)
print("identity from 0.2 and 0.8 unique?", uniqueness_probe(space, ident, [0.2, 0.8]).unique)

# product t-norm: refused up front
try:
    run(PGMSpace(space.universe, space.kernel, "ratio", TNorm.PRODUCT), ident, 0.2)
except PremiseError as exc:
    print("product t-norm:", exc)
