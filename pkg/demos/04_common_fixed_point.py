# Six maps, one common fixed point.
#
# y_n alternates through A, B, C applied to x_n, and x_{n+1} is chosen so
# that T, D, S (in turn) send it back to y_n.  With A = B = C = x/4 and
# S = T = D = x/2 every step halves x_n, and everything settles at 0.
from menger import Interval, PerimeterKernel, PGMSpace, Sextuple, affine
from menger.fixpoint import build_sequences, check_contraction, proof_chain_monitor, run, uniqueness_probe, write_trace

space = PGMSpace(Interval(0.0, 1.0), PerimeterKernel())
q, h = affine(0.25, 0), affine(0.5, 0)
sx = Sextuple(A=q, B=q, C=q, D=h, S=h, T=h)

state = build_sequences(space, sx, 1.0, 6)
print("x_n:", state.x_seq)
print("y_n:", state.y_seq)

# The contraction inequality holds with k = 1/2, and it is tight there
print("k = 1/2:", check_contraction(space, sx, 0.5, 10_000).violations, "violations")
print("k = 0.4:", check_contraction(space, sx, 0.4, 10_000).violations, "violations")

rep = run(space, sx, 1.0, k=0.5, eps=1e-6, delta=1e-3, contraction_samples=10_000)
print(f"{rep.termination.value} after {rep.iterations} steps at z = {rep.candidate:.3e}")
print("residuals 1 - G_{fz,z,z}:", {k: f"{v:.1e}" for k, v in rep.residuals.items()})

mon = proof_chain_monitor(space, build_sequences(space, sx, 1.0, 44), 0.5, n_limit=40)
print("proof-chain inequalities checked:", mon.checked, "failures:", len(mon.failures))

probe = uniqueness_probe(space, sx, [1.0, 0.7, 0.3, 0.05])
print("same fixed point from four starts:", probe.unique, f"(spread {probe.spread:.1e})")

print(write_trace(None, space, rep.state, [0.01, 1.0]).splitlines()[:4])
