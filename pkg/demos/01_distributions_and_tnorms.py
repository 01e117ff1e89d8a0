# Distance distribution functions and t-norms.
#
# A DDF F(t) reads "probability that the distance is below t".
import numpy as np

from menger import ddf
from menger.tnorm import TNorm, check_axioms, is_idempotent

grid = ddf.default_grid()
print("grid:", grid[0], "...", grid[-1], f"({len(grid)} points)")

# H_a is the crisp distance a; ratio(c) is t/(t+c), a soft version of it
H2, R2 = ddf.dirac(2.0), ddf.ratio(2.0)
for t in (1.0, 2.0, 2.0 + 1e-9, 10.0):
    print(f"t={t:<14} H_2={H2(t):.0f}  t/(t+2)={R2(t):.4f}")

# H_0 is where every distance sequence should end up
print("sup |ratio(1e-6) - H_0| on the grid:", ddf.sup_distance(ddf.ratio(1e-6), ddf.H0, grid))

# ratio(1/n) approaches H_0; at t = 1 it beats 0.9 from n = 10 on
print("ratio(1/n) -> H0 past M=9:", ddf.converges_to_H0(lambda n: ddf.ratio(1 / max(n, 1)), [1.0], 0.1, 9))
print("ratio(1/n) -> H0 past M=8:", ddf.converges_to_H0(lambda n: ddf.ratio(1 / max(n, 1)), [1.0], 0.1, 8))

# Three t-norms.  All pass the axioms, only min has a*a = a.
for op in TNorm:
    rep = check_axioms(op, samples=10_000, seed=0)
    print(f"{op.value:>12}: {len(rep.violations)} violations, idempotent={is_idempotent(op)}, 0.5*0.5={op(0.5, 0.5)}")

# An operator that ignores its second argument is caught at once
rep = check_axioms(lambda x, y: x, samples=1000, seed=0)
v = rep.violations[0]
print("projection fails axiom", v.axiom, "at", np.round(v.witness, 3), "slack", round(v.slack, 3))
