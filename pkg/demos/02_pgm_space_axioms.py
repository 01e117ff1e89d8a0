# A PGM space assigns a DDF G_{x,y,z} to every triple of points.
#
# Two concrete constructions start from a crisp three-point distance g:
# the ratio family t/(t+g) and the dirac family H_g.  Here g is the
# perimeter |x-y| + |y-z| + |z-x|.
import numpy as np

from menger import FinitePoints, Interval, PerimeterKernel, PGMSpace, TableKernel
from menger.pgm_space import cauchy_window, check_axioms, converged
from menger.tnorm import TNorm

space = PGMSpace(Interval(0.0, 1.0), PerimeterKernel(), "ratio", TNorm.MIN)
print("g(0, 1, 1) =", space.g(0.0, 1.0, 1.0), " G_{0,1,1}(2) =", space.G_at(0.0, 1.0, 1.0, 2.0))

rep = check_axioms(space, point_samples=1000, t_samples=20, seed=0)
print(f"ratio/perimeter on [0,1]: {len(rep.violations)} violations over {rep.checked} tuples")

# Dirac family on six points: small enough to check every 4-tuple
pts = [0.0, 1.0, 2.5, 3.0, 7.0, 10.0]
dspace = PGMSpace(FinitePoints(pts), TableKernel.from_points(pts), "dirac")
rep = check_axioms(dspace)
print(f"dirac on six points: {len(rep.violations)} violations over all {rep.checked} tuples")

# Break symmetry in one entry and the checker names the axiom
tab = TableKernel.from_points([0.0, 1.0, 2.0]).table.copy()
tab[2, 1, 0] = 5.0
bad = PGMSpace(FinitePoints([0.0, 1.0, 2.0]), TableKernel(tab))
rep = check_axioms(bad)
print("broken table fails", sorted(rep.axioms_failed()), "first witness", rep.violations[0].witness)

# Limits and Cauchy sequences are judged in (eps, delta) neighbourhoods
seq = [2.0**-n for n in range(60)]
print("2^-n -> 0 from index", converged(space, seq, 0.0, eps=1.0, delta=0.5))
print("2^-n Cauchy at (1e-6, 1e-3) from index", cauchy_window(space, seq, 1e-6, 1e-3))
alt = [float(n % 2) for n in range(30)]
print("0,1,0,1,... Cauchy at (1, 0.5):", cauchy_window(space, alt, 1.0, 0.5))
print("values G_{0,1,1}(t) on a few t:", np.round(space.G_grid([0.0], [1.0], [1.0], [0.5, 2, 8])[0], 3))
