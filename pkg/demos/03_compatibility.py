# Compatibility of a pair [A, B]: whenever A x_n and B x_n share a limit,
# the composites AB x_n, BB x_n and BA x_n must collapse onto each other.
#
# The check only speaks for the sequence it is given.
from menger import Interval, PerimeterKernel, PGMSpace, affine, function_map
from menger.analysis import check_compat_propagation, check_compatible_pair, check_continuity

space = PGMSpace(Interval(-1e6, 1e6), PerimeterKernel())

A, S = affine(0.25, 0, name="x/4"), affine(0.5, 0, name="x/2")
seq = [2.0**-n for n in range(60)]
rep = check_compatible_pair(space, A, S, seq)
print(f"[x/4, x/2] along 2^-n: compatible={rep.verdict}, worst residual {rep.worst_residual:.1e}")

# x^2 and 2x both send 2 + 1/n to 4, but A(Bx) -> 16 and B(Bx) -> 8
sq = function_map(lambda x: x * x, name="x^2")
seq = [2.0 + 1.0 / n for n in range(1, 10_001)]
rep = check_compatible_pair(space, sq, affine(2, 0), seq)
print(f"[x^2, 2x] along 2 + 1/n: compatible={rep.verdict}, premise spread {rep.premise_spread:.1e}")
t = rep.grid
tail = rep.tail_max[("ABx_n", "BCx_n")]
for i in (0, 10, 14, 20):
    print(f"  t={t[i]:<10g} max G on tail {tail[i]:.5f}  <=  t/(t+16) = {t[i] / (t[i] + 16):.5f}")

# Continuity plus compatibility carries the limit through the composites
print("x/2 continuous at 0:", check_continuity(S, space, 0.0))
prop = check_compat_propagation(space, A, S, S, [2.0**-n for n in range(60)], 0.0)
print("[x/4, x/2, x/2]:", prop.conclusions)

# When a premise fails there is no verdict, only the failed premises.
# The limits are judged at eps = 2^-10, delta = 1e-3, which 10^4 terms of
# an O(1/n) sequence cannot reach, so they are listed alongside compatibility.
prop = check_compat_propagation(space, sq, affine(2, 0), affine(2, 0), seq, 4.0)
print("[x^2, 2x, 2x]:", prop.holds, "failed premises:", prop.failed_premises)
