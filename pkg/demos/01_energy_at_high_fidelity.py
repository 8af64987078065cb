"""How different can the energies of two Gaussian states be when their fidelity is high?

Start from the ground state (a = 1) and a squeezed state (a = 2).  The fidelity
is 94%, yet the second state carries 25% more energy.  With stronger
squeezing the same fidelity allows the energy to double.
"""

import math

from gaussbound import PURE, PureGaussianState, fidelity
from gaussbound import bounds as bd
from gaussbound.explorer import extremal_pure_pair
from gaussbound.fidelity import compare_states, y_to_max_ratio

ground, squeezed = PureGaussianState(1.0), PureGaussianState(2.0)
cmp = compare_states(ground, squeezed)
print(f"F = {fidelity(ground, squeezed):.6f}  E1 = {cmp.e1}  E2 = {cmp.e2}  Y = {cmp.y:.6f}")

# same fidelity, ten times stronger squeezing
f = math.sqrt(8 / 9)
s1, s2 = extremal_pure_pair(f, 0.1, sign=-1)
cmp = compare_states(s1, s2)
print(f"a = (0.1, 0.05): E1 = {cmp.e1}  E2 = {cmp.e2}  Y = {cmp.y:.6f}")
print(f"bound at this fidelity: Y_m = {bd.y_max(PURE, f):.6f}, E2/E1 up to {y_to_max_ratio(bd.y_max(PURE, f)):.3f}")

# Bounds for narrower classes of states at the same fidelity
print("\nfamily                     Y_m(F=0.9)")
for fam in (bd.COHERENT, bd.fixed_shape(2.0, 1.0), bd.DISPLACED, bd.SUPERMIXED, bd.mixed_equal_purity(0.5), PURE):
    print(f"{str(fam):30s} {bd.y_max(fam, 0.9):.6f}")

# and the reverse question: the largest fidelity compatible with E2 = 2 E1
y = 1 / math.sqrt(2)
print(f"\nE2 = 2 E1: F_max = {bd.f_max(PURE, y):.6f}, smallest Bures distance = {bd.bures_min(y):.6f}")
