"""The bounds are not just upper limits: explicit pairs of states come arbitrarily close.

Undisplaced squeezed pairs with a fixed ratio a2/a1 keep their fidelity while the
common squeezing a varies.  As a -> 0 their energy difference saturates the
general bound.  Equally squeezed displaced pairs attain the fixed-shape bound
exactly once the displacement points along the cheapest direction.
"""

from gaussbound import bounds as bd
from gaussbound.explorer import approach_bound, local_maximize_y
from gaussbound.states import PureGaussianState

F = 0.9
schedule = [1.0, 0.3, 0.1, 0.03, 0.01, 1e-3]
for fam in (bd.PURE, bd.mixed_equal_purity(0.5), bd.DISPLACED):
    ratios = approach_bound(fam, F, schedule)
    print(f"{str(fam):30s}", "  ".join(f"{r:.6f}" for _, r in ratios))

print("\nfixed shape (a=2, c=1), fractions of the optimal common offset")
for t, r in approach_bound(bd.fixed_shape(2.0, 1.0), F, [0.0, 0.5, 0.9, 1.0, 1.5]):
    print(f"  {t:.1f}: {r:.6f}")

# A generic pair refined on the fidelity-0.9 surface climbs toward the same bound
start = (PureGaussianState(1.0, 0.3, 0.2, -0.1), PureGaussianState(1.4, -0.2, 0.5, 0.1))
res = local_maximize_y(start, F)
print(f"\nlocal search: Y = {res.y:.6f} (bound {bd.y_max(bd.PURE, F):.6f}), F = {res.fidelity:.12f}, {res.message}")
print(f"  end pair: a = ({res.state_a.a:.3g}, {res.state_b.a:.3g})")
