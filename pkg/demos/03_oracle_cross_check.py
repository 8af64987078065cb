"""Closed forms against brute force.

The oracle never touches the closed-form fidelities.  It projects each state
onto the first N oscillator eigenfunctions and takes Uhlmann's fidelity from
matrix square roots.  Inside the moderate parameter box the two agree to about
1e-8.  At the box corners the wide mixed states leak probability past N = 40,
and the truncated energy is the first quantity to suffer.
"""

from gaussbound import oracle
from gaussbound.fidelity import fidelity
from gaussbound.states import MixedGaussianState, energy

rep = oracle.check_against_closed_forms(samples=100, dim=40, seed=0)
print(f"max |fidelity error| = {rep.max_fidelity_error:.2e}")
print(f"max |overlap error|  = {rep.max_overlap_error:.2e}")
print(f"max |purity error|   = {rep.max_purity_error:.2e}")
print(f"max |energy error|   = {rep.max_energy_error:.2e}   (largest tail {rep.max_tail:.1e})")

corner = MixedGaussianState(0.5, 1.0, 0.6)
other = MixedGaussianState(0.5, -1.0, 0.6)
print("\ncorner state (a=0.5, b=+-1, zeta=0.6)")
print("   N        tail   energy error   fidelity error")
for n in (30, 40, 60, 90, 120):
    r1 = oracle.fock_matrix(corner, n, tail_tol=1.0)
    r2 = oracle.fock_matrix(other, n, tail_tol=1.0)
    de = abs(oracle.energy_fock(r1) - energy(corner))
    df = abs(oracle.fidelity_fock(r1, r2) - fidelity(corner, other))
    print(f"{n:4d}  {r1.tail:10.2e}  {de:13.2e}  {df:15.2e}")
