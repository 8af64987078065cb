"""Randomised test of the claim that the pure-state bound also covers mixed states.

Each family is checked against its own closed-form bound and against the
general pure-state bound.  The last family (two mixed states of different
purity) has no bound of its own, so there the pure-state bound is a conjecture.
"""

import time

from gaussbound.explorer import FAMILIES, PairSampleConfig, verify_conjecture

for family in FAMILIES:
    t0 = time.perf_counter()
    rep = verify_conjecture(PairSampleConfig(family=family, samples=200_000, seed=1), workers=2)
    tag = " (conjecture)" if rep.conjecture_level else ""
    print(f"{family:14s}{tag:14s} violations {rep.violations} / {rep.samples}"
          f"  worst margin {rep.worst_margin:+.2e}  vs pure bound {rep.worst_pure_margin:+.2e}"
          f"  [{time.perf_counter() - t0:.1f}s]")
