"""Run the invariant suite on a few states, then on a mis-scaled variant."""

from ringcoulomb import QuantumState
from ringcoulomb.checks import run_checks, summarize

roster = [QuantumState(n, l, m, b) for b in (0.0, 0.5, 10.0) for (n, l, m) in [(2, 1, 1), (4, 2, 0), (5, 4, 3)]]
print(summarize(run_checks(roster)))
print()
print(summarize(run_checks(roster[:3], perturb=True)))
