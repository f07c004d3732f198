"""How the ring barrier shifts quantum numbers and energies.

The b/(r^2 sin^2 theta) term replaces |m| by m' = sqrt(m^2 + b).  Everything
else (l', n', the energy, the mean radius) follows from that one shift.
"""

from ringcoulomb import QuantumState, energy, mean_radius

print(f"{'state':>22} {'mprime':>9} {'lprime':>9} {'nprime':>9} {'E':>12} {'<r>':>9}")
for n, l, m in [(1, 0, 0), (2, 1, 1), (5, 2, 1), (6, 5, 1)]:
    for b in (0.0, 0.5, 10.0):
        qs = QuantumState(n, l, m, b)
        q = qs.quasi
        print(
            f"{str((n, l, m, b)):>22} {q.mprime:9.5f} {q.lprime:9.5f} {q.nprime:9.5f}"
            f" {energy(qs):12.8f} {mean_radius(qs):9.4f}"
        )

# +m and -m stay degenerate, other m split apart once b != 0
print()
for m in range(-2, 3):
    qs = QuantumState(3, 2, m, 0.5)
    print(f"m={m:+d}  E={energy(qs):.10f}")

# a negative b is allowed as long as m^2 + b stays positive
qs = QuantumState(5, 2, 1, -0.5)
print(f"\nb=-0.5 pulls (5,2,1) inward: <r> = {mean_radius(qs):.4f} a0 vs {mean_radius(qs.with_b(0.0)):.4f} a0 at b=0")
