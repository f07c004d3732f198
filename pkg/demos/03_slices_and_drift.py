"""yoz contour slices and the drift of high-density regions toward the poles."""

from pathlib import Path

from ringcoulomb import QuantumState
from ringcoulomb.grid import GridSpec, auto_extent, contour_slice, polar_drift, sample_block, superlevel_area

out = Path("demo_out")
out.mkdir(exist_ok=True)

# the sign of b moves the density in or out
L = auto_extent(QuantumState(5, 2, 1, 0.5))
for b in (-0.5, 0.0, 0.5):
    sl = contour_slice(QuantumState(5, 2, 1, b), 81, L)
    sl.quadrant1().to_csv(out / f"slice_n5_l2_m1_b{b:g}_q1.csv")
    sl.to_pgm(out / f"slice_n5_l2_m1_b{b:g}.pgm")
    print(f"b={b:+.1f}: area with value >= 50 is {superlevel_area(sl, 50):7.2f} a0^2")

# mean |z|/r over the superlevel set grows with the level for (6,5,1)
for b in (0.0, 0.5, 10.0):
    qs = QuantumState(6, 5, 1, b)
    block = sample_block(GridSpec(qs, auto_extent(qs), 81), workers=4)
    lo, hi = polar_drift(block, 0.1, 0.9)
    print(f"(6,5,1) b={b:4.1f}: <|z|/r> at P=0.1 {lo:.3f}, at P=0.9 {hi:.3f}")
