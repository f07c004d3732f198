"""Sample the density on an 81^3 grid and extract isosurfaces.

Writes a raw block with its JSON sidecar and a few OBJ meshes into
``demo_out/``, including one with the x<0, y<0, z>0 octant removed.
"""

from pathlib import Path

import numpy as np

from ringcoulomb import QuantumState
from ringcoulomb.grid import GridSpec, auto_extent, iso_levels, marching_cubes, sample_block

out = Path("demo_out")
out.mkdir(exist_ok=True)

qs = QuantumState(3, 2, 1, 0.5)
L = auto_extent(qs)  # 99 % of the radial probability inside [-L, L]^3
block = sample_block(GridSpec(qs, L, 81), workers=4)
print(f"L = {L:.3f} a0, rho_max = {block.rho_max:.4e}, Riemann mass = {block.riemann_mass:.4f}")
block.save(out / "rho_n3_l2_m1_b0.5")

iso = iso_levels(block, [0.1, 0.5, 0.9])
for p, level in zip(iso.p_values, iso.levels):
    mesh = marching_cubes(block, level)
    d_axis = np.hypot(mesh.vertices[:, 0], mesh.vertices[:, 1])
    mesh.to_obj(out / f"n3_l2_m1_P{p:g}.obj")
    print(f"P={p:.1f}: {len(mesh.triangles):6d} triangles, closest approach to z axis {d_axis.min():.3f} a0")

cut = marching_cubes(block, iso.levels[0], cut=True)
cut.to_obj(out / "n3_l2_m1_P0.1_cut.obj")
print(f"octant cut leaves {len(cut.triangles)} triangles and {len(cut.open_edges())} open rim edges")
