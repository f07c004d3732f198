"""Cartesian sampling of the probability density and its visual products.

A :class:`DensityBlock` holds rho on an N x N x N grid over the cube [-L, L]^3
(array index ``[i, j, k]`` is the point ``(x_i, y_j, z_k)``).  From a block one
gets relative-probability iso levels, marching-cubes meshes (optionally with the
x<0, y<0, z>0 octant removed to show the interior) and the pole-drift statistic.
Contour slices on the yoz plane are evaluated directly from the state rather
than interpolated from a block.

File formats
------------
* block: ``<stem>.f64`` raw little-endian float64, x fastest then y then z, and
  ``<stem>.json`` with n_points, half_extent, state, rho_max, riemann_mass, version.
* mesh: Wavefront OBJ, ``v`` and ``f`` records only, 1-based indices.
* slice: CSV ``y,z,value_normalized`` (y fastest), optional plain PGM (P2, maxval 100).
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.integrate import quad

from . import __version__
from .exceptions import DomainError
from .model import QuantumState, density, radial_u

__all__ = [
    "GridSpec",
    "DensityBlock",
    "IsoLevelSet",
    "TriangleMesh",
    "ContourSlice",
    "sample_block",
    "auto_extent",
    "iso_levels",
    "marching_cubes",
    "contour_slice",
    "polar_drift",
    "superlevel_area",
]

# geometric ladder for auto_extent: L_k = LADDER_BASE * LADDER_RATIO**k
LADDER_BASE = 0.1
LADDER_RATIO = 1.02


def symmetric_axis(n_points: int, half_extent: float) -> np.ndarray:
    """Uniform odd-length axis on [-L, L] that is exactly antisymmetric and contains 0."""
    c = n_points // 2
    return half_extent * (np.arange(-c, c + 1, dtype=float) / c)


@dataclass(frozen=True)
class GridSpec:
    state: QuantumState
    half_extent: float
    n_points: int = 81

    def __post_init__(self):
        if self.n_points < 3 or self.n_points % 2 == 0:
            raise DomainError(f"n_points must be odd and >= 3, got {self.n_points}")
        if not self.half_extent > 0:
            raise DomainError(f"half_extent must be positive, got {self.half_extent}")

    @property
    def axis(self) -> np.ndarray:
        return symmetric_axis(self.n_points, self.half_extent)

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_extent / (self.n_points - 1)


def _state_dict(qs: QuantumState) -> dict:
    return {"n": qs.n, "l": qs.l, "m": qs.m, "b": qs.b, "Z": qs.Z}


@dataclass
class DensityBlock:
    spec: GridSpec
    values: np.ndarray
    rho_max: float = field(init=False)
    riemann_mass: float = field(init=False)

    def __post_init__(self):
        n = self.spec.n_points
        if self.values.shape != (n, n, n):
            raise DomainError(f"values shape {self.values.shape} does not match N={n}")
        self.rho_max = float(self.values.max())
        self.riemann_mass = float(self.values.sum() * self.spec.spacing**3)

    def metadata(self) -> dict:
        return {
            "n_points": self.spec.n_points,
            "half_extent": self.spec.half_extent,
            "state": _state_dict(self.spec.state),
            "rho_max": self.rho_max,
            "riemann_mass": self.riemann_mass,
            "order": "x-fastest",
            "dtype": "<f8",
            "version": __version__,
        }

    def save(self, stem) -> tuple[Path, Path]:
        """Write ``stem.f64`` and ``stem.json``; returns both paths."""
        raw = Path(f"{stem}.f64")
        meta = Path(f"{stem}.json")
        # [i, j, k] = (x, y, z); Fortran order makes x the fastest index
        raw.write_bytes(np.asarray(self.values, dtype="<f8").tobytes(order="F"))
        meta.write_text(json.dumps(self.metadata(), indent=2, sort_keys=True) + "\n")
        return raw, meta

    @classmethod
    def load(cls, stem) -> "DensityBlock":
        meta = json.loads(Path(f"{stem}.json").read_text())
        st = meta["state"]
        spec = GridSpec(QuantumState(st["n"], st["l"], st["m"], st["b"], st["Z"]), meta["half_extent"], meta["n_points"])
        n = spec.n_points
        flat = np.frombuffer(Path(f"{stem}.f64").read_bytes(), dtype="<f8")
        return cls(spec, flat.reshape((n, n, n), order="F").astype(float))


def _partition(n: int, workers: int) -> list[range]:
    workers = max(1, min(workers, n))
    bounds = np.linspace(0, n, workers + 1).round().astype(int)
    return [range(bounds[i], bounds[i + 1]) for i in range(workers)]


def sample_block(spec: GridSpec, workers: int = 1) -> DensityBlock:
    """Evaluate rho at every grid point.

    The z range is split into contiguous slabs, one per worker.  Every z-plane
    is evaluated by the same call on a same-shaped array no matter which slab it
    belongs to, so the result is bitwise independent of ``workers``.
    """
    ax = spec.axis
    n = spec.n_points
    X, Y = np.meshgrid(ax, ax, indexing="ij")
    values = np.empty((n, n, n), dtype=float)

    def fill(ks: range) -> None:
        for k in ks:
            values[:, :, k] = density(spec.state, X, Y, np.full_like(X, ax[k]))

    slabs = _partition(n, workers)
    if len(slabs) == 1:
        fill(slabs[0])
    else:
        with ThreadPoolExecutor(max_workers=len(slabs)) as pool:
            list(pool.map(fill, slabs))
    return DensityBlock(spec, values)


def radial_coverage(qs: QuantumState, L: float) -> float:
    """Probability of finding the particle within r <= L."""
    val, _ = quad(lambda r: radial_u(qs, r) ** 2, 0.0, L, limit=200, epsabs=1e-12, epsrel=1e-12)
    return val


def auto_extent(qs: QuantumState, coverage: float = 0.99) -> float:
    """Smallest ladder value L with int_0^L u^2 dr >= coverage."""
    if not 0.0 < coverage < 1.0:
        raise DomainError(f"coverage must lie in (0, 1), got {coverage}")
    # start near the classical turning scale and walk the ladder both ways
    q = qs.quasi
    guess = max(q.nprime**2 / qs.Z, LADDER_BASE)
    k = int(math.floor(math.log(guess / LADDER_BASE) / math.log(LADDER_RATIO)))
    rung = lambda i: LADDER_BASE * LADDER_RATIO**i  # noqa: E731
    if radial_coverage(qs, rung(k)) >= coverage:
        while k > 0 and radial_coverage(qs, rung(k - 1)) >= coverage:
            k -= 1
    else:
        while radial_coverage(qs, rung(k)) < coverage:
            k += 1
    return rung(k)


@dataclass(frozen=True)
class IsoLevelSet:
    p_values: tuple[float, ...]
    levels: tuple[float, ...]


def iso_levels(block: DensityBlock, p_values: Sequence[float]) -> IsoLevelSet:
    """Absolute iso levels ``p * rho_max`` for relative probability values p in (0, 1]."""
    p = [float(v) for v in p_values]
    if not p:
        raise DomainError("p_values must not be empty")
    if any(not 0.0 < v <= 1.0 for v in p):
        raise DomainError(f"relative probability values must lie in (0, 1], got {p}")
    p = sorted(p)
    return IsoLevelSet(tuple(p), tuple(v * block.rho_max for v in p))


@dataclass
class TriangleMesh:
    vertices: np.ndarray  # (V, 3) positions in a0
    triangles: np.ndarray  # (F, 3) 0-based vertex indices

    def edge_counts(self) -> dict[tuple[int, int], int]:
        edges = np.concatenate([self.triangles[:, [0, 1]], self.triangles[:, [1, 2]], self.triangles[:, [2, 0]]])
        edges = np.sort(edges, axis=1)
        uniq, counts = np.unique(edges, axis=0, return_counts=True)
        return {(int(a), int(b)): int(c) for (a, b), c in zip(uniq, counts)}

    def open_edges(self, box_half_extent: float | None = None, tol: float = 1e-9) -> list[tuple[int, int]]:
        """Edges not shared by exactly two triangles.

        With ``box_half_extent`` given, edges whose endpoints both lie on the
        bounding-box surface are exempt (the surface was clipped by the box).
        """
        bad = []
        for (a, b), c in self.edge_counts().items():
            if c == 2:
                continue
            if box_half_extent is not None:
                pa, pb = self.vertices[a], self.vertices[b]
                on_box = lambda p: np.any(np.abs(np.abs(p) - box_half_extent) <= tol * box_half_extent)  # noqa: E731
                if on_box(pa) and on_box(pb):
                    continue
            bad.append((a, b))
        return bad

    def to_obj(self, path) -> Path:
        path = Path(path)
        lines = [f"v {x:.9g} {y:.9g} {z:.9g}" for x, y, z in self.vertices]
        lines += [f"f {a + 1} {b + 1} {c + 1}" for a, b, c in self.triangles]
        path.write_text("\n".join(lines) + "\n")
        return path

    @classmethod
    def from_obj(cls, path) -> "TriangleMesh":
        verts, faces = [], []
        for line in Path(path).read_text().splitlines():
            parts = line.split()
            if not parts:
                continue
            if parts[0] == "v":
                verts.append([float(v) for v in parts[1:4]])
            elif parts[0] == "f":
                faces.append([int(v.split("/")[0]) - 1 for v in parts[1:4]])
        return cls(np.array(verts, dtype=float).reshape(-1, 3), np.array(faces, dtype=int).reshape(-1, 3))


def _triangle_areas(verts: np.ndarray, tris: np.ndarray) -> np.ndarray:
    a, b, c = verts[tris[:, 0]], verts[tris[:, 1]], verts[tris[:, 2]]
    return 0.5 * np.linalg.norm(np.cross(b - a, c - a), axis=1)


def marching_cubes(block: DensityBlock, level: float, cut: bool = False) -> TriangleMesh:
    """Isosurface rho = level by marching cubes with linear edge interpolation.

    With ``cut=True`` the triangles produced by cells whose centres lie in the
    open octant {x < 0, y < 0, z > 0} are dropped and the hole is left uncapped.
    Zero-area triangles are removed and unused vertices compacted.
    """
    from skimage.measure import marching_cubes as _skimage_mc

    if not 0.0 < level < block.rho_max:
        raise DomainError(f"level {level} outside (0, rho_max={block.rho_max})")
    spec = block.spec
    h = spec.spacing
    try:
        verts_idx, tris, _, _ = _skimage_mc(block.values, level=level, method="lewiner", allow_degenerate=False)
    except RuntimeError:
        # level within float32 rounding of the maximum: nothing to triangulate
        return TriangleMesh(np.empty((0, 3)), np.empty((0, 3), dtype=np.int64))
    verts_idx = np.asarray(verts_idx, dtype=float)
    tris = np.asarray(tris, dtype=np.int64)
    if cut:
        # a triangle lies inside the cell that contains its centroid
        cell = np.floor(verts_idx[tris].mean(axis=1)).astype(int)
        c = spec.n_points // 2
        # cell lower corner index i has centre x = (i - c + 1/2) h
        in_octant = (cell[:, 0] < c) & (cell[:, 1] < c) & (cell[:, 2] >= c)
        tris = tris[~in_octant]
    verts = (verts_idx - spec.n_points // 2) * h
    tris = tris[_triangle_areas(verts, tris) > 1e-12]
    used, inverse = np.unique(tris, return_inverse=True)
    return TriangleMesh(verts[used], inverse.reshape(-1, 3))


@dataclass
class ContourSlice:
    """rho on the x = 0 (yoz) plane rescaled so its maximum is exactly 100.

    ``values_normalized[j, k]`` belongs to the point ``(y_j, z_k)``.
    """

    axis: np.ndarray
    values_normalized: np.ndarray
    rho_max: float
    levels: tuple[float, ...] = tuple(float(v) for v in range(10, 101, 10))

    def quadrant1(self) -> "ContourSlice":
        c = len(self.axis) // 2
        return ContourSlice(self.axis[c:], self.values_normalized[c:, c:], self.rho_max, self.levels)

    def to_csv(self, path) -> Path:
        path = Path(path)
        ny, nz = self.values_normalized.shape
        lines = ["y,z,value_normalized"]
        for k in range(nz):
            for j in range(ny):
                lines.append(f"{self.axis[j]:.9g},{self.axis[k]:.9g},{self.values_normalized[j, k]:.12g}")
        path.write_text("\n".join(lines) + "\n")
        return path

    def to_pgm(self, path) -> Path:
        """Plain PGM (P2, maxval 100); image rows run from +z (top) to -z."""
        path = Path(path)
        img = np.rint(self.values_normalized.T[::-1, :]).astype(int)
        rows = [" ".join(str(v) for v in row) for row in img]
        path.write_text(f"P2\n{img.shape[1]} {img.shape[0]}\n100\n" + "\n".join(rows) + "\n")
        return path


def contour_slice(source, n_points: int = 81, half_extent: float | None = None) -> ContourSlice:
    """Normalised yoz-plane slice for a :class:`QuantumState` or a :class:`DensityBlock`.

    A block only contributes its state and extent; values are recomputed on the
    plane.  For a bare state the extent defaults to :func:`auto_extent`.
    """
    if isinstance(source, DensityBlock):
        qs = source.spec.state
        L = half_extent if half_extent is not None else source.spec.half_extent
    else:
        qs = source
        L = half_extent if half_extent is not None else auto_extent(qs)
    if n_points < 2:
        raise DomainError(f"n_points must be >= 2, got {n_points}")
    if n_points % 2 == 0:
        n_points += 1
    ax = symmetric_axis(n_points, L)
    Y, Zc = np.meshgrid(ax, ax, indexing="ij")
    rho = density(qs, np.zeros_like(Y), Y, Zc)
    peak = float(rho.max())
    norm = rho * (100.0 / peak)
    norm[rho == peak] = 100.0
    return ContourSlice(ax, norm, peak)


def superlevel_area(sl: ContourSlice, threshold: float = 50.0) -> float:
    """Area (a0^2) of the slice region with normalised value >= threshold."""
    h = sl.axis[1] - sl.axis[0]
    return float(np.count_nonzero(sl.values_normalized >= threshold) * h * h)


def polar_drift(block: DensityBlock, p_low: float, p_high: float) -> tuple[float, float]:
    """Mean |z|/r over grid points with rho >= p * rho_max, for p_low and p_high.

    Values near 1 mean the superlevel set hugs the z axis.
    """
    if not 0.0 < p_low < p_high < 1.0:
        raise DomainError(f"need 0 < p_low < p_high < 1, got {p_low}, {p_high}")
    ax = block.spec.axis
    X, Y, Zc = np.meshgrid(ax, ax, ax, indexing="ij")
    r = np.sqrt(X * X + Y * Y + Zc * Zc)
    off_origin = r > 0
    out = []
    for p in (p_low, p_high):
        sel = (block.values >= p * block.rho_max) & off_origin
        if not sel.any():
            raise DomainError(f"empty superlevel set at p={p}")
        out.append(float(np.mean(np.abs(Zc[sel]) / r[sel])))
    return out[0], out[1]
