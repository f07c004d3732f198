"""Expansion of deformed spherical harmonics over ordinary ones.

    Y_{l'm'}(theta, phi) = sum_l a_lm Y_lm(theta, phi)

    a_lm = sqrt((2l'+1)(2l+1)(l-m)! Gamma(l'-m'+1) / (4 (l+m)! Gamma(l'+m'+1)))
           * int_{-1}^{1} P_l^m(x) P_{l'}^{m'}(x) dx

Only m equal to the state's own magnetic number survives the azimuthal
integral, and P_{l'}^{m'} has parity (-1)^{n_theta}, so only l with
l - |m| = n_theta (mod 2) contribute.  Those zeros are pinned exactly.

The overlap integrand is (1-x^2)^{(|m|+m')/2} times a polynomial of degree
(l-|m|) + n_theta.  Plain Gauss-Legendre stalls on that endpoint factor when m'
is small and non-integer, so the factor is taken into the weight of a
Gauss-Jacobi rule, which is then exact.  Node doubling is kept as a check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np
from scipy.special import roots_jacobi

from .exceptions import ConvergenceError, DomainError
from .model import QuantumState, QuasiNumbers, derive_quasi, standard_Ylm
from .specfun import factorial, gamma, legendre_int, legendre_real_order

__all__ = [
    "QUAD_START",
    "QUAD_CAP",
    "QUAD_TOL",
    "gauss_jacobi",
    "ExpansionTable",
    "coefficient",
    "coefficient_detail",
    "overlap_integral",
    "quasi_for",
    "table",
    "reconstruct",
    "default_l_max",
]

QUAD_START = 64
QUAD_CAP = 4096
QUAD_TOL = 1e-10


@lru_cache(maxsize=None)
def gauss_jacobi(n: int, alpha: float) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for int_{-1}^{1} (1-x^2)^alpha f(x) dx."""
    x, w = roots_jacobi(n, alpha, alpha)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def quasi_for(m: int, ntheta: int, b: float) -> QuasiNumbers:
    """Quasi numbers of the family (m, n_theta, b); n and Z do not enter the angular part."""
    l = abs(m) + ntheta
    return derive_quasi(QuantumState(l + 1, l, m, b))


def _prefactor(l: int, m: int, q: QuasiNumbers) -> float:
    ma = abs(m)
    return math.sqrt(
        (2.0 * q.lprime + 1.0)
        * (2.0 * l + 1.0)
        * factorial(l - ma)
        * factorial(q.ntheta)
        / (4.0 * factorial(l + ma) * gamma(q.lprime + q.mprime + 1.0))
    )


def overlap_integral(l: int, m: int, q: QuasiNumbers, nodes: int) -> float:
    """int_{-1}^{1} P_l^{|m|}(x) P_{l'}^{m'}(x) dx with an ``nodes``-point Gauss-Jacobi rule."""
    alpha = 0.5 * (abs(m) + q.mprime)
    x, w = gauss_jacobi(nodes, alpha)
    # strip the weight; what is left is a polynomial
    f = legendre_int(l, abs(m), x) * legendre_real_order(q.legendre, x) / (1.0 - x * x) ** alpha
    return float(np.dot(w, f))


def coefficient_detail(l: int, m: int, q: QuasiNumbers) -> tuple[float, int]:
    """Coefficient a_lm and the node count at which quadrature converged."""
    if l < abs(m):
        raise DomainError(f"need l >= |m|, got l={l}, m={m}")
    if m != q.m:
        return 0.0, 0
    pref = _prefactor(l, m, q)
    nodes = QUAD_START
    prev = pref * overlap_integral(l, m, q, nodes)
    while nodes < QUAD_CAP:
        nodes *= 2
        cur = pref * overlap_integral(l, m, q, nodes)
        if abs(cur - prev) <= QUAD_TOL:
            return cur, nodes
        prev = cur
    raise ConvergenceError(
        f"a_lm for l={l}, m={m}, m'={q.mprime:.6g} not converged to {QUAD_TOL} at {QUAD_CAP} nodes "
        f"(last change {abs(cur - prev):.3g})"
    )


def coefficient(l: int, m: int, q: QuasiNumbers) -> float:
    """Expansion coefficient a_lm of the deformed harmonic described by ``q``.

    Zero when ``m`` differs from the state's magnetic number.  Parity-forbidden
    l are still integrated here; :func:`table` pins them instead.
    """
    return coefficient_detail(l, m, q)[0]


def default_l_max(m: int, ntheta: int) -> int:
    return abs(m) + ntheta + 12


def parity_allowed(l: int, m: int, ntheta: int) -> bool:
    return l >= abs(m) and (l - abs(m)) % 2 == ntheta % 2


@dataclass
class ExpansionTable:
    m: int
    ntheta: int
    b: float
    l_max: int
    entries: list[tuple[int, float]]  # parity-allowed l only
    quad_nodes: int
    converged: bool = True
    quasi: QuasiNumbers | None = field(default=None, repr=False)

    def a(self, l: int) -> float:
        for ll, val in self.entries:
            if ll == l:
                return val
        return 0.0

    def dense(self) -> np.ndarray:
        """Coefficients for l = 0..l_max with pinned zeros filled in."""
        out = np.zeros(self.l_max + 1)
        for l, val in self.entries:
            out[l] = val
        return out

    @property
    def completeness_defect(self) -> float:
        return 1.0 - math.fsum(v * v for _, v in self.entries)

    @property
    def principal(self) -> tuple[int, float]:
        return max(self.entries, key=lambda e: abs(e[1]))

    def to_csv(self, path) -> Path:
        """CSV with header ``l,m,a_lm,a_lm_squared``, one row per retained l.

        Extra columns ``ntheta_offset`` (l - |m|) and ``b`` follow, plus a footer
        comment carrying the completeness defect and node count.
        """
        path = Path(path)
        lines = ["l,m,a_lm,a_lm_squared,ntheta_offset,b"]
        for l, val in self.entries:
            lines.append(f"{l},{self.m},{val:.15g},{val * val:.15g},{l - abs(self.m)},{self.b:.15g}")
        lines.append(f"# completeness_defect={self.completeness_defect:.6e} quad_nodes={self.quad_nodes}")
        path.write_text("\n".join(lines) + "\n")
        return path


def table(m: int, ntheta: int, b: float, l_max: int | None = None) -> ExpansionTable:
    """All a_lm for l <= l_max of the deformed harmonic (m, n_theta, b)."""
    if l_max is None:
        l_max = default_l_max(m, ntheta)
    if l_max < abs(m) + ntheta:
        raise DomainError(f"l_max={l_max} is below the state's own l={abs(m) + ntheta}")
    q = quasi_for(m, ntheta, b)
    entries = []
    max_nodes = 0
    for l in range(abs(m), l_max + 1):
        if not parity_allowed(l, m, ntheta):
            continue
        val, nodes = coefficient_detail(l, m, q)
        entries.append((l, val))
        max_nodes = max(max_nodes, nodes)
    return ExpansionTable(m, ntheta, float(b), l_max, entries, max_nodes, True, q)


def reconstruct(tab: ExpansionTable, theta, phi):
    """Truncated series sum_l a_lm Y_lm(theta, phi)."""
    theta = np.asarray(theta, dtype=float)
    out = np.zeros(np.broadcast(theta, np.asarray(phi)).shape, dtype=complex)
    for l, val in tab.entries:
        out = out + val * standard_Ylm(l, tab.m, theta, phi)
    return out
