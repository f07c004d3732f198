"""Bound states of the single ring-shaped Coulomb potential.

    V(r, theta) = -Z/r + b / (2 r^2 sin^2 theta)        (atomic units, a0 = 1)

The ring term only shifts the polar equation, so the states keep the hydrogen
structure with real-valued "quasi" quantum numbers

    m' = sqrt(m^2 + b),  l' = n_theta + m',  n' = n_r + l' + 1,  lambda = l'(l'+1)

where n_theta = l - |m| and n_r = n - l - 1 are the integer node counts carried
over from the physical labels (n, l, m).  Everything here is vectorised over the
coordinate arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError
from .specfun import (
    RealOrderLegendreParams,
    factorial,
    gamma,
    hyp1f1_terminating,
    legendre_int,
    legendre_negative_order,
    legendre_real_order,
    lgamma,
)

__all__ = [
    "QuantumState",
    "QuasiNumbers",
    "derive_quasi",
    "angular_H",
    "deformed_Ylm",
    "standard_Ylm",
    "conjugation_pair",
    "radial_u",
    "radial_R",
    "energy",
    "density",
    "density_spherical",
    "mean_radius",
]


@dataclass(frozen=True)
class QuantumState:
    """Physical labels (n, l, m) plus the potential parameters b and Z."""

    n: int
    l: int
    m: int
    b: float = 0.0
    Z: float = 1.0

    def __post_init__(self):
        for name in ("n", "l", "m"):
            value = getattr(self, name)
            if int(value) != value:
                raise DomainError(f"{name} must be an integer, got {value!r}")
            object.__setattr__(self, name, int(value))
        object.__setattr__(self, "b", float(self.b))
        object.__setattr__(self, "Z", float(self.Z))
        if self.n < 1:
            raise DomainError(f"n >= 1 violated (n={self.n})")
        if self.l < 0:
            raise DomainError(f"l >= 0 violated (l={self.l})")
        if self.l > self.n - 1:
            raise DomainError(f"l ≤ n−1 violated (n={self.n}, l={self.l})")
        if abs(self.m) > self.l:
            raise DomainError(f"|m| ≤ l violated (l={self.l}, m={self.m})")
        if not math.isfinite(self.b):
            raise DomainError(f"b must be finite, got {self.b}")
        if self.m == 0 and self.b < 0:
            raise DomainError(f"b must exceed −m² (b ≥ 0 when m = 0), got b={self.b}")
        if self.m != 0 and self.b <= -self.m * self.m:
            raise DomainError(f"b must exceed −m² (−m² = {-self.m * self.m}), got b={self.b}")
        if not self.Z > 0:
            raise DomainError(f"Z > 0 violated (Z={self.Z})")

    def with_b(self, b: float) -> "QuantumState":
        return QuantumState(self.n, self.l, self.m, b, self.Z)

    @property
    def quasi(self) -> "QuasiNumbers":
        return derive_quasi(self)


@dataclass(frozen=True)
class QuasiNumbers:
    """Real-valued labels derived from a :class:`QuantumState`.

    ``m`` (integer magnetic number) and ``b`` are carried along because the
    azimuthal factor, the (-1)^m phase and the expansion selection rule need them.
    """

    mprime: float
    lprime: float
    ntheta: int
    nr: int
    nprime: float
    lam: float
    m: int
    b: float

    @property
    def legendre(self) -> RealOrderLegendreParams:
        return RealOrderLegendreParams(self.lprime, self.mprime, self.ntheta)


def derive_quasi(qs: QuantumState) -> QuasiNumbers:
    m2b = qs.m * qs.m + qs.b
    if m2b < 0 or (m2b == 0 and qs.m != 0):
        raise DomainError(f"b must exceed −m²: m'² = m² + b = {m2b}")
    mprime = math.sqrt(m2b)
    ntheta = qs.l - abs(qs.m)
    nr = qs.n - qs.l - 1
    lprime = ntheta + mprime
    nprime = nr + lprime + 1
    return QuasiNumbers(
        mprime=mprime,
        lprime=lprime,
        ntheta=ntheta,
        nr=nr,
        nprime=nprime,
        lam=lprime * (lprime + 1.0),
        m=qs.m,
        b=qs.b,
    )


def _quasi(q) -> QuasiNumbers:
    return q.quasi if isinstance(q, QuantumState) else q


def angular_norm(q: QuasiNumbers) -> float:
    """N_{l'm'} = sqrt((2l'+1) n_theta! / (2 Gamma(l'+m'+1)))."""
    return math.sqrt((2.0 * q.lprime + 1.0) * factorial(q.ntheta) / (2.0 * gamma(q.lprime + q.mprime + 1.0)))


def angular_H(q, costheta):
    """Normalised polar function H(x) = N_{l'm'} P_{l'}^{m'}(x), with int_{-1}^{1} H^2 dx = 1.

    Depends on m only through |m| (and b), so +m and -m share it.
    """
    q = _quasi(q)
    out = angular_norm(q) * np.asarray(legendre_real_order(q.legendre, costheta))
    return float(out) if out.ndim == 0 else out


def _ylm_norm(q: QuasiNumbers) -> float:
    # sqrt((2l'+1)/(4 pi) * Gamma(l'-m'+1)/Gamma(l'+m'+1))
    return math.sqrt((2.0 * q.lprime + 1.0) / (4.0 * math.pi) * factorial(q.ntheta) / gamma(q.lprime + q.mprime + 1.0))


def deformed_Ylm(qs: QuantumState, theta, phi):
    """Deformed spherical harmonic Y_{l'm'}(theta, phi), unit-normalised on the sphere.

    For m >= 0 this is (-1)^m sqrt((2l'+1)/(4 pi) Gamma(l'-m'+1)/Gamma(l'+m'+1))
    P_{l'}^{m'}(cos theta) e^{i m phi}.  For m < 0 the same expression is used with
    -m' in place of m', the negative-order function coming from
    :func:`~ringcoulomb.specfun.legendre_negative_order`.  At b = 0 this is the
    ordinary Condon-Shortley Y_lm.
    """
    q = qs.quasi
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    x = np.cos(theta)
    sign = -1.0 if q.m % 2 else 1.0
    if q.m >= 0:
        polar = _ylm_norm(q) * np.asarray(legendre_real_order(q.legendre, x))
    else:
        # norm with -m': sqrt((2l'+1)/(4 pi) Gamma(l'+m'+1)/Gamma(l'-m'+1))
        norm = math.sqrt(
            (2.0 * q.lprime + 1.0) / (4.0 * math.pi) * gamma(q.lprime + q.mprime + 1.0) / factorial(q.ntheta)
        )
        polar = norm * np.asarray(legendre_negative_order(q.legendre, q.m, x))
    return sign * polar * np.exp(1j * q.m * phi)


def standard_Ylm(l: int, m: int, theta, phi):
    """Ordinary spherical harmonic (-1)^m sqrt((2l+1)/(4 pi) (l-m)!/(l+m)!) P_l^m(cos theta) e^{i m phi}.

    Integer-order recurrence throughout, so it stays accurate for large l.
    """
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    norm = math.sqrt((2.0 * l + 1.0) / (4.0 * math.pi) * factorial(l - m) / factorial(l + m))
    sign = -1.0 if m % 2 else 1.0
    return sign * norm * np.asarray(legendre_int(l, m, np.cos(theta))) * np.exp(1j * m * phi)


def conjugation_pair(qs: QuantumState, theta, phi):
    """Return (Y for +|m|, Y for -|m|) of the same (n, l, b) family."""
    up = QuantumState(qs.n, qs.l, abs(qs.m), qs.b, qs.Z)
    down = QuantumState(qs.n, qs.l, -abs(qs.m), qs.b, qs.Z)
    return deformed_Ylm(up, theta, phi), deformed_Ylm(down, theta, phi)


def _radial_prefactor(qs: QuantumState, q: QuasiNumbers) -> float:
    # [1/Gamma(2l'+2)] sqrt(Z Gamma(n'+l'+1) / (n_r! n'^2)), via logs once Gamma overflows
    if q.nprime + q.lprime + 1.0 < 170.0:
        return math.sqrt(qs.Z * gamma(q.nprime + q.lprime + 1.0) / factorial(q.nr)) / (
            gamma(2.0 * q.lprime + 2.0) * q.nprime
        )
    log_pref = (
        -lgamma(2.0 * q.lprime + 2.0)
        + 0.5 * (math.log(qs.Z) + lgamma(q.nprime + q.lprime + 1.0) - math.log(factorial(q.nr)))
        - math.log(q.nprime)
    )
    return math.exp(log_pref)


def _check_r(r) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise DomainError("radial coordinate must be >= 0")
    return r


def radial_u(qs: QuantumState, r):
    """Reduced radial function u_{n'l'}(r), normalised so that int_0^inf u^2 dr = 1.

    u = [1/Gamma(2l'+2)] sqrt(Z Gamma(n'+l'+1)/(n_r! n'^2)) rho^{l'+1} e^{-rho/2}
        1F1(-n_r; 2l'+2; rho),   rho = 2 Z r / n'
    """
    r = _check_r(r)
    q = qs.quasi
    rho = 2.0 * qs.Z * r / q.nprime
    poly = np.asarray(hyp1f1_terminating(-q.nr, 2.0 * q.lprime + 2.0, rho))
    out = _radial_prefactor(qs, q) * rho ** (q.lprime + 1.0) * np.exp(-0.5 * rho) * poly
    return float(out) if out.ndim == 0 else out


def radial_R(qs: QuantumState, r):
    """u(r)/r with the removable singularity at r = 0 filled in.

    u/r = (2Z/n') * prefactor * rho^{l'} e^{-rho/2} 1F1(...), which is finite at
    the origin: 0 when l' > 0 and (2Z/n') * prefactor when l' = 0.
    """
    r = _check_r(r)
    q = qs.quasi
    rho = 2.0 * qs.Z * r / q.nprime
    poly = np.asarray(hyp1f1_terminating(-q.nr, 2.0 * q.lprime + 2.0, rho))
    # numpy gives 0.0**0.0 == 1.0, which is exactly the l' = 0 limit
    out = (2.0 * qs.Z / q.nprime) * _radial_prefactor(qs, q) * rho**q.lprime * np.exp(-0.5 * rho) * poly
    return float(out) if out.ndim == 0 else out


def energy(qs: QuantumState) -> float:
    """Bound-state energy -Z^2 / (2 n'^2) in hartree."""
    q = qs.quasi
    return -qs.Z * qs.Z / (2.0 * q.nprime * q.nprime)


def density_spherical(qs: QuantumState, r, costheta):
    """|Psi|^2 = (1/2pi) (u/r)^2 H(cos theta)^2 in spherical coordinates."""
    R = np.asarray(radial_R(qs, r))
    H = np.asarray(angular_H(qs.quasi, costheta))
    out = R * R * H * H / (2.0 * math.pi)
    return float(out) if out.ndim == 0 else out


def density(qs: QuantumState, x, y, z):
    """Probability density at Cartesian points (units of a0^-3).

    Independent of the azimuth.  At the origin cos(theta) is undefined; the
    radial factor already vanishes there unless l' = 0, and then H is constant,
    so any cos(theta) gives the right value.
    """
    x, y, z = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (x, y, z)))
    r = np.sqrt(x * x + y * y + z * z)
    with np.errstate(invalid="ignore", divide="ignore"):
        c = np.where(r > 0, z / np.where(r > 0, r, 1.0), 1.0)
    c = np.clip(c, -1.0, 1.0)
    return density_spherical(qs, r, c)


def mean_radius(qs: QuantumState) -> float:
    """<r> = (3 n'^2 - l'(l'+1)) / (2Z), the closed form for Coulomb radial functions."""
    q = qs.quasi
    return (3.0 * q.nprime**2 - q.lam) / (2.0 * qs.Z)
