"""Real-argument special functions for the ring-shaped Coulomb problem.

Everything here works on real arguments only:

* ``gamma`` / ``lgamma``: Lanczos approximation (g=7, 9 terms) with reflection.
* ``hyp2f1_terminating`` / ``hyp1f1_terminating``: finite hypergeometric sums
  whose first parameter is a non-positive integer.
* ``legendre_real_order``: P_{l'}^{m'}(x) for real l', m' with l' - m' a
  non-negative integer.
* ``legendre_int``: integer-order P_l^m(x) by upward recurrence.
* ``legendre_negative_order``: the negative-order relation
  P_{l'}^{-m'} = (-1)^m Gamma(l'-m'+1)/Gamma(l'+m'+1) P_{l'}^{m'}.

Sign convention
---------------
Neither Legendre routine includes the Condon-Shortley phase.  With this
convention, for integer arguments

    P_l^m(x) = (1 - x^2)^{m/2} d^m/dx^m P_l(x)

so P_1^1(x) = +sqrt(1 - x^2).  The (-1)^m phase is applied exactly once, by the
spherical-harmonic constructors in :mod:`ringcoulomb.model`.

The real-order function is normalised so that it reduces to the integer one
when l', m' are integers:

    P_{l'}^{m'}(x) = (1-x^2)^{m'/2} Gamma(l'+m'+1) / (2^{m'} Gamma(m'+1) Gamma(l'-m'+1))
                     * 2F1(-(l'-m'), l'+m'+1; m'+1; (1-x)/2)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError

__all__ = [
    "RealOrderLegendreParams",
    "gamma",
    "lgamma",
    "factorial",
    "kahan_sum",
    "hyp2f1_terminating",
    "hyp1f1_terminating",
    "legendre_real_order",
    "legendre_int",
    "legendre_negative_order",
]

_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_SQRT_2PI = math.sqrt(2.0 * math.pi)
_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


def _check_pole(x: float) -> None:
    if x <= 0 and x == math.floor(x):
        raise DomainError(f"gamma has a pole at non-positive integer {x}")


def _lanczos_series(x: float) -> float:
    # x already shifted by -1
    acc = _LANCZOS_COEF[0]
    for i in range(1, len(_LANCZOS_COEF)):
        acc += _LANCZOS_COEF[i] / (x + i)
    return acc


def gamma(x: float) -> float:
    """Gamma function of a real argument.

    Raises :class:`DomainError` at the poles 0, -1, -2, ...
    """
    x = float(x)
    _check_pole(x)
    if x < 0.5:
        # reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
        return math.pi / (math.sin(math.pi * x) * gamma(1.0 - x))
    x -= 1.0
    t = x + _LANCZOS_G + 0.5
    series = _lanczos_series(x)
    if x > 140.0:
        return math.exp(lgamma(x + 1.0))
    # split the power so t**(x+0.5) does not overflow before e^-t is applied
    half = t ** (0.5 * (x + 0.5))
    return _SQRT_2PI * half * math.exp(-t) * half * series


def lgamma(x: float) -> float:
    """log|Gamma(x)| for real x (same Lanczos series as :func:`gamma`)."""
    x = float(x)
    _check_pole(x)
    if x < 0.5:
        return math.log(math.pi / abs(math.sin(math.pi * x))) - lgamma(1.0 - x)
    x -= 1.0
    t = x + _LANCZOS_G + 0.5
    return _LOG_SQRT_2PI + (x + 0.5) * math.log(t) - t + math.log(_lanczos_series(x))


def factorial(n: int) -> float:
    """n! as a float; exact integer arithmetic up to 20!, gamma beyond."""
    if n < 0:
        raise DomainError(f"factorial of negative integer {n}")
    if n <= 20:
        return float(math.factorial(n))
    return gamma(n + 1.0)


def kahan_sum(terms, reverse: bool = False):
    """Compensated sum over the first axis of ``terms``.

    Works elementwise for stacked numpy arrays, so a series evaluated on a
    grid of points is summed in one pass.
    """
    seq = list(terms)
    if reverse:
        seq = seq[::-1]
    total = np.zeros_like(np.asarray(seq[0], dtype=float))
    comp = np.zeros_like(total)
    for term in seq:
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total


def _terminating_degree(a_neg) -> int:
    if a_neg != math.floor(a_neg) or a_neg > 0:
        raise DomainError(f"series parameter must be a non-positive integer, got {a_neg}")
    return int(-a_neg)


def _hyp2f1_terms(a_neg: int, bpar: float, cpar: float, x):
    n = _terminating_degree(a_neg)
    if cpar <= 0 and cpar == math.floor(cpar) and -cpar < n:
        raise DomainError(f"c = {cpar} is a non-positive integer inside the series")
    x = np.asarray(x, dtype=float)
    term = np.ones_like(x)
    terms = [term]
    for k in range(n):
        term = term * ((a_neg + k) * (bpar + k) / ((cpar + k) * (k + 1.0))) * x
        terms.append(term)
    return terms


def hyp2f1_terminating(a_neg: int, bpar: float, cpar: float, x, *, reverse: bool = False):
    """2F1(a, b; c; x) for a = 0, -1, -2, ... as an exact finite sum."""
    terms = _hyp2f1_terms(a_neg, bpar, cpar, x)
    out = kahan_sum(terms, reverse=reverse)
    return float(out) if out.ndim == 0 else out


def hyp1f1_terminating(a_neg: int, bpar: float, z, *, reverse: bool = False):
    """Confluent 1F1(a; b; z) for a = 0, -1, -2, ... (a Laguerre polynomial up to scale)."""
    n = _terminating_degree(a_neg)
    if bpar <= 0:
        raise DomainError(f"1F1 needs b > 0 here, got {bpar}")
    z = np.asarray(z, dtype=float)
    term = np.ones_like(z)
    terms = [term]
    for k in range(n):
        term = term * ((a_neg + k) / ((bpar + k) * (k + 1.0))) * z
        terms.append(term)
    out = kahan_sum(terms, reverse=reverse)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class RealOrderLegendreParams:
    """Degree l' and order m' of a real-order Legendre function.

    ``ntheta = lprime - mprime`` must be a non-negative integer; it is stored
    explicitly so that the degree of the terminating series is exact even when
    l' carries rounding error.
    """

    lprime: float
    mprime: float
    ntheta: int

    def __post_init__(self):
        if self.mprime < 0:
            raise DomainError(f"mprime must be >= 0, got {self.mprime}")
        if self.ntheta < 0 or int(self.ntheta) != self.ntheta:
            raise DomainError(f"ntheta must be a non-negative integer, got {self.ntheta}")
        if abs(self.lprime - self.mprime - self.ntheta) > 1e-9 * max(1.0, self.lprime):
            raise DomainError(
                f"lprime - mprime = {self.lprime - self.mprime} is not the integer {self.ntheta}"
            )

    @classmethod
    def from_orders(cls, mprime: float, ntheta: int) -> "RealOrderLegendreParams":
        return cls(lprime=ntheta + mprime, mprime=mprime, ntheta=ntheta)


def _sin_power(x, power: float):
    """(1 - x^2)^(power/2), exactly 0 at |x| = 1 when power > 0 and 1 when power == 0."""
    s2 = np.clip(1.0 - x * x, 0.0, None)
    if power == 0:
        return np.ones_like(s2)
    return s2 ** (0.5 * power)


def _check_unit_interval(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0):
        raise DomainError("Legendre functions are only defined here for |x| <= 1")
    return x


def legendre_prefactor(p: RealOrderLegendreParams) -> float:
    """Gamma(l'+m'+1) / (2^m' Gamma(m'+1) Gamma(l'-m'+1)), the value of P_{l'}^{m'}(1)/(1-x^2)^{m'/2}."""
    lp, mp = p.lprime, p.mprime
    if lp + mp + 1.0 < 170.0:
        return gamma(lp + mp + 1.0) / (2.0**mp * gamma(mp + 1.0) * factorial(p.ntheta))
    return math.exp(lgamma(lp + mp + 1.0) - mp * math.log(2.0) - lgamma(mp + 1.0) - lgamma(p.ntheta + 1.0))


def legendre_real_order(p: RealOrderLegendreParams, x):
    """Associated Legendre function P_{l'}^{m'}(x), real order, no Condon-Shortley phase.

    The series is always summed at (1 - |x|)/2 <= 1/2 and the parity
    P(-x) = (-1)^{n_theta} P(x) restores the sign; summing at arguments near 1
    cancels badly once n_theta grows.
    """
    x = _check_unit_interval(x)
    ax = np.abs(x)
    series = np.asarray(hyp2f1_terminating(-p.ntheta, p.lprime + p.mprime + 1.0, p.mprime + 1.0, (1.0 - ax) / 2.0))
    if p.ntheta % 2:
        # odd functions vanish exactly at 0; the series would leave a rounding residue
        series = np.where(x < 0, -series, np.where(x == 0, 0.0, series))
    out = _sin_power(x, p.mprime) * legendre_prefactor(p) * series
    return float(out) if np.ndim(out) == 0 else out


def legendre_int(l: int, m: int, x):
    """Integer-order P_l^m(x) without the Condon-Shortley phase.

    Upward recurrence in l starting from the diagonal P_m^m = (2m-1)!! (1-x^2)^{m/2}.
    Negative m goes through the same relation as :func:`legendre_negative_order`.
    """
    if l < 0 or abs(m) > l:
        raise DomainError(f"legendre_int needs |m| <= l, got l={l}, m={m}")
    x = _check_unit_interval(x)
    ma = abs(m)
    pmm = np.full_like(x, float(np.prod(np.arange(1, 2 * ma, 2)))) * _sin_power(x, ma)
    if l == ma:
        out = pmm
    else:
        prev, cur = pmm, x * (2 * ma + 1) * pmm
        for ll in range(ma + 1, l):
            prev, cur = cur, ((2 * ll + 1) * x * cur - (ll + ma) * prev) / (ll - ma + 1)
        out = cur
    if m < 0:
        out = (-1) ** ma * factorial(l - ma) / factorial(l + ma) * out
    return float(out) if np.ndim(out) == 0 else out


def legendre_negative_order(p: RealOrderLegendreParams, m_int: int, x):
    """P_{l'}^{-m'}(x) = (-1)^m Gamma(l'-m'+1)/Gamma(l'+m'+1) P_{l'}^{m'}(x).

    ``m_int`` is the integer magnetic number; only its parity is used.
    """
    ratio = gamma(p.ntheta + 1.0) / gamma(p.lprime + p.mprime + 1.0)
    sign = -1.0 if m_int % 2 else 1.0
    out = sign * ratio * np.asarray(legendre_real_order(p, x))
    return float(out) if out.ndim == 0 else out
