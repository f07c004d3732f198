"""Invariant suite run by ``ringcoulomb check``.

Each check walks a roster of states and returns a :class:`CheckResult` with the
worst deviation seen and the tolerance it was held to.  ``perturb=True`` swaps in
a polar function whose normalisation constant is off by 1 %, which the
normalisation check must catch.
"""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.integrate import quad

from .model import (
    QuantumState,
    angular_H,
    conjugation_pair,
    deformed_Ylm,
    derive_quasi,
    energy,
    radial_u,
    standard_Ylm,
)
from .specfun import legendre_int, legendre_negative_order, legendre_real_order

ROSTER_B_VALUES = (0.0, 0.5, 10.0)
PERTURB_FACTOR = 1.01


def roster_states(n_max: int = 5) -> list[tuple[int, int, int]]:
    """(n, l, m) with 0 <= m <= l <= n - 1, n <= n_max, ordered by n, then l, then m."""
    return [(n, l, m) for n in range(1, n_max + 1) for l in range(n) for m in range(l + 1)]


def default_roster(b_values: Sequence[float] = ROSTER_B_VALUES, Z: float = 1.0) -> list[QuantumState]:
    return [QuantumState(n, l, m, b, Z) for b in b_values for (n, l, m) in roster_states()]


@dataclass
class CheckResult:
    name: str
    passed: bool
    worst: float
    tolerance: float
    n_cases: int
    failures: list[str]
    seconds: float = 0.0

    def summary(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"[{flag}] {self.name}: worst={self.worst:.3e} tol={self.tolerance:.1e} cases={self.n_cases}"


def _result(name, tol, cases: Iterable[tuple[str, float]], t0: float) -> CheckResult:
    worst, failures, count = 0.0, [], 0
    for label, err in cases:
        count += 1
        if not np.isfinite(err) or err > tol:
            failures.append(f"{label}: {err:.3e}")
        worst = max(worst, err) if np.isfinite(err) else math.inf
    return CheckResult(name, not failures and count > 0, worst, tol, count, failures, time.perf_counter() - t0)


def radial_norm(qs: QuantumState) -> float:
    val, _ = quad(lambda r: radial_u(qs, r) ** 2, 0.0, np.inf, limit=400, epsabs=1e-13, epsrel=1e-13)
    return val


def angular_norm_integral(qs: QuantumState, h_func: Callable = angular_H) -> float:
    q = derive_quasi(qs)
    val, _ = quad(lambda x: h_func(q, x) ** 2, -1.0, 1.0, limit=400, epsabs=1e-13, epsrel=1e-13)
    return val


def radial_residual(qs: QuantumState, n_points: int = 400) -> float:
    """max |u'' + (2E + 2Z/r - lambda/r^2) u| / max|u| on a log-spaced grid.

    u'' comes from a fourth-order central difference with a step that shrinks
    with r near the origin.
    """
    q = derive_quasi(qs)
    E = energy(qs)
    r_hi = 4.0 * q.nprime**2 / qs.Z
    r = np.geomspace(1e-2 * q.nprime / qs.Z, r_hi, n_points)
    h = np.minimum(0.02 * r, 2e-3 * q.nprime / qs.Z)
    u = radial_u(qs, r)
    upp = (
        -radial_u(qs, r + 2 * h) + 16 * radial_u(qs, r + h) - 30 * u + 16 * radial_u(qs, r - h) - radial_u(qs, r - 2 * h)
    ) / (12 * h * h)
    resid = upp + (2 * E + 2 * qs.Z / r - q.lam / r**2) * u
    return float(np.max(np.abs(resid)) / np.max(np.abs(u)))


def count_sign_changes(values: np.ndarray) -> int:
    s = np.sign(values)
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))


def radial_nodes(qs: QuantumState, n_points: int = 20001) -> int:
    """Strict sign changes of u on (0, 4 n'^2 / Z]."""
    q = derive_quasi(qs)
    r = np.linspace(0.0, 4.0 * q.nprime**2 / qs.Z, n_points)[1:]
    return count_sign_changes(radial_u(qs, r))


def check_normalization(roster, perturb: bool = False, tol: float = 1e-8) -> CheckResult:
    t0 = time.perf_counter()
    h_func = (lambda q, x: PERTURB_FACTOR * angular_H(q, x)) if perturb else angular_H

    def cases():
        for qs in roster:
            yield f"{qs} radial", abs(radial_norm(qs) - 1.0)
            yield f"{qs} angular", abs(angular_norm_integral(qs, h_func) - 1.0)

    return _result("normalization", tol, cases(), t0)


def check_b0_reduction(roster, tol: float = 1e-12, n_points: int = 200, seed: int = 0) -> CheckResult:
    """b = 0 states: deformed harmonic equals the ordinary one and E = -Z^2/(2n^2)."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    theta = np.arccos(rng.uniform(-1, 1, n_points))
    phi = rng.uniform(0, 2 * np.pi, n_points)

    def cases():
        for qs in roster:
            if qs.b != 0:
                continue
            for m in (qs.m, -qs.m):
                s = QuantumState(qs.n, qs.l, m, 0.0, qs.Z)
                err = np.max(np.abs(deformed_Ylm(s, theta, phi) - standard_Ylm(s.l, m, theta, phi)))
                yield f"{s} Ylm", float(err)
            yield f"{qs} energy", abs(energy(qs) + qs.Z**2 / (2 * qs.n**2))

    return _result("b0_reduction", tol, cases(), t0)


def check_nodes(roster) -> CheckResult:
    t0 = time.perf_counter()

    def cases():
        for qs in roster:
            yield f"{qs}", float(abs(radial_nodes(qs) - (qs.n - qs.l - 1)))

    return _result("radial_nodes", 0.0, cases(), t0)


def check_negative_order(roster, tol: float = 1e-12) -> CheckResult:
    """(-1)^m Gamma(l'+m'+1)/Gamma(l'-m'+1) P^{-m'} recovers P^{m'}; at b = 0 it is the integer identity."""
    t0 = time.perf_counter()
    x = np.linspace(-0.99, 0.99, 41)

    def cases():
        for qs in roster:
            q = derive_quasi(qs)
            neg = legendre_negative_order(q.legendre, qs.m, x)
            pos = legendre_real_order(q.legendre, x)
            scale = max(1.0, float(np.max(np.abs(pos))))
            back = (-1) ** qs.m * math.gamma(q.lprime + q.mprime + 1) / math.gamma(q.ntheta + 1) * neg
            yield f"{qs} inverse", float(np.max(np.abs(back - pos)) / scale)
            if qs.b == 0:
                ref = legendre_int(qs.l, -qs.m, x)
                yield f"{qs} int", float(np.max(np.abs(neg - ref)) / max(1.0, float(np.max(np.abs(ref)))))

    return _result("negative_order", tol, cases(), t0)


def check_conjugation(roster, tol: float = 1e-12) -> CheckResult:
    t0 = time.perf_counter()
    theta = np.linspace(0.05, math.pi - 0.05, 13)
    phi = np.linspace(0.0, 2 * math.pi, 13)

    def cases():
        for qs in roster:
            up, down = conjugation_pair(qs, theta, phi)
            yield f"{qs}", float(np.max(np.abs(down - (-1) ** qs.m * np.conj(up))))

    return _result("conjugation", tol, cases(), t0)


def check_radial_residual(roster, tol: float = 1e-6) -> CheckResult:
    t0 = time.perf_counter()
    return _result("radial_residual", tol, ((f"{qs}", radial_residual(qs)) for qs in roster), t0)


def run_checks(roster: Sequence[QuantumState], perturb: bool = False) -> dict:
    """Run the whole suite; returns a JSON-ready report."""
    roster = list(roster)
    if not roster:
        raise ValueError("roster is empty")
    results = [
        check_normalization(roster, perturb=perturb),
        check_b0_reduction(roster),
        check_nodes(roster),
        check_negative_order(roster),
        check_conjugation(roster),
        check_radial_residual(roster),
    ]
    return {
        "passed": all(r.passed for r in results),
        "perturbed": perturb,
        "n_states": len(roster),
        "checks": [asdict(r) for r in results],
    }


def summarize(report: dict) -> str:
    lines = []
    for c in report["checks"]:
        flag = "PASS" if c["passed"] else "FAIL"
        lines.append(f"[{flag}] {c['name']}: worst={c['worst']:.3e} tol={c['tolerance']:.1e} cases={c['n_cases']}")
        lines.extend(f"       {f}" for f in c["failures"][:5])
    lines.append("ALL PASS" if report["passed"] else "FAILURES PRESENT")
    return "\n".join(lines)
