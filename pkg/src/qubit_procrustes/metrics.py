"""Fidelity-based distances as functions of the maximal purification overlap.

All entropies are in bits.  Arguments that stray outside their domain by
less than 1e-12 are clamped; anything further is an error.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConsistencyError, InvalidInputError
from .procrustes import ProcrustesResult, optimal_overlap
from .qstate import as_bloch, density_from_bloch, uhlmann_fidelity

__all__ = [
    "MetricReport",
    "binary_entropy",
    "dn_from_overlap",
    "dn_from_fidelity",
    "bures_from_fidelity",
    "bures_angle_from_fidelity",
    "root_infidelity_from_fidelity",
    "metric_report",
    "report_from_overlap",
    "d_n",
]

DOMAIN_TOL = 1e-12
# g* and sqrt(F) must agree this closely; d_n itself is too ill-conditioned
# near g = 1 to be compared directly
CROSS_CHECK_TOL = 1e-9


@dataclass(frozen=True)
class MetricReport:
    g_star: float
    fidelity: float
    d_n: float
    bures: float
    bures_angle: float
    root_infidelity: float
    theta: float
    degenerate: bool


def _unit(name, x):
    x = float(x)
    if not math.isfinite(x) or x < -DOMAIN_TOL or x > 1.0 + DOMAIN_TOL:
        raise InvalidInputError(f"{name} must lie in [0, 1], got {x!r}")
    return min(1.0, max(0.0, x))


def binary_entropy(x) -> float:
    """``h2(x) = -x log2 x - (1-x) log2(1-x)`` with ``h2(0) = h2(1) = 0``."""
    x = _unit("x", x)
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def dn_from_overlap(g) -> float:
    """``D_N = sqrt(h2((1 + g) / 2))``."""
    g = _unit("g", g)
    return min(1.0, math.sqrt(binary_entropy(0.5 * (1.0 + g))))


def dn_from_fidelity(f) -> float:
    return dn_from_overlap(math.sqrt(_unit("fidelity", f)))


def bures_from_fidelity(f) -> float:
    return math.sqrt(2.0 * (1.0 - math.sqrt(_unit("fidelity", f))))


def bures_angle_from_fidelity(f) -> float:
    return math.acos(math.sqrt(_unit("fidelity", f)))


def root_infidelity_from_fidelity(f) -> float:
    return math.sqrt(1.0 - _unit("fidelity", f))


def report_from_overlap(res: ProcrustesResult) -> MetricReport:
    g = res.g_star
    f = g * g
    return MetricReport(
        g_star=g,
        fidelity=f,
        d_n=dn_from_overlap(g),
        bures=bures_from_fidelity(f),
        bures_angle=bures_angle_from_fidelity(f),
        root_infidelity=root_infidelity_from_fidelity(f),
        theta=res.theta,
        degenerate=res.degenerate,
    )


def metric_report(r, s, check: bool = True) -> MetricReport:
    """Every distance for the pair, from a single Procrustes solve.

    With ``check`` the overlap is compared with ``sqrt(F)`` from the
    spectral fidelity and a :class:`ConsistencyError` is raised if they
    differ by more than 1e-9.
    """
    r = as_bloch(r)
    s = as_bloch(s)
    res = optimal_overlap(r, s)
    if check:
        f = uhlmann_fidelity(density_from_bloch(r), density_from_bloch(s))
        if abs(res.g_star - math.sqrt(f)) > CROSS_CHECK_TOL:
            raise ConsistencyError(
                f"Procrustes overlap {res.g_star!r} disagrees with sqrt(F) = {math.sqrt(f)!r}")
    return report_from_overlap(res)


def d_n(r, s) -> float:
    """``D_N`` between ``rho(r)`` and ``rho(s)`` via the Procrustes overlap."""
    return dn_from_overlap(optimal_overlap(r, s).g_star)
