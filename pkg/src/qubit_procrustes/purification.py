"""Fano-form qubit purifications and the canonical gauge.

A purification of ``rho(r)`` is stored as ``(r, gamma, A)``: the system
Bloch vector, the ancilla Bloch vector and the 3x3 system-ancilla
correlation matrix ``A_ij = Tr(P sigma_i (x) sigma_j)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidPurificationError
from .linalg3 import check_rotation, minimal_rotation_to
from .qstate import as_bloch, purity_gap

__all__ = [
    "FanoPurification",
    "CanonicalGaugeData",
    "canonical_gauge",
    "canonical_purification",
    "rotate_purification",
    "fano_overlap_squared",
    "purity_residuals",
]

PURIFICATION_TOL = 1e-10


@dataclass(frozen=True)
class FanoPurification:
    r: np.ndarray
    gamma: np.ndarray
    a: np.ndarray

    def check(self, tol: float = PURIFICATION_TOL) -> "FanoPurification":
        worst = max(purity_residuals(self).values())
        if worst > tol:
            raise InvalidPurificationError(
                f"purity constraints violated (max residual {worst:.3e})")
        return self


@dataclass(frozen=True)
class CanonicalGaugeData:
    """``A_r = o @ d`` with ``d = diag(alpha, alpha, -1)``."""

    o: np.ndarray
    d: np.ndarray
    alpha: float


def purity_residuals(p: FanoPurification) -> dict:
    """Max-abs residual of each purity constraint, keyed by name."""
    r, g, a = (np.asarray(x, dtype=float) for x in (p.r, p.gamma, p.a))
    r2 = float(r @ r)
    g2 = float(g @ g)
    eye = np.eye(3)
    return {
        "a_at": float(np.max(np.abs(a @ a.T - ((1.0 - r2) * eye + np.outer(r, r))))),
        "at_a": float(np.max(np.abs(a.T @ a - ((1.0 - g2) * eye + np.outer(g, g))))),
        "det": abs(float(np.linalg.det(a)) - (r2 - 1.0)),
        "gamma": float(np.max(np.abs(g - a.T @ r))),
        "norm": abs(math.sqrt(g2) - math.sqrt(r2)),
    }


def canonical_gauge(r, zero_frame=None) -> CanonicalGaugeData:
    """Gauge data for ``r``.

    ``zero_frame`` is the frame used when ``r == 0``, where any rotation is
    admissible; it defaults to the identity.
    """
    r = as_bloch(r)
    norm = math.hypot(*r)
    if norm > 0.0:
        o = minimal_rotation_to(r / norm)
    elif zero_frame is not None:
        o = check_rotation(zero_frame)
    else:
        o = np.eye(3)
    alpha = math.sqrt(purity_gap(r))
    return CanonicalGaugeData(o=o, d=np.diag([alpha, alpha, -1.0]), alpha=alpha)


def canonical_purification(r, zero_frame=None) -> FanoPurification:
    r = as_bloch(r)
    gauge = canonical_gauge(r, zero_frame)
    a = gauge.o @ gauge.d
    return FanoPurification(r=r, gamma=a.T @ r, a=a)


def rotate_purification(p: FanoPurification, s) -> FanoPurification:
    """Purification of the same state with ancilla frame turned by ``s``: ``(r, s^T gamma, A s)``."""
    s = check_rotation(s)
    return FanoPurification(r=p.r, gamma=s.T @ p.gamma, a=p.a @ s)


def fano_overlap_squared(p: FanoPurification, q: FanoPurification) -> float:
    """``|<Psi_p|Psi_q>|^2 = (1 + r.s + gamma.delta + Tr(A^T B)) / 4``."""
    p.check()
    q.check()
    val = 0.25 * (1.0 + float(p.r @ q.r) + float(p.gamma @ q.gamma) + float(np.sum(p.a * q.a)))
    return min(1.0, max(0.0, val))
