"""Purification-overlap maximization as a Procrustes problem on SO(3).

For canonical purifications ``(r, gamma, A)`` and ``(s, delta, B)`` every
purification of the second state is ``(s, S^T delta, B S)`` with ``S`` a
proper rotation, and the squared overlap is ``(1 + r.s + Tr(K S)) / 4`` with
``K = A^T B + gamma delta^T``.  Maximizing ``Tr(K S)`` is solved from the SVD
of ``K``; the optimal rotation's angle is the misalignment angle.

The hot path works on plain Python floats: for 3x3 data the per-call
overhead of small numpy operations dominates the arithmetic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .linalg3 import AxisAngle, _axis_angle, _minimal_rotation_rows, _svd3_cols
from .purification import FanoPurification
from .qstate import I2, PURE_TOL, as_bloch, pauli_dot, purity_gap

__all__ = [
    "ProcrustesResult",
    "procrustes_matrix",
    "procrustes_matrix_fano",
    "procrustes_solve",
    "pair_purifications",
    "optimal_overlap",
    "overlap",
    "lift_su2",
    "misalignment_angle",
    "DEGENERACY_GAP",
    "COLLINEAR_TOL",
]

# sigma_2 - sigma_3 below this flags a possibly non-unique optimizer
DEGENERACY_GAP = 1e-9
# |r x s| <= tol |r||s| counts as collinear
COLLINEAR_TOL = 1e-12
# exact ties (up to rounding) where the optimal set is a one-parameter family
_TIE_GAP = 1e-12
# optimizers this close to the identity are reported as the identity
_SNAP_IDENTITY = 1e-12
_PI_TOL = 1e-7
_IDENTITY = ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0))


@dataclass(frozen=True)
class ProcrustesResult:
    s_star: np.ndarray
    k: np.ndarray
    singular_values: np.ndarray
    max_trace: float
    g_star: float
    theta: float
    axis: np.ndarray
    u_star: np.ndarray
    degenerate: bool


def _alpha(n2):
    gap = 1.0 - n2
    return 0.0 if gap < PURE_TOL else math.sqrt(gap)


def _pair_gauge(r, s):
    """Frames, radii and alphas for a pair of validated Bloch vectors.

    Non-collinear pairs get their own canonical frames.  Collinear pairs
    (including a zero vector) share the frame of the first nonzero vector
    and carry signed radii along its axis, which makes ``K`` diagonal.
    Returns ``(o_r, o_s, a, b, alpha_r, alpha_s, shared)`` with the frames
    as row tuples.
    """
    r0, r1, r2 = float(r[0]), float(r[1]), float(r[2])
    s0, s1, s2 = float(s[0]), float(s[1]), float(s[2])
    rr = r0 * r0 + r1 * r1 + r2 * r2
    ss = s0 * s0 + s1 * s1 + s2 * s2
    rn, sn = math.hypot(r0, r1, r2), math.hypot(s0, s1, s2)
    cx = r1 * s2 - r2 * s1
    cy = r2 * s0 - r0 * s2
    cz = r0 * s1 - r1 * s0
    ar, as_ = _alpha(rr), _alpha(ss)
    if math.sqrt(cx * cx + cy * cy + cz * cz) <= COLLINEAR_TOL * rn * sn:
        if rn > 0.0:
            n = (r0 / rn, r1 / rn, r2 / rn)
        elif sn > 0.0:
            n = (s0 / sn, s1 / sn, s2 / sn)
        else:
            n = (0.0, 0.0, 1.0)
        o = _minimal_rotation_rows(*n)
        a = r0 * n[0] + r1 * n[1] + r2 * n[2]
        b = s0 * n[0] + s1 * n[1] + s2 * n[2]
        # pure radii are exactly +-1 so that 1 + ab cancels cleanly
        if ar == 0.0:
            a = math.copysign(1.0, a)
        if as_ == 0.0:
            b = math.copysign(1.0, b)
        return o, o, a, b, ar, as_, True
    o_r = _minimal_rotation_rows(r0 / rn, r1 / rn, r2 / rn)
    o_s = _minimal_rotation_rows(s0 / sn, s1 / sn, s2 / sn)
    return o_r, o_s, rn, sn, ar, as_, False


def _k_rows(gauge):
    """``K = D_r O_r^T O_s D_s + a b z z^T`` as a tuple of rows."""
    o_r, o_s, a, b, ar, as_, shared = gauge
    if shared:
        aa = ar * as_
        return ((aa, 0.0, 0.0), (0.0, aa, 0.0), (0.0, 0.0, 1.0 + a * b))
    dr = (ar, ar, -1.0)
    ds = (as_, as_, -1.0)
    rows = []
    for i in range(3):
        row = []
        for j in range(3):
            rij = o_r[0][i] * o_s[0][j] + o_r[1][i] * o_s[1][j] + o_r[2][i] * o_s[2][j]
            row.append(dr[i] * rij * ds[j])
        rows.append(row)
    rows[2][2] += a * b
    return tuple(tuple(row) for row in rows)


def _det_cols(c):
    a, b, d = c
    return (a[0] * (b[1] * d[2] - b[2] * d[1])
            - a[1] * (b[0] * d[2] - b[2] * d[0])
            + a[2] * (b[0] * d[1] - b[1] * d[0]))


def _tie_break(ucols, vcols, sign):
    # The optimum is the family V diag(1, X) U^T with X in the trailing 2x2
    # block; pick the member with the largest trace (smallest angle).
    u = np.array(ucols).T
    v = np.array(vcols).T
    w = u.T @ v
    if sign > 0.0:
        cs = (w[1, 1] + w[2, 2], w[1, 2] - w[2, 1])
    else:
        cs = (w[1, 1] - w[2, 2], w[1, 2] + w[2, 1])
    n = math.hypot(*cs)
    if n == 0.0:
        return None
    c, sn = cs[0] / n, cs[1] / n
    q = np.eye(3)
    q[1:, 1:] = [[c, -sn], [sn, c]] if sign > 0.0 else [[c, sn], [sn, -c]]
    return tuple(tuple(row) for row in (v @ q @ u.T).tolist())


def _solve_rows(k):
    """Optimal rotation for ``K`` given as rows: ``(S, sigma, sign)``."""
    cols = [[k[0][j], k[1][j], k[2][j]] for j in range(3)]
    ucols, sig, vcols = _svd3_cols(cols)
    sign = 1.0 if _det_cols(vcols) * _det_cols(ucols) > 0.0 else -1.0
    v0, v1, v2 = vcols
    u0, u1, u2 = ucols
    s = tuple(
        tuple(v0[i] * u0[j] + v1[i] * u1[j] + sign * v2[i] * u2[j] for j in (0, 1, 2))
        for i in (0, 1, 2)
    )
    if (sign < 0.0 and sig[1] - sig[2] <= _TIE_GAP) or (sign > 0.0 and sig[1] + sig[2] <= _TIE_GAP):
        s = _tie_break(ucols, vcols, sign) or s
    if _near_identity(s):
        s = _IDENTITY
    return s, sig, sign


def _near_identity(s):
    for i in (0, 1, 2):
        for j in (0, 1, 2):
            if abs(s[i][j] - (1.0 if i == j else 0.0)) > _SNAP_IDENTITY:
                return False
    return True


def _trace_ks(k, s):
    k0, k1, k2 = k
    return (k0[0] * s[0][0] + k0[1] * s[1][0] + k0[2] * s[2][0]
            + k1[0] * s[0][1] + k1[1] * s[1][1] + k1[2] * s[2][1]
            + k2[0] * s[0][2] + k2[1] * s[1][2] + k2[2] * s[2][2])


def _overlap_from_trace(r, s, trace):
    # 1 + r.s = (|r + s|^2 + (1 - |r|^2) + (1 - |s|^2)) / 2 keeps antipodal
    # pure pairs at exactly zero instead of sqrt(eps)
    r0, r1, r2 = float(r[0]), float(r[1]), float(r[2])
    s0, s1, s2 = float(s[0]), float(s[1]), float(s[2])
    x, y, z = r0 + s0, r1 + s1, r2 + s2
    one_rs = 0.5 * (x * x + y * y + z * z + purity_gap((r0, r1, r2)) + purity_gap((s0, s1, s2)))
    g2 = 0.25 * (one_rs + trace)
    return math.sqrt(min(1.0, max(0.0, g2)))


def pair_purifications(r, s):
    """Canonical-gauge purifications of ``rho(r)`` and ``rho(s)`` as used by :func:`optimal_overlap`.

    Collinear pairs share one axis frame (see :data:`COLLINEAR_TOL`); all
    other pairs use each vector's own canonical frame.
    """
    r = as_bloch(r)
    s = as_bloch(s)
    o_r, o_s, _, _, ar, as_, _ = _pair_gauge(r, s)
    a = np.array(o_r) * np.array([ar, ar, -1.0])
    b = np.array(o_s) * np.array([as_, as_, -1.0])
    return FanoPurification(r, a.T @ r, a), FanoPurification(s, b.T @ s, b)


def procrustes_matrix(r, s) -> np.ndarray:
    """``K = D_r R_rs D_s + |r||s| z z^T`` with ``R_rs = O(n_r)^T O(n_s)``.

    For collinear pairs this is ``diag(alpha_r alpha_s, alpha_r alpha_s, 1 + a b)``
    with signed radii ``a``, ``b`` along the shared axis.
    """
    return np.array(_k_rows(_pair_gauge(as_bloch(r), as_bloch(s))))


def procrustes_matrix_fano(p: FanoPurification, q: FanoPurification) -> np.ndarray:
    """``K = A^T B + gamma delta^T`` straight from Fano data."""
    return p.a.T @ q.a + np.outer(p.gamma, q.gamma)


def procrustes_solve(k):
    """Maximize ``Tr(K S)`` over proper rotations.

    Returns ``(S_star, Tr(K S_star))`` with ``S_star = V diag(1, 1, det(V U^T)) U^T``.
    If the maximizer is not unique, the one closest to the identity is returned.
    """
    k = np.asarray(k, dtype=float)
    if k.shape != (3, 3) or not np.isfinite(k).all():
        raise InvalidInputError("Procrustes matrix must be a finite 3x3 array")
    rows = k.tolist()
    s, _, _ = _solve_rows(rows)
    return np.array(s), float(_trace_ks(rows, s))


def lift_su2(a: AxisAngle) -> np.ndarray:
    """SU(2) element ``U`` with ``U^dag (v.sigma) U = (S v).sigma`` for ``S = R(axis, angle)``.

    That is ``U = cos(t/2) I + i sin(t/2) u.sigma``; at a half-turn the sign is
    chosen so that ``U = -i u.sigma``.
    """
    angle = float(a.angle)
    if not math.isfinite(angle) or angle < 0.0 or angle > math.pi + 1e-12:
        raise InvalidInputError(f"rotation angle must lie in [0, pi], got {angle!r}")
    if angle == 0.0:
        return I2.copy()
    axis = np.asarray(a.axis, dtype=float)
    norm = float(np.linalg.norm(axis))
    if not math.isfinite(norm) or abs(norm - 1.0) > 1e-9:
        raise InvalidInputError("rotation axis must be a unit vector")
    return _lift(axis / norm, angle)


def _lift(axis, angle):
    if angle == 0.0:
        return I2.copy()
    u = math.cos(0.5 * angle) * I2 + 1j * math.sin(0.5 * angle) * pauli_dot(axis)
    if math.pi - angle < _PI_TOL:
        u = -u
    return u


def overlap(r, s) -> float:
    """``g*`` alone, skipping the axis and SU(2) bookkeeping of :func:`optimal_overlap`."""
    r = as_bloch(r)
    s = as_bloch(s)
    if np.array_equal(r, s):
        return 1.0
    k = _k_rows(_pair_gauge(r, s))
    srows, _, _ = _solve_rows(k)
    return _overlap_from_trace(r, s, _trace_ks(k, srows))


def optimal_overlap(r, s) -> ProcrustesResult:
    """Maximal purification overlap ``g*`` of ``rho(r)``, ``rho(s)`` and its optimal rotation."""
    r = as_bloch(r)
    s = as_bloch(s)
    k = _k_rows(_pair_gauge(r, s))
    srows, sig, sign = _solve_rows(k)

    # Tr(K S) = gamma.delta* + Tr(A^T B*) for the rotated second purification
    g_star = _overlap_from_trace(r, s, _trace_ks(k, srows))
    if np.array_equal(r, s):
        g_star = 1.0

    s_star = np.array(srows)
    aa = _axis_angle(s_star)
    return ProcrustesResult(
        s_star=s_star,
        k=np.array(k),
        singular_values=np.array(sig),
        max_trace=float(sig[0] + sig[1] + sign * sig[2]),
        g_star=g_star,
        theta=aa.angle,
        axis=aa.axis,
        u_star=_lift(aa.axis, aa.angle),
        degenerate=bool(sig[1] - sig[2] < DEGENERACY_GAP),
    )


def misalignment_angle(r, s) -> float:
    """Angle in ``[0, pi]`` of the optimal Procrustes rotation."""
    return optimal_overlap(r, s).theta
