"""Fixed-size 3-vector / 3x3 kernel: SVD, rotations, axis-angle.

Vectors are ``(3,)`` float arrays and matrices ``(3, 3)`` float arrays.
Rotations are plain matrices; :func:`check_rotation` validates them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError

__all__ = [
    "Svd3",
    "AxisAngle",
    "svd3",
    "skew",
    "check_rotation",
    "rotation_from_axis_angle",
    "axis_angle_from_rotation",
    "minimal_rotation_to",
    "EZ",
]

EZ = np.array([0.0, 0.0, 1.0])

_MAX_SWEEPS = 30
_PAIRS = ((0, 1), (0, 2), (1, 2))
_JACOBI_TOL = 1e-15
# singular values this far below sigma_1 get a completed left vector
_RANK_TOL = 1e-15
# half-turn detection
_PI_TOL = 1e-7
_SMALL_ANGLE = 1e-12


@dataclass(frozen=True)
class Svd3:
    """``m = u @ diag(sigma) @ v.T`` with sigma nonincreasing."""

    u: np.ndarray
    sigma: np.ndarray
    v: np.ndarray


@dataclass(frozen=True)
class AxisAngle:
    axis: np.ndarray
    angle: float


def _as_mat3(m) -> np.ndarray:
    a = np.asarray(m, dtype=float)
    if a.shape != (3, 3):
        raise InvalidInputError(f"expected a 3x3 matrix, got shape {a.shape}")
    if not math.isfinite(float(a.sum())):
        raise InvalidInputError("matrix has non-finite entries")
    return a


def _as_vec3(v) -> np.ndarray:
    a = np.asarray(v, dtype=float)
    if a.shape != (3,):
        raise InvalidInputError(f"expected a 3-vector, got shape {a.shape}")
    if not math.isfinite(float(a.sum())):
        raise InvalidInputError("vector has non-finite entries")
    return a


def _dot(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def _cross(a, b):
    return [a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0]]


def _unit_orthogonal(u):
    # deterministic unit vector orthogonal to u: project the least-aligned axis
    k = min(range(3), key=lambda i: abs(u[i]))
    e = [0.0, 0.0, 0.0]
    e[k] = 1.0
    d = u[k]
    w = [e[i] - d * u[i] for i in range(3)]
    n = math.sqrt(_dot(w, w))
    return [x / n for x in w]


def svd3(m) -> Svd3:
    """Singular value decomposition of a real 3x3 matrix.

    Cyclic one-sided Jacobi with the fixed pair order (0,1), (0,2), (1,2).
    Each left singular vector is signed so that its largest-magnitude
    component is nonnegative (the matching right vector flips with it).
    Left vectors belonging to singular values that are numerically zero are
    completed to an orthonormal, right-handed set.
    """
    a = _as_mat3(m)
    # power-of-two rescaling is exact and keeps tiny or huge inputs out of
    # the subnormal and overflow ranges during the rotations
    peak = float(np.max(np.abs(a)))
    scale = math.ldexp(1.0, math.frexp(peak)[1]) if peak > 0.0 else 1.0
    ucols, sigma, vcols = _svd3_cols((a / scale).T.tolist())
    return Svd3(u=np.array(ucols).T, sigma=np.array(sigma) * scale, v=np.array(vcols).T)


def _svd3_cols(w):
    """Core of :func:`svd3` on plain floats: ``w`` holds the columns of the input.

    Returns ``(u_columns, sigma, v_columns)`` as nested lists.
    """
    v = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
    sqrt = math.sqrt
    for _ in range(_MAX_SWEEPS):
        rotated = False
        for i, j in _PAIRS:
            x0, x1, x2 = w[i]
            y0, y1, y2 = w[j]
            gamma = x0 * y0 + x1 * y1 + x2 * y2
            if gamma == 0.0:
                continue
            alpha = x0 * x0 + x1 * x1 + x2 * x2
            beta = y0 * y0 + y1 * y1 + y2 * y2
            if abs(gamma) <= _JACOBI_TOL * sqrt(alpha * beta):
                continue
            zeta = (beta - alpha) / (2.0 * gamma)
            t = 1.0 / (abs(zeta) + sqrt(1.0 + zeta * zeta))
            if zeta < 0.0:
                t = -t
            c = 1.0 / sqrt(1.0 + t * t)
            s = c * t
            w[i] = [c * x0 - s * y0, c * x1 - s * y1, c * x2 - s * y2]
            w[j] = [s * x0 + c * y0, s * x1 + c * y1, s * x2 + c * y2]
            x0, x1, x2 = v[i]
            y0, y1, y2 = v[j]
            v[i] = [c * x0 - s * y0, c * x1 - s * y1, c * x2 - s * y2]
            v[j] = [s * x0 + c * y0, s * x1 + c * y1, s * x2 + c * y2]
            rotated = True
        if not rotated:
            break

    norms = [math.sqrt(_dot(col, col)) for col in w]
    order = sorted(range(3), key=lambda k: -norms[k])
    sigma = [norms[k] for k in order]
    vcols = [list(v[k]) for k in order]

    cutoff = _RANK_TOL * sigma[0]
    ucols: list = []
    for rank, k in enumerate(order):
        if sigma[rank] > cutoff and sigma[rank] > 0.0:
            ucols.append([x / sigma[rank] for x in w[k]])
        else:
            ucols.append(None)
    if ucols[0] is None:
        ucols[0] = [1.0, 0.0, 0.0]
    if ucols[1] is None:
        ucols[1] = _unit_orthogonal(ucols[0])
    if ucols[2] is None:
        ucols[2] = _cross(ucols[0], ucols[1])

    for k in range(3):
        col = ucols[k]
        big = max(range(3), key=lambda i: abs(col[i]))
        if col[big] < 0.0:
            ucols[k] = [-x for x in col]
            vcols[k] = [-x for x in vcols[k]]

    return ucols, sigma, vcols


def skew(u) -> np.ndarray:
    """Cross-product matrix ``[u]_x`` with ``skew(u) @ w == cross(u, w)``."""
    x, y, z = u
    return np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])


def check_rotation(s, tol: float = 1e-9) -> np.ndarray:
    s = _as_mat3(s)
    if np.max(np.abs(s.T @ s - np.eye(3))) > tol:
        raise InvalidInputError("matrix is not orthogonal")
    if abs(np.linalg.det(s) - 1.0) > tol:
        raise InvalidInputError("matrix is not a proper rotation (det != +1)")
    return s


def rotation_from_axis_angle(a: AxisAngle) -> np.ndarray:
    """Rodrigues formula ``I + sin(t)[u]_x + (1 - cos(t))[u]_x^2``."""
    angle = float(a.angle)
    if not math.isfinite(angle):
        raise InvalidInputError("angle is not finite")
    if angle == 0.0:
        return np.eye(3)
    axis = _as_vec3(a.axis)
    norm = math.sqrt(_dot(axis, axis))
    if norm == 0.0:
        raise InvalidInputError("zero rotation axis with nonzero angle")
    if abs(norm - 1.0) > 1e-9:
        raise InvalidInputError(f"rotation axis is not unit length (norm {norm})")
    k = skew(axis / norm)
    return np.eye(3) + math.sin(angle) * k + (1.0 - math.cos(angle)) * (k @ k)


def axis_angle_from_rotation(s) -> AxisAngle:
    """Axis and angle in ``[0, pi]`` of a proper rotation.

    Angle conventions: the identity reports ``(z, 0)``; at a half-turn the
    axis is the +1 eigenvector with its largest-magnitude component positive.
    """
    return _axis_angle(check_rotation(s))


def _axis_angle(s) -> AxisAngle:
    w = np.array([s[2, 1] - s[1, 2], s[0, 2] - s[2, 0], s[1, 0] - s[0, 1]])
    wnorm = math.sqrt(_dot(w, w))
    cos_t = min(1.0, max(-1.0, (s[0, 0] + s[1, 1] + s[2, 2] - 1.0) / 2.0))
    # atan2 stays accurate near 0 and pi where arccos(cos_t) does not
    angle = math.atan2(0.5 * wnorm, cos_t)
    if angle < _SMALL_ANGLE:
        return AxisAngle(axis=EZ.copy(), angle=angle)
    if cos_t >= 0.0:
        return AxisAngle(axis=w / wnorm, angle=angle)

    # obtuse: u u^T from the symmetric part, well conditioned up to pi
    outer = (s + s.T - 2.0 * cos_t * np.eye(3)) / (2.0 * (1.0 - cos_t))
    k = int(np.argmax(np.diag(outer)))
    axis = outer[:, k] / math.sqrt(outer[k, k])
    axis /= np.linalg.norm(axis)
    if math.pi - angle < _PI_TOL and wnorm < 1e-14:
        big = int(np.argmax(np.abs(axis)))
        if axis[big] < 0.0:
            axis = -axis
    elif _dot(axis, w) < 0.0:
        axis = -axis
    return AxisAngle(axis=axis, angle=angle)


def minimal_rotation_to(n) -> np.ndarray:
    """Smallest rotation ``O`` with ``O @ z == n`` (half-turn about x for ``n == -z``)."""
    n = _as_vec3(n)
    norm = math.sqrt(_dot(n, n))
    if abs(norm - 1.0) > 1e-9:
        raise InvalidInputError(f"target direction is not unit length (norm {norm})")
    return _minimal_rotation(float(n[0]) / norm, float(n[1]) / norm, float(n[2]) / norm)


def _minimal_rotation(x, y, z) -> np.ndarray:
    return np.array(_minimal_rotation_rows(x, y, z))


def _minimal_rotation_rows(x, y, z):
    s = math.hypot(x, y)
    if s == 0.0:
        if z > 0.0:
            return ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0))
        return ((1.0, 0.0, 0.0), (0.0, -1.0, 0.0), (0.0, 0.0, -1.0))
    kx, ky = -y / s, x / s
    if s < 1e-300:
        # subnormal components: s is rounded, so k needs renormalising
        h = math.hypot(kx, ky)
        kx, ky = kx / h, ky / h
    t = 1.0 - z
    return (
        (z + t * kx * kx, t * kx * ky, s * ky),
        (t * kx * ky, z + t * ky * ky, -s * kx),
        (-s * ky, s * kx, z),
    )
