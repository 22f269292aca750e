"""Seeded random states, rotations and unitaries for tests and verify suites."""
from __future__ import annotations

import math

import numpy as np

from .linalg3 import AxisAngle, rotation_from_axis_angle

__all__ = [
    "rng_from_seed",
    "unit_vectors",
    "ball_vectors",
    "random_rotations",
    "random_su2",
]


def rng_from_seed(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def unit_vectors(rng: np.random.Generator, n: int) -> np.ndarray:
    v = rng.normal(size=(n, 3))
    return v / np.linalg.norm(v, axis=1)[:, None]


def ball_vectors(rng: np.random.Generator, n: int) -> np.ndarray:
    """Uniform in the unit ball (radius ~ u^(1/3))."""
    return unit_vectors(rng, n) * rng.uniform(size=(n, 1)) ** (1.0 / 3.0)


def random_rotations(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar-random proper rotations, shape ``(n, 3, 3)``, from unit quaternions."""
    q = rng.normal(size=(n, 4))
    q /= np.linalg.norm(q, axis=1)[:, None]
    w, x, y, z = q.T
    out = np.empty((n, 3, 3))
    out[:, 0, 0] = 1 - 2 * (y * y + z * z)
    out[:, 0, 1] = 2 * (x * y - z * w)
    out[:, 0, 2] = 2 * (x * z + y * w)
    out[:, 1, 0] = 2 * (x * y + z * w)
    out[:, 1, 1] = 1 - 2 * (x * x + z * z)
    out[:, 1, 2] = 2 * (y * z - x * w)
    out[:, 2, 0] = 2 * (x * z - y * w)
    out[:, 2, 1] = 2 * (y * z + x * w)
    out[:, 2, 2] = 1 - 2 * (x * x + y * y)
    return out


def random_su2(rng: np.random.Generator) -> np.ndarray:
    """Haar-random element of SU(2)."""
    w, x, y, z = rng.normal(size=4)
    n = math.sqrt(w * w + x * x + y * y + z * z)
    w, x, y, z = w / n, x / n, y / n, z / n
    return np.array([[w - 1j * z, -y - 1j * x], [y - 1j * x, w + 1j * z]])


def rotation_about(axis, angle) -> np.ndarray:
    axis = np.asarray(axis, dtype=float)
    return rotation_from_axis_angle(AxisAngle(axis / np.linalg.norm(axis), float(angle)))
