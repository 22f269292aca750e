"""Qubit states in Bloch and density-matrix form.

The fidelity here is computed spectrally from density matrices and never
touches the purification machinery, so it serves as an independent check on
the Procrustes route.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import InvalidInputError, InvalidStateError

__all__ = [
    "I2",
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "PAULI",
    "as_bloch",
    "purity_gap",
    "density_from_bloch",
    "bloch_from_density",
    "check_density",
    "eigh2",
    "uhlmann_fidelity",
    "von_neumann_entropy",
    "qjsd",
    "pauli_dot",
    "projector_from_fano",
    "partial_trace_ancilla",
    "partial_trace_system",
    "conjugate_bloch",
]

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SIGMA_X, SIGMA_Y, SIGMA_Z)

# user data is checked loosely, library-built objects tightly
INPUT_TOL = 1e-9
INTERNAL_TOL = 1e-12
# eigenvalues / purity gaps below this are rounding noise of a pure state
PURE_TOL = 1e-15


def as_bloch(r, tol: float = INPUT_TOL) -> np.ndarray:
    """Validate a Bloch vector; vectors a hair outside the ball are pulled onto the sphere."""
    a = np.asarray(r, dtype=float)
    if a.shape != (3,):
        raise InvalidStateError(f"Bloch vector must have 3 components, got shape {a.shape}")
    if not math.isfinite(float(a.sum())):
        raise InvalidStateError("Bloch vector has non-finite components")
    norm = math.sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2])
    if norm > 1.0 + tol:
        raise InvalidStateError(f"Bloch vector lies outside the unit ball (|r| = {norm!r})")
    if norm > 1.0:
        a = a / norm
    return a


def purity_gap(r) -> float:
    """``1 - |r|^2``, snapped to zero within rounding of the sphere."""
    n2 = float(r[0] * r[0] + r[1] * r[1] + r[2] * r[2])
    gap = 1.0 - n2
    return 0.0 if gap < PURE_TOL else gap


def pauli_dot(v) -> np.ndarray:
    """``v . sigma`` for a real 3-vector."""
    x, y, z = float(v[0]), float(v[1]), float(v[2])
    return np.array([[z, x - 1j * y], [x + 1j * y, -z]], dtype=complex)


def density_from_bloch(r) -> np.ndarray:
    """``rho(r) = (I + r . sigma) / 2``."""
    r = as_bloch(r)
    return 0.5 * (I2 + pauli_dot(r))


def check_density(rho, tol: float = INPUT_TOL) -> np.ndarray:
    m = np.asarray(rho, dtype=complex)
    if m.shape != (2, 2):
        raise InvalidStateError(f"density matrix must be 2x2, got shape {m.shape}")
    if not np.isfinite(m).all():
        raise InvalidStateError("density matrix has non-finite entries")
    if np.max(np.abs(m - m.conj().T)) > tol:
        raise InvalidStateError("density matrix is not Hermitian")
    if abs(np.trace(m) - 1.0) > tol:
        raise InvalidStateError(f"density matrix trace is {np.trace(m).real!r}, not 1")
    lam_small = _eigvals2(m)[1]
    if lam_small < -tol:
        raise InvalidStateError(f"density matrix has negative eigenvalue {lam_small!r}")
    return m


def bloch_from_density(rho) -> np.ndarray:
    """``r_i = Tr(rho sigma_i)``."""
    m = check_density(rho)
    return np.array([
        2.0 * m[0, 1].real,
        -2.0 * m[0, 1].imag,
        (m[0, 0] - m[1, 1]).real,
    ])


def _eigvals2(h):
    a = h[0, 0].real
    d = h[1, 1].real
    half = 0.5 * (a - d)
    rad = math.hypot(half, abs(h[0, 1]))
    mean = 0.5 * (a + d)
    return mean + rad, mean - rad


def eigh2(h):
    """Closed-form eigendecomposition of a 2x2 Hermitian matrix.

    Returns ``(values, vectors)`` with values in decreasing order and the
    eigenvectors as the columns of a unitary matrix.
    """
    a = float(h[0, 0].real)
    d = float(h[1, 1].real)
    b = complex(h[0, 1])
    half = 0.5 * (a - d)
    rad = math.hypot(half, abs(b))
    mean = 0.5 * (a + d)
    vals = np.array([mean + rad, mean - rad])
    if rad == 0.0:
        return vals, np.eye(2, dtype=complex)
    # the larger of the two algebraically equivalent forms avoids cancellation
    if half >= 0.0:
        v0, v1 = complex(half + rad), b.conjugate()
    else:
        v0, v1 = b, complex(rad - half)
    n = math.hypot(abs(v0), abs(v1))
    v0, v1 = v0 / n, v1 / n
    return vals, np.array([[v0, -v1.conjugate()], [v1, v0.conjugate()]])


def _state_spectrum(m):
    vals, vecs = eigh2(m)
    vals = np.clip(vals, 0.0, 1.0)
    vals[vals < PURE_TOL] = 0.0
    return vals, vecs


def uhlmann_fidelity(rho, sigma) -> float:
    """``F = (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2`` by spectral decomposition.

    The small eigenvalue of ``sqrt(rho) sigma sqrt(rho)`` is taken from
    ``det(rho) det(sigma) / mu_max`` rather than the cancellation-prone
    difference of the closed-form roots.
    """
    rho = check_density(rho)
    sigma = check_density(sigma)
    lam, vec = _state_spectrum(rho)
    nu = [min(1.0, max(0.0, x)) for x in _eigvals2(sigma)]
    sqrt_rho = (vec * np.sqrt(lam)) @ vec.conj().T
    m = sqrt_rho @ sigma @ sqrt_rho
    mu_max = max(float(_eigvals2(m)[0]), 0.0)
    if mu_max == 0.0:
        return 0.0
    mu_min = lam[0] * lam[1] * nu[0] * nu[1] / mu_max
    if mu_min < PURE_TOL:
        mu_min = 0.0
    f = (math.sqrt(mu_max) + math.sqrt(mu_min)) ** 2
    return min(1.0, max(0.0, f))


def von_neumann_entropy(rho) -> float:
    """Entropy in bits, with ``0 log 0 = 0``."""
    rho = check_density(rho)
    lam, _ = _state_spectrum(rho)
    return float(-sum(x * math.log2(x) for x in lam if x > 0.0))


def qjsd(rho, sigma) -> float:
    """Quantum Jensen-Shannon divergence of ``{1/2: rho, 1/2: sigma}`` in bits."""
    rho = check_density(rho)
    sigma = check_density(sigma)
    mix = 0.5 * (rho + sigma)
    val = von_neumann_entropy(mix) - 0.5 * (von_neumann_entropy(rho) + von_neumann_entropy(sigma))
    return min(1.0, max(0.0, val))


def projector_from_fano(p) -> np.ndarray:
    """Two-qubit projector ``(II + r.s(x)I + I(x)gamma.s + sum A_ij s_i(x)s_j) / 4``.

    ``p`` is a :class:`~qubit_procrustes.purification.FanoPurification`.
    """
    if hasattr(p, "check"):
        p.check()
    r, gamma, a = p.r, p.gamma, p.a
    out = np.kron(I2, I2) + np.kron(pauli_dot(r), I2) + np.kron(I2, pauli_dot(gamma))
    for i in range(3):
        for j in range(3):
            out = out + a[i, j] * np.kron(PAULI[i], PAULI[j])
    return out / 4.0


def partial_trace_ancilla(p4) -> np.ndarray:
    """Trace out the second (ancilla) factor of a 4x4 operator."""
    t = np.asarray(p4).reshape(2, 2, 2, 2)
    return np.einsum("ijkj->ik", t)


def partial_trace_system(p4) -> np.ndarray:
    t = np.asarray(p4).reshape(2, 2, 2, 2)
    return np.einsum("jijk->ik", t)


def conjugate_bloch(u, r) -> np.ndarray:
    """Bloch vector of ``U rho(r) U^dagger``."""
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2) or np.max(np.abs(u.conj().T @ u - I2)) > INPUT_TOL:
        raise InvalidInputError("expected a 2x2 unitary")
    rho = density_from_bloch(r)
    out = u @ rho @ u.conj().T
    return np.array([2.0 * out[0, 1].real, -2.0 * out[0, 1].imag, (out[0, 0] - out[1, 1]).real])
