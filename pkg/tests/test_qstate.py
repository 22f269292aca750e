import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qubit_procrustes.errors import InvalidPurificationError, InvalidStateError
from qubit_procrustes.metrics import binary_entropy
from qubit_procrustes.purification import canonical_purification
from qubit_procrustes.qstate import (
    as_bloch,
    bloch_from_density,
    check_density,
    conjugate_bloch,
    density_from_bloch,
    partial_trace_ancilla,
    projector_from_fano,
    qjsd,
    uhlmann_fidelity,
    von_neumann_entropy,
)
from qubit_procrustes.sampling import ball_vectors, random_su2

coord = st.floats(-1.0, 1.0, allow_nan=False)
bloch = st.tuples(coord, coord, coord).map(np.array).filter(lambda v: np.linalg.norm(v) <= 1.0)


def _sqrtm(h):
    w, v = np.linalg.eigh(h)
    return (v * np.sqrt(np.clip(w, 0, None))) @ v.conj().T


def test_density_examples():
    assert np.allclose(density_from_bloch([0, 0, 0]), np.eye(2) / 2)
    assert np.allclose(density_from_bloch([0, 0, 1]), [[1, 0], [0, 0]])
    rho = density_from_bloch([0.6, 0, 0])
    assert np.allclose(rho, 0.5 * np.array([[1, 0.6], [0.6, 1]]))
    assert np.trace(rho @ [[0, 1], [1, 0]]).real == pytest.approx(0.6)


def test_as_bloch_errors():
    with pytest.raises(InvalidStateError):
        as_bloch([0, 0, 1 + 2e-9])
    with pytest.raises(InvalidStateError):
        as_bloch([np.inf, 0, 0])
    with pytest.raises(InvalidStateError):
        as_bloch([0, 0])
    assert np.linalg.norm(as_bloch([0, 0, 1 + 1e-10])) == 1.0


def test_bloch_from_density_examples():
    assert np.allclose(bloch_from_density(np.eye(2) / 2), 0)
    plus = 0.5 * np.array([[1, 1], [1, 1]])
    assert np.allclose(bloch_from_density(plus), [1, 0, 0])
    with pytest.raises(InvalidStateError):
        bloch_from_density(np.array([[1, 0.2], [0, 0]]))
    with pytest.raises(InvalidStateError):
        bloch_from_density(np.eye(2))
    with pytest.raises(InvalidStateError):
        check_density(np.diag([1.5, -0.5]))


@settings(max_examples=200, deadline=None)
@given(bloch)
def test_bloch_density_round_trip(r):
    assert np.max(np.abs(bloch_from_density(density_from_bloch(r)) - r)) <= 1e-12


def test_fidelity_examples():
    rho = density_from_bloch([0.1, 0.2, 0.3])
    assert uhlmann_fidelity(rho, rho) == pytest.approx(1.0, abs=1e-12)
    assert uhlmann_fidelity(density_from_bloch([0, 0, 1]), density_from_bloch([0, 0, -1])) == pytest.approx(0, abs=1e-15)
    g = 0.5 * (math.sqrt(1.8 * 1.4) + math.sqrt(0.2 * 0.6))
    f = uhlmann_fidelity(density_from_bloch([0, 0, 0.8]), density_from_bloch([0, 0, 0.4]))
    assert f == pytest.approx(g * g, abs=1e-14)
    assert f == pytest.approx(0.93495, abs=5e-6)


@settings(max_examples=200, deadline=None)
@given(bloch, bloch)
def test_fidelity_matches_matrix_square_roots(r, s):
    a, b = density_from_bloch(r), density_from_bloch(s)
    sa = _sqrtm(a)
    oracle = np.trace(_sqrtm(sa @ b @ sa)).real ** 2
    # the eigh route loses sqrt(eps) on rank-deficient inputs
    assert uhlmann_fidelity(a, b) == pytest.approx(oracle, abs=1e-7)
    assert uhlmann_fidelity(a, b) == pytest.approx(uhlmann_fidelity(b, a), abs=1e-12)


def test_entropy_examples():
    assert von_neumann_entropy(np.eye(2) / 2) == pytest.approx(1.0)
    assert von_neumann_entropy(density_from_bloch([0, 1, 0])) == 0.0
    assert von_neumann_entropy(np.diag([0.9, 0.1])) == pytest.approx(0.46900, abs=5e-6)


def test_qjsd_examples():
    rho = density_from_bloch([0.2, -0.1, 0.4])
    assert qjsd(rho, rho) == pytest.approx(0.0, abs=1e-12)
    assert qjsd(density_from_bloch([0, 0, 1]), density_from_bloch([0, 0, -1])) == pytest.approx(1.0)


@settings(max_examples=200, deadline=None)
@given(bloch, bloch)
def test_qjsd_holevo_bound(r, s):
    a, b = density_from_bloch(r), density_from_bloch(s)
    f = uhlmann_fidelity(a, b)
    assert qjsd(a, b) <= binary_entropy(0.5 * (1 + math.sqrt(f))) + 1e-12


def test_projector_examples():
    p = projector_from_fano(canonical_purification([0, 0, 0]))
    assert np.allclose(np.linalg.eigvalsh(p), [0, 0, 0, 1], atol=1e-12)
    assert np.allclose(partial_trace_ancilla(p), np.eye(2) / 2)
    p = projector_from_fano(canonical_purification([0, 0, 1.0]))
    assert np.linalg.matrix_rank(p, tol=1e-10) == 1
    assert np.allclose(partial_trace_ancilla(p), [[1, 0], [0, 0]])


def test_projector_idempotent_and_reduces():
    for r in ball_vectors(np.random.default_rng(5), 100):
        p = projector_from_fano(canonical_purification(r))
        assert np.max(np.abs(p @ p - p)) <= 1e-10
        assert np.max(np.abs(partial_trace_ancilla(p) - density_from_bloch(r))) <= 1e-12


def test_projector_rejects_bad_purification():
    from qubit_procrustes.purification import FanoPurification
    with pytest.raises(InvalidPurificationError):
        projector_from_fano(FanoPurification(np.zeros(3), np.zeros(3), np.eye(3)))


def test_conjugate_bloch_is_rotation():
    rng = np.random.default_rng(6)
    for _ in range(50):
        u = random_su2(rng)
        r, s = ball_vectors(rng, 2)
        a, b = conjugate_bloch(u, r), conjugate_bloch(u, s)
        assert np.dot(a, b) == pytest.approx(np.dot(r, s), abs=1e-12)
        rho = u @ density_from_bloch(r) @ u.conj().T
        assert np.allclose(density_from_bloch(a), rho, atol=1e-12)
