import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qubit_procrustes.errors import InvalidInputError, InvalidPurificationError, InvalidStateError
from qubit_procrustes.purification import (
    FanoPurification,
    canonical_gauge,
    canonical_purification,
    fano_overlap_squared,
    purity_residuals,
    rotate_purification,
)
from qubit_procrustes.qstate import projector_from_fano
from qubit_procrustes.sampling import ball_vectors, random_rotations

coord = st.floats(-1.0, 1.0, allow_nan=False)
bloch = st.tuples(coord, coord, coord).map(np.array).filter(lambda v: np.linalg.norm(v) <= 1.0)


def test_canonical_examples():
    p = canonical_purification([0, 0, 0])
    assert np.allclose(p.a, np.diag([1, 1, -1])) and np.allclose(p.gamma, 0)
    p = canonical_purification([0, 0, 0.6])
    assert np.allclose(p.a, np.diag([0.8, 0.8, -1])) and np.allclose(p.gamma, [0, 0, -0.6])
    assert max(purity_residuals(p).values()) <= 1e-12
    p = canonical_purification([1.0, 0, 0])
    assert abs(np.linalg.det(p.a)) <= 1e-15
    assert np.linalg.norm(p.gamma) == pytest.approx(1.0)
    assert np.allclose(p.gamma, p.a.T @ p.r)


def test_canonical_gauge_zero_frame():
    rot = random_rotations(np.random.default_rng(1), 1)[0]
    g = canonical_gauge([0, 0, 0], zero_frame=rot)
    assert np.allclose(g.o, rot) and g.alpha == 1.0
    with pytest.raises(InvalidInputError):
        canonical_gauge([0, 0, 0], zero_frame=np.diag([1, 1, -1.0]))
    with pytest.raises(InvalidStateError):
        canonical_gauge([0, 0, 1.1])


@settings(max_examples=300, deadline=None)
@given(bloch)
def test_canonical_satisfies_invariants(r):
    p = canonical_purification(r)
    assert max(purity_residuals(p).values()) <= 1e-10
    rad = math.hypot(*r)
    if rad > 0.0:
        # third column of A is -n
        assert np.max(np.abs(p.a[:, 2] + r / rad)) <= 1e-12


def test_rotate_examples():
    rng = np.random.default_rng(2)
    p = canonical_purification(ball_vectors(rng, 1)[0])
    q = rotate_purification(p, np.eye(3))
    assert np.allclose(q.a, p.a) and np.allclose(q.gamma, p.gamma)
    for s in random_rotations(rng, 20):
        q = rotate_purification(p, s)
        back = rotate_purification(q, s.T)
        assert np.max(np.abs(back.a - p.a)) <= 1e-12
        assert max(purity_residuals(q).values()) <= 1e-10
        assert np.linalg.norm(q.gamma) == pytest.approx(np.linalg.norm(p.gamma), abs=1e-12)
    with pytest.raises(InvalidInputError):
        rotate_purification(p, np.diag([1, 1, -1.0]))


def test_overlap_examples():
    p = canonical_purification([0.3, 0.1, -0.2])
    assert fano_overlap_squared(p, p) == pytest.approx(1.0, abs=1e-12)
    up, down = canonical_purification([0, 0, 1.0]), canonical_purification([0, 0, -1.0])
    assert fano_overlap_squared(up, down) == pytest.approx(0.0, abs=1e-15)


def test_overlap_matches_projector_trace():
    rng = np.random.default_rng(4)
    rs, ss = ball_vectors(rng, 200), ball_vectors(rng, 200)
    for r, s, rot in zip(rs, ss, random_rotations(rng, 200)):
        p = canonical_purification(r)
        q = rotate_purification(canonical_purification(s), rot)
        trace = np.trace(projector_from_fano(p) @ projector_from_fano(q)).real
        assert fano_overlap_squared(p, q) == pytest.approx(trace, abs=1e-10)


def test_check_and_overlap_reject_invalid():
    bad = FanoPurification(np.array([0, 0, 0.5]), np.zeros(3), np.eye(3))
    with pytest.raises(InvalidPurificationError):
        bad.check()
    with pytest.raises(InvalidPurificationError):
        fano_overlap_squared(bad, canonical_purification([0, 0, 0]))


def test_overlap_bounded_by_fidelity():
    # any purification pair overlaps at most sqrt(F)
    rng = np.random.default_rng(9)
    from qubit_procrustes.procrustes import overlap
    for r, s, rot in zip(ball_vectors(rng, 100), ball_vectors(rng, 100), random_rotations(rng, 100)):
        val = fano_overlap_squared(canonical_purification(r), rotate_purification(canonical_purification(s), rot))
        assert math.sqrt(val) <= overlap(r, s) + 1e-12
