import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qubit_procrustes import channels as ch
from qubit_procrustes.errors import (
    ChannelValidityError,
    InvalidInputError,
    InvalidKrausError,
    InvalidParameterError,
)
from qubit_procrustes.qstate import PAULI, SIGMA_X, conjugate_bloch, density_from_bloch, bloch_from_density
from qubit_procrustes.sampling import ball_vectors, random_su2

unit_p = st.floats(0.0, 1.0)
coord = st.floats(-1.0, 1.0, allow_nan=False)
bloch = st.tuples(coord, coord, coord).map(np.array).filter(lambda v: np.linalg.norm(v) <= 1.0)

KRAUS_PAIRS = [
    (ch.depolarizing, ch.depolarizing_kraus),
    (ch.bit_flip, ch.bit_flip_kraus),
    (ch.phase_flip, ch.phase_flip_kraus),
    (ch.amplitude_damping, ch.amplitude_damping_kraus),
]


def _density_route(ks, r):
    rho = density_from_bloch(r)
    return bloch_from_density(sum(k @ rho @ k.conj().T for k in ks))


def test_depolarizing_examples():
    r = np.array([0.3, -0.2, 0.5])
    assert np.allclose(ch.apply(ch.depolarizing(0), r), r)
    assert np.allclose(ch.apply(ch.depolarizing(1), r), 0)
    assert np.allclose(ch.apply(ch.depolarizing(0.5), [0, 0, 0.8]), [0, 0, 0.4])
    for bad in (-0.1, 1.1, math.nan):
        with pytest.raises(InvalidParameterError):
            ch.depolarizing(bad)


def test_flip_examples():
    assert np.allclose(ch.bit_flip(0).m, np.eye(3))
    assert np.allclose(ch.bit_flip(1).m, np.diag([1, -1, -1]))
    assert np.allclose(ch.apply(ch.bit_flip(0.25), [0, 0.5, 0.5]), [0, 0.25, 0.25])
    assert np.allclose(ch.phase_flip(0).m, np.eye(3))
    out = ch.apply(ch.phase_flip(0.5), [0.4, -0.3, 0.2])
    assert out[0] == 0.0 and out[1] == 0.0
    assert np.allclose(ch.apply(ch.phase_flip(0.3), [0.5, 0, 0.2]), [0.2, 0, 0.2])


def test_pauli_examples():
    assert np.allclose(ch.diagonal_pauli(1, 1, 1).m, np.eye(3))
    assert np.allclose(ch.diagonal_pauli(1, 0.4, 0.4).m, ch.bit_flip(0.3).m)
    assert np.allclose(ch.apply(ch.diagonal_pauli(0.9, 0.8, 0.7), [1, 0, 0]), [0.9, 0, 0])
    with pytest.raises(InvalidParameterError):
        ch.diagonal_pauli(1.2, 0, 0)


def test_amplitude_damping_examples():
    assert np.allclose(ch.amplitude_damping(0).m, np.eye(3))
    for r in ball_vectors(np.random.default_rng(1), 20):
        assert np.allclose(ch.apply(ch.amplitude_damping(1), r), [0, 0, 1])
    assert np.allclose(ch.apply(ch.amplitude_damping(0.5), [0, 0, 0.2]), [0, 0, 0.6])
    assert not ch.amplitude_damping(0.5).unital


def test_imperfect_not_examples():
    ideal = np.diag([1.0, -1.0, -1.0])
    for p in (0.0, 0.4, 1.0):
        assert np.allclose(ch.imperfect_not(p, 0.0).m, ideal)
    for da in (0.0, 0.7, -2.0):
        assert np.allclose(ch.imperfect_not(0.0, da).m, ideal)
    assert np.allclose(ch.apply(ch.imperfect_not(0.5, math.pi / 2), [0, 1, 0]), [0, -0.5, -0.5])
    m = ch.imperfect_not(0.3, 0.1).m
    assert np.allclose(m[0], [1, 0, 0]) and not np.allclose(m, m.T)


@pytest.mark.parametrize("family,kraus", KRAUS_PAIRS)
@pytest.mark.parametrize("p", [0.0, 0.1, 0.5, 0.77, 1.0])
def test_kraus_matches_affine(family, kraus, p):
    a, b = family(p), ch.affine_from_kraus(kraus(p))
    assert np.max(np.abs(a.m - b.m)) <= 1e-12 and np.max(np.abs(a.c - b.c)) <= 1e-12


@pytest.mark.parametrize("p,da", [(0.0, 0.3), (0.4, 0.2), (1.0, -1.1), (0.5, math.pi / 2)])
def test_imperfect_not_kraus(p, da):
    b = ch.affine_from_kraus(ch.imperfect_not_kraus(p, da))
    assert np.max(np.abs(ch.imperfect_not(p, da).m - b.m)) <= 1e-12
    assert np.max(np.abs(b.c)) <= 1e-12


def test_unitary_kraus_is_rotation():
    rng = np.random.default_rng(2)
    for _ in range(20):
        u = random_su2(rng)
        c = ch.affine_from_kraus([u])
        assert np.allclose(c.m.T @ c.m, np.eye(3), atol=1e-12) and np.linalg.det(c.m) == pytest.approx(1)
        assert np.allclose(c.c, 0, atol=1e-12)
        for v in np.eye(3):
            assert np.allclose(c.m @ v, conjugate_bloch(u, v), atol=1e-12)


def test_kraus_errors():
    with pytest.raises(InvalidKrausError):
        ch.check_kraus([np.eye(2), SIGMA_X])
    with pytest.raises(InvalidKrausError):
        ch.check_kraus([])
    with pytest.raises(InvalidKrausError):
        ch.check_kraus([np.eye(3)])
    ch.check_kraus([np.eye(2) * (1 + 1e-9)])


@settings(max_examples=100, deadline=None)
@given(unit_p, bloch)
def test_density_route_agrees(p, r):
    for family, kraus in KRAUS_PAIRS:
        assert np.max(np.abs(ch.apply(family(p), r) - _density_route(kraus(p), r))) <= 1e-12


@settings(max_examples=200, deadline=None)
@given(unit_p, bloch)
def test_outputs_stay_in_ball(p, r):
    for chan in (ch.depolarizing(p), ch.bit_flip(p), ch.phase_flip(p), ch.amplitude_damping(p),
                 ch.imperfect_not(p, 0.4)):
        assert np.linalg.norm(ch.apply(chan, r)) <= 1.0


def test_unital_fixes_origin():
    for chan in (ch.depolarizing(0.3), ch.bit_flip(0.6), ch.phase_flip(0.2),
                 ch.diagonal_pauli(0.1, -0.4, 0.5), ch.imperfect_not(0.7, 0.2)):
        assert chan.unital
        assert np.array_equal(ch.apply(chan, np.zeros(3)), np.zeros(3))


def test_channels_are_immutable():
    c = ch.depolarizing(0.2)
    with pytest.raises(ValueError):
        c.m[0, 0] = 5.0
    with pytest.raises(AttributeError):
        c.label = "x"


def test_affine_constructor():
    c = ch.affine(0.5 * np.eye(3), [0, 0, 0.5])
    assert np.allclose(c([0, 0, 1]), [0, 0, 1])
    assert np.allclose(c(np.zeros(3)), [0, 0, 0.5])
    with pytest.raises(ChannelValidityError):
        ch.affine(np.eye(3), [0, 0, 0.5])
    with pytest.raises(InvalidInputError):
        ch.affine(np.eye(2), [0, 0])


def test_apply_rejects_escape_from_ball():
    leaky = ch.AffineChannel(m=2 * np.eye(3), c=np.zeros(3))
    with pytest.raises(ChannelValidityError):
        ch.apply(leaky, [0, 0, 0.6])
    assert ch.ball_check(leaky) == pytest.approx(2.0)
    assert ch.ball_check(ch.depolarizing(0.0)) == pytest.approx(1.0)
    assert np.allclose(ch.depolarizing(0)([0.1, 0.2, 0.3]), [0.1, 0.2, 0.3])


def test_collinear_overlap_examples():
    assert ch.collinear_overlap(0.4, 0.4) == pytest.approx(1.0)
    assert ch.collinear_overlap(1, -1) == 0.0
    assert ch.collinear_overlap(0.8, 0.4) == pytest.approx(0.96693, abs=5e-6)
    with pytest.raises(InvalidInputError):
        ch.collinear_overlap(1.5, 0)


def test_closed_form_examples():
    assert ch.channel_overlap_closed_form("dep", {"p": 0.5}, 0.8) == pytest.approx(ch.collinear_overlap(0.8, 0.4))
    assert ch.channel_overlap_closed_form("ad", {"g": 1.0}, -1.0) == 0.0
    # bit flip leaves the x component alone
    for p in (0.0, 0.3, 1.0):
        r = np.array([0.6, 0, 0])
        assert np.allclose(ch.apply(ch.bit_flip(p), r), r)
    assert ch.channel_overlap_closed_form("pauli", {"lx": 1.0, "ly": 0.2, "lz": 0.2}, 0.6, "x") == pytest.approx(1.0)
    with pytest.raises(InvalidInputError):
        ch.channel_overlap_closed_form("pauli", {"lx": 1, "ly": 1, "lz": 1}, 0.5)
    with pytest.raises(InvalidInputError):
        ch.channel_overlap_closed_form("affine", {}, 0.5)


def test_parse_channel():
    assert ch.parse_channel("dep:p=0.3") == ("dep", {"p": 0.3})
    assert ch.parse_channel("not:p=0.1,da=-0.2") == ("not", {"p": 0.1, "da": -0.2})
    name, params = ch.parse_channel("affine:m=1,0,0,0,1,0,0,0,1,c=0,0,0")
    assert name == "affine" and len(params["m"]) == 9 and params["c"] == [0, 0, 0]
    assert ch.parse_channel("bf", allow_missing=("p",)) == ("bf", {})
    chan = ch.make_channel(*ch.parse_channel("pauli:lx=0.5,ly=0.5,lz=1"))
    assert np.allclose(chan.m, np.diag([0.5, 0.5, 1]))


@pytest.mark.parametrize("spec", [
    "nope:p=0.1", "dep:q=0.1", "dep:p=0.1,p=0.2", "dep", "not:p=0.1,da=10deg",
    "affine:m=1,2,c=0,0,0", "dep:p=abc", "dep:0.1",
])
def test_parse_channel_errors(spec):
    with pytest.raises(InvalidInputError) as exc:
        ch.parse_channel(spec)
    if "nope" in spec or "dep:q" in spec:
        assert "valid channel specs" in str(exc.value)
