"""Qubit channels in affine Bloch form ``r -> M r + c``.

Built-in families come with their Kraus sets so the affine data can be
checked against the operator-sum route.  The collinear overlap closed
forms live here too, since they are the natural oracle for the channel
families that keep an input on its own axis.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ChannelValidityError,
    InvalidInputError,
    InvalidKrausError,
    InvalidParameterError,
)
from .qstate import I2, PAULI, SIGMA_X, SIGMA_Z, as_bloch

__all__ = [
    "AffineChannel",
    "depolarizing",
    "bit_flip",
    "phase_flip",
    "diagonal_pauli",
    "amplitude_damping",
    "imperfect_not",
    "affine",
    "affine_from_kraus",
    "check_kraus",
    "depolarizing_kraus",
    "bit_flip_kraus",
    "phase_flip_kraus",
    "amplitude_damping_kraus",
    "imperfect_not_kraus",
    "apply",
    "ball_check",
    "collinear_overlap",
    "channel_overlap_closed_form",
    "parse_channel",
    "CHANNEL_GRAMMAR",
    "CHANNEL_PARAMS",
    "make_channel",
]

BALL_TOL = 1e-9
KRAUS_TOL = 1e-8
PARAM_TOL = 1e-12


@dataclass(frozen=True)
class AffineChannel:
    m: np.ndarray
    c: np.ndarray
    label: str = "affine"
    params: dict = field(default_factory=dict, compare=False)

    @property
    def unital(self) -> bool:
        return float(np.linalg.norm(self.c)) < 1e-12

    def __call__(self, r) -> np.ndarray:
        return apply(self, r)


def _unit_interval(name, x):
    x = float(x)
    if not math.isfinite(x) or x < -PARAM_TOL or x > 1.0 + PARAM_TOL:
        raise InvalidParameterError(f"{name} must lie in [0, 1], got {x!r}")
    return min(1.0, max(0.0, x))


def _make(m, c, label, **params):
    m = np.array(m, dtype=float)
    c = np.array(c, dtype=float)
    m.setflags(write=False)
    c.setflags(write=False)
    return AffineChannel(m=m, c=c, label=label, params=params)


def depolarizing(p) -> AffineChannel:
    p = _unit_interval("p", p)
    return _make((1.0 - p) * np.eye(3), np.zeros(3), "dep", p=p)


def bit_flip(p) -> AffineChannel:
    p = _unit_interval("p", p)
    lam = 1.0 - 2.0 * p
    return _make(np.diag([1.0, lam, lam]), np.zeros(3), "bf", p=p)


def phase_flip(p) -> AffineChannel:
    p = _unit_interval("p", p)
    lam = 1.0 - 2.0 * p
    return _make(np.diag([lam, lam, 1.0]), np.zeros(3), "pf", p=p)


def diagonal_pauli(lx, ly, lz) -> AffineChannel:
    """``M = diag(lx, ly, lz)``.  Complete positivity is not certified."""
    lams = []
    for name, x in (("lx", lx), ("ly", ly), ("lz", lz)):
        x = float(x)
        if not math.isfinite(x) or abs(x) > 1.0 + PARAM_TOL:
            raise InvalidParameterError(f"{name} must lie in [-1, 1], got {x!r}")
        lams.append(min(1.0, max(-1.0, x)))
    return _make(np.diag(lams), np.zeros(3), "pauli", lx=lams[0], ly=lams[1], lz=lams[2])


def amplitude_damping(gamma) -> AffineChannel:
    g = _unit_interval("g", gamma)
    t = math.sqrt(1.0 - g)
    return _make(np.diag([t, t, 1.0 - g]), [0.0, 0.0, g], "ad", g=g)


def imperfect_not(p, delta_alpha) -> AffineChannel:
    """Ideal NOT with probability ``1 - p``, x-rotation by ``pi + delta_alpha`` with probability ``p``."""
    p = _unit_interval("p", p)
    da = float(delta_alpha)
    if not math.isfinite(da):
        raise InvalidParameterError("da must be finite")
    diag = -((1.0 - p) + p * math.cos(da))
    off = p * math.sin(da)
    m = [[1.0, 0.0, 0.0], [0.0, diag, off], [0.0, -off, diag]]
    return _make(m, np.zeros(3), "not", p=p, da=da)


def affine(m, c, label: str = "affine", samples: int = 1000, seed: int = 0) -> AffineChannel:
    """User-supplied affine map, validated by ball-preservation sampling only."""
    m = np.asarray(m, dtype=float)
    if m.size != 9:
        raise InvalidInputError("affine channel needs 9 matrix entries")
    m = m.reshape(3, 3)
    c = np.asarray(c, dtype=float)
    if c.shape != (3,):
        raise InvalidInputError("affine channel needs 3 translation entries")
    if not (np.isfinite(m).all() and np.isfinite(c).all()):
        raise InvalidInputError("affine channel has non-finite entries")
    ch = _make(m, c, label)
    worst = ball_check(ch, samples=samples, seed=seed)
    if worst > 1.0 + BALL_TOL:
        raise ChannelValidityError(f"affine map leaves the Bloch ball (max output norm {worst:.6g})")
    return ch


# -- Kraus sets ------------------------------------------------------------

def depolarizing_kraus(p):
    p = _unit_interval("p", p)
    k0 = math.sqrt(1.0 - 0.75 * p) * I2
    return [k0] + [math.sqrt(p / 4.0) * s for s in PAULI]


def bit_flip_kraus(p):
    p = _unit_interval("p", p)
    return [math.sqrt(1.0 - p) * I2, math.sqrt(p) * SIGMA_X]


def phase_flip_kraus(p):
    p = _unit_interval("p", p)
    return [math.sqrt(1.0 - p) * I2, math.sqrt(p) * SIGMA_Z]


def amplitude_damping_kraus(gamma):
    g = _unit_interval("g", gamma)
    k0 = np.array([[1.0, 0.0], [0.0, math.sqrt(1.0 - g)]], dtype=complex)
    k1 = np.array([[0.0, math.sqrt(g)], [0.0, 0.0]], dtype=complex)
    return [k0, k1]


def imperfect_not_kraus(p, delta_alpha):
    p = _unit_interval("p", p)
    half = 0.5 * (math.pi + float(delta_alpha))
    u = math.cos(half) * I2 - 1j * math.sin(half) * SIGMA_X
    return [math.sqrt(1.0 - p) * SIGMA_X, math.sqrt(p) * u]


def check_kraus(ks, tol: float = KRAUS_TOL):
    ks = [np.asarray(k, dtype=complex) for k in ks]
    if not ks or any(k.shape != (2, 2) for k in ks):
        raise InvalidKrausError("Kraus set must be a nonempty list of 2x2 matrices")
    if not all(np.isfinite(k).all() for k in ks):
        raise InvalidKrausError("Kraus operators have non-finite entries")
    total = sum(k.conj().T @ k for k in ks)
    dev = float(np.max(np.abs(total - I2)))
    if dev > tol:
        raise InvalidKrausError(f"completeness relation violated by {dev:.3e}")
    return ks


def affine_from_kraus(ks, label: str = "kraus") -> AffineChannel:
    """Pauli-transfer form: ``M_ij = Tr(s_i Phi(s_j)) / 2``, ``c_i = Tr(s_i Phi(I)) / 2``."""
    ks = check_kraus(ks)

    def phi(x):
        return sum(k @ x @ k.conj().T for k in ks)

    m = np.empty((3, 3))
    c = np.empty(3)
    img_id = phi(I2)
    for j, sj in enumerate(PAULI):
        img = phi(sj)
        for i, si in enumerate(PAULI):
            m[i, j] = 0.5 * np.trace(si @ img).real
    for i, si in enumerate(PAULI):
        c[i] = 0.5 * np.trace(si @ img_id).real
    return _make(m, c, label)


# -- application -----------------------------------------------------------

def apply(ch: AffineChannel, r) -> np.ndarray:
    """``M r + c``; outputs past the unit sphere by more than 1e-9 are an error."""
    r = as_bloch(r)
    out = ch.m @ r + ch.c
    norm = float(np.linalg.norm(out))
    if norm > 1.0 + BALL_TOL:
        raise ChannelValidityError(
            f"{ch.label} maps {r.tolist()} outside the Bloch ball (|r'| = {norm!r})")
    if norm > 1.0:
        out = out / norm
    return out


def ball_check(ch: AffineChannel, samples: int = 1000, seed: int = 0) -> float:
    """Largest output norm over the poles, the axes and random unit inputs."""
    rng = np.random.default_rng(seed)
    v = rng.normal(size=(samples, 3))
    v /= np.linalg.norm(v, axis=1)[:, None]
    v = np.vstack([v, np.eye(3), -np.eye(3)])
    out = v @ ch.m.T + ch.c
    return float(np.max(np.linalg.norm(out, axis=1)))


# -- closed forms ----------------------------------------------------------

def collinear_overlap(a, b) -> float:
    """Overlap of two states on a common Bloch axis with signed radii ``a``, ``b``."""
    a, b = float(a), float(b)
    for name, x in (("a", a), ("b", b)):
        if not math.isfinite(x) or abs(x) > 1.0 + PARAM_TOL:
            raise InvalidInputError(f"{name} must lie in [-1, 1], got {x!r}")
    a = min(1.0, max(-1.0, a))
    b = min(1.0, max(-1.0, b))
    g = 0.5 * (math.sqrt((1.0 + a) * (1.0 + b)) + math.sqrt((1.0 - a) * (1.0 - b)))
    return min(1.0, g)


def channel_overlap_closed_form(name: str, params: dict, r: float, axis: str | None = None) -> float:
    """Overlap between an axis-adapted input of signed radius ``r`` and its image.

    ``dep`` and ``ad`` act along z, ``bf`` along z (transverse to its fixed
    axis), ``pf`` along x, and ``pauli`` along ``axis`` (x, y or z).
    """
    r = float(r)
    if name == "dep":
        lam = 1.0 - _unit_interval("p", params["p"])
        return collinear_overlap(r, lam * r)
    if name in ("bf", "pf"):
        lam = 1.0 - 2.0 * _unit_interval("p", params["p"])
        return collinear_overlap(r, lam * r)
    if name == "pauli":
        if axis not in ("x", "y", "z"):
            raise InvalidInputError("pauli closed form needs axis x, y or z")
        lam = float(params["l" + axis])
        return collinear_overlap(r, lam * r)
    if name == "ad":
        g = _unit_interval("g", params["g"])
        return collinear_overlap(r, g + (1.0 - g) * r)
    raise InvalidInputError(f"no closed form for channel {name!r}")


# -- spec strings ----------------------------------------------------------

CHANNEL_PARAMS = {
    "dep": ("p",),
    "bf": ("p",),
    "pf": ("p",),
    "pauli": ("lx", "ly", "lz"),
    "ad": ("g",),
    "not": ("p", "da"),
    "affine": ("m", "c"),
}

CHANNEL_GRAMMAR = """valid channel specs:
  dep:p=<p>                depolarizing, 0 <= p <= 1
  bf:p=<p>                 bit flip
  pf:p=<p>                 phase flip
  pauli:lx=<l>,ly=<l>,lz=<l>  diagonal Pauli, |l| <= 1
  ad:g=<g>                 amplitude damping, 0 <= g <= 1
  not:p=<p>,da=<rad>       imperfect NOT, da in radians
  affine:m=<9 reals>,c=<3 reals>  r -> M r + c, M row-major"""

_FACTORIES = {
    "dep": depolarizing,
    "bf": bit_flip,
    "pf": phase_flip,
    "pauli": diagonal_pauli,
    "ad": amplitude_damping,
    "not": imperfect_not,
}

_NUMBER = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")


def _real(text: str, name: str) -> float:
    t = text.strip()
    if not _NUMBER.match(t):
        raise InvalidInputError(f"{name}: expected a plain real number (angles in radians), got {text!r}")
    return float(t)


def parse_channel(spec: str, allow_missing: tuple = ()):
    """Split ``name:key=val,...`` into ``(name, params)``.

    ``affine`` takes ``m=`` followed by nine comma-separated reals and ``c=``
    followed by three.  Names in ``allow_missing`` may be omitted (they are
    supplied later, e.g. by a sweep).
    """
    name, _, rest = spec.strip().partition(":")
    name = name.strip().lower()
    if name not in CHANNEL_PARAMS:
        raise InvalidInputError(f"unknown channel {name!r}\n{CHANNEL_GRAMMAR}")
    params: dict = {}
    key = None
    for tok in (t for t in rest.split(",") if t.strip()) if rest.strip() else ():
        if "=" in tok:
            key, _, val = tok.partition("=")
            key = key.strip()
            if key not in CHANNEL_PARAMS[name]:
                raise InvalidInputError(f"channel {name!r} has no parameter {key!r}\n{CHANNEL_GRAMMAR}")
            if key in params:
                raise InvalidInputError(f"parameter {key!r} given twice")
            params[key] = [_real(val, key)]
        elif name == "affine" and key is not None:
            params[key].append(_real(tok, key))
        else:
            raise InvalidInputError(f"malformed channel spec {spec!r}\n{CHANNEL_GRAMMAR}")
    for key, vals in params.items():
        want = {"m": 9, "c": 3}.get(key, 1)
        if len(vals) != want:
            raise InvalidInputError(f"parameter {key!r} needs {want} value(s), got {len(vals)}")
        if want == 1:
            params[key] = vals[0]
    missing = [k for k in CHANNEL_PARAMS[name] if k not in params and k not in allow_missing]
    if missing:
        raise InvalidInputError(f"channel {name!r} is missing {', '.join(missing)}\n{CHANNEL_GRAMMAR}")
    return name, params


def make_channel(name: str, params: dict) -> AffineChannel:
    if name == "affine":
        return affine(params["m"], params["c"])
    f = _FACTORIES[name]
    return f(*(params[k] for k in CHANNEL_PARAMS[name]))
