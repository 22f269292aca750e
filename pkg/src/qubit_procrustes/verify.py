"""Seeded invariant suites shared by the ``verify`` subcommand and the acceptance tests.

Every check reports the largest violation it saw and passes when that
stays within its tolerance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import channels as ch
from .linalg3 import AxisAngle, rotation_from_axis_angle
from .metrics import dn_from_overlap
from .procrustes import lift_su2, optimal_overlap, overlap, procrustes_matrix
from .purification import (
    canonical_purification,
    fano_overlap_squared,
    purity_residuals,
    rotate_purification,
)
from .qstate import (
    PAULI,
    conjugate_bloch,
    density_from_bloch,
    pauli_dot,
    projector_from_fano,
    uhlmann_fidelity,
)
from .sampling import ball_vectors, random_rotations, random_su2, unit_vectors

__all__ = [
    "Check",
    "SuiteResult",
    "SUITES",
    "DEFAULT_SAMPLES",
    "run_suite",
    "builtin_channel_instances",
    "fidelity_consistency",
    "metric_axioms",
    "purity_constraints",
    "procrustes_optimality",
    "channel_closed_forms",
    "su2_lift",
]

GRID_11 = np.linspace(0.0, 1.0, 11)
NOT_DELTA = 0.3
# Pauli weights (q_x, q_y, q_z) per unit of the grid parameter; CP for t in [0, 1]
PAULI_WEIGHTS = (0.5, 0.3, 0.2)


@dataclass
class Check:
    label: str
    value: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(self.value <= self.tol)


@dataclass
class SuiteResult:
    name: str
    samples: int
    seed: int
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def max_violation(self) -> float:
        return max((c.value for c in self.checks), default=0.0)

    def add(self, label, value, tol):
        self.checks.append(Check(label, float(value), float(tol)))


def pauli_from_weights(t: float) -> ch.AffineChannel:
    qx, qy, qz = (t * w for w in PAULI_WEIGHTS)
    return ch.diagonal_pauli(1 - 2 * (qy + qz), 1 - 2 * (qx + qz), 1 - 2 * (qx + qy))


def builtin_channel_instances(grid=GRID_11) -> list:
    """Every built-in family over ``grid`` (imperfect NOT at a fixed pulse error)."""
    out = []
    for t in grid:
        t = float(t)
        out += [
            ch.depolarizing(t),
            ch.bit_flip(t),
            ch.phase_flip(t),
            ch.amplitude_damping(t),
            ch.imperfect_not(t, NOT_DELTA),
            pauli_from_weights(t),
        ]
    return out


def _fidelity(r, s):
    return uhlmann_fidelity(density_from_bloch(r), density_from_bloch(s))


def _rotation_from_su2(u):
    # S_ij = Tr(sigma_i U sigma_j U^dag) / 2
    return np.array([[0.5 * np.trace(si @ u @ sj @ u.conj().T).real for sj in PAULI] for si in PAULI])


def fidelity_consistency(samples: int = 10_000, seed: int = 0) -> SuiteResult:
    """``|g* - sqrt(F)|`` on ball pairs plus ``samples/10`` pure-pure and pure-mixed pairs."""
    rng = np.random.default_rng(seed)
    extra = max(1, samples // 10)
    pairs = [
        ("ball", ball_vectors(rng, samples), ball_vectors(rng, samples)),
        ("pure-pure", unit_vectors(rng, extra), unit_vectors(rng, extra)),
        ("pure-mixed", unit_vectors(rng, extra), ball_vectors(rng, extra)),
    ]
    res = SuiteResult("fidelity-consistency", samples, seed)
    for label, rs, ss in pairs:
        worst = max(abs(overlap(r, s) - math.sqrt(_fidelity(r, s))) for r, s in zip(rs, ss))
        res.add(f"|g* - sqrt(F)| {label}", worst, 1e-9)
    return res


def metric_axioms(samples: int = 10_000, seed: int = 0, contract_samples: int | None = None,
                  grid=GRID_11) -> SuiteResult:
    """Symmetry, triangle inequality and unitary invariance of D_N on random triples,
    and contractivity under every built-in channel instance."""
    rng = np.random.default_rng(seed)
    r, s, t = (ball_vectors(rng, samples) for _ in range(3))
    sym = tri = uni = 0.0
    d_rs = np.empty(samples)
    for i in range(samples):
        a = dn_from_overlap(overlap(r[i], s[i]))
        b = dn_from_overlap(overlap(s[i], r[i]))
        d_rt = dn_from_overlap(overlap(r[i], t[i]))
        d_ts = dn_from_overlap(overlap(t[i], s[i]))
        u = random_su2(rng)
        c = dn_from_overlap(overlap(conjugate_bloch(u, r[i]), conjugate_bloch(u, s[i])))
        d_rs[i] = a
        sym = max(sym, abs(a - b))
        tri = max(tri, a - d_rt - d_ts)
        uni = max(uni, abs(c - a))
    res = SuiteResult("metric-axioms", samples, seed)
    res.add("symmetry", sym, 1e-10)
    res.add("triangle", max(tri, 0.0), 1e-10)
    res.add("unitary invariance", uni, 1e-10)

    n = samples if contract_samples is None else min(samples, contract_samples)
    worst = 0.0
    for chan in builtin_channel_instances(grid):
        out_r = r[:n] @ chan.m.T + chan.c
        out_s = s[:n] @ chan.m.T + chan.c
        for i in range(n):
            d = dn_from_overlap(overlap(out_r[i], out_s[i]))
            worst = max(worst, d - d_rs[i])
    res.add("contractivity", max(worst, 0.0), 1e-10)
    return res


def purity_constraints(samples: int = 10_000, seed: int = 0) -> SuiteResult:
    """Five purity invariants of canonical purifications, and the Fano overlap
    against the trace of the two rank-one projectors."""
    rng = np.random.default_rng(seed)
    dirs = unit_vectors(rng, samples)
    radii = rng.uniform(size=samples)
    # the edges: centre, surface, and the poles where the frame is special
    radii[:4] = (0.0, 1.0, 1.0, 0.5)
    dirs[1:4] = ((0, 0, 1), (0, 0, -1), (0, 0, -1))
    worst = dict.fromkeys(("a_at", "at_a", "det", "gamma", "norm"), 0.0)
    purs = []
    for d, rad in zip(dirs, radii):
        p = canonical_purification(d * rad)
        for key, val in purity_residuals(p).items():
            worst[key] = max(worst[key], val)
        purs.append(p)
    res = SuiteResult("purity-constraints", samples, seed)
    for key, val in worst.items():
        res.add(f"residual {key}", val, 1e-10)

    n_pairs = max(1, samples // 10)
    rots = random_rotations(rng, n_pairs)
    dev = 0.0
    for i in range(n_pairs):
        p = purs[i]
        q = rotate_purification(purs[(i + 1) % samples], rots[i])
        trace = np.trace(projector_from_fano(p) @ projector_from_fano(q)).real
        dev = max(dev, abs(fano_overlap_squared(p, q) - trace))
    res.add("overlap vs projector trace", dev, 1e-10)
    return res


def procrustes_optimality(samples: int = 100, seed: int = 0, rotations: int = 100_000) -> SuiteResult:
    """``Tr(K S*)`` against random rotations, and against the singular-value formula."""
    rng = np.random.default_rng(seed)
    rs, ss = ball_vectors(rng, samples), ball_vectors(rng, samples)
    margin = 0.0
    value = 0.0
    for r, s in zip(rs, ss):
        res = optimal_overlap(r, s)
        k = procrustes_matrix(r, s)
        best = float(np.trace(k @ res.s_star))
        trials = np.einsum("ij,nji->n", k, random_rotations(rng, rotations))
        margin = max(margin, float(trials.max()) - best)
        u, sig, vt = np.linalg.svd(k)
        sgn = math.copysign(1.0, np.linalg.det(vt.T @ u.T))
        value = max(value, abs(best - (sig[0] + sig[1] + sgn * sig[2])))
    out = SuiteResult("procrustes-optimality", samples, seed)
    out.add("random rotation beats S*", margin, 1e-10)
    out.add("|Tr(K S*) - (s1 + s2 + sgn s3)|", value, 1e-12)
    return out


def _closed_form_cases(grid_points: int = 101, radii=None):
    if radii is None:
        radii = np.round(np.arange(1, 10) * 0.1, 12)
    grid = np.linspace(0.0, 1.0, grid_points)
    ez, ex = np.array([0.0, 0.0, 1.0]), np.array([1.0, 0.0, 0.0])
    for rad in radii:
        for p in grid:
            p = float(p)
            yield "dep", ch.depolarizing(p), {"p": p}, ez * rad, rad, None
            yield "bf", ch.bit_flip(p), {"p": p}, ez * rad, rad, None
            yield "pf", ch.phase_flip(p), {"p": p}, ex * rad, rad, None
            yield "ad", ch.amplitude_damping(p), {"g": p}, ez * rad, rad, None
            lam = 2.0 * p - 1.0
            for i, axis in enumerate("xyz"):
                lams = [0.5, 0.5, 0.5]
                lams[i] = lam
                params = {"lx": lams[0], "ly": lams[1], "lz": lams[2]}
                yield "pauli", ch.diagonal_pauli(*lams), params, np.eye(3)[i] * rad, rad, axis


def channel_closed_forms(samples: int = 101, seed: int = 0, radii=None) -> SuiteResult:
    """Pipeline against the collinear closed forms on each family's adapted axis.

    ``samples`` is the number of grid points per parameter; the suite is
    deterministic, so ``seed`` is unused.
    """
    dev = theta = 0.0
    for name, chan, params, r, rad, axis in _closed_form_cases(samples, radii):
        res = optimal_overlap(r, ch.apply(chan, r))
        dev = max(dev, abs(res.g_star - ch.channel_overlap_closed_form(name, params, rad, axis)))
        theta = max(theta, res.theta)
    out = SuiteResult("channel-closed-forms", samples, seed)
    out.add("|g* - closed form|", dev, 1e-9)
    out.add("theta", theta, 1e-9)
    return out


def su2_lift(samples: int = 1000, seed: int = 0) -> SuiteResult:
    """``U^dag (v.sigma) U = (S v).sigma`` on basis vectors for solver results,
    plus identical pairs (angle 0) and near-antiparallel pairs (angle near pi)."""
    rng = np.random.default_rng(seed)
    rs, ss = ball_vectors(rng, samples), ball_vectors(rng, samples)
    edge = [(r, r) for r in rs[:5]]
    edge += [((0, 0, 0.5), (1e-7, 0, -0.5)), ((0.3, 0.2, 0.1), (-0.6, -0.4 + 1e-8, -0.2))]
    worst = 0.0
    angles = []
    results = [optimal_overlap(r, s) for r, s in list(zip(rs, ss)) + edge]
    mats = [(res.u_star, res.s_star) for res in results]
    angles = [res.theta for res in results]
    for ang in (0.0, 1e-13, math.pi - 1e-6, math.pi - 1e-9, math.pi):
        axis = unit_vectors(rng, 1)[0]
        aa = AxisAngle(axis, ang)
        mats.append((lift_su2(aa), rotation_from_axis_angle(aa)))
        angles.append(ang)
    for u, s in mats:
        for v in np.eye(3):
            lhs = u.conj().T @ pauli_dot(v) @ u
            worst = max(worst, float(np.max(np.abs(lhs - pauli_dot(s @ v)))))
        worst = max(worst, float(np.max(np.abs(_rotation_from_su2(u.conj().T) - s))))
    out = SuiteResult("su2-lift", samples, seed)
    out.add("|U^dag (v.sigma) U - (S v).sigma|", worst, 1e-10)
    out.add("angle 0 covered", 0.0 if min(angles) == 0.0 else 1.0, 0.0)
    out.add("angle near pi covered", 0.0 if max(angles) > math.pi - 1e-6 else 1.0, 0.0)
    return out


SUITES = {
    "fidelity-consistency": fidelity_consistency,
    "metric-axioms": metric_axioms,
    "purity-constraints": purity_constraints,
    "procrustes-optimality": procrustes_optimality,
    "channel-closed-forms": channel_closed_forms,
    "su2-lift": su2_lift,
}

# quick defaults for the command line; the acceptance tests run the full sizes
DEFAULT_SAMPLES = {
    "fidelity-consistency": 10_000,
    "metric-axioms": 1000,
    "purity-constraints": 10_000,
    "procrustes-optimality": 100,
    "channel-closed-forms": 101,
    "su2-lift": 1000,
}


def run_suite(name: str, samples: int | None = None, seed: int = 0) -> SuiteResult:
    n = DEFAULT_SAMPLES[name] if samples is None else int(samples)
    return SUITES[name](n, seed)
