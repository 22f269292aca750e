"""Channel parameter sweeps producing one row per (input state, parameter value)."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .channels import CHANNEL_PARAMS, apply, make_channel
from .errors import InvalidInputError, InvalidStateError
from .metrics import dn_from_overlap
from .procrustes import optimal_overlap
from .qstate import SIGMA_X, as_bloch, conjugate_bloch

__all__ = [
    "SweepSpec",
    "SweepRow",
    "CSV_COLUMNS",
    "PRESET_RADII",
    "PRESET_ANGLES",
    "PRESET_FIXED_ANGLES",
    "PRESET_FIXED_RADIUS",
    "bloch_from_angles",
    "preset_states",
    "run_sweep",
    "format_real",
    "rows_to_csv",
]

CSV_COLUMNS = (
    "param", "r_x", "r_y", "r_z", "rp_x", "rp_y", "rp_z",
    "g_star", "fidelity", "d_n", "theta", "axis_x", "axis_y", "axis_z", "degenerate",
)

# Representative input families for the sweep presets.
PRESET_RADII = (0.3, 0.6, 0.9)
PRESET_ANGLES = ((0.0, math.pi / 4), (math.pi / 4, math.pi / 3), (math.pi / 2, math.pi / 2))
PRESET_FIXED_ANGLES = (math.pi / 4, math.pi / 3)
PRESET_FIXED_RADIUS = 0.9

REFERENCES = ("ideal-not",)
_TRIG_ZERO = 1e-15


def bloch_from_angles(phi: float, theta: float, r: float) -> np.ndarray:
    """``r (sin t cos p, sin t sin p, cos t)`` with ``t`` in [0, pi], ``p`` in [0, 2 pi)."""
    phi, theta, r = float(phi), float(theta), float(r)
    if not all(math.isfinite(x) for x in (phi, theta, r)):
        raise InvalidStateError("state angles and radius must be finite")
    if not 0.0 <= theta <= math.pi:
        raise InvalidStateError(f"theta must lie in [0, pi] radians, got {theta!r}")
    if not 0.0 <= phi < 2.0 * math.pi:
        raise InvalidStateError(f"phi must lie in [0, 2 pi) radians, got {phi!r}")
    if not 0.0 <= r <= 1.0:
        raise InvalidStateError(f"radius must lie in [0, 1], got {r!r}")
    st, ct = _trig(math.sin(theta)), _trig(math.cos(theta))
    cp, sp = _trig(math.cos(phi)), _trig(math.sin(phi))
    return np.array([r * st * cp, r * st * sp, r * ct])


def _trig(x):
    # cos(pi/2) evaluates to 6e-17; such residues would tilt an on-axis
    # state off its axis and break collinearity with the channel output
    return 0.0 if abs(x) < _TRIG_ZERO else x


def preset_states(name: str) -> list:
    """``radii``: fixed angles, radii 0.3/0.6/0.9.  ``angles``: radius 0.9, three angle pairs."""
    if name == "radii":
        phi, theta = PRESET_FIXED_ANGLES
        return [bloch_from_angles(phi, theta, r) for r in PRESET_RADII]
    if name == "angles":
        return [bloch_from_angles(phi, theta, PRESET_FIXED_RADIUS) for phi, theta in PRESET_ANGLES]
    raise InvalidInputError(f"unknown preset {name!r} (use radii or angles)")


@dataclass(frozen=True)
class SweepSpec:
    channel: str
    fixed: dict
    param: str
    start: float
    stop: float
    count: int
    states: tuple
    reference: str | None = None

    def __post_init__(self):
        if self.channel not in CHANNEL_PARAMS or self.channel == "affine":
            raise InvalidInputError(f"cannot sweep channel {self.channel!r}")
        if self.param not in CHANNEL_PARAMS[self.channel]:
            raise InvalidInputError(
                f"channel {self.channel!r} has no parameter {self.param!r} "
                f"(choose from {', '.join(CHANNEL_PARAMS[self.channel])})")
        if self.param in self.fixed:
            raise InvalidInputError(f"parameter {self.param!r} is both fixed and swept")
        missing = [k for k in CHANNEL_PARAMS[self.channel] if k != self.param and k not in self.fixed]
        if missing:
            raise InvalidInputError(f"channel {self.channel!r} is missing {', '.join(missing)}")
        if int(self.count) < 2:
            raise InvalidInputError("sweep count must be at least 2")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise InvalidInputError("sweep range must be finite")
        if not self.states:
            raise InvalidInputError("sweep needs at least one input state")
        if self.reference is not None and self.reference not in REFERENCES:
            raise InvalidInputError(f"unknown reference {self.reference!r} (use ideal-not)")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, int(self.count))


@dataclass(frozen=True)
class SweepRow:
    param: float
    r: np.ndarray
    rp: np.ndarray
    g_star: float
    fidelity: float
    d_n: float
    theta: float
    axis: np.ndarray
    degenerate: bool


def run_sweep(spec: SweepSpec) -> list:
    """Rows ordered by input state (outer) then parameter value (inner).

    With ``reference='ideal-not'`` each row compares the ideal NOT image of
    the input, ``sigma_x rho sigma_x``, with the channel output; ``r`` then
    holds that reference state.
    """
    channels = []
    for value in spec.values():
        params = dict(spec.fixed)
        params[spec.param] = float(value)
        channels.append((float(value), make_channel(spec.channel, params)))

    rows = []
    for state in spec.states:
        r_in = as_bloch(state)
        r_ref = conjugate_bloch(SIGMA_X, r_in) if spec.reference == "ideal-not" else r_in
        for value, ch in channels:
            rp = apply(ch, r_in)
            res = optimal_overlap(r_ref, rp)
            rows.append(SweepRow(
                param=value,
                r=r_ref,
                rp=rp,
                g_star=res.g_star,
                fidelity=res.g_star * res.g_star,
                d_n=dn_from_overlap(res.g_star),
                theta=res.theta,
                axis=res.axis,
                degenerate=res.degenerate,
            ))
    return rows


def format_real(x: float) -> str:
    # + 0.0 folds negative zero into zero
    return format(float(x) + 0.0, ".17g")


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for row in rows:
        reals = [row.param, *row.r, *row.rp, row.g_star, row.fidelity, row.d_n, row.theta, *row.axis]
        w.writerow([format_real(x) for x in reals] + ["true" if row.degenerate else "false"])
    return buf.getvalue()
