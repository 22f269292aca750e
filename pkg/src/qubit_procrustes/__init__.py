"""Optimal qubit purifications via a Procrustes problem on SO(3).

The maximal overlap between purifications of two qubit states, the
entropic metric D_N built on it, and the angle of the optimal rotation that
aligns the two purification frames.
"""

__version__ = "0.1.0"

from .channels import (
    AffineChannel,
    affine,
    affine_from_kraus,
    amplitude_damping,
    apply,
    bit_flip,
    channel_overlap_closed_form,
    collinear_overlap,
    depolarizing,
    diagonal_pauli,
    imperfect_not,
    phase_flip,
)
from .errors import (
    ChannelValidityError,
    ConsistencyError,
    InvalidInputError,
    InvalidKrausError,
    InvalidParameterError,
    InvalidPurificationError,
    InvalidStateError,
    QubitProcrustesError,
)
from .linalg3 import (
    AxisAngle,
    axis_angle_from_rotation,
    minimal_rotation_to,
    rotation_from_axis_angle,
    svd3,
)
from .metrics import (
    MetricReport,
    binary_entropy,
    bures_angle_from_fidelity,
    bures_from_fidelity,
    dn_from_fidelity,
    dn_from_overlap,
    metric_report,
    root_infidelity_from_fidelity,
)
from .procrustes import (
    ProcrustesResult,
    lift_su2,
    misalignment_angle,
    optimal_overlap,
    overlap,
    procrustes_matrix,
    procrustes_solve,
)
from .purification import (
    FanoPurification,
    canonical_purification,
    fano_overlap_squared,
)
from .qstate import (
    bloch_from_density,
    density_from_bloch,
    qjsd,
    uhlmann_fidelity,
    von_neumann_entropy,
)
