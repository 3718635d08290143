"""Independent numerical propagator for the driven oscillator.

Integrates H(t) = diag(n + 1/2) + f(t) * x in a truncated number basis
and exposes the squared propagator entries as transition probabilities.
This route never touches the Charlier closed forms, so it serves as the
cross-check oracle for :mod:`qentropy.quantum`.

The integrator composes one matrix exponential per time slice,
evaluated at the slice midpoint.  Each slice factor comes from an exact
symmetric-tridiagonal eigendecomposition, so every factor is unitary to
roundoff by construction and the product's unitarity defect measures
only accumulation, not scheme error.  The scheme itself is second-order
accurate in the slice width.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

#: Largest acceptable max-norm deviation of U*U^H from the identity.
UNITARITY_THRESHOLD = 1e-9

#: Fraction of the basis treated as headroom by the leak monitor.
_LEAK_FLOOR = 0.75
_LEAK_TOL = 1e-8


class UnitarityError(RuntimeError):
    """Propagation produced an unacceptable unitarity defect."""


class BasisLeakWarning(UserWarning):
    """Noticeable probability reached the top of the truncated basis."""


@dataclass(frozen=True)
class PropagatorResult:
    """Time-ordered evolution operator over one drive interval."""

    matrix: np.ndarray
    unitarity_defect: float
    dim: int
    steps: int

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)


def hamiltonian_matrix(time: float, drive, dim: int) -> np.ndarray:
    """Driven-oscillator Hamiltonian in the number basis at one instant.

    Diagonal entries n + 1/2; the position operator couples neighbours
    with <n|x|n+1> = sqrt((n+1)/2), scaled by the instantaneous force.
    """
    if dim < 2:
        raise ValueError("dim must be >= 2")
    h = np.diag(np.arange(dim) + 0.5)
    coupling = float(drive.force(time)) * np.sqrt((np.arange(dim - 1) + 1.0) / 2.0)
    h += np.diag(coupling, 1) + np.diag(coupling, -1)
    return h


def propagate(drive, dim: int, steps: int) -> PropagatorResult:
    """Compose midpoint-exponential slices over the drive interval.

    Deterministic; raises :class:`UnitarityError` if the accumulated
    defect exceeds :data:`UNITARITY_THRESHOLD` (raise ``steps`` or lower
    ``dim`` if that happens).
    """
    if dim < 2:
        raise ValueError("dim must be >= 2")
    if steps < 100:
        raise ValueError("steps must be >= 100")
    duration = drive.duration
    dt = duration / steps
    diag = np.arange(dim) + 0.5
    offdiag_unit = np.sqrt((np.arange(dim - 1) + 1.0) / 2.0)
    u = np.eye(dim, dtype=complex)
    for j in range(steps):
        force = float(drive.force((j + 0.5) * dt))
        levels, modes = eigh_tridiagonal(diag, force * offdiag_unit)
        u = (modes * np.exp(-1j * levels * dt)) @ (modes.T @ u)
    defect = float(np.max(np.abs(u.conj().T @ u - np.eye(dim))))
    if defect > UNITARITY_THRESHOLD:
        raise UnitarityError(
            f"unitarity defect {defect:.3e} above {UNITARITY_THRESHOLD:.0e}; "
            f"raise steps (got {steps})"
        )
    return PropagatorResult(u, defect, dim, steps)


def numeric_transition_row(level: int, drive, dim: int, steps: int,
                           propagator: PropagatorResult | None = None) -> np.ndarray:
    """Transition probabilities out of ``level`` from the propagator.

    The drive is cyclic, so the final eigenbasis coincides with the
    initial number basis and the row is just the squared magnitudes of
    one propagator column.  ``level`` must stay below ``dim/2`` to keep
    headroom against truncation reflection; a :class:`BasisLeakWarning`
    is emitted if more than 1e-8 of the mass sits in the top quarter of
    the basis.
    """
    if level < 0:
        raise ValueError("level must be non-negative")
    if level >= dim / 2:
        raise ValueError(f"level {level} needs dim > {2 * level} for headroom")
    if propagator is None:
        propagator = propagate(drive, dim, steps)
    elif propagator.dim != dim or propagator.steps != steps:
        raise ValueError("supplied propagator does not match dim/steps")
    row = np.abs(propagator.matrix[:, level]) ** 2
    leaked = float(row[int(math.floor(_LEAK_FLOOR * dim)):].sum())
    if leaked > _LEAK_TOL:
        warnings.warn(
            f"{leaked:.2e} of the mass beyond {_LEAK_FLOOR:.0%} of the basis; "
            f"raise dim (got {dim})",
            BasisLeakWarning,
            stacklevel=2,
        )
    return row
