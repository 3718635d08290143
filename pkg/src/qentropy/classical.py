"""Exact classical solution of the linearly driven harmonic oscillator.

Units are fixed to m = omega = hbar = 1, so the phase-space volume
enclosed by an orbit equals its energy and a single non-negative number
("volume" below) labels each orbit.  A cyclic force f(t) acting on
[0, duration] maps an orbit of volume ``v`` and phase ``phi`` to

    v_final = v + w + 2*sqrt(v*w)*cos(duration - phi - theta)

where the complex drive response

    response = integral_0^duration f(t) exp(i t) dt

fixes the work ``w = |response|**2 / 2`` and the phase offset
``theta = arg(response)``.  Averaging over the initial phase gives the
transition kernel between volumes, its first two moments (v + w and
2*v*w), and the log-average ln(max(v, w)), which is the microcanonical
entropy after the drive.

Half-sine pulses f(t) = amplitude*sin(pi*t/duration) admit closed
forms; arbitrary pulses enter as tabulated samples.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.integrate import simpson

from .quadrature import QuadratureWarning, integrate_left_singular, periodic_average

#: Series branch half-width around duration = pi where the closed-form
#: half-sine work degenerates to 0/0; the direct formula loses ~6 digits
#: inside this window.
SERIES_WINDOW = 1e-3

#: sup over durations of work/amplitude**2 for the half-sine pulse,
#: attained near duration 4.2953; recomputed by
#: :func:`work_bound_coefficient` and rounded up in the last digit.
WORK_BOUND_COEFFICIENT = 1.4714850659

_QUAD_ERROR_BOUND = 1e-8
_CANONICAL_N_HALF = 256


@dataclass(frozen=True)
class HalfSineDrive:
    """Half-sine pulse: amplitude * sin(pi*t/duration) on [0, duration]."""

    amplitude: float
    duration: float

    def __post_init__(self):
        if self.duration <= 0.0:
            raise ValueError("duration must be positive")

    def force(self, t):
        t = np.asarray(t, dtype=float)
        inside = (t >= 0.0) & (t <= self.duration)
        out = np.where(
            inside, self.amplitude * np.sin(math.pi * t / self.duration), 0.0
        )
        return out if out.ndim else float(out)


@dataclass(frozen=True)
class TabulatedDrive:
    """Force sampled on a uniform grid over [0, duration]; zero outside."""

    samples: np.ndarray
    duration: float

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float)
        if s.ndim != 1 or s.size < 3:
            raise ValueError("need at least 3 samples")
        if self.duration <= 0.0:
            raise ValueError("duration must be positive")
        s = s.copy()
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    def force(self, t):
        t = np.asarray(t, dtype=float)
        grid = np.linspace(0.0, self.duration, self.samples.size)
        out = np.where(
            (t >= 0.0) & (t <= self.duration),
            np.interp(t, grid, self.samples),
            0.0,
        )
        return out if out.ndim else float(out)


@dataclass(frozen=True)
class WorkDescriptor:
    """Drive response at the oscillator frequency and derived work/phase."""

    response: complex
    work: float
    phase: float

    @classmethod
    def from_response(cls, response: complex) -> "WorkDescriptor":
        work = 0.5 * abs(response) ** 2
        phase = math.atan2(response.imag, response.real)
        if phase == -math.pi:  # keep phase in (-pi, pi]
            phase = math.pi
        return cls(complex(response), work, phase)


class KernelSupport(NamedTuple):
    """Reachable interval of final volumes from one initial orbit."""

    lower: float
    upper: float


class MicrocanonicalStats(NamedTuple):
    mean: float
    variance: float
    log_mean: float


def _half_sine_response(amplitude: float, duration: float) -> complex:
    eps = duration - math.pi
    if abs(eps) < SERIES_WINDOW:
        # (exp(i*eps) - 1)/eps by series; exact to machine eps in the window
        z = 1j * eps
        series = 1j * (1.0 + z / 2.0 + z**2 / 6.0 + z**3 / 24.0 + z**4 / 120.0)
        return amplitude * math.pi * duration * series / (2.0 * math.pi + eps)
    return (
        amplitude
        * math.pi
        * duration
        * (1.0 + cmath.exp(1j * duration))
        / (math.pi**2 - duration**2)
    )


def drive_response(drive) -> WorkDescriptor:
    """Fourier-type response of the drive at the oscillator frequency.

    Half-sine drives use the closed form (with a series branch near
    duration = pi where it becomes 0/0); tabulated drives use composite
    Simpson quadrature at the grid resolution.
    """
    if isinstance(drive, HalfSineDrive):
        return WorkDescriptor.from_response(
            _half_sine_response(drive.amplitude, drive.duration)
        )
    if isinstance(drive, TabulatedDrive):
        grid = np.linspace(0.0, drive.duration, drive.samples.size)
        integrand = drive.samples * np.exp(1j * grid)
        return WorkDescriptor.from_response(complex(simpson(integrand, x=grid)))
    raise TypeError(f"unsupported drive type: {type(drive).__name__}")


def _work_half_sine_direct(amplitude: float, duration: float) -> float:
    """Unguarded closed form; 0/0 at duration = pi. Kept for validation."""
    return (
        amplitude**2
        * math.pi**2
        * duration**2
        * (1.0 + math.cos(duration))
        / (math.pi**2 - duration**2) ** 2
    )


def work_half_sine(amplitude: float, duration: float) -> float:
    """Work done by the half-sine pulse as a function of its duration.

    Uses the closed form
    ``amplitude**2 pi**2 T**2 (1 + cos T) / (pi**2 - T**2)**2`` with a
    fourth-order Taylor branch for |T - pi| < 1e-3, whose leading value
    is ``amplitude**2 pi**2 / 8``.
    """
    if duration <= 0.0:
        raise ValueError("duration must be positive")
    eps = duration - math.pi
    if abs(eps) < SERIES_WINDOW:
        half_shifted = 0.5 - eps**2 / 24.0 + eps**4 / 720.0  # (1-cos eps)/eps**2
        return (
            amplitude**2
            * math.pi**2
            * (math.pi + eps) ** 2
            * half_shifted
            / (2.0 * math.pi + eps) ** 2
        )
    return _work_half_sine_direct(amplitude, duration)


def work_bound_coefficient(points: int = 400_000, t_max: float = 200.0) -> float:
    """Recompute sup_T work/amplitude**2 by scan plus golden refinement.

    Derivation of :data:`WORK_BOUND_COEFFICIENT`; the supremum sits near
    duration 4.2953, away from the removable singularity at pi.
    """
    grid = np.linspace(1e-3, t_max, points)
    vals = np.array([work_half_sine(1.0, t) for t in grid])
    i = int(vals.argmax())
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, points - 1)]
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c, d = b - inv_phi * (b - a), a + inv_phi * (b - a)
    while b - a > 1e-12:
        if work_half_sine(1.0, c) > work_half_sine(1.0, d):
            b, d = d, c
            c = b - inv_phi * (b - a)
        else:
            a, c = c, d
            d = a + inv_phi * (b - a)
    return work_half_sine(1.0, 0.5 * (a + b))


def kernel_support(initial_volume: float, work: float) -> KernelSupport:
    """Interval of final volumes reachable from ``initial_volume``."""
    if initial_volume < 0.0 or work < 0.0:
        raise ValueError("volumes and work must be non-negative")
    root = math.sqrt(initial_volume) - math.sqrt(work)
    return KernelSupport(root * root, (math.sqrt(initial_volume) + math.sqrt(work)) ** 2)


def final_volume(initial_volume: float, initial_phase, descriptor: WorkDescriptor,
                 duration: float):
    """Final enclosed volume of one orbit after the drive.

    Broadcasts over ``initial_phase``; every output lies inside
    :func:`kernel_support` bounds.
    """
    if initial_volume < 0.0:
        raise ValueError("initial volume must be non-negative")
    phase = np.asarray(initial_phase, dtype=float)
    out = (
        initial_volume
        + descriptor.work
        + 2.0
        * math.sqrt(initial_volume * descriptor.work)
        * np.cos(duration - phase - descriptor.phase)
    )
    return out if out.ndim else float(out)


def kernel_density(final_vol, initial_volume: float, work: float):
    """Transition density between enclosed volumes.

    ``(1/pi) / sqrt(4*v*w - (v' - v - w)**2)`` strictly inside the
    support, 0 outside; the endpoints themselves map to 0 (the
    singularity there is integrable and carries no mass).  Degenerate
    drives (``work == 0``) or orbits (``initial_volume == 0``) produce a
    delta distribution and are rejected; callers must special-case them.
    """
    if initial_volume <= 0.0 or work <= 0.0:
        raise ValueError("kernel density needs initial_volume > 0 and work > 0")
    v = np.asarray(final_vol, dtype=float)
    disc = 4.0 * initial_volume * work - (v - initial_volume - work) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        dens = np.where(disc > 0.0, 1.0 / (math.pi * np.sqrt(np.abs(disc))), 0.0)
    return dens if dens.ndim else float(dens)


def microcanonical_stats(initial_volume: float, work: float) -> MicrocanonicalStats:
    """Closed-form phase-averaged moments of the final volume.

    mean = v + w, variance = 2*v*w, log-mean = ln(max(v, w)).  The
    log-mean requires max(v, w) > 0.
    """
    if initial_volume < 0.0 or work < 0.0:
        raise ValueError("volumes and work must be non-negative")
    top = max(initial_volume, work)
    if top <= 0.0:
        raise ValueError("log-mean undefined for initial_volume = work = 0")
    return MicrocanonicalStats(
        mean=initial_volume + work,
        variance=2.0 * initial_volume * work,
        log_mean=math.log(top),
    )


def microcanonical_quadrature(initial_volume: float, work: float,
                              nodes: int) -> MicrocanonicalStats:
    """Phase-average moments by quadrature instead of the closed forms.

    The mean and variance use the periodic trapezoidal rule (exact for
    these trigonometric integrands).  The log-average is split at its
    singular phase and integrated with a tanh-sinh rule, which keeps
    full accuracy through the logarithmic blow-up that appears on the
    ``initial_volume == work`` diagonal.  A :class:`QuadratureWarning`
    is emitted if the internal error estimate exceeds 1e-8.
    """
    if nodes < 16:
        raise ValueError("nodes must be >= 16")
    if initial_volume < 0.0 or work < 0.0:
        raise ValueError("volumes and work must be non-negative")
    if max(initial_volume, work) <= 0.0:
        raise ValueError("log-mean undefined for initial_volume = work = 0")
    if work == 0.0:
        return MicrocanonicalStats(initial_volume, 0.0, math.log(initial_volume))
    if initial_volume == 0.0:
        return MicrocanonicalStats(work, 0.0, math.log(work))

    spread = 2.0 * math.sqrt(initial_volume * work)
    center = initial_volume + work

    def volume(phi):
        return center + spread * np.cos(phi)

    mean = periodic_average(volume, nodes)
    second = periodic_average(lambda phi: volume(phi) ** 2, nodes)
    variance = second - mean * mean

    # (1/2pi) int_0^2pi ln(center + spread cos phi) dphi, split at the
    # singular phase phi = pi and written against the exact gap
    # (sqrt(v) - sqrt(w))**2 to avoid cancellation near the diagonal.
    gap = (math.sqrt(initial_volume) - math.sqrt(work)) ** 2

    def log_integrand(u):
        return np.log(gap + 2.0 * spread * np.sin(0.5 * u) ** 2)

    raw, err = integrate_left_singular(log_integrand, math.pi, max(nodes // 2, 8))
    if err > _QUAD_ERROR_BOUND:
        warnings.warn(
            f"log-average estimate error {err:.2e} above {_QUAD_ERROR_BOUND:.0e}; "
            f"increase nodes (got {nodes})",
            QuadratureWarning,
            stacklevel=2,
        )
    return MicrocanonicalStats(mean, variance, raw / math.pi)


def canonical_entropy_change(inv_temperature: float, work: float) -> float:
    """Entropy change of a thermal orbit ensemble driven with given work.

    Evaluates ``-s * integral_0^1 exp(-s*x) ln(x) dx`` with
    ``s = inv_temperature * work`` using an endpoint-robust tanh-sinh
    rule; the result is non-negative, tends to ``s`` as ``s -> 0``, and
    is exactly 0 for an undriven ensemble.
    """
    if inv_temperature <= 0.0:
        raise ValueError("inverse temperature must be positive")
    if work < 0.0:
        raise ValueError("work must be non-negative")
    if work == 0.0:
        return 0.0
    s = inv_temperature * work

    def integrand(x):
        return np.exp(-s * x) * np.log(x)

    value, _ = integrate_left_singular(integrand, 1.0, _CANONICAL_N_HALF)
    return -s * value


def sample_final_volumes(initial_volume: float, descriptor: WorkDescriptor,
                         duration: float, count: int, seed: int) -> np.ndarray:
    """Monte Carlo draw of final volumes from uniform initial phases.

    Deterministic per seed; serves as an independent check of
    :func:`kernel_density` and the moment formulas.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = np.random.default_rng(seed)
    phases = rng.uniform(0.0, 2.0 * math.pi, size=count)
    return np.asarray(final_volume(initial_volume, phases, descriptor, duration))
