"""Synthetic inner-liner accelerometer traces with exact per-turn ground truth.

Conventions
-----------
The wheel rolls in +x at constant forward speed, z is up and y is the spin
axis.  A liner point is tracked by its angle ``psi`` measured from the
downward vertical; ``psi`` decreases at the rolling rate
``omega = speed / effective_radius`` and the trace starts with the point at
top dead centre, so the first patch pass happens half a period in.  Outside
the contact window (|psi| < contact half-angle) the point rides the wheel
circle around the moving centre; inside it the point is pressed flat onto
the road plane, turning the circular arc into the straight flat-spot
segment.

The lateral coordinate follows an adhesion-only brush profile: zero outside
the patch, tan(slip angle) times the distance travelled through the patch
inside it, and a raised-cosine relaxation back to zero over
``release_angle`` after the exit.

Sensor axes rotate with the wheel: radial is positive toward the wheel
centre, tangential is signed so that the patch-entry spike is the positive
extremum (that is the leading-edge convention the edge detector relies on),
lateral is +y.  Acceleration is the second central difference of the exact
trajectory, so downstream double integration sees a signal self-consistent
to discretisation error.  White noise and a constant bias per axis are
added last; a fixed seed reproduces the trace bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import GeometryError, ResolutionError, ScenarioError
from .geometry import TireGeometry, derive_geometry
from .scenario import SensorSpec, TireScenario
from .units import M_TO_MM

# Minimum samples per wheel revolution for the patch to be resolvable.
MIN_SAMPLES_PER_TURN = 20


@dataclass(frozen=True)
class AccelTrace:
    """Uniformly sampled tri-axial acceleration, m/s^2.

    ``samples`` has shape (n, 3) with columns tangential, lateral, radial.
    """

    sample_rate: float
    samples: np.ndarray
    duration: float

    def __post_init__(self) -> None:
        samples = np.asarray(self.samples, dtype=float)
        if samples.ndim != 2 or samples.shape[1] != 3:
            raise ScenarioError("trace samples must have shape (n, 3)")
        if samples.shape[0] != round(self.duration * self.sample_rate):
            raise ScenarioError("sample count does not match duration * sample_rate")
        if not np.all(np.isfinite(samples)):
            raise ScenarioError("trace samples must be finite")
        object.__setattr__(self, "samples", samples)

    def __len__(self) -> int:
        return self.samples.shape[0]

    @property
    def a_tangential(self) -> np.ndarray:
        return self.samples[:, 0]

    @property
    def a_lateral(self) -> np.ndarray:
        return self.samples[:, 1]

    @property
    def a_radial(self) -> np.ndarray:
        return self.samples[:, 2]

    @property
    def times(self) -> np.ndarray:
        return np.arange(len(self)) / self.sample_rate


@dataclass(frozen=True)
class GroundTruth:
    """Exact per-turn truth for every simulated revolution.

    All arrays have one entry per turn.  ``true_peak_lateral_mm`` and
    ``true_lateral_slope`` are signed (odd in slip angle).
    """

    true_deflection_mm: np.ndarray
    true_patch_chord_m: np.ndarray
    true_patch_arc_m: np.ndarray
    contact_half_angle_rad: np.ndarray
    true_peak_lateral_mm: np.ndarray
    true_lateral_slope: np.ndarray
    turn_start_time_s: np.ndarray
    wheel_period_s: np.ndarray

    @property
    def n_turns(self) -> int:
        return len(self.turn_start_time_s)

    def __len__(self) -> int:
        return self.n_turns


def wheel_period(scenario: TireScenario, geometry: TireGeometry | None = None) -> float:
    """Revolution period in seconds at the scenario's speed and wear state."""
    geom = geometry if geometry is not None else derive_geometry(scenario)
    return 2.0 * math.pi * geom.effective_radius / scenario.vehicle_speed


def _liner_positions(
    t: np.ndarray,
    scenario: TireScenario,
    geom: TireGeometry,
    omega: float,
    release_angle: float,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Exact (x, y, z) of the liner point plus its wrapped angle at times t."""
    r = geom.effective_radius
    hub_height = r - geom.deflection
    theta_c = geom.contact_half_angle

    psi = np.pi - omega * t
    psi = np.mod(psi + np.pi, 2.0 * np.pi) - np.pi  # wrap to [-pi, pi)

    x = scenario.vehicle_speed * t + r * np.sin(psi)
    # Pressing the sub-road part of the circle onto the road plane creates
    # the straight flat-spot segment.
    z = np.maximum(hub_height - r * np.cos(psi), 0.0)

    y = np.zeros_like(t)
    tan_slip = math.tan(math.radians(scenario.slip_angle))
    if tan_slip != 0.0:
        in_patch = np.abs(psi) < theta_c
        # Deflection grows with the distance covered through the patch,
        # measured along the chord; it peaks at tan(slip) * chord on exit.
        y[in_patch] = tan_slip * r * (math.sin(theta_c) - np.sin(psi[in_patch]))
        in_release = (psi <= -theta_c) & (psi > -(theta_c + release_angle))
        progress = (-theta_c - psi[in_release]) / release_angle
        y[in_release] = (
            tan_slip * geom.patch_chord * 0.5 * (1.0 + np.cos(np.pi * progress))
        )
    return x, y, z, psi


def simulate(
    scenario: TireScenario, sensor: SensorSpec, n_turns: int
) -> tuple[AccelTrace, GroundTruth]:
    """Simulate ``n_turns`` revolutions and return the trace plus truth.

    Raises
    ------
    GeometryError
        Propagated from geometry derivation, or when the release window
        does not fit between patch exit and the top of the wheel.
    ResolutionError
        When the sample rate resolves fewer than 20 samples per turn.
    """
    if n_turns < 1:
        raise ScenarioError("n_turns must be at least 1")
    geom = derive_geometry(scenario)
    omega = scenario.vehicle_speed / geom.effective_radius
    period = 2.0 * math.pi / omega
    if sensor.sample_rate < MIN_SAMPLES_PER_TURN / period:
        raise ResolutionError(
            f"sample rate {sensor.sample_rate:.0f} Hz gives fewer than "
            f"{MIN_SAMPLES_PER_TURN} samples per {period * 1e3:.1f} ms turn"
        )
    release_angle = (
        scenario.release_angle
        if scenario.release_angle is not None
        else geom.contact_half_angle
    )
    if geom.contact_half_angle + release_angle >= math.pi:
        raise GeometryError("release window extends past the top of the wheel")

    fs = sensor.sample_rate
    duration = n_turns * period
    n = round(duration * fs)
    dt = 1.0 / fs

    # Positions at (i - 1) * dt for i in 0..n+1, so the second central
    # difference lands acceleration samples exactly on t = i * dt.
    t_pos = (np.arange(n + 2) - 1.0) * dt
    x, y, z, psi = _liner_positions(t_pos, scenario, geom, omega, release_angle)

    ax = (x[2:] - 2.0 * x[1:-1] + x[:-2]) * fs * fs
    ay = (y[2:] - 2.0 * y[1:-1] + y[:-2]) * fs * fs
    az = (z[2:] - 2.0 * z[1:-1] + z[:-2]) * fs * fs
    psi_c = psi[1:-1]

    sin_psi = np.sin(psi_c)
    cos_psi = np.cos(psi_c)
    a_radial = -ax * sin_psi + az * cos_psi
    a_tangential = ax * cos_psi + az * sin_psi
    a_lateral = ay

    samples = np.column_stack([a_tangential, a_lateral, a_radial])
    rng = np.random.default_rng(sensor.seed)
    if sensor.noise_std > 0.0:
        samples = samples + rng.normal(0.0, sensor.noise_std, samples.shape)
    samples = samples + np.asarray(sensor.dc_bias, dtype=float)

    trace = AccelTrace(sample_rate=fs, samples=samples, duration=duration)

    ones = np.ones(n_turns)
    tan_slip = math.tan(math.radians(scenario.slip_angle))
    truth = GroundTruth(
        true_deflection_mm=geom.deflection_mm * ones,
        true_patch_chord_m=geom.patch_chord * ones,
        true_patch_arc_m=geom.patch_arc * ones,
        contact_half_angle_rad=geom.contact_half_angle * ones,
        true_peak_lateral_mm=tan_slip * geom.patch_chord * M_TO_MM * ones,
        true_lateral_slope=tan_slip * ones,
        turn_start_time_s=np.arange(n_turns) * period,
        wheel_period_s=period * ones,
    )
    return trace, truth
