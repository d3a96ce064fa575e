"""Multi-blade coordinate (MBC) transform for a three-bladed rotor.

Maps per-blade quantities (pitch angles, root moments) to the fixed frame
(collective, tilt, yaw) and back.  Azimuth is measured in radians with
psi = 0 when blade 1 points vertically upward; blades are numbered in
rotation order, 2*pi/3 apart.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

BLADE_COUNT = 3
BLADE_SPACING = 2.0 * math.pi / BLADE_COUNT
TWO_PI = 2.0 * math.pi


def _wrap(angle: float) -> float:
    """Wrap an angle to [0, 2*pi)."""
    return angle % TWO_PI


@dataclass(frozen=True)
class AzimuthState:
    """Rotor azimuth, tracked through blade 1.

    Parameters
    ----------
    psi_1 : float
        Azimuth of blade 1 [rad], wrapped to [0, 2*pi) on construction.
    """

    psi_1: float

    def __post_init__(self):
        if not math.isfinite(self.psi_1):
            raise ValueError("azimuth must be finite, got %r" % (self.psi_1,))
        object.__setattr__(self, "psi_1", _wrap(self.psi_1))

    @property
    def angles(self) -> tuple[float, float, float]:
        """Azimuth of each blade [rad], wrapped to [0, 2*pi)."""
        return tuple(_wrap(self.psi_1 + b * BLADE_SPACING) for b in range(BLADE_COUNT))


@dataclass(frozen=True)
class BladeTriple:
    """One scalar per blade, with a free-form unit tag (e.g. 'deg', 'N*m')."""

    b1: float
    b2: float
    b3: float
    unit: str = ""

    def as_array(self) -> np.ndarray:
        return np.array([self.b1, self.b2, self.b3], dtype=float)


@dataclass(frozen=True)
class FixedFrameTriple:
    """Collective / tilt / yaw components in the non-rotating frame."""

    collective: float
    tilt: float
    yaw: float
    unit: str = ""

    def as_array(self) -> np.ndarray:
        return np.array([self.collective, self.tilt, self.yaw], dtype=float)


def transform_matrix(az: AzimuthState) -> np.ndarray:
    """Forward MBC matrix T(psi), blade frame -> fixed frame.

    Rows produce (collective, tilt, yaw) from per-blade values:

        T = (2/3) * [[1/2,      1/2,      1/2     ],
                     [cos psi1, cos psi2, cos psi3],
                     [sin psi1, sin psi2, sin psi3]]

    Every entry is bounded by 2/3 in magnitude.
    """
    psi = np.array(az.angles)
    return (2.0 / 3.0) * np.vstack([np.full(3, 0.5), np.cos(psi), np.sin(psi)])


def inverse_matrix(az: AzimuthState) -> np.ndarray:
    """Inverse MBC matrix, fixed frame -> blade frame.

    Row b is [1, cos psi_b, sin psi_b]; analytic inverse of
    ``transform_matrix`` for equally spaced blades (no linear solve needed).
    """
    psi = np.array(az.angles)
    return np.column_stack([np.ones(3), np.cos(psi), np.sin(psi)])


def forward_mbc(az: AzimuthState, blades: BladeTriple) -> FixedFrameTriple:
    """Project per-blade values onto (collective, tilt, yaw).

    Parameters
    ----------
    az : AzimuthState
    blades : BladeTriple
        Per-blade values; the unit tag is carried through unchanged.

    Returns
    -------
    FixedFrameTriple
    """
    c, t, y = transform_matrix(az) @ blades.as_array()
    return FixedFrameTriple(float(c), float(t), float(y), unit=blades.unit)


def inverse_mbc(az: AzimuthState, fixed: FixedFrameTriple) -> BladeTriple:
    """Distribute (collective, tilt, yaw) onto the blades.

    Blade b receives  collective + cos(psi_b) * tilt + sin(psi_b) * yaw.
    Exact round trip with ``forward_mbc`` up to floating-point noise.
    """
    b1, b2, b3 = inverse_matrix(az) @ fixed.as_array()
    return BladeTriple(float(b1), float(b2), float(b3), unit=fixed.unit)


def azimuth_advance(az: AzimuthState, rotor_speed: float, dt: float) -> AzimuthState:
    """Advance the azimuth by one time step.

    Parameters
    ----------
    az : AzimuthState
    rotor_speed : float
        Rotor speed [rad/s], >= 0.
    dt : float
        Time step [s], > 0.

    Returns
    -------
    AzimuthState
        New state with psi_1 wrapped to [0, 2*pi).
    """
    if not (math.isfinite(rotor_speed) and math.isfinite(dt)):
        raise ValueError("rotor_speed and dt must be finite")
    if rotor_speed < 0.0:
        raise ValueError("rotor_speed must be >= 0, got %g" % rotor_speed)
    if dt <= 0.0:
        raise ValueError("dt must be > 0, got %g" % dt)
    return AzimuthState(az.psi_1 + rotor_speed * dt)
