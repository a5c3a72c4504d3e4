"""Rotation and camera geometry for the localization pipeline.

Conventions
-----------
- Quaternions are stored as (w, x, y, z), i.e. the scalar part first.
  ``quat_to_rotation`` builds the body-to-navigation direction cosine matrix
  from the quaternion components; the quaternion is taken to rotate
  camera-frame vectors into user-frame vectors. Any fixed camera-mount axis
  permutation is expressed as a calibration quaternion composed onto the
  posture quaternion (see ``Quaternion.compose``), keeping the transform
  itself a pure rotation.
- The camera coordinate system (CCS) follows the computer-vision convention:
  +x right in the image, +y down, +z along the optical axis.
- The user coordinate system (UCS) is body-fixed: +x is the user's right,
  +y forward, +z up.
- The pinhole model is distortion-free; pixel (u, v) has its origin at the
  top-left corner of the sensor.

All functions are pure over immutable value types and safe for concurrent
use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BehindCamera,
    NonPositiveDepth,
    NonUnitQuaternion,
    PixelOutOfBounds,
    ZeroNormQuaternion,
)

# |norm - 1| below this is silently normalized; beyond it the caller must
# normalize explicitly (likely corrupt sensor data).
_NORM_SILENT_BAND = 1e-2
_NORM_ZERO = 1e-12

# Camera mounted level and forward on the head: CCS +x -> UCS +x,
# CCS +y (down) -> UCS -z, CCS +z (optical axis) -> UCS +y.
# Equals a -90 degree rotation about the x axis.
MOUNT_CALIBRATION = None  # set below, after Quaternion is defined


@dataclass(frozen=True)
class Quaternion:
    """Unit-intent quaternion q = w + x*i + y*j + z*k."""

    w: float
    x: float
    y: float
    z: float

    def norm(self) -> float:
        return math.sqrt(self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z)

    def normalized(self) -> "Quaternion":
        """Scale to unit norm; raises ZeroNormQuaternion for a null input."""
        n = self.norm()
        if n <= _NORM_ZERO:
            raise ZeroNormQuaternion(f"quaternion norm {n!r} is not invertible")
        return Quaternion(self.w / n, self.x / n, self.y / n, self.z / n)

    def conjugate(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def compose(self, other: "Quaternion") -> "Quaternion":
        """Hamilton product self * other (apply ``other`` first, then self)."""
        w1, x1, y1, z1 = self.w, self.x, self.y, self.z
        w2, x2, y2, z2 = other.w, other.x, other.y, other.z
        return Quaternion(
            w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
            w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
            w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
            w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
        )

    @staticmethod
    def identity() -> "Quaternion":
        return Quaternion(1.0, 0.0, 0.0, 0.0)


MOUNT_CALIBRATION = Quaternion(math.sqrt(0.5), -math.sqrt(0.5), 0.0, 0.0)


@dataclass(frozen=True)
class RotationMatrix:
    """3x3 rotation matrix, validated orthonormal with determinant +1."""

    m: np.ndarray

    _ORTHO_TOL = 1e-9

    def __post_init__(self):
        a = np.asarray(self.m, dtype=float)
        if a.shape != (3, 3):
            raise ValueError(f"rotation matrix must be 3x3, got {a.shape}")
        err = np.abs(a.T @ a - np.eye(3)).max()
        if err > self._ORTHO_TOL:
            raise ValueError(f"matrix is not orthonormal (max residual {err:.3e})")
        det = float(np.linalg.det(a))
        if abs(det - 1.0) > self._ORTHO_TOL:
            raise ValueError(f"matrix determinant {det!r} is not +1")
        object.__setattr__(self, "m", a)

    def apply(self, v) -> np.ndarray:
        return self.m @ np.asarray(v, dtype=float)

    def transpose(self) -> "RotationMatrix":
        return RotationMatrix(self.m.T.copy())


@dataclass(frozen=True)
class PointCCS:
    """Point in the camera coordinate system, meters."""

    x: float
    y: float
    z: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)


@dataclass(frozen=True)
class PointUCS:
    """Point in the user coordinate system, meters."""

    x: float
    y: float
    z: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)


@dataclass(frozen=True)
class CameraIntrinsics:
    """Pinhole intrinsics: focal lengths and principal point in pixels."""

    fx: float
    fy: float
    cx: float
    cy: float
    width: int
    height: int

    def __post_init__(self):
        if self.fx <= 0 or self.fy <= 0:
            raise ValueError("focal lengths must be positive")
        if not (0 <= self.cx < self.width) or not (0 <= self.cy < self.height):
            raise ValueError("principal point must lie on the sensor")

    def contains(self, u: float, v: float) -> bool:
        return 0.0 <= u < self.width and 0.0 <= v < self.height


def _checked_unit(q: Quaternion) -> Quaternion:
    n = q.norm()
    if n <= _NORM_ZERO:
        raise ZeroNormQuaternion(f"quaternion norm {n!r} is not invertible")
    if abs(n - 1.0) > _NORM_SILENT_BAND:
        raise NonUnitQuaternion(
            f"quaternion norm {n:.6f} deviates from 1 by more than {_NORM_SILENT_BAND}; "
            "normalize explicitly"
        )
    return Quaternion(q.w / n, q.x / n, q.y / n, q.z / n)


def quat_to_rotation(q: Quaternion) -> RotationMatrix:
    """Direction cosine matrix of the (normalized) quaternion.

    Raises ZeroNormQuaternion for a null quaternion and NonUnitQuaternion
    when the norm is off by more than 1e-2 (smaller deviations are silently
    normalized).
    """
    q = _checked_unit(q)
    q0, q1, q2, q3 = q.w, q.x, q.y, q.z
    m = np.array(
        [
            [q0 * q0 + q1 * q1 - q2 * q2 - q3 * q3, 2 * (q1 * q2 - q0 * q3), 2 * (q1 * q3 + q0 * q2)],
            [2 * (q1 * q2 + q0 * q3), q0 * q0 - q1 * q1 + q2 * q2 - q3 * q3, 2 * (q2 * q3 - q0 * q1)],
            [2 * (q1 * q3 - q0 * q2), 2 * (q2 * q3 + q0 * q1), q0 * q0 - q1 * q1 - q2 * q2 + q3 * q3],
        ],
        dtype=float,
    )
    return RotationMatrix(m)


def camera_to_user(p: PointCCS, q: Quaternion) -> PointUCS:
    """Rotate a camera-frame point into the user frame."""
    out = quat_to_rotation(q).apply(p.as_array())
    return PointUCS(float(out[0]), float(out[1]), float(out[2]))


def deproject(u: float, v: float, depth: float, k: CameraIntrinsics) -> PointCCS:
    """Back-project a pixel with known depth into the camera frame."""
    if depth <= 0:
        raise NonPositiveDepth(f"depth must be positive, got {depth!r}")
    if not k.contains(u, v):
        raise PixelOutOfBounds(f"pixel ({u!r}, {v!r}) outside {k.width}x{k.height} sensor")
    return PointCCS(
        (u - k.cx) * depth / k.fx,
        (v - k.cy) * depth / k.fy,
        depth,
    )


def project(p: PointCCS, k: CameraIntrinsics) -> tuple[float, float, float]:
    """Project a camera-frame point to (u, v, depth).

    The result is not bounds-checked; callers decide whether off-sensor
    projections matter (the synthetic detector drops them).
    """
    if p.z <= 0:
        raise BehindCamera(f"point z={p.z!r} is not in front of the camera")
    u = k.fx * p.x / p.z + k.cx
    v = k.fy * p.y / p.z + k.cy
    return u, v, p.z
