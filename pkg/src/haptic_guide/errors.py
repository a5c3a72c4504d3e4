"""Exception types shared across the package.

Each error maps to one contract violation; callers are expected to catch the
specific class, not a broad base, except for CLI top-level handling.
"""


class HapticGuideError(Exception):
    """Base class for all package errors."""


class ZeroNormQuaternion(HapticGuideError):
    """Quaternion norm is (numerically) zero; no rotation is defined."""


class NonUnitQuaternion(HapticGuideError):
    """Quaternion norm deviates from 1 beyond the silent-normalization band."""


class NonPositiveDepth(HapticGuideError):
    """Deprojection requires depth > 0."""


class PixelOutOfBounds(HapticGuideError):
    """Pixel coordinate lies outside the sensor."""


class BehindCamera(HapticGuideError):
    """Projection requires a point in front of the camera (z > 0)."""


class InvalidConfig(HapticGuideError):
    """A configuration object violates its invariants."""


class InvalidPeriod(HapticGuideError):
    """PWM scheduling requires period > 0 and horizon >= period."""


class TargetNotDetected(HapticGuideError):
    """The requested target label is absent from the detection list."""


class HandNotDetected(HapticGuideError):
    """The hand detection is absent from the detection list."""


class EmptyInput(HapticGuideError):
    """An aggregate operation received no records."""


class DegenerateTrace(HapticGuideError):
    """A trace has too few samples to compute path metrics."""


class NoActiveTrial(HapticGuideError):
    """A trial-scoped message arrived outside an active trial."""


class TrialAlreadyActive(HapticGuideError):
    """start requested while a trial is already running in the session."""
