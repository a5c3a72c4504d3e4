"""Synthetic perception backend: scenes, a pinhole detector, localization.

A Scene holds labeled objects and the hand in world coordinates (the world
frame is aligned with the user frame), plus a camera pose. ``observe``
plays the role of the real detector stack: it projects everything through
the pinhole model, adds seeded Gaussian pixel/depth noise, and silently
drops whatever falls outside the frustum, which is how real detectors fail.
``localize`` runs the actual pipeline under test: deproject the target and
hand detections, rotate both into the user frame, and difference them.

The camera translation cancels in the hand-target difference, so localize
needs only the orientation quaternion. The vertical component of the
displacement is computed but deliberately left out of the result: the
four-motor encoding covers the horizontal plane only. It is logged at DEBUG
for future use.
"""

from __future__ import annotations

import json
import logging
import math
import random
from dataclasses import dataclass
from pathlib import Path

from .encoding import DisplacementUCS
from .errors import BehindCamera, HandNotDetected, TargetNotDetected
from .geometry import (
    CameraIntrinsics,
    PointCCS,
    PointUCS,
    Quaternion,
    camera_to_user,
    deproject,
    project,
    quat_to_rotation,
)

logger = logging.getLogger(__name__)

HAND_LABEL = "hand"

DEFAULT_INTRINSICS = CameraIntrinsics(
    fx=616.0, fy=616.0, cx=320.0, cy=240.0, width=640, height=480
)


@dataclass(frozen=True)
class ObservationNoise:
    """Detector noise model: pixel jitter and depth jitter, both Gaussian."""

    sigma_px: float = 0.0
    sigma_depth: float = 0.0

    def __post_init__(self):
        if self.sigma_px < 0 or self.sigma_depth < 0:
            raise ValueError("noise sigmas must be non-negative")


@dataclass(frozen=True)
class CameraPose:
    position: PointUCS
    orientation: Quaternion


@dataclass(frozen=True)
class Scene:
    """Labeled world objects, the hand, and the camera pose."""

    objects: tuple[tuple[str, PointUCS], ...]
    hand: PointUCS
    camera_pose: CameraPose

    def __post_init__(self):
        labels = [label for label, _ in self.objects]
        if len(set(labels)) != len(labels):
            raise ValueError("object labels must be unique")
        if HAND_LABEL in labels:
            raise ValueError(f"label {HAND_LABEL!r} is reserved for the hand")
        for _, p in list(self.objects) + [(HAND_LABEL, self.hand)]:
            if not all(math.isfinite(c) for c in (p.x, p.y, p.z)):
                raise ValueError("scene positions must be finite")


@dataclass(frozen=True)
class Detection:
    """One detector output: pixel center, depth, and a confidence score."""

    label: str
    u: float
    v: float
    depth: float
    confidence: float = 1.0


def _world_to_camera(p: PointUCS, pose: CameraPose) -> PointCCS:
    rel = (
        p.x - pose.position.x,
        p.y - pose.position.y,
        p.z - pose.position.z,
    )
    out = quat_to_rotation(pose.orientation).transpose().apply(rel)
    return PointCCS(float(out[0]), float(out[1]), float(out[2]))


def observe(
    scene: Scene,
    k: CameraIntrinsics,
    noise: ObservationNoise,
    rng_seed: int,
) -> list[Detection]:
    """Project the scene into detections, with dropouts instead of errors.

    Anything behind the camera or off the sensor (before or after noise) is
    simply absent from the result, matching real detector behavior.
    """
    rng = random.Random(rng_seed)
    detections: list[Detection] = []
    for label, p_world in list(scene.objects) + [(HAND_LABEL, scene.hand)]:
        p_cam = _world_to_camera(p_world, scene.camera_pose)
        try:
            u, v, depth = project(p_cam, k)
        except BehindCamera:
            continue
        if not k.contains(u, v):
            continue
        u += rng.gauss(0.0, noise.sigma_px)
        v += rng.gauss(0.0, noise.sigma_px)
        depth += rng.gauss(0.0, noise.sigma_depth)
        if not k.contains(u, v) or depth <= 0:
            continue
        detections.append(Detection(label=label, u=u, v=v, depth=depth))
    return detections


def localize(
    detections: list[Detection],
    k: CameraIntrinsics,
    q: Quaternion,
    target_label: str,
) -> DisplacementUCS:
    """Hand-to-target displacement in the user frame (horizontal plane)."""
    by_label = {d.label: d for d in detections}
    target = by_label.get(target_label)
    if target is None:
        raise TargetNotDetected(f"no detection labeled {target_label!r}")
    hand = by_label.get(HAND_LABEL)
    if hand is None:
        raise HandNotDetected("no hand detection present")

    target_ucs = camera_to_user(deproject(target.u, target.v, target.depth, k), q)
    hand_ucs = camera_to_user(deproject(hand.u, hand.v, hand.depth, k), q)
    dz = target_ucs.z - hand_ucs.z
    logger.debug("vertical displacement %.4f m (not encoded)", dz)
    return DisplacementUCS(target_ucs.x - hand_ucs.x, target_ucs.y - hand_ucs.y)


# --- scene files -----------------------------------------------------------

def scene_to_dict(scene: Scene) -> dict:
    return {
        "objects": [
            {"label": label, "position": [p.x, p.y, p.z]} for label, p in scene.objects
        ],
        "hand": [scene.hand.x, scene.hand.y, scene.hand.z],
        "camera_pose": {
            "position": [
                scene.camera_pose.position.x,
                scene.camera_pose.position.y,
                scene.camera_pose.position.z,
            ],
            "orientation": [
                scene.camera_pose.orientation.w,
                scene.camera_pose.orientation.x,
                scene.camera_pose.orientation.y,
                scene.camera_pose.orientation.z,
            ],
        },
    }


def scene_from_dict(data: dict) -> Scene:
    return Scene(
        objects=tuple(
            (obj["label"], PointUCS(*obj["position"])) for obj in data["objects"]
        ),
        hand=PointUCS(*data["hand"]),
        camera_pose=CameraPose(
            position=PointUCS(*data["camera_pose"]["position"]),
            orientation=Quaternion(*data["camera_pose"]["orientation"]),
        ),
    )


def save_scene(scene: Scene, path: str | Path) -> None:
    Path(path).write_text(json.dumps(scene_to_dict(scene), indent=2) + "\n")


def load_scene(path: str | Path) -> Scene:
    return scene_from_dict(json.loads(Path(path).read_text()))


# --- default scene generator -----------------------------------------------

TABLETOP_LABELS = ("red", "green", "blue", "yellow", "white")

# Camera 1 m behind the table center, 0.4 m up, looking along +y and
# pitched slightly down so the tabletop fills the frame.
_PITCH_DOWN_RAD = 0.35


def _default_camera_pose() -> CameraPose:
    # CCS->UCS for a level forward-looking camera: -90 deg about x...
    level = Quaternion(math.sqrt(0.5), -math.sqrt(0.5), 0.0, 0.0)
    # ...then pitch the view down about the user's x axis.
    half = _PITCH_DOWN_RAD / 2.0
    pitch = Quaternion(math.cos(half), -math.sin(half), 0.0, 0.0)
    return CameraPose(position=PointUCS(0.0, -1.0, 0.4), orientation=pitch.compose(level))


def generate_tabletop_scene(
    seed: int,
    table_width: float = 0.6,
    table_depth: float = 0.4,
    spacing_range: tuple[float, float] = (0.05, 0.06),
) -> Scene:
    """Five labeled blocks on a tabletop, plus the hand at the front edge.

    Blocks are chained so each sits 5-6 cm from the previous one and no two
    come closer than the lower spacing bound. (All ten pairwise distances
    cannot land in [5, 6] cm for five coplanar blocks, so the chain spacing
    is the generated quantity.)
    """
    rng = random.Random(seed)
    lo, hi = spacing_range
    half_w, half_d = table_width / 2.0, table_depth / 2.0

    def on_table(x, y):
        return -half_w <= x <= half_w and -half_d <= y <= half_d

    for _ in range(200):  # rejection loop over whole layouts
        pts = [(rng.uniform(-half_w * 0.6, half_w * 0.6), rng.uniform(-half_d * 0.6, half_d * 0.6))]
        ok = True
        while len(pts) < len(TABLETOP_LABELS):
            for _ in range(100):
                ang = rng.uniform(0.0, 2.0 * math.pi)
                gap = rng.uniform(lo, hi)
                x = pts[-1][0] + gap * math.cos(ang)
                y = pts[-1][1] + gap * math.sin(ang)
                if on_table(x, y) and all(math.hypot(x - px, y - py) >= lo for px, py in pts):
                    pts.append((x, y))
                    break
            else:
                ok = False
                break
        if ok:
            break
    if not ok:
        raise RuntimeError("could not place blocks; widen the table or spacing")

    objects = tuple(
        (label, PointUCS(x, y, 0.0)) for label, (x, y) in zip(TABLETOP_LABELS, pts)
    )
    hand = PointUCS(rng.uniform(-half_w, half_w), -half_d - 0.05, 0.0)
    return Scene(objects=objects, hand=hand, camera_pose=_default_camera_pose())
