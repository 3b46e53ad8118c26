"""Planar kinematic stand-in for the one-armed crawling robot.

Conventions: the shoulder (servo 1 axis) sits at ``(0, shoulder_height)``
above the ground line ``y = 0``. ``theta1`` is measured from the forward
horizontal; ``theta2`` is the interior elbow angle, so ``theta2 = 180``
means a straight arm. One crawl cycle moves the arm from its rest pose to
the commanded pose and back; if the commanded tip touches the ground it
anchors there and the body is dragged by the tip's horizontal travel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .net import DenormMode
from .train import AngleTargets, TrainingRun


@dataclass(frozen=True)
class ArmGeometry:
    link1_len: float = 5.0
    link2_len: float = 5.0
    shoulder_height: float = 6.0
    contact_tol: float = 0.25  # tip height (cm) counted as ground contact

    def __post_init__(self):
        for name in ("link1_len", "link2_len"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be positive and finite, got {v}")
        if not (math.isfinite(self.shoulder_height) and self.shoulder_height >= 0):
            raise ValueError(f"shoulder_height must be >= 0, got {self.shoulder_height}")
        if not self.contact_tol >= 0:
            raise ValueError("contact_tol must be >= 0")

    @property
    def reach(self) -> float:
        return self.link1_len + self.link2_len


DEFAULT_GEOMETRY = ArmGeometry()
DEFAULT_REST = (90.0, 180.0)


def _wrap_heading(deg: float) -> float:
    h = math.fmod(deg, 360.0)
    if h <= -180.0:
        h += 360.0
    elif h > 180.0:
        h -= 360.0
    return h


@dataclass(frozen=True)
class BodyPose:
    x: float = 0.0
    y: float = 0.0
    heading: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "heading", _wrap_heading(self.heading))


@dataclass(frozen=True)
class CrawlCycleResult:
    displacement: float
    heading_delta: float


def arm_tip(geom: ArmGeometry, theta1_deg: float, theta2_deg: float) -> tuple[float, float]:
    t1 = math.radians(theta1_deg)
    t2 = math.radians(theta1_deg + theta2_deg - 180.0)
    x = geom.link1_len * math.cos(t1) + geom.link2_len * math.cos(t2)
    y = geom.shoulder_height + geom.link1_len * math.sin(t1) + geom.link2_len * math.sin(t2)
    return (x, y)


def stroke(geom: ArmGeometry, theta1_deg, theta2_deg, rest_theta1_deg, rest_theta2_deg) -> float:
    """Body displacement produced by one stroke, without touching any pose."""
    tip_x, tip_y = arm_tip(geom, theta1_deg, theta2_deg)
    if tip_y > geom.contact_tol:
        return 0.0
    rest_x, _ = arm_tip(geom, rest_theta1_deg, rest_theta2_deg)
    return max(0.0, rest_x - tip_x)


def crawl_cycle(
    pose: BodyPose,
    geom: ArmGeometry,
    theta1_deg: float,
    theta2_deg: float,
    rest_theta1_deg: float = DEFAULT_REST[0],
    rest_theta2_deg: float = DEFAULT_REST[1],
) -> tuple[BodyPose, CrawlCycleResult]:
    d = stroke(geom, theta1_deg, theta2_deg, rest_theta1_deg, rest_theta2_deg)
    if d == 0.0:
        return pose, CrawlCycleResult(0.0, 0.0)
    h = math.radians(pose.heading)
    moved = BodyPose(pose.x + d * math.cos(h), pose.y + d * math.sin(h), pose.heading)
    return moved, CrawlCycleResult(d, 0.0)


def derive_targets(
    geom: ArmGeometry = DEFAULT_GEOMETRY,
    rest: tuple[float, float] = DEFAULT_REST,
    step_deg: float = 1.0,
    mode: DenormMode = DenormMode.TABLE_AFFINE,
) -> AngleTargets:
    """Exhaustive grid search for the servo pair giving the longest stroke.

    Ties go to the smallest ``theta1``, then the smallest ``theta2``. The
    default searches the affine range [-180, 180]: with [0, 180] the first
    link can only point upward and the default arm never reaches the ground.

    Raises:
        ValueError: if the step does not tile the angle range, or no grid
            point produces forward motion.
    """
    lo, hi = DenormMode(mode).angle_range
    n = (hi - lo) / step_deg
    if not step_deg > 0 or abs(n - round(n)) > 1e-9:
        raise ValueError(f"grid step {step_deg} does not divide [{lo}, {hi}]")
    grid = lo + step_deg * np.arange(int(round(n)) + 1)
    best = (0.0, None)
    for t1 in grid:
        for t2 in grid:
            d = stroke(geom, t1, t2, *rest)
            if d > best[0]:
                best = (d, (float(t1), float(t2)))
    if best[1] is None:
        raise ValueError("no grid pose reaches the ground with forward stroke; geometry cannot crawl")
    return AngleTargets(*best[1])


def replay_run(
    run: TrainingRun,
    geom: ArmGeometry = DEFAULT_GEOMETRY,
    rest: tuple[float, float] = DEFAULT_REST,
    start: BodyPose | None = None,
) -> list[BodyPose]:
    """Body pose after each generation's commanded stroke."""
    if not run.records:
        raise ValueError("cannot replay a run with no generations")
    return replay_angles(((r.servo1_deg, r.servo2_deg) for r in run.records), geom, rest, start)


def replay_angles(angles, geom=DEFAULT_GEOMETRY, rest=DEFAULT_REST, start=None) -> list[BodyPose]:
    pose = start if start is not None else BodyPose()
    out = []
    for t1, t2 in angles:
        pose, _ = crawl_cycle(pose, geom, t1, t2, *rest)
        out.append(pose)
    return out
