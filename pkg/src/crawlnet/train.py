"""Online training loop: one random input, one gradient step per generation."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .net import (
    DenormMode,
    Network,
    denormalize,
    feedforward,
    normalize,
)


@dataclass(frozen=True)
class AngleTargets:
    servo1_deg: float
    servo2_deg: float

    def __post_init__(self):
        if not (math.isfinite(self.servo1_deg) and math.isfinite(self.servo2_deg)):
            raise ValueError("angle targets must be finite")

    def as_tuple(self) -> tuple[float, float]:
        return (self.servo1_deg, self.servo2_deg)

    def normalized(self, mode: DenormMode) -> np.ndarray:
        return np.array([normalize(self.servo1_deg, mode), normalize(self.servo2_deg, mode)])


# Targets recovered from the generation tables: servo + error is 90 and 120.
PAPER_TARGETS = AngleTargets(90.0, 120.0)


@dataclass(frozen=True)
class Constant:
    def __str__(self):
        return "constant"


@dataclass(frozen=True)
class ExponentialDecay:
    factor: float

    def __post_init__(self):
        if not 0.0 < self.factor <= 1.0:
            raise ValueError(f"decay factor must lie in (0, 1], got {self.factor}")

    def __str__(self):
        return f"exp:{self.factor!r}"


@dataclass(frozen=True)
class StepDecay:
    factor: float
    every: int

    def __post_init__(self):
        if not 0.0 < self.factor <= 1.0:
            raise ValueError(f"decay factor must lie in (0, 1], got {self.factor}")
        if self.every < 1:
            raise ValueError(f"step interval must be >= 1, got {self.every}")

    def __str__(self):
        return f"step:{self.factor!r}:{self.every}"


LRSchedule = Union[Constant, ExponentialDecay, StepDecay]


def parse_schedule(text: str) -> LRSchedule:
    """Parse ``constant``, ``exp:FACTOR`` or ``step:FACTOR:EVERY``."""
    parts = text.strip().split(":")
    kind = parts[0].lower()
    try:
        if kind == "constant" and len(parts) == 1:
            return Constant()
        if kind == "exp" and len(parts) == 2:
            return ExponentialDecay(float(parts[1]))
        if kind == "step" and len(parts) == 3:
            return StepDecay(float(parts[1]), int(parts[2]))
    except ValueError as exc:
        raise ValueError(f"bad schedule {text!r}: {exc}") from None
    raise ValueError(f"bad schedule {text!r}; use constant, exp:F or step:F:N")


class InputPolicy(str, enum.Enum):
    FIXED_RANDOM = "fixed"
    RESAMPLE = "resample"


@dataclass(frozen=True)
class TrainingConfig:
    learning_rate: float
    tolerance_deg: float
    max_generations: int = 20_000
    lr_schedule: LRSchedule = field(default_factory=Constant)
    input_policy: InputPolicy = InputPolicy.FIXED_RANDOM
    denorm_mode: DenormMode = DenormMode.PAPER_STATED
    seed: int = 0

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise ValueError(f"learning_rate must be > 0, got {self.learning_rate}")
        if not self.tolerance_deg > 0:
            raise ValueError(f"tolerance_deg must be > 0, got {self.tolerance_deg}")
        if self.max_generations < 1:
            raise ValueError(f"max_generations must be >= 1, got {self.max_generations}")
        object.__setattr__(self, "input_policy", InputPolicy(self.input_policy))
        object.__setattr__(self, "denorm_mode", DenormMode(self.denorm_mode))


@dataclass(frozen=True)
class GenerationRecord:
    generation: int
    servo1_deg: float
    servo2_deg: float
    error1_deg: float
    error2_deg: float
    cost: float
    lr_used: float


@dataclass
class TrainingRun:
    records: list[GenerationRecord]
    final_network: Network
    converged: bool
    config: TrainingConfig
    targets: AngleTargets
    diagnostic: str | None = None
    input_value: float | None = None  # last input fed to the network

    @property
    def generations_used(self) -> int:
        return len(self.records)

    @property
    def aborted(self) -> bool:
        return self.diagnostic is not None


def angle_error(targets: AngleTargets, angles) -> tuple[float, float]:
    """Signed error ``target - angle`` for each servo, in degrees."""
    a1, a2 = angles
    return (targets.servo1_deg - a1, targets.servo2_deg - a2)


def cost(targets_norm, outputs) -> float:
    """Half the summed squared difference, on the normalized scale."""
    d = np.asarray(targets_norm, dtype=np.float64) - np.asarray(outputs, dtype=np.float64)
    return 0.5 * float(d @ d)


def _gradient(net: Network, x: float, targets_norm: np.ndarray):
    tr = feedforward(net, x)
    o = tr.output
    h = tr.hidden_out
    delta_o = (o - targets_norm) * o * (1.0 - o)
    delta_h = (net.w_ho.T @ delta_o) * h * (1.0 - h)
    grad = np.concatenate([delta_h * x, np.outer(delta_o, h).ravel(), delta_h, delta_o])
    return tr, grad


def backprop_update(net: Network, x: float, targets_norm, lr: float):
    """Take one gradient-descent step on :func:`cost` for a single sample.

    Returns:
        ``(updated_network, gradient)``; the gradient is a flat vector in the
        :meth:`Network.to_vector` layout, evaluated before the step.
    """
    targets_norm = np.asarray(targets_norm, dtype=np.float64)
    _, grad = _gradient(net, x, targets_norm)
    updated = Network.from_vector(net.hidden_size, net.to_vector() - lr * grad)
    return updated, grad


def finite_diff_gradient(net: Network, x: float, targets_norm, h: float = 1e-6) -> np.ndarray:
    """Central-difference gradient of :func:`cost`, one parameter at a time."""
    if not h > 0:
        raise ValueError("step h must be positive")
    base = net.to_vector()
    grad = np.empty_like(base)
    for i in range(base.size):
        p = base.copy()
        p[i] = base[i] + h
        up = cost(targets_norm, feedforward(Network.from_vector(net.hidden_size, p), x).output)
        p[i] = base[i] - h
        down = cost(targets_norm, feedforward(Network.from_vector(net.hidden_size, p), x).output)
        grad[i] = (up - down) / (2.0 * h)
    return grad


def schedule_lr(config: TrainingConfig, generation: int) -> float:
    if generation < 1:
        raise ValueError("generation counts from 1")
    sched = config.lr_schedule
    base = config.learning_rate
    if isinstance(sched, ExponentialDecay):
        return base * sched.factor ** (generation - 1)
    if isinstance(sched, StepDecay):
        return base * sched.factor ** ((generation - 1) // sched.every)
    return base


def input_rng(seed: int) -> np.random.Generator:
    # Separate stream from the one init_network uses for the same seed.
    return np.random.default_rng([seed, 1])


def train(net: Network, config: TrainingConfig, targets: AngleTargets = PAPER_TARGETS) -> TrainingRun:
    """Run generations until both angle errors are within tolerance.

    Each generation feeds the input forward, converts both outputs to
    degrees, records the errors, and stops if both ``|error| <= tolerance``.
    Otherwise the weights take one backprop step toward the normalized
    targets. A non-finite value ends the run early with ``diagnostic`` set;
    records gathered so far are kept.
    """
    mode = config.denorm_mode
    targets_norm = targets.normalized(mode)  # raises if unreachable in this mode
    rng = input_rng(config.seed)
    x = rng.uniform(0.0, 1.0)
    params = net.to_vector()
    hidden = net.hidden_size
    records: list[GenerationRecord] = []
    tol = config.tolerance_deg
    converged = False
    diagnostic = None

    for gen in range(1, config.max_generations + 1):
        if config.input_policy is InputPolicy.RESAMPLE and gen > 1:
            x = rng.uniform(0.0, 1.0)
        current = Network.from_vector(hidden, params)
        tr, grad = _gradient(current, x, targets_norm)
        if not (np.all(np.isfinite(tr.output)) and np.all(np.isfinite(grad))):
            diagnostic = f"non-finite value at generation {gen}"
            break
        servo1 = denormalize(float(tr.output[0]), mode)
        servo2 = denormalize(float(tr.output[1]), mode)
        err1, err2 = angle_error(targets, (servo1, servo2))
        lr = schedule_lr(config, gen)
        records.append(
            GenerationRecord(gen, servo1, servo2, err1, err2, cost(targets_norm, tr.output), lr)
        )
        if abs(err1) <= tol and abs(err2) <= tol:
            converged = True
            break
        if gen == config.max_generations:
            break
        params = params - lr * grad
        if not np.all(np.isfinite(params)):
            diagnostic = f"non-finite parameters after update at generation {gen}"
            break

    return TrainingRun(
        records=records,
        final_network=Network.from_vector(hidden, params),
        converged=converged,
        config=config,
        targets=targets,
        diagnostic=diagnostic,
        input_value=float(x),
    )
