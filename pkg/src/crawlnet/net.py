"""Single-hidden-layer sigmoid network driving the two servo angles.

Parameter layout used everywhere a flat vector is needed (gradients,
persistence): ``w_ih`` row-major, ``w_ho`` row-major, ``b_h``, ``b_o``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

INPUT_SIZE = 1
OUTPUT_SIZE = 2


class DenormMode(str, enum.Enum):
    """How a sigmoid output in [0, 1] maps to a servo angle in degrees."""

    PAPER_STATED = "paper"  # y = 180 x, angles in [0, 180]
    TABLE_AFFINE = "affine"  # y = 360 x - 180, angles in [-180, 180]

    @property
    def angle_range(self) -> tuple[float, float]:
        if self is DenormMode.PAPER_STATED:
            return (0.0, 180.0)
        return (-180.0, 180.0)

    @property
    def span(self) -> float:
        lo, hi = self.angle_range
        return hi - lo


@dataclass(frozen=True)
class NetworkConfig:
    hidden_size: int
    seed: int = 0
    input_size: int = INPUT_SIZE
    output_size: int = OUTPUT_SIZE

    def __post_init__(self):
        if self.input_size != INPUT_SIZE:
            raise ValueError(f"input_size must be {INPUT_SIZE}, got {self.input_size}")
        if self.output_size != OUTPUT_SIZE:
            raise ValueError(f"output_size must be {OUTPUT_SIZE}, got {self.output_size}")
        if int(self.hidden_size) != self.hidden_size or self.hidden_size < 1:
            raise ValueError(f"hidden_size must be a positive integer, got {self.hidden_size}")
        if self.seed < 0:
            raise ValueError(f"seed must be non-negative, got {self.seed}")


@dataclass
class Network:
    """Weights and biases of the 1-H-2 network.

    Attributes:
        w_ih: (hidden, 1) input-to-hidden weights.
        w_ho: (2, hidden) hidden-to-output weights.
        b_h: (hidden,) hidden biases.
        b_o: (2,) output biases.
    """

    w_ih: np.ndarray
    w_ho: np.ndarray
    b_h: np.ndarray
    b_o: np.ndarray

    def __post_init__(self):
        self.w_ih = np.array(self.w_ih, dtype=np.float64).reshape(-1, INPUT_SIZE)
        h = self.w_ih.shape[0]
        self.w_ho = np.array(self.w_ho, dtype=np.float64).reshape(OUTPUT_SIZE, h)
        self.b_h = np.array(self.b_h, dtype=np.float64).reshape(h)
        self.b_o = np.array(self.b_o, dtype=np.float64).reshape(OUTPUT_SIZE)
        if h < 1:
            raise ValueError("network needs at least one hidden neuron")

    @property
    def hidden_size(self) -> int:
        return self.w_ih.shape[0]

    @property
    def n_params(self) -> int:
        return parameter_count(self.hidden_size)

    def to_vector(self) -> np.ndarray:
        return np.concatenate([self.w_ih.ravel(), self.w_ho.ravel(), self.b_h, self.b_o])

    @classmethod
    def from_vector(cls, hidden_size: int, vec) -> "Network":
        vec = np.asarray(vec, dtype=np.float64)
        if vec.shape != (parameter_count(hidden_size),):
            raise ValueError(
                f"expected {parameter_count(hidden_size)} parameters for hidden_size "
                f"{hidden_size}, got {vec.size}"
            )
        h = hidden_size
        i = 0
        w_ih = vec[i:i + h].reshape(h, 1)
        i += h
        w_ho = vec[i:i + 2 * h].reshape(2, h)
        i += 2 * h
        b_h = vec[i:i + h]
        i += h
        return cls(w_ih, w_ho, b_h, vec[i:i + 2])

    def copy(self) -> "Network":
        return Network(self.w_ih.copy(), self.w_ho.copy(), self.b_h.copy(), self.b_o.copy())

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.to_vector())))

    def __eq__(self, other):
        if not isinstance(other, Network):
            return NotImplemented
        return self.hidden_size == other.hidden_size and np.array_equal(
            self.to_vector(), other.to_vector()
        )


def parameter_count(hidden_size: int) -> int:
    return hidden_size * INPUT_SIZE + OUTPUT_SIZE * hidden_size + hidden_size + OUTPUT_SIZE


@dataclass(frozen=True)
class ForwardTrace:
    input: float
    hidden_pre: np.ndarray
    hidden_out: np.ndarray
    output_pre: np.ndarray
    output: np.ndarray


def sigmoid(x):
    """Binary sigmoid ``1 / (1 + exp(-x))``.

    Only ``exp(-|x|)`` is ever evaluated, so large magnitudes saturate
    instead of overflowing. Accepts scalars or arrays.
    """
    x = np.asarray(x, dtype=np.float64)
    z = np.exp(-np.abs(x))
    out = np.where(x >= 0, 1.0 / (1.0 + z), z / (1.0 + z))
    return float(out) if out.ndim == 0 else out


def init_network(config: NetworkConfig, rng: np.random.Generator | None = None) -> Network:
    """Draw every weight and bias i.i.d. uniform on [-1, 1].

    With ``rng=None`` a generator is built from ``config.seed``. Draw order is
    w_ih, w_ho, b_h, b_o.
    """
    if rng is None:
        rng = np.random.default_rng(config.seed)
    h = config.hidden_size
    w_ih = rng.uniform(-1.0, 1.0, size=(h, INPUT_SIZE))
    w_ho = rng.uniform(-1.0, 1.0, size=(OUTPUT_SIZE, h))
    b_h = rng.uniform(-1.0, 1.0, size=h)
    b_o = rng.uniform(-1.0, 1.0, size=OUTPUT_SIZE)
    return Network(w_ih, w_ho, b_h, b_o)


def feedforward(net: Network, x: float) -> ForwardTrace:
    if not math.isfinite(x):
        raise ValueError(f"input must be finite, got {x}")
    hidden_pre = net.w_ih[:, 0] * x + net.b_h
    hidden_out = sigmoid(hidden_pre)
    output_pre = net.w_ho @ hidden_out + net.b_o
    output = sigmoid(output_pre)
    return ForwardTrace(float(x), hidden_pre, hidden_out, output_pre, output)


def normalize(angle_deg: float, mode: DenormMode = DenormMode.PAPER_STATED) -> float:
    """Map a servo angle in degrees to the network's [0, 1] scale."""
    mode = DenormMode(mode)
    lo, hi = mode.angle_range
    if not lo <= angle_deg <= hi:
        raise ValueError(f"angle {angle_deg} outside [{lo}, {hi}] for mode {mode.value!r}")
    if mode is DenormMode.PAPER_STATED:
        return angle_deg / 180.0
    return (angle_deg + 180.0) / 360.0


def denormalize(x: float, mode: DenormMode = DenormMode.PAPER_STATED) -> float:
    mode = DenormMode(mode)
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"normalized value {x} outside [0, 1]")
    if mode is DenormMode.PAPER_STATED:
        return 180.0 * x
    return 360.0 * x - 180.0
