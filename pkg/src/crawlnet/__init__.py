"""Online-trained 1-H-2 sigmoid network that learns servo angles for a one-armed crawler."""

from .net import (
    DenormMode,
    ForwardTrace,
    Network,
    NetworkConfig,
    denormalize,
    feedforward,
    init_network,
    normalize,
    sigmoid,
)
from .train import (
    PAPER_TARGETS,
    AngleTargets,
    Constant,
    ExponentialDecay,
    GenerationRecord,
    InputPolicy,
    StepDecay,
    TrainingConfig,
    TrainingRun,
    angle_error,
    backprop_update,
    cost,
    finite_diff_gradient,
    schedule_lr,
    train,
)

__version__ = "0.1.0"
