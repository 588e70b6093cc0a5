"""pcsub: tick-accurate simulator of a layered predictive-coding fabric.

Per-neuron cores run a fixed six-stage schedule (predict, error,
back-sum, back-emit, weight update, state update) in IEEE-754 binary32,
communicate only with adjacent layers through registered buses, and
learn supervised tasks purely through boundary clamping. A dense
reference oracle reproduces the tick bit-for-bit, and the harness
reproduces teacher-student learning curves as CSV.
"""

from .checkpoint import load_checkpoint, save_checkpoint
from .config import ConfigFile, load_config, parse_config
from .core import (
    ClampSignal,
    CoreConfig,
    CoreState,
    CoreTickInput,
    CoreTickOutput,
    core_new,
    core_tick,
    effective_state,
    tick_cycles,
)
from .errors import CheckpointError, ConfigParseError, ConfigurationError
from .harness import (
    Dataset,
    EXPERIMENTS,
    LearningCurve,
    TeacherSpec,
    TrainProtocol,
    evaluate_mse,
    generate_dataset,
    run_experiment,
    train_network,
    train_supervised,
    write_curve_csv,
)
from .network import (
    Network,
    NetworkConfig,
    TickReport,
    build_network,
    clamp_layer,
)
from .oracle import DenseState, oracle_tick, run_equivalence_suite
from .prng import Prng
from .scalar32 import (
    ACTIVATION_KINDS,
    activation_derivative,
    apply_activation,
    fp_mul_add,
)

__version__ = "0.1.0"

__all__ = [
    "ACTIVATION_KINDS",
    "CheckpointError",
    "ClampSignal",
    "ConfigFile",
    "ConfigParseError",
    "ConfigurationError",
    "CoreConfig",
    "CoreState",
    "CoreTickInput",
    "CoreTickOutput",
    "Dataset",
    "DenseState",
    "EXPERIMENTS",
    "LearningCurve",
    "Network",
    "NetworkConfig",
    "Prng",
    "TeacherSpec",
    "TickReport",
    "TrainProtocol",
    "activation_derivative",
    "apply_activation",
    "build_network",
    "clamp_layer",
    "core_new",
    "core_tick",
    "effective_state",
    "evaluate_mse",
    "fp_mul_add",
    "generate_dataset",
    "load_checkpoint",
    "load_config",
    "oracle_tick",
    "parse_config",
    "run_equivalence_suite",
    "run_experiment",
    "save_checkpoint",
    "tick_cycles",
    "train_network",
    "train_supervised",
    "write_curve_csv",
]
