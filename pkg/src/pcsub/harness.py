"""Supervised training and evaluation protocols driven purely by clamping.

Training clamps the top (input) layer to x and the bottom (output) layer
to y, then alternates an inference phase (alpha = 0, states settle) with
a learning phase (alpha > 0, weights update while states keep evolving)
for a fixed tick budget per sample. Nothing about the per-core schedule
changes between phases.

MSE is measured by a separate inference-only pass: free states reset to
zero, input clamped, ``eval_ticks`` ticks at alpha = 0, then the free
output states are read and compared against targets in binary64. With
alpha = 0 the weights are bit-identical before and after evaluation.

Teacher functions for dataset generation:

    relu_teacher:  y = A @ relu(B @ x)
    tanh_teacher:  y = A @ tanh(B @ x + b1) + b2

Teacher parameters and inputs are drawn from a SplitMix64 stream (see
``prng``): first the parameter matrices row-major in the order listed
above, each entry uniform in [-weight_scale, +weight_scale], then the
inputs sample-major with components uniform in [-1, 1]. Targets are
evaluated in binary64 and rounded once to binary32.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

import numpy as np

from .config import ConfigFile, load_config
from .errors import ConfigurationError
from .network import Network, NetworkConfig, build_network, clamp_layer
from .prng import Prng

EXPERIMENTS = ("relu_ts", "tanh_ts", "scale_small", "scale_medium", "scale_large")

_CONFIG_DIR = Path(__file__).parent / "configs"


@dataclass(frozen=True)
class TeacherSpec:
    kind: str  # relu_teacher | tanh_teacher
    dims: tuple  # (input, hidden, output)
    seed: int
    weight_scale: float

    def __post_init__(self):
        if self.kind not in ("relu_teacher", "tanh_teacher"):
            raise ConfigurationError(f"unknown teacher kind: {self.kind!r}")
        if len(self.dims) != 3 or any(d < 1 for d in self.dims):
            raise ConfigurationError(f"teacher dims must be 3 positive sizes: {self.dims}")


@dataclass
class Dataset:
    inputs: np.ndarray  # (n, d_in) binary32
    targets: np.ndarray  # (n, d_out) binary32

    def __len__(self) -> int:
        return self.inputs.shape[0]

    @property
    def dims(self) -> tuple:
        return self.inputs.shape[1], self.targets.shape[1]


@dataclass
class TrainProtocol:
    infer_ticks: int
    learn_ticks: int
    epochs: int
    eval_ticks: int
    reset_between_samples: bool = True

    def __post_init__(self):
        if self.infer_ticks < 1 or self.epochs < 1 or self.eval_ticks < 1:
            raise ConfigurationError("tick and epoch counts must be >= 1")
        if self.learn_ticks < 0:
            raise ConfigurationError("learn_ticks must be >= 0")


@dataclass
class LearningCurve:
    """Per-epoch MSE (binary64) and divergence flags; entry 0 is pre-training."""

    mse: list = field(default_factory=list)
    diverged: list = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.mse)


def teacher_params(spec: TeacherSpec, rng: Optional[Prng] = None) -> dict:
    """Draw teacher parameters; see module docstring for stream order."""
    d_in, d_hid, d_out = spec.dims
    rng = Prng(spec.seed) if rng is None else rng
    w = float(spec.weight_scale)
    params = {"B": rng.fill_uniform((d_hid, d_in), -w, w)}
    if spec.kind == "tanh_teacher":
        params["b1"] = rng.fill_uniform(d_hid, -w, w)
    params["A"] = rng.fill_uniform((d_out, d_hid), -w, w)
    if spec.kind == "tanh_teacher":
        params["b2"] = rng.fill_uniform(d_out, -w, w)
    return params


def teacher_apply(kind: str, params: dict, x) -> np.ndarray:
    """Evaluate the teacher in binary64."""
    x = np.asarray(x, dtype=np.float64)
    b_mat = params["B"].astype(np.float64)
    a_mat = params["A"].astype(np.float64)
    if kind == "relu_teacher":
        return a_mat @ np.maximum(b_mat @ x, 0.0)
    hidden = np.tanh(b_mat @ x + params["b1"].astype(np.float64))
    return a_mat @ hidden + params["b2"].astype(np.float64)


def generate_dataset(spec: TeacherSpec, n_samples: int) -> Dataset:
    """Deterministic teacher-student samples with uniform [-1, 1] inputs."""
    if n_samples < 1:
        raise ConfigurationError("n_samples must be >= 1")
    rng = Prng(spec.seed)
    params = teacher_params(spec, rng)  # inputs continue the same stream
    d_in, _, d_out = spec.dims
    inputs = np.empty((n_samples, d_in), dtype=np.float32)
    targets = np.empty((n_samples, d_out), dtype=np.float32)
    for i in range(n_samples):
        inputs[i] = rng.fill_uniform(d_in, -1.0, 1.0)
        targets[i] = teacher_apply(spec.kind, params, inputs[i]).astype(np.float32)
    return Dataset(inputs=inputs, targets=targets)


# ---------------------------------------------------------------------------
# training and evaluation
# ---------------------------------------------------------------------------


def _check_dims(net: Network, ds: Dataset) -> None:
    d_in, d_out = ds.dims
    sizes = net.cfg.layer_sizes
    if d_in != sizes[0] or d_out != sizes[-1]:
        raise ConfigurationError(
            f"dataset dims {d_in}->{d_out} do not match boundary layers "
            f"{sizes[0]}->{sizes[-1]}"
        )


def evaluate_dataset(net: Network, ds: Dataset, eval_ticks: int, threads: int = 1):
    """Inference-only pass over the dataset: (mse, diverged).

    Per sample: free states reset to zero, input hard-clamped, eval_ticks
    ticks at alpha = 0, output-layer states read; squared error is
    accumulated in binary64 over samples and output components.
    """
    if len(ds) == 0:
        raise ConfigurationError("cannot evaluate on an empty dataset")
    _check_dims(net, ds)
    last = len(net.layers) - 1
    total = 0.0
    diverged = False
    for x, y in zip(ds.inputs, ds.targets):
        net.reset_states()
        clamp = {0: clamp_layer(x)}
        for _ in range(eval_ticks):
            report = net.tick(clamp, alpha=0.0, threads=threads)
            diverged = diverged or report.diverged
        out = net.layers[last].states().astype(np.float64)
        d = out - y.astype(np.float64)
        total += float(d @ d)
    return total / (len(ds) * ds.dims[1]), diverged


def evaluate_mse(net: Network, ds: Dataset, eval_ticks: int, threads: int = 1) -> float:
    """Inference-only MSE; weights are untouched (alpha = 0 throughout)."""
    mse, _ = evaluate_dataset(net, ds, eval_ticks, threads)
    return mse


def train_network(
    net: Network, ds: Dataset, proto: TrainProtocol, threads: int = 1
) -> LearningCurve:
    """Clamped supervised training on an existing network, in place."""
    _check_dims(net, ds)
    last = len(net.layers) - 1
    curve = LearningCurve()
    mse0, div0 = evaluate_dataset(net, ds, proto.eval_ticks, threads)
    curve.mse.append(mse0)
    curve.diverged.append(div0)
    for _ in range(proto.epochs):
        epoch_div = False
        for x, y in zip(ds.inputs, ds.targets):
            if proto.reset_between_samples:
                net.reset_states()
            clamp = {0: clamp_layer(x), last: clamp_layer(y)}
            for _ in range(proto.infer_ticks):
                report = net.tick(clamp, alpha=0.0, threads=threads)
                epoch_div = epoch_div or report.diverged
            for _ in range(proto.learn_ticks):
                report = net.tick(clamp, threads=threads)
                epoch_div = epoch_div or report.diverged
        mse, ediv = evaluate_dataset(net, ds, proto.eval_ticks, threads)
        curve.mse.append(mse)
        curve.diverged.append(epoch_div or ediv)
    return curve


def train_supervised(
    cfg: NetworkConfig, ds: Dataset, proto: TrainProtocol, threads: int = 1
) -> LearningCurve:
    """Build a network from ``cfg`` and train it; returns the curve."""
    return train_network(build_network(cfg), ds, proto, threads)


# ---------------------------------------------------------------------------
# canned experiments
# ---------------------------------------------------------------------------


def experiment_config(name: str) -> ConfigFile:
    if name not in EXPERIMENTS:
        raise ConfigurationError(
            f"unknown experiment {name!r}; choose from {EXPERIMENTS}"
        )
    return load_config(_CONFIG_DIR / f"{name}.cfg")


def dataset_for(cfg: ConfigFile) -> Dataset:
    spec = TeacherSpec(
        kind=cfg.teacher_kind,
        dims=(cfg.layer_sizes[0], cfg.layer_sizes[1], cfg.layer_sizes[-1]),
        seed=cfg.teacher_seed,
        weight_scale=cfg.teacher_weight_scale,
    )
    return generate_dataset(spec, cfg.n_samples)


def protocol_for(cfg: ConfigFile) -> TrainProtocol:
    return TrainProtocol(
        infer_ticks=cfg.infer_ticks,
        learn_ticks=cfg.learn_ticks,
        epochs=cfg.epochs,
        eval_ticks=cfg.eval_ticks,
        reset_between_samples=cfg.reset_between_samples,
    )


def output_dir(override: Optional[str] = None) -> Path:
    if override is not None:
        return Path(override)
    return Path(os.environ.get("PCSUB_OUT_DIR", "runs"))


def write_curve_csv(curve: LearningCurve, path) -> None:
    """CSV with header ``epoch,mse``, six fractional digits, epoch 0 first."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = ["epoch,mse"]
    for i, v in enumerate(curve.mse):
        lines.append(f"{i},{v:.6f}")
    path.write_text("\n".join(lines) + "\n", encoding="ascii")


def run_experiment(
    name: str,
    overrides: Optional[dict] = None,
    seed: Optional[int] = None,
    out_dir: Optional[str] = None,
    threads: int = 1,
):
    """Run one canned experiment; returns (curve, csv_path)."""
    cfg = experiment_config(name)
    if overrides:
        cfg = replace(cfg, **overrides)
    if seed is not None:
        cfg = replace(cfg, seed=seed)
    ds = dataset_for(cfg)
    curve = train_supervised(cfg.to_network_config(), ds, protocol_for(cfg), threads)
    path = output_dir(out_dir) / f"{name}.csv"
    write_curve_csv(curve, path)
    return curve, path
