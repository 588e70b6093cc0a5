"""Layered composition of neural cores with a double-buffered tick scheduler.

Layer 0 of ``layer_sizes`` is the topmost (input side); the last layer is
the bottom (output side). Predictions flow downward: layer s predicts its
own activity from f(states of layer s-1). Back-error products flow upward:
layer s receives, at position k, the product emitted by core k of layer
s+1 at presynaptic position i (transpose wiring).

Communication is registered: everything a core reads during tick t was
latched at the end of tick t-1. A core's emitted state is the value held
at the start of the tick; its emitted back products use the eps computed
during the tick. Both become visible to neighbors one tick later, after
an atomic bus swap. Because all cross-core reads hit latches, cores may
execute in any order (or in parallel) with bit-identical results.

Weights are initialized i.i.d. uniform in [-init_scale, +init_scale] from
a SplitMix64 stream seeded with ``seed``: draws proceed layer-major (top
to bottom), core-major within a layer, lane index ascending with the bias
lane last. Topmost cores own a single (unused) bias lane which is drawn
like any other so the stream layout is uniform.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from .core import (
    ClampSignal,
    CoreConfig,
    CoreState,
    CoreTickInput,
    NO_CLAMP,
    core_new,
    core_tick,
    tick_cycles,
)
from .errors import ConfigurationError
from .prng import Prng
from .scalar32 import (
    ACTIVATION_KINDS,
    F32,
    activation64,
    apply_activation_vec,
)

ClampMap = dict[int, Sequence[ClampSignal]]


@dataclass
class NetworkConfig:
    layer_sizes: tuple
    activations: Optional[tuple] = None  # default: identity everywhere
    alpha: float = 0.01
    gamma: float = 0.1
    clamp_hard: bool = True
    alpha_bias_scale: float = 1.0
    bias_frozen: bool = False
    seed: int = 1
    init_scale: float = 0.5

    def __post_init__(self):
        self.layer_sizes = tuple(int(n) for n in self.layer_sizes)
        if len(self.layer_sizes) < 2:
            raise ConfigurationError("need at least 2 layers")
        if any(n < 1 for n in self.layer_sizes):
            raise ConfigurationError("all layer sizes must be >= 1")
        if self.activations is None:
            self.activations = tuple("identity" for _ in self.layer_sizes)
        else:
            self.activations = tuple(self.activations)
        if len(self.activations) != len(self.layer_sizes):
            raise ConfigurationError("need one activation per layer")
        for kind in self.activations:
            if kind not in ACTIVATION_KINDS:
                raise ConfigurationError(f"unknown activation kind: {kind!r}")
        if self.init_scale < 0:
            raise ConfigurationError("init_scale must be >= 0")


@dataclass
class Layer:
    """One layer: shared core config, core states, latched input buses."""

    cfg: CoreConfig
    cores: list
    states_in: np.ndarray  # (N,) latched x from the layer above
    back_in: np.ndarray  # (M, n) latched products from the layer below
    backvec_buf: np.ndarray  # (n, N) products emitted this tick

    @property
    def size(self) -> int:
        return len(self.cores)

    def weights(self) -> np.ndarray:
        """(n, N+1) copy of the layer's weight matrix, bias column last."""
        return np.stack([c.theta for c in self.cores])

    def states(self) -> np.ndarray:
        return np.array([c.x for c in self.cores], dtype=np.float32)

    def errors(self) -> np.ndarray:
        return np.array([c.eps for c in self.cores], dtype=np.float32)


@dataclass
class TickReport:
    network_cycles: int  # max over cores; the tick's done latency
    per_core_cycles: dict  # (layer, index) -> cycles
    diverged: bool  # any non-finite state or error after the tick
    states: list  # post-tick x per layer (copies)
    errors: list  # post-tick eps per layer (copies)


@dataclass
class Snapshot:
    """Read-only copy of everything a tick depends on."""

    layer_sizes: tuple
    x: list
    eps: list
    theta: list
    states_in: list
    back_in: list


class Network:
    """A chain of layers sharing one tick clock."""

    def __init__(self, cfg: NetworkConfig):
        self.cfg = cfg
        sizes = cfg.layer_sizes
        rng = Prng(cfg.seed)
        scale = float(cfg.init_scale)
        self.layers = []
        for s, n in enumerate(sizes):
            n_presyn = sizes[s - 1] if s > 0 else 0
            m_back = sizes[s + 1] if s < len(sizes) - 1 else 0
            core_cfg = CoreConfig(
                n_presyn=n_presyn,
                m_back=m_back,
                activation=cfg.activations[s],
                presyn_activation=cfg.activations[s - 1] if s > 0 else "identity",
                alpha=cfg.alpha,
                gamma=cfg.gamma,
                alpha_bias_scale=cfg.alpha_bias_scale,
                bias_frozen=cfg.bias_frozen,
                has_upper=s > 0,
            )
            cores = []
            for _ in range(n):
                weights = rng.fill_uniform(n_presyn + 1, -scale, scale)
                cores.append(core_new(core_cfg, weights, 0.0))
            self.layers.append(
                Layer(
                    cfg=core_cfg,
                    cores=cores,
                    states_in=np.zeros(n_presyn, dtype=np.float32),
                    back_in=np.zeros((m_back, n), dtype=np.float32),
                    backvec_buf=np.zeros((n, n_presyn), dtype=np.float32),
                )
            )
        self._executor = None
        self._executor_size = 0

    # ------------------------------------------------------------------
    # tick scheduling
    # ------------------------------------------------------------------

    def tick(
        self,
        clamp: Optional[ClampMap] = None,
        alpha: Optional[float] = None,
        gamma: Optional[float] = None,
        reverse_order: bool = False,
        threads: int = 1,
    ) -> TickReport:
        """Run every core once against the previous-tick latches, then swap.

        ``alpha``/``gamma`` override the built-in step sizes for this tick
        (they are supplied externally in the same way the start pulse is).
        ``reverse_order`` and ``threads`` only change scheduling; results
        are bit-identical by construction.
        """
        with np.errstate(all="ignore"):  # NaN/Inf propagate; flagged below
            return self._tick(clamp, alpha, gamma, reverse_order, threads)

    def _tick(self, clamp, alpha, gamma, reverse_order, threads) -> TickReport:
        clamp = self._check_clamp(clamp)
        layer_cfgs = []
        for layer in self.layers:
            c = layer.cfg
            if alpha is not None or gamma is not None:
                c = replace(
                    c,
                    alpha=c.alpha if alpha is None else alpha,
                    gamma=c.gamma if gamma is None else gamma,
                )
            layer_cfgs.append(c)

        # start-of-tick states: these are this tick's downward emissions
        pre_x = [layer.states() for layer in self.layers]
        presyn_f = [
            apply_activation_vec(layer.cfg.presyn_activation, layer.states_in)
            if s > 0
            else None
            for s, layer in enumerate(self.layers)
        ]

        jobs = []
        for s, layer in enumerate(self.layers):
            signals = clamp.get(s)
            hard = self.cfg.clamp_hard
            for i in range(layer.size):
                jobs.append((s, i, signals[i] if signals else NO_CLAMP, hard))
        if reverse_order:
            jobs = jobs[::-1]

        per_core_cycles = {}

        def run_job(job):
            s, i, sig, hard = job
            layer = self.layers[s]
            inp = CoreTickInput(
                presyn=layer.states_in,
                back=layer.back_in[:, i],
                clamp=sig,
                clamp_hard=hard,
            )
            out = core_tick(layer.cores[i], inp, layer_cfgs[s], presyn_f=presyn_f[s])
            if layer.backvec_buf.shape[1]:
                layer.backvec_buf[i, :] = out.backvec
            return (s, i), out.cycles

        if threads > 1:
            for key, cyc in self._pool(threads).map(run_job, jobs):
                per_core_cycles[key] = cyc
        else:
            for job in jobs:
                key, cyc = run_job(job)
                per_core_cycles[key] = cyc

        # atomic bus swap: new latches become visible only after all cores
        # have completed the tick
        for s, layer in enumerate(self.layers):
            if s > 0:
                layer.states_in = pre_x[s - 1]
            if s < len(self.layers) - 1:
                layer.back_in = self.layers[s + 1].backvec_buf.copy()

        states = [layer.states() for layer in self.layers]
        errors = [layer.errors() for layer in self.layers]
        diverged = any(
            not (np.isfinite(xs).all() and np.isfinite(es).all())
            for xs, es in zip(states, errors)
        )
        return TickReport(
            network_cycles=max(per_core_cycles.values()),
            per_core_cycles=per_core_cycles,
            diverged=diverged,
            states=states,
            errors=errors,
        )

    def _pool(self, threads: int) -> ThreadPoolExecutor:
        if self._executor is None or self._executor_size != threads:
            if self._executor is not None:
                self._executor.shutdown(wait=False)
            self._executor = ThreadPoolExecutor(max_workers=threads)
            self._executor_size = threads
        return self._executor

    def _check_clamp(self, clamp: Optional[ClampMap]) -> ClampMap:
        if clamp is None:
            return {}
        for s, signals in clamp.items():
            if s < 0 or s >= len(self.layers):
                raise ConfigurationError(f"clamp for nonexistent layer {s}")
            if len(signals) != self.layers[s].size:
                raise ConfigurationError(
                    f"layer {s} clamp has {len(signals)} signals, "
                    f"expected {self.layers[s].size}"
                )
        return clamp

    # ------------------------------------------------------------------
    # inspection
    # ------------------------------------------------------------------

    def snapshot(self) -> Snapshot:
        return Snapshot(
            layer_sizes=self.cfg.layer_sizes,
            x=[layer.states() for layer in self.layers],
            eps=[layer.errors() for layer in self.layers],
            theta=[layer.weights() for layer in self.layers],
            states_in=[layer.states_in.copy() for layer in self.layers],
            back_in=[layer.back_in.copy() for layer in self.layers],
        )

    def energy(self) -> float:
        """Sum of squared prediction errors, recomputed densely in binary64
        from the current states and weights (diagnostic only)."""
        total = 0.0
        for s in range(1, len(self.layers)):
            layer = self.layers[s]
            upper = self.layers[s - 1]
            fx = np.array(
                [
                    activation64(layer.cfg.presyn_activation, float(v))
                    for v in upper.states()
                ]
            )
            w = layer.weights().astype(np.float64)
            mu = w[:, :-1] @ fx + w[:, -1]
            d = layer.states().astype(np.float64) - mu
            total += float(d @ d)
        return total

    def reset_states(self) -> None:
        """Zero all activities, errors, and latched buses; weights kept."""
        for layer in self.layers:
            for c in layer.cores:
                c.x = F32(0.0)
                c.eps = F32(0.0)
                c.b = F32(0.0)
            layer.states_in = np.zeros_like(layer.states_in)
            layer.back_in = np.zeros_like(layer.back_in)
            layer.backvec_buf = np.zeros_like(layer.backvec_buf)

    def tick_latency(self) -> int:
        """Network tick latency: the slowest core's cycle count."""
        return max(
            tick_cycles(layer.cfg.n_presyn, layer.cfg.m_back, layer.cfg.has_upper)
            for layer in self.layers
        )


def build_network(cfg: NetworkConfig) -> Network:
    return Network(cfg)


def clamp_layer(values) -> list:
    """ClampSignal list asserting every neuron of a layer to ``values``."""
    return [ClampSignal(x_set_en=True, x_obs=float(v)) for v in values]
