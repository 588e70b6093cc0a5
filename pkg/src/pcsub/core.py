"""One neural core: local storage, six-stage tick schedule, cycle accounting.

A core is a single scalar unit (i, layer). Per tick it runs

    PRED -> ERR -> BACKSUM -> BACKVEC -> WUP -> STATE

entirely on locally stored values plus the latched neighbor inputs it is
handed. All arithmetic is binary32 (see ``scalar32``). Operation order is
pinned so an independent reference can match bit-for-bit:

  PRED    mu = sum_j theta[j]*f(presyn[j]) + theta[N]*1, accumulated in
          ascending j from acc=0, bias lane last, one MAC per lane.
  ERR     eps = x_eff - mu.
  BACKSUM b = sum_k back[k], ascending k from 0 (plain adds).
  BACKVEC products theta[j]*eps for j < N (bias excluded), pre-update theta.
  WUP     coeff = alpha*eps (one rounding); theta[j] += coeff*f(presyn[j])
          as a MAC. Bias lane: coeff_b = (alpha*alpha_bias_scale)*eps,
          theta[N] += coeff_b, skipped when bias_frozen. alpha == 0 is a
          structural pass with no numeric writes, so weights stay
          bit-identical even under non-finite inputs.
  STATE   x += gamma*(f'(x_eff)*b - eps), each binary op rounded; under
          hard clamping the stored x is overwritten with x_obs instead.
          gamma == 0 leaves x bit-identical (same no-op rule as WUP).

Cycle cost per tick is 3N + M + 4 (N presyn lanes, M back inputs): N+1
for PRED, 1 for ERR, M for BACKSUM, N for BACKVEC, N+1 for WUP, 1 for
STATE. A topmost boundary core (no upper layer) drops PRED and WUP
entirely, leaving M + 2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError
from .scalar32 import (
    ACTIVATION_KINDS,
    F32,
    activation_derivative,
    apply_activation,
)

_ZERO = F32(0.0)
_ONE = F32(1.0)


@dataclass
class CoreConfig:
    """Static per-core parameters (shared by all cores of a layer).

    ``activation`` is this core's own layer activation (used for f' in
    STATE); ``presyn_activation`` is the upper layer's activation,
    applied locally when received states are consumed. ``has_upper`` is
    False only for topmost boundary cores (N must then be 0).
    """

    n_presyn: int
    m_back: int
    activation: str = "identity"
    presyn_activation: str = "identity"
    alpha: np.float32 = F32(0.0)
    gamma: np.float32 = F32(0.0)
    alpha_bias_scale: np.float32 = F32(1.0)
    bias_frozen: bool = False
    has_upper: bool = True

    def __post_init__(self):
        if self.n_presyn < 0 or self.m_back < 0:
            raise ConfigurationError(
                f"fan-ins must be non-negative, got N={self.n_presyn} M={self.m_back}"
            )
        if not self.has_upper and self.n_presyn != 0:
            raise ConfigurationError("a core without an upper layer must have N=0")
        for kind in (self.activation, self.presyn_activation):
            if kind not in ACTIVATION_KINDS:
                raise ConfigurationError(f"unknown activation kind: {kind!r}")
        self.alpha = F32(self.alpha)
        self.gamma = F32(self.gamma)
        self.alpha_bias_scale = F32(self.alpha_bias_scale)
        if not (np.isfinite(self.alpha) and np.isfinite(self.gamma)):
            raise ConfigurationError("alpha and gamma must be finite")


@dataclass
class CoreState:
    """Mutable local storage: activity, error, weights (bias last), b."""

    x: np.float32
    eps: np.float32
    theta: np.ndarray  # (n_presyn + 1,) float32, index N is the bias lane
    b: np.float32 = _ZERO
    cycles_last_tick: int = 0


@dataclass(frozen=True)
class ClampSignal:
    """Per-neuron external observation; x_obs is read only when enabled."""

    x_set_en: bool = False
    x_obs: float = 0.0


NO_CLAMP = ClampSignal()


@dataclass
class CoreTickInput:
    presyn: np.ndarray  # (N,) raw upper-layer states
    back: np.ndarray  # (M,) pre-multiplied theta*eps products from below
    clamp: ClampSignal = NO_CLAMP
    clamp_hard: bool = False


@dataclass
class CoreTickOutput:
    x_out: np.float32  # state held at the start of the tick (registered)
    backvec: np.ndarray  # (N,) theta[j]*eps products, bias lane excluded
    eps_out: np.float32
    cycles: int


def tick_cycles(n_presyn: int, m_back: int, has_upper: bool = True) -> int:
    """Per-tick cycle count of the sequential datapath."""
    if has_upper:
        return 3 * n_presyn + m_back + 4
    return m_back + 2


def core_new(cfg: CoreConfig, init_weights, init_x) -> CoreState:
    """Fresh core state; weights are copied, eps and b start at zero."""
    theta = np.array(init_weights, dtype=np.float32)
    if theta.shape != (cfg.n_presyn + 1,):
        raise ConfigurationError(
            f"need {cfg.n_presyn + 1} weights (incl. bias), got {theta.shape}"
        )
    return CoreState(x=F32(init_x), eps=_ZERO, theta=theta)


def effective_state(state: CoreState, clamp: ClampSignal) -> np.float32:
    """State used during the current tick: x_obs when clamped, else x."""
    return F32(clamp.x_obs) if clamp.x_set_en else state.x


def stage_pred(state: CoreState, presyn, cfg: CoreConfig, presyn_f=None) -> np.float32:
    """Prediction mu: MAC over presyn lanes ascending, bias lane last."""
    theta = state.theta
    n = cfg.n_presyn
    if presyn_f is None:
        kind = cfg.presyn_activation
        presyn_f = [apply_activation(kind, presyn[j]) for j in range(n)]
    acc = _ZERO
    for j in range(n):
        acc = theta[j] * presyn_f[j] + acc
    return theta[n] * _ONE + acc


def stage_err(state: CoreState, x_eff, mu) -> np.float32:
    state.eps = F32(x_eff) - F32(mu)
    return state.eps


def stage_backsum(state: CoreState, back) -> np.float32:
    acc = _ZERO
    for v in back:
        acc = acc + F32(v)
    state.b = acc
    return acc


def stage_backvec(state: CoreState) -> np.ndarray:
    """Products theta[j]*eps for the upper layer, from pre-update theta."""
    n = state.theta.shape[0] - 1
    return state.theta[:n] * state.eps


def stage_wup(state: CoreState, presyn, cfg: CoreConfig, presyn_f=None) -> None:
    """Hebbian weight update; numeric no-op when alpha == 0."""
    alpha = cfg.alpha
    if alpha == _ZERO:
        return
    theta = state.theta
    eps = state.eps
    n = cfg.n_presyn
    if presyn_f is None:
        kind = cfg.presyn_activation
        presyn_f = [apply_activation(kind, presyn[j]) for j in range(n)]
    coeff = alpha * eps
    for j in range(n):
        theta[j] = coeff * presyn_f[j] + theta[j]
    if not cfg.bias_frozen:
        coeff_b = (alpha * cfg.alpha_bias_scale) * eps
        theta[n] = coeff_b * _ONE + theta[n]


def stage_state(
    state: CoreState, x_eff, clamp: ClampSignal, clamp_hard: bool, cfg: CoreConfig
) -> None:
    """Explicit Euler state step, or stored-state overwrite on hard clamp."""
    if clamp_hard and clamp.x_set_en:
        state.x = F32(clamp.x_obs)
        return
    gamma = cfg.gamma
    if gamma == _ZERO:
        return
    fprime = activation_derivative(cfg.activation, x_eff)
    state.x = state.x + gamma * (fprime * state.b - state.eps)


def core_tick(
    state: CoreState, inp: CoreTickInput, cfg: CoreConfig, presyn_f=None
) -> CoreTickOutput:
    """Run the full six-stage schedule on this tick's latched inputs.

    ``presyn_f`` optionally carries precomputed f(presyn) values (they
    are pure per-lane functions, so sharing them across the cores of a
    layer changes nothing numerically).
    """
    x_start = state.x
    clamp = inp.clamp
    x_eff = F32(clamp.x_obs) if clamp.x_set_en else state.x

    if cfg.has_upper:
        mu = stage_pred(state, inp.presyn, cfg, presyn_f=presyn_f)
    else:
        mu = _ZERO
    eps = stage_err(state, x_eff, mu)
    stage_backsum(state, inp.back)
    backvec = stage_backvec(state)
    if cfg.has_upper:
        stage_wup(state, inp.presyn, cfg, presyn_f=presyn_f)
    stage_state(state, x_eff, clamp, inp.clamp_hard, cfg)

    cycles = tick_cycles(cfg.n_presyn, cfg.m_back, cfg.has_upper)
    state.cycles_last_tick = cycles
    return CoreTickOutput(x_out=x_start, backvec=backvec, eps_out=eps, cycles=cycles)
