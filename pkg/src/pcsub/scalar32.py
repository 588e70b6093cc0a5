"""Binary32 arithmetic contract and per-layer activation functions.

All datapath values are IEEE-754 binary32 (``np.float32``) with
round-to-nearest-even, which numpy guarantees for same-dtype operands.
Every arithmetic result is rounded to binary32 before reuse; NaN/Inf
propagate and are detected downstream, never masked here.

The MAC uses two roundings (multiply rounded, then add rounded) rather
than a fused single rounding, so the same sequence is reproducible in
any language. tanh is evaluated by the platform's binary64 ``math.tanh``
and then rounded once to binary32; this is the reference nonlinearity
(a synthesizable approximation would replace it wholesale).
"""

from __future__ import annotations

import math

import numpy as np

F32 = np.float32

IDENTITY = "identity"
RELU = "relu"
TANH = "tanh"

ACTIVATION_KINDS = (IDENTITY, RELU, TANH)

_ZERO = F32(0.0)
_ONE = F32(1.0)


def fp_mul_add(a, b, acc) -> np.float32:
    """round32(round32(a*b) + acc): the sequential MAC step."""
    return F32(a) * F32(b) + F32(acc)


def apply_activation(kind: str, x) -> np.float32:
    """Elementwise activation, result rounded to binary32."""
    x = F32(x)
    if kind == IDENTITY:
        return x
    if kind == RELU:
        return np.maximum(x, _ZERO)  # NaN propagates
    if kind == TANH:
        return F32(math.tanh(float(x)))
    raise ValueError(f"unknown activation kind: {kind!r}")


def activation_derivative(kind: str, x) -> np.float32:
    """Derivative of ``apply_activation`` at x, rounded to binary32.

    relu uses the subgradient 0 at exactly x == 0 (fixed for determinism);
    tanh computes 1 - tanh(x)^2 in binary64 with a single final rounding.
    """
    x = F32(x)
    if kind == IDENTITY:
        return _ONE
    if kind == RELU:
        return _ONE if x > _ZERO else _ZERO
    if kind == TANH:
        t = math.tanh(float(x))
        return F32(1.0 - t * t)
    raise ValueError(f"unknown activation kind: {kind!r}")


def activation64(kind: str, x: float) -> float:
    """Binary64 twin of ``apply_activation`` for oracles and teachers."""
    if kind == IDENTITY:
        return float(x)
    if kind == RELU:
        return float(x) if x > 0.0 else 0.0
    if kind == TANH:
        return math.tanh(float(x))
    raise ValueError(f"unknown activation kind: {kind!r}")


def derivative64(kind: str, x: float) -> float:
    """Binary64 twin of ``activation_derivative``."""
    if kind == IDENTITY:
        return 1.0
    if kind == RELU:
        return 1.0 if x > 0.0 else 0.0
    if kind == TANH:
        t = math.tanh(float(x))
        return 1.0 - t * t
    raise ValueError(f"unknown activation kind: {kind!r}")


def apply_activation_vec(kind: str, x: np.ndarray) -> np.ndarray:
    """Vector form, bit-identical per element to ``apply_activation``."""
    x = np.asarray(x, dtype=np.float32)
    if kind == IDENTITY:
        return x.copy()
    if kind == RELU:
        return np.maximum(x, _ZERO)
    if kind == TANH:
        # scalar math.tanh per element: immune to SIMD libm divergence
        return np.array([F32(math.tanh(float(v))) for v in x], dtype=np.float32)
    raise ValueError(f"unknown activation kind: {kind!r}")


def activation_derivative_vec(kind: str, x: np.ndarray) -> np.ndarray:
    """Vector form, bit-identical per element to ``activation_derivative``."""
    x = np.asarray(x, dtype=np.float32)
    if kind == IDENTITY:
        return np.ones_like(x)
    if kind == RELU:
        return np.where(x > 0, _ONE, _ZERO).astype(np.float32)
    if kind == TANH:
        return np.array(
            [activation_derivative(TANH, v) for v in x], dtype=np.float32
        )
    raise ValueError(f"unknown activation kind: {kind!r}")
