#!/usr/bin/env python3
"""Walk one neural core through its six-stage tick, stage by stage.

A core is a single scalar neuron: it stores its activity x, its
prediction error eps, and one weight per presynaptic lane plus a bias
lane. Everything below is binary32, exactly what the network scheduler
runs.
"""

import numpy as np

from pcsub import ClampSignal, CoreConfig, CoreTickInput, core_new, core_tick
from pcsub.core import (
    effective_state,
    stage_backsum,
    stage_backvec,
    stage_err,
    stage_pred,
    stage_state,
    stage_wup,
)

# a core with 2 presynaptic inputs and 3 incoming back-error products
cfg = CoreConfig(
    n_presyn=2,
    m_back=3,
    activation="tanh",
    presyn_activation="relu",
    alpha=0.1,
    gamma=0.05,
)
core = core_new(cfg, init_weights=[0.5, -1.0, 0.25], init_x=1.0)
print(f"initial: x={core.x}, theta={core.theta}")

presyn = np.array([2.0, 3.0], dtype=np.float32)  # raw upper-layer states
back = np.array([0.1, -0.3, 0.05], dtype=np.float32)  # theta*eps products
clamp = ClampSignal(x_set_en=False)

# PRED: mu = 0.5*relu(2) - 1.0*relu(3) + 0.25 (bias lane last)
x_eff = effective_state(core, clamp)
mu = stage_pred(core, presyn, cfg)
print(f"PRED    mu = {mu}")

# ERR: eps = x_eff - mu
eps = stage_err(core, x_eff, mu)
print(f"ERR     eps = {eps}")

# BACKSUM: b = sum of the products arriving from the layer below
b = stage_backsum(core, back)
print(f"BACKSUM b = {b}")

# BACKVEC: products theta_j * eps emitted to the layer above (no bias)
print(f"BACKVEC -> {stage_backvec(core)}")

# WUP: theta_j += alpha * eps * relu(presyn_j); bias moves by alpha*eps
stage_wup(core, presyn, cfg)
print(f"WUP     theta = {core.theta}")

# STATE: x += gamma * (tanh'(x_eff) * b - eps)
stage_state(core, x_eff, clamp, False, cfg)
print(f"STATE   x = {core.x}")

# the same thing as one call; cycles follow the sequential-MAC cost model
core2 = core_new(cfg, init_weights=[0.5, -1.0, 0.25], init_x=1.0)
out = core_tick(core2, CoreTickInput(presyn, back, clamp, clamp_hard=False), cfg)
print(f"\ncore_tick: x_out(pre-tick)={out.x_out}, eps={out.eps_out}")
print(f"cycles = 3N + M + 4 = {out.cycles} (N=2 lanes, M=3 back inputs)")
assert core2.x == core.x and (core2.theta == core.theta).all()

# clamping: soft affects the tick's computation, hard also overwrites x
core3 = core_new(cfg, init_weights=[0.5, -1.0, 0.25], init_x=1.0)
out = core_tick(
    core3,
    CoreTickInput(presyn, back, ClampSignal(True, 0.7), clamp_hard=True),
    cfg,
)
print(f"\nhard clamp to 0.7: eps={out.eps_out} (from 0.7), stored x={core3.x}")
