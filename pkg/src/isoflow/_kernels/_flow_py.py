"""Pure-numpy fallback for the RK4 flow kernel.

Same contract as the compiled version in _flow_cy.pyx: advance the staircase
Hermitian state in place through nsteps classical RK4 steps of the flow
dL/dt = [L, P(L)], re-masking the state after every step.

Returns (max_leakage, max_F_increase):
  max_leakage     largest |entry| found outside the pattern before masking,
                  over all steps in the call;
  max_F_increase  largest per-step increase of F = sum_i i * L[i, i]
                  (theory says F is nonincreasing, so this tracks violations).
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def _field(L: np.ndarray) -> np.ndarray:
    P = np.tril(L, -1) - np.triu(L, 1)
    return L @ P - P @ L


def rk4_advance(L: np.ndarray, mask: np.ndarray, dt: float,
                nsteps: int) -> tuple[float, float]:
    n = L.shape[0]
    weights = np.arange(1, n + 1, dtype=float)
    outside = ~mask
    max_leak = 0.0
    max_f_inc = 0.0
    f_prev = float(weights @ L.real.diagonal())
    for _ in range(nsteps):
        k1 = _field(L)
        k2 = _field(L + (0.5 * dt) * k1)
        k3 = _field(L + (0.5 * dt) * k2)
        k4 = _field(L + dt * k3)
        L += (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
        if outside.any():
            leak = float(np.max(np.abs(L[outside])))
            if leak > max_leak:
                max_leak = leak
            L[outside] = 0.0
        f = float(weights @ L.real.diagonal())
        if f - f_prev > max_f_inc:
            max_f_inc = f - f_prev
        f_prev = f
    return max_leak, max_f_inc
