"""Hot RK4 inner loop for 2x2 non-Hermitian propagation.

The kernel consumes a pre-evaluated Hamiltonian table on the half-step grid
(2n + 1 samples for n steps), integrates dpsi/dt = -i H(t) psi with classical
RK4, renormalizes each step, and accumulates the log of the running norm.

The loop is compiled with numba's @njit by default; set EPDRIVE_DISABLE_NUMBA=1
to select the pure-Python/numpy fallback (same source, no compilation).
"""

from __future__ import annotations

import math
import os

import numpy as np

NUMBA_DISABLED = os.environ.get("EPDRIVE_DISABLE_NUMBA", "").lower() in ("1", "true", "yes")


def _rk4_lognorm(h_half, psi0, dt, states, log_norm):
    """RK4 with per-step renormalization.  Returns 0 on success, 1 on overflow.

    h_half: (2n+1, 2, 2) complex Hamiltonian samples at t_k, t_k + dt/2.
    states: (n+1, 2) output, unit norm; log_norm: (n+1,) accumulated log norm.
    """
    n = (h_half.shape[0] - 1) // 2
    p0 = psi0[0]
    p1 = psi0[1]
    nrm = math.sqrt(abs(p0) ** 2 + abs(p1) ** 2)
    p0 /= nrm
    p1 /= nrm
    states[0, 0] = p0
    states[0, 1] = p1
    log_norm[0] = 0.0
    acc = 0.0
    for k in range(n):
        a = h_half[2 * k]
        b = h_half[2 * k + 1]
        c = h_half[2 * k + 2]

        k1_0 = -1j * (a[0, 0] * p0 + a[0, 1] * p1)
        k1_1 = -1j * (a[1, 0] * p0 + a[1, 1] * p1)

        u0 = p0 + 0.5 * dt * k1_0
        u1 = p1 + 0.5 * dt * k1_1
        k2_0 = -1j * (b[0, 0] * u0 + b[0, 1] * u1)
        k2_1 = -1j * (b[1, 0] * u0 + b[1, 1] * u1)

        u0 = p0 + 0.5 * dt * k2_0
        u1 = p1 + 0.5 * dt * k2_1
        k3_0 = -1j * (b[0, 0] * u0 + b[0, 1] * u1)
        k3_1 = -1j * (b[1, 0] * u0 + b[1, 1] * u1)

        u0 = p0 + dt * k3_0
        u1 = p1 + dt * k3_1
        k4_0 = -1j * (c[0, 0] * u0 + c[0, 1] * u1)
        k4_1 = -1j * (c[1, 0] * u0 + c[1, 1] * u1)

        p0 = p0 + dt * (k1_0 + 2.0 * k2_0 + 2.0 * k3_0 + k4_0) / 6.0
        p1 = p1 + dt * (k1_1 + 2.0 * k2_1 + 2.0 * k3_1 + k4_1) / 6.0

        nrm = math.sqrt(abs(p0) ** 2 + abs(p1) ** 2)
        if not math.isfinite(nrm) or nrm == 0.0:
            return 1
        p0 /= nrm
        p1 /= nrm
        acc += math.log(nrm)
        states[k + 1, 0] = p0
        states[k + 1, 1] = p1
        log_norm[k + 1] = acc
    return 0


if NUMBA_DISABLED:
    rk4_lognorm = _rk4_lognorm
    BACKEND = "numpy"
else:
    import numba

    rk4_lognorm = numba.njit(cache=True)(_rk4_lognorm)
    BACKEND = "numba"
