"""Central finite-difference helpers shared by all numerical checks.

Step policy: first derivatives use h_i = eps^(1/3) * (1 + |x_i|) per
coordinate, second derivatives use the square root of that step.  Nested
differentiation doubles the outer step to keep second-order noise under
control.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

#: cube root of machine epsilon, the standard central-difference step scale.
STEP_SCALE = float(np.cbrt(np.finfo(float).eps))

#: default tolerance for residuals obtained through finite differences.
FD_TOL = 1e-6


def steps(x: np.ndarray, scale: float = 1.0) -> np.ndarray:
    """Per-coordinate central-difference steps at the point x."""
    x = np.asarray(x, dtype=float)
    return scale * STEP_SCALE * (1.0 + np.abs(x))


def gradient(f: Callable, x: np.ndarray, scale: float = 1.0) -> np.ndarray:
    """Central-difference gradient of a scalar function."""
    x = np.asarray(x, dtype=float)
    h = steps(x, scale)
    g = np.empty_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h[i]
        g[i] = (f(x + e) - f(x - e)) / (2.0 * h[i])
    return g


def jacobian(f: Callable, x: np.ndarray, scale: float = 1.0) -> np.ndarray:
    """Central-difference Jacobian of a vector-valued function (columns = inputs)."""
    x = np.asarray(x, dtype=float)
    h = steps(x, scale)
    cols = []
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h[i]
        cols.append((np.asarray(f(x + e), dtype=float) - np.asarray(f(x - e), dtype=float)) / (2.0 * h[i]))
    return np.stack(cols, axis=-1)


def divergence_sum(f: Callable, x: np.ndarray, scale: float = 1.0) -> float:
    """Sum of diagonal Jacobian entries of a vector field, by central differences."""
    x = np.asarray(x, dtype=float)
    h = steps(x, scale)
    total = 0.0
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h[i]
        total += (float(f(x + e)[i]) - float(f(x - e)[i])) / (2.0 * h[i])
    return total


def trace_jacobian4(f: Callable, x: np.ndarray) -> float:
    """Trace of the Jacobian of a vector field via fourth-order central stencils.

    Only diagonal entries are formed; the five-point stencil keeps the
    truncation error near roundoff, which matters when the trace is
    accumulated along long trajectories.
    """
    x = np.asarray(x, dtype=float)
    h = steps(x)
    total = 0.0
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h[i]
        fp1 = float(f(x + e)[i])
        fm1 = float(f(x - e)[i])
        fp2 = float(f(x + 2.0 * e)[i])
        fm2 = float(f(x - 2.0 * e)[i])
        total += (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h[i])
    return total


def hessian(f: Callable, x: np.ndarray) -> np.ndarray:
    """Symmetrized second-order central-difference Hessian.

    Uses the sqrt-scaled step for second derivatives and averages with the
    transpose to strip the asymmetric part of the stencil noise.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    h = np.sqrt(STEP_SCALE) * (1.0 + np.abs(x))
    H = np.empty((n, n))
    f0 = f(x)
    for i in range(n):
        ei = np.zeros_like(x)
        ei[i] = h[i]
        H[i, i] = (f(x + ei) - 2.0 * f0 + f(x - ei)) / (h[i] ** 2)
        for j in range(i + 1, n):
            ej = np.zeros_like(x)
            ej[j] = h[j]
            H[i, j] = (
                f(x + ei + ej) - f(x + ei - ej) - f(x - ei + ej) + f(x - ei - ej)
            ) / (4.0 * h[i] * h[j])
            H[j, i] = H[i, j]
    return 0.5 * (H + H.T)
