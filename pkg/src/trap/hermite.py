"""
Hermite functions - harmonic oscillator eigenfunctions (hbar = m = omega = 1)
Normalized three-term recurrence, so no factorials appear and n up to 50+ stays finite
"""

import numpy as np

PI_QUARTER = np.pi ** -0.25


def hermite_functions(n_max: int, x) -> np.ndarray:
    """psi_0..psi_{n_max} at x; result has shape (n_max + 1, *x.shape)

    psi_{n+1} = sqrt(2/(n+1)) x psi_n - sqrt(n/(n+1)) psi_{n-1}
    """
    x = np.asarray(x, dtype=float)
    values = np.empty((n_max + 1,) + x.shape)
    values[0] = PI_QUARTER * np.exp(-0.5 * x * x)
    if n_max >= 1:
        values[1] = np.sqrt(2.0) * x * values[0]
    for n in range(1, n_max):
        values[n + 1] = np.sqrt(2.0 / (n + 1)) * x * values[n] - np.sqrt(n / (n + 1)) * values[n - 1]
    return values


def hermite_derivatives(n_max: int, x, values: np.ndarray = None) -> np.ndarray:
    """psi_n' = sqrt(n/2) psi_{n-1} - sqrt((n+1)/2) psi_{n+1}"""
    if values is None or values.shape[0] < n_max + 2:
        values = hermite_functions(n_max + 1, x)
    derivatives = np.empty((n_max + 1,) + values.shape[1:])
    derivatives[0] = -np.sqrt(0.5) * values[1]
    for n in range(1, n_max + 1):
        derivatives[n] = np.sqrt(n / 2.0) * values[n - 1] - np.sqrt((n + 1) / 2.0) * values[n + 1]
    return derivatives


def harmonic_half_width(n_max: int, cutoff: float, step: float = 0.125) -> float:
    """Smallest X beyond which every |psi_n|, n <= n_max, stays below cutoff"""
    x = np.sqrt(2.0 * n_max + 1.0)
    while True:
        grid = np.linspace(x, x + 4.0, 33)
        if np.max(np.abs(hermite_functions(n_max, grid))) < cutoff:
            return float(x)
        x += step
