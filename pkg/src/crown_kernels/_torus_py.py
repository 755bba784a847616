"""Pure numpy fallback for the torus quadrature kernel."""

from __future__ import annotations

import numpy as np


def band_mask(n: int, rows: slice, delta: float) -> np.ndarray:
    """True where the node pair is kept (circular |alpha - beta| >= delta)."""
    i = np.arange(n)[rows][:, None]
    j = np.arange(n)[None, :]
    k = np.abs(i - j)
    dist = 2 * np.pi * np.minimum(k, n - k) / n
    return dist >= delta


def density_band_sum(x, y, u, v, jx, jy, k: int, p: int, q: int,
                     delta: float, row_start: int, row_stop: int) -> complex:
    """Sum over kept nodes of sin^{2k}((x-y)/2) e^{i(px - qy)} rho(u, v) jx jy.

    rho(u, v) = 1 / (4 sin^2((u - v)/2)); (x, y) feed the test function and
    (u, v) feed the density, so one kernel serves both invariance forms.
    """
    n = len(y)
    rows = slice(row_start, row_stop)
    X = np.asarray(x)[rows][:, None]
    U = np.asarray(u)[rows][:, None]
    Y = np.asarray(y)[None, :]
    V = np.asarray(v)[None, :]
    keep = band_mask(n, rows, delta)
    s_f = np.sin(0.5 * (X - Y))
    s_d = np.sin(0.5 * (U - V))
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = s_f ** (2 * k) * np.exp(1j * (p * X - q * Y)) / (4 * s_d * s_d)
    vals = vals * np.asarray(jx)[rows][:, None] * np.asarray(jy)[None, :]
    vals = np.where(keep, vals, 0)
    return complex(vals.sum())
