"""Central finite-difference oracles for the exact-jet engine.

These use only float evaluations of the metric and never touch jets, so they
are an independent route to the same connection and curvature components.
"""

from __future__ import annotations

import numpy as np

from .config import DEFAULT
from .geometry import MetricField, as_coords


def metric_gradient_fd(metric: MetricField, p, step: float = DEFAULT.fd_step) -> np.ndarray:
    """``dg[i, j, k] ~ d_k g_ij`` by central differences."""
    x = as_coords(p)
    n = x.shape[0]
    dg = np.zeros((n, n, n))
    for k in range(n):
        e = np.zeros(n)
        e[k] = step
        dg[:, :, k] = (metric(x + e) - metric(x - e)) / (2 * step)
    return dg


def christoffel_fd(metric: MetricField, p, step: float = DEFAULT.fd_step) -> np.ndarray:
    x = as_coords(p)
    n = x.shape[0]
    g = metric(x)
    ginv = np.linalg.inv(g)
    dg = metric_gradient_fd(metric, x, step)
    gam = np.zeros((n, n, n))
    for k in range(n):
        for i in range(n):
            for j in range(n):
                gam[k, i, j] = 0.5 * sum(
                    ginv[k, l] * (dg[j, l, i] + dg[i, l, j] - dg[i, j, l]) for l in range(n)
                )
    return gam


def riemann_fd(metric: MetricField, p, step: float = DEFAULT.fd_step) -> np.ndarray:
    """``R^l_ijk`` from finite differences of finite-difference Christoffel symbols."""
    x = as_coords(p)
    n = x.shape[0]
    gam = christoffel_fd(metric, x, step)
    dgam = np.zeros((n, n, n, n))  # dgam[m, k, i, j] = d_m Gamma^k_ij
    for m in range(n):
        e = np.zeros(n)
        e[m] = step
        dgam[m] = (christoffel_fd(metric, x + e, step) - christoffel_fd(metric, x - e, step)) / (2 * step)
    R = np.zeros((n, n, n, n))
    for l in range(n):
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    val = dgam[i, l, j, k] - dgam[j, l, i, k]
                    for m in range(n):
                        val += gam[l, i, m] * gam[m, j, k] - gam[l, j, m] * gam[m, i, k]
                    R[l, i, j, k] = val
    return R


def relative_error(approx, exact, floor: float = 1e-8) -> float:
    """Max-norm relative error; falls back to absolute error when ``exact`` is tiny."""
    approx = np.asarray(approx, dtype=float)
    exact = np.asarray(exact, dtype=float)
    scale = np.abs(exact).max()
    err = np.abs(approx - exact).max()
    return float(err / scale) if scale > floor else float(err)


def scalar_derivatives_fd(fn, p, step: float = DEFAULT.fd_step):
    """Gradient and Hessian of a float-valued ``fn(list)`` by central differences."""
    x = as_coords(p)
    n = x.shape[0]
    f = lambda y: float(fn([float(c) for c in y]))
    grad = np.zeros(n)
    hess = np.zeros((n, n))
    for i in range(n):
        ei = np.zeros(n)
        ei[i] = step
        grad[i] = (f(x + ei) - f(x - ei)) / (2 * step)
        for j in range(n):
            ej = np.zeros(n)
            ej[j] = step
            hess[i, j] = (f(x + ei + ej) - f(x + ei - ej) - f(x - ei + ej) + f(x - ei - ej)) / (4 * step**2)
    return grad, hess
