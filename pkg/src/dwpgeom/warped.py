"""Doubly warped products ``M1 x M2`` with metric ``rho2(q)^2 g1 + rho1(p)^2 g2``.

Product charts concatenate the factor charts, first the ``n1`` coordinates of
``M1`` and then the ``n2`` coordinates of ``M2``.

Factor Laplacians are taken on the leaves through the evaluation point by
default (``laplacian_metric="leaf"``): the leaf ``M1 x {q}`` carries the
metric ``rho2(q)^2 g1``, so its Laplacian is ``Delta_{g1} / rho2(q)^2``.
``laplacian_metric="factor"`` uses the bare factor metrics ``g1``, ``g2``;
the two agree wherever the opposite warping function equals one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT
from .errors import NonPositiveWarping, NotUnit, WrongDistribution
from .geometry import (
    MetricField,
    ScalarField,
    as_coords,
    frame_at,
    hessian,
    laplacian,
    plane_sectional,
    riemann,
)

LAPLACIAN_METRICS = ("leaf", "factor")


@dataclass(frozen=True)
class DoublyWarpedProduct:
    g1: MetricField
    g2: MetricField
    rho1: ScalarField  # on M1, scales g2
    rho2: ScalarField  # on M2, scales g1

    def __post_init__(self):
        if self.rho1.dim != self.g1.dim or self.rho2.dim != self.g2.dim:
            raise ValueError("rho1 must live on M1 and rho2 on M2")

    @property
    def n1(self) -> int:
        return self.g1.dim

    @property
    def n2(self) -> int:
        return self.g2.dim

    @property
    def n(self) -> int:
        return self.n1 + self.n2

    def split(self, p):
        x = as_coords(p)
        return x[: self.n1], x[self.n1:]

    def warps(self, p) -> tuple[float, float]:
        p1, p2 = self.split(p)
        r1, r2 = self.rho1(p1), self.rho2(p2)
        _check_positive(r1, r2)
        return r1, r2

    def metric(self) -> MetricField:
        return assemble_doubly_warped(self)


def _check_positive(*values, tol=DEFAULT.warping):
    for v in values:
        val = v.val if hasattr(v, "val") else float(v)
        if not val > tol:
            raise NonPositiveWarping(f"warping function value {val:.3e} is not positive")


def assemble_doubly_warped(dwp: DoublyWarpedProduct) -> MetricField:
    n1, n = dwp.n1, dwp.n

    def fn(x):
        x1, x2 = list(x[:n1]), list(x[n1:])
        r1 = dwp.rho1.fn(x1)
        r2 = dwp.rho2.fn(x2)
        _check_positive(r1, r2)
        a = dwp.g1.fn(x1)
        b = dwp.g2.fn(x2)
        s1, s2 = r2 * r2, r1 * r1
        out = [[0.0] * n for _ in range(n)]
        for i in range(n1):
            for j in range(i, n1):
                out[i][j] = s1 * a[i][j]
        for i in range(n - n1):
            for j in range(i, n - n1):
                out[n1 + i][n1 + j] = s2 * b[i][j]
        return out

    name = f"{dwp.g1.name or 'g1'} x {dwp.g2.name or 'g2'}"
    return MetricField(n, fn, name=name)


def lift_tangent(dwp: DoublyWarpedProduct, factor: int, v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    out = np.zeros(dwp.n)
    if factor == 1:
        if v.shape[0] != dwp.n1:
            raise ValueError(f"M1 vectors have {dwp.n1} components")
        out[: dwp.n1] = v
    elif factor == 2:
        if v.shape[0] != dwp.n2:
            raise ValueError(f"M2 vectors have {dwp.n2} components")
        out[dwp.n1:] = v
    else:
        raise ValueError("factor must be 1 or 2")
    return out


def factor_laplacians(dwp: DoublyWarpedProduct, p, laplacian_metric: str = "leaf") -> tuple[float, float]:
    """(Delta_1 rho1, Delta_2 rho2) with the sign convention Delta = -trace Hess."""
    if laplacian_metric not in LAPLACIAN_METRICS:
        raise ValueError(f"laplacian_metric must be one of {LAPLACIAN_METRICS}")
    p1, p2 = dwp.split(p)
    r1, r2 = dwp.warps(p)
    d1 = laplacian(dwp.rho1, dwp.g1, p1)
    d2 = laplacian(dwp.rho2, dwp.g2, p2)
    if laplacian_metric == "leaf":
        d1 /= r2**2
        d2 /= r1**2
    return d1, d2


def olteanu_mixed_sectional(dwp: DoublyWarpedProduct, p, X, Z, tol=DEFAULT) -> float:
    """Mixed sectional curvature K(X ^ Z) from the warping functions alone.

    X must lie in D1 and Z in D2, both of unit length for the product metric.
    """
    X = np.asarray(X, dtype=float)
    Z = np.asarray(Z, dtype=float)
    n1 = dwp.n1
    if np.abs(X[n1:]).max(initial=0.0) > tol.plane or np.abs(Z[:n1]).max(initial=0.0) > tol.plane:
        raise WrongDistribution("X must be tangent to M1 and Z tangent to M2")
    g = dwp.metric()(p)
    for name, v in (("X", X), ("Z", Z)):
        if abs(np.sqrt(v @ g @ v) - 1.0) > tol.unit:
            raise NotUnit(f"{name} is not unit for the product metric")
    p1, p2 = dwp.split(p)
    r1, r2 = dwp.warps(p)
    x1, z2 = X[:n1], Z[n1:]
    return -hessian(dwp.rho1, dwp.g1, p1, x1, x1) / r1 - hessian(dwp.rho2, dwp.g2, p2, z2, z2) / r2


def mixed_scalar_identity_residual(dwp: DoublyWarpedProduct, p, laplacian_metric: str = "leaf"):
    """(lhs, rhs, |lhs - rhs|) for ``n2 D1rho1/rho1 + n1 D2rho2/rho2 = sum of mixed K``."""
    r1, r2 = dwp.warps(p)
    d1, d2 = factor_laplacians(dwp, p, laplacian_metric)
    lhs = dwp.n2 * d1 / r1 + dwp.n1 * d2 / r2
    metric = dwp.metric()
    R = riemann(metric, p)
    E = frame_at(metric, p).vectors
    rhs = sum(plane_sectional(R, E[i], E[j]) for i in range(dwp.n1) for j in range(dwp.n1, dwp.n))
    return float(lhs), float(rhs), float(abs(lhs - rhs))
