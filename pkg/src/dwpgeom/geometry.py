"""Charts, metrics and Levi-Civita curvature with exact second-order jets.

Conventions used throughout the package:

* ``R(X, Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z`` with
  components ``R(d_i, d_j) d_k = R^l_{ijk} d_l``.
* Lowered components satisfy ``R_{ijkl} = <R(d_i, d_j) d_l, d_k>`` so that
  ``R_{ijij}`` is the numerator of the sectional curvature of the coordinate
  plane (the unit sphere has ``R_{tsts} = 1`` at the equator).
* The Laplacian is ``Delta psi = -trace Hess psi`` (nonnegative spectrum).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import jets
from .config import DEFAULT
from .errors import DegeneratePlane, DimensionMismatch, MetricDegenerate


@dataclass(frozen=True)
class Point:
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(float(c) for c in self.coords))

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.coords, dtype=dtype)


def as_coords(p) -> np.ndarray:
    if isinstance(p, Point):
        return np.asarray(p.coords, dtype=float)
    return np.asarray(p, dtype=float).reshape(-1)


@dataclass(frozen=True)
class ScalarField:
    """A smooth function on a chart.

    ``fn`` takes a list of coordinates (floats or :class:`~dwpgeom.jets.Jet`)
    and must be built from ``+ - * /``, powers and the functions in
    :mod:`dwpgeom.jets` so that derivatives propagate.
    """

    dim: int
    fn: Callable

    def __call__(self, p) -> float:
        return float(self.fn([float(c) for c in as_coords(p)]))

    def jet(self, p):
        x = as_coords(p)
        if x.shape[0] != self.dim:
            raise DimensionMismatch(f"scalar field expects {self.dim} coordinates, got {x.shape[0]}")
        v, g, h = jets.jet_eval(self.fn, x)
        return float(v), g, h


@dataclass(frozen=True)
class MetricField:
    """Metric components ``g_ij`` as a function of chart coordinates.

    Only the upper triangle of ``fn``'s output is read; the lower triangle is
    mirrored from it so symmetry is exact.
    """

    dim: int
    fn: Callable
    name: str = ""

    def _check(self, arr):
        if arr.shape[:2] != (self.dim, self.dim):
            raise DimensionMismatch(f"metric should be {self.dim}x{self.dim}, got {arr.shape[:2]}")

    def __call__(self, p) -> np.ndarray:
        x = as_coords(p)
        g = np.array([[float(v) for v in row] for row in self.fn([float(c) for c in x])])
        self._check(g)
        return _mirror(g)

    def jet(self, p):
        """Return ``(g, dg, ddg)`` with ``dg[i, j, k] = d_k g_ij`` and ``ddg[i, j, k, l] = d_k d_l g_ij``."""
        x = as_coords(p)
        if x.shape[0] != self.dim:
            raise DimensionMismatch(f"metric expects {self.dim} coordinates, got {x.shape[0]}")
        g, dg, ddg = jets.jet_eval(self.fn, x)
        self._check(g)
        return _mirror(g), _mirror(dg), _mirror(ddg)


def _mirror(a: np.ndarray) -> np.ndarray:
    n = a.shape[0]
    out = a.copy()
    for i in range(n):
        for j in range(i):
            out[i, j] = a[j, i]
    return out


def euclidean(dim: int) -> MetricField:
    eye = [[1.0 if i == j else 0.0 for j in range(dim)] for i in range(dim)]
    return MetricField(dim, lambda x: eye, name=f"euclidean{dim}")


# frames ------------------------------------------------------------------

@dataclass(frozen=True)
class FrameBasis:
    point: Point
    vectors: np.ndarray  # row a is the coordinate expression of e_a

    def gram(self, g: np.ndarray) -> np.ndarray:
        return self.vectors @ g @ self.vectors.T


def spd_factor(g: np.ndarray, tol: float = DEFAULT.spd_pivot) -> np.ndarray:
    """Cholesky factor of ``g``; raise :class:`MetricDegenerate` on a small or negative pivot."""
    n = g.shape[0]
    L = np.zeros_like(g)
    for k in range(n):
        pivot = g[k, k] - L[k, :k] @ L[k, :k]
        if not pivot >= tol:
            raise MetricDegenerate(f"metric not positive definite (pivot {k} = {pivot:.3e})")
        L[k, k] = np.sqrt(pivot)
        for i in range(k + 1, n):
            L[i, k] = (g[i, k] - L[i, :k] @ L[k, :k]) / L[k, k]
    return L


def orthonormal_frame(g: np.ndarray) -> np.ndarray:
    """Gram-Schmidt of the coordinate basis in ascending index order (rows are frame vectors)."""
    L = spd_factor(g)
    # e_a = L^{-T} columns; triangular structure is exactly Gram-Schmidt order
    return np.linalg.solve(L.T, np.eye(g.shape[0])).T


def frame_at(metric: MetricField, p) -> FrameBasis:
    x = as_coords(p)
    return FrameBasis(Point(x), orthonormal_frame(metric(x)))


def orthonormalize(g: np.ndarray, vectors, tol: float = DEFAULT.plane) -> np.ndarray:
    """Gram-Schmidt a list of vectors against ``g``; raise DegeneratePlane if they are dependent."""
    out = []
    for v in np.atleast_2d(np.asarray(vectors, dtype=float)):
        w = v.copy()
        for e in out:
            w = w - (e @ g @ w) * e
        nrm2 = w @ g @ w
        if nrm2 < tol * max(1.0, v @ g @ v):
            raise DegeneratePlane("basis vectors are linearly dependent")
        out.append(w / np.sqrt(nrm2))
    return np.array(out)


# connection and curvature --------------------------------------------------

def _christoffel_from(g, dg):
    ginv = np.linalg.inv(g)
    # lowered[i, j, l] = d_i g_jl + d_j g_il - d_l g_ij
    lowered = np.einsum("jli->ijl", dg) + np.einsum("ilj->ijl", dg) - dg
    return 0.5 * np.einsum("kl,ijl->kij", ginv, lowered), ginv, lowered


def _christoffel_jet(g, dg, ddg):
    """Christoffel symbols and their partials ``dgam[k, i, j, m] = d_m Gamma^k_ij``."""
    gam, ginv, lowered = _christoffel_from(g, dg)
    dginv = -np.einsum("ka,abm,bl->klm", ginv, dg, ginv)
    dlowered = (
        np.einsum("jlim->ijlm", ddg) + np.einsum("iljm->ijlm", ddg) - ddg
    )
    dgam = 0.5 * (
        np.einsum("klm,ijl->kijm", dginv, lowered) + np.einsum("kl,ijlm->kijm", ginv, dlowered)
    )
    return gam, dgam


def christoffel(metric: MetricField, p) -> np.ndarray:
    """``Gamma[k, i, j]`` = Gamma^k_ij of the Levi-Civita connection."""
    g, dg, _ = metric.jet(p)
    spd_factor(g)
    return _christoffel_from(g, dg)[0]


def riemann_from_christoffel(gam, dgam) -> np.ndarray:
    """``up[l, i, j, k] = R^l_ijk`` from Gamma and its partials."""
    # d_i Gamma^l_jk lives at dgam[l, j, k, i]
    return (
        np.einsum("ljki->lijk", dgam)
        - np.einsum("likj->lijk", dgam)
        + np.einsum("lim,mjk->lijk", gam, gam)
        - np.einsum("ljm,mik->lijk", gam, gam)
    )


@dataclass(frozen=True)
class CurvatureTensorAt:
    point: Point
    up: np.ndarray  # up[l, i, j, k] = R^l_ijk
    down: np.ndarray  # down[i, j, k, l] = <R(d_i, d_j) d_l, d_k>
    g: np.ndarray

    def apply(self, X, Y, Z) -> np.ndarray:
        """The vector R(X, Y)Z."""
        return np.einsum("lijk,i,j,k->l", self.up, X, Y, Z)

    def form(self, X, Y, Z, W) -> float:
        """<R(X, Y)Z, W>."""
        return float(self.apply(X, Y, Z) @ self.g @ np.asarray(W, dtype=float))

    def symmetry_residual(self) -> float:
        R = self.down
        return float(max(
            np.abs(R + R.transpose(1, 0, 2, 3)).max(),
            np.abs(R + R.transpose(0, 1, 3, 2)).max(),
            np.abs(R - R.transpose(2, 3, 0, 1)).max(),
        ))

    def bianchi_residual(self) -> float:
        R = self.down
        cyc = R + R.transpose(0, 2, 3, 1) + R.transpose(0, 3, 1, 2)
        return float(np.abs(cyc).max())


def riemann(metric: MetricField, p) -> CurvatureTensorAt:
    x = as_coords(p)
    g, dg, ddg = metric.jet(x)
    spd_factor(g)
    gam, dgam = _christoffel_jet(g, dg, ddg)
    up = riemann_from_christoffel(gam, dgam)
    down = np.einsum("km,mijl->ijkl", g, up)
    return CurvatureTensorAt(Point(x), up, down, g)


def plane_sectional(R: CurvatureTensorAt, X, Y, tol: float = DEFAULT.plane) -> float:
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    g = R.g
    gram = (X @ g @ X) * (Y @ g @ Y) - (X @ g @ Y) ** 2
    if gram < tol:
        raise DegeneratePlane(f"vectors do not span a 2-plane (Gram determinant {gram:.3e})")
    return R.form(X, Y, Y, X) / gram


def sectional_curvature(metric: MetricField, p, X, Y) -> float:
    return plane_sectional(riemann(metric, p), X, Y)


def scalar_curvature_of(R: CurvatureTensorAt, basis) -> float:
    """Sum of sectional curvatures over orthonormal pairs of the subspace spanned by ``basis``."""
    basis = np.atleast_2d(np.asarray(basis, dtype=float))
    if basis.shape[0] < 2:
        raise DegeneratePlane("a plane section needs at least two vectors")
    E = orthonormalize(R.g, basis)
    k = E.shape[0]
    return float(sum(R.form(E[i], E[j], E[j], E[i]) for i in range(k) for j in range(i + 1, k)))


def scalar_curvature_subspace(metric: MetricField, p, basis) -> float:
    return scalar_curvature_of(riemann(metric, p), basis)


def scalar_curvature(metric: MetricField, p) -> float:
    """tau(p), the scalar curvature with the pair-sum normalisation."""
    return scalar_curvature_subspace(metric, p, np.eye(metric.dim))


# Hessian and Laplacian -----------------------------------------------------

def covariant_hessian(psi: ScalarField, metric: MetricField, p) -> np.ndarray:
    """Coordinate components ``d_i d_j psi - Gamma^k_ij d_k psi``."""
    _, dpsi, ddpsi = psi.jet(p)
    gam = christoffel(metric, p)
    return ddpsi - np.einsum("kij,k->ij", gam, dpsi)


def hessian(psi: ScalarField, metric: MetricField, p, X, Y) -> float:
    return float(np.asarray(X, dtype=float) @ covariant_hessian(psi, metric, p) @ np.asarray(Y, dtype=float))


def laplacian(psi: ScalarField, metric: MetricField, p) -> float:
    """Delta psi = -sum_a Hess psi(e_a, e_a) over the Gram-Schmidt frame."""
    H = covariant_hessian(psi, metric, p)
    E = frame_at(metric, p).vectors
    return -float(sum(e @ H @ e for e in E))
